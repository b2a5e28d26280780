#include "qmetro/states.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace qmetro;
using Catch::Approx;

TEST_CASE("noon state") {
    const Cutoff c(16);

    SECTION("single photon path superposition") {
        const PureState2M s = make_noon(1, c);
        CHECK(mean_photon_mode1(s) == Approx(0.5).epsilon(1e-14));
    }

    SECTION("amplitudes and resources at N = 4") {
        const PureState2M s = make_noon(4, c);
        CHECK(std::abs(s.amp[pair_index(4, 0, c)]) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
        CHECK(std::abs(s.amp[pair_index(0, 4, c)]) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
        CHECK(s.amp.cwiseAbs().sum() == Approx(std::sqrt(2.0)).epsilon(1e-14));  // nothing else
        CHECK(mean_photon_mode1(s) == Approx(2.0).epsilon(1e-14));
    }

    SECTION("mode-1 mean is N/2 for all N") {
        for (int n = 1; n <= 10; ++n)
            CHECK(mean_photon_mode1(make_noon(n, Cutoff(12))) == Approx(n / 2.0).epsilon(1e-13));
    }

    SECTION("cutoff guard") {
        CHECK_THROWS_AS(make_noon(16, c), CutoffTooSmall);
        CHECK_THROWS_AS(make_noon(0, c), Error);
    }
}

TEST_CASE("bat state") {
    const Cutoff c(16);

    SECTION("N = 4 amplitudes from the splitter algebra") {
        const PureState2M s = make_bat(4, c);
        const double expected = std::sqrt(6.0) / 4.0;
        CHECK(s.amp[pair_index(4, 0, c)].real() == Approx(expected).epsilon(1e-12));
        CHECK(s.amp[pair_index(2, 2, c)].real() == Approx(-0.5).epsilon(1e-12));
        CHECK(s.amp[pair_index(0, 4, c)].real() == Approx(expected).epsilon(1e-12));
        CHECK(s.norm() == Approx(1.0).epsilon(1e-12));
        const Moments m = observable_moments(s, mode2_number(c));
        CHECK(m.mean == Approx(2.0).epsilon(1e-12));
    }

    SECTION("variance identity 4 Var(n2) = N(N/2+1)") {
        for (int n : {2, 4, 6, 8}) {
            const Moments m = observable_moments(make_bat(n, c), mode2_number(c));
            CHECK(4.0 * m.variance == Approx(n * (n / 2.0 + 1.0)).epsilon(1e-8));
        }
    }

    SECTION("N = 2 carries the same populations as the NOON pair") {
        // both are equal-weight superpositions of |2,0> and |0,2>; the
        // splitter output differs by a relative sign, which no
        // occupation-diagonal observable can see
        const PureState2M bat = make_bat(2, c);
        const PureState2M noon = make_noon(2, c);
        CHECK(std::abs(bat.amp[pair_index(2, 0, c)]) ==
              Approx(std::abs(noon.amp[pair_index(2, 0, c)])).epsilon(1e-12));
        CHECK(std::abs(bat.amp[pair_index(0, 2, c)]) ==
              Approx(std::abs(noon.amp[pair_index(0, 2, c)])).epsilon(1e-12));
        const Moments mb = observable_moments(bat, mode2_number(c));
        const Moments mn = observable_moments(noon, mode2_number(c));
        CHECK(mb.variance == Approx(mn.variance).epsilon(1e-12));
    }

    SECTION("input validation") {
        CHECK_THROWS_AS(make_bat(3, c), OddN);
        CHECK_THROWS_AS(make_bat(0, c), OddN);
        CHECK_THROWS_AS(make_bat(16, c), CutoffTooSmall);
    }
}

TEST_CASE("entangled coherent state") {
    const Cutoff c(16);

    SECTION("alpha = 0 collapses to vacuum") {
        const PureState2M s = make_ecs(0.0, c);
        CHECK(std::abs(s.amp[0]) == Approx(1.0).epsilon(1e-14));
    }

    SECTION("normalizer and resources at alpha = 2") {
        const double n2 = ecs_normalizer(2.0) * ecs_normalizer(2.0);
        CHECK(n2 == Approx(0.4910068950189542).epsilon(1e-12));
        const PureState2M s = make_ecs(2.0, c);
        CHECK(mean_photon_mode1(s) == Approx(1.964).margin(5e-4));
        CHECK(mean_photon_mode1(s) == Approx(n2 * 4.0).margin(5e-5));  // truncated vs exact
    }

    SECTION("support confined to the two rays") {
        const PureState2M s = make_ecs(2.0, c);
        for (int n1 = 1; n1 < c.dim(); ++n1)
            for (int n2 = 1; n2 < c.dim(); ++n2)
                CHECK(std::abs(s.amp[pair_index(n1, n2, c)]) == 0.0);
    }

    SECTION("the two rays are not orthogonal: <ray1|ray2> = exp(-alpha^2)") {
        for (double alpha : {0.5, 1.0, 2.0}) {
            const FockVector ray = coherent_vector(alpha, c);
            const PureState2M r1 = product_state(ray, vacuum_vector(c), c);
            const PureState2M r2 = product_state(vacuum_vector(c), ray, c);
            CHECK(std::abs(r1.amp.dot(r2.amp)) ==
                  Approx(std::exp(-alpha * alpha)).margin(1e-8));
        }
    }

    SECTION("resource matching across the family") {
        for (int n = 1; n <= 10; ++n) {
            const double alpha = alpha_for_mean_photons(n / 2.0);
            const double n2 = ecs_normalizer(alpha) * ecs_normalizer(alpha);
            CHECK(n2 * alpha * alpha == Approx(n / 2.0).margin(1e-8));
        }
    }

    SECTION("tail gate") {
        CHECK_THROWS_AS(make_ecs(3.5, c), TruncationOverflow);
        CHECK(make_ecs(3.5, Cutoff(32)).tail_mass < 1e-5);
    }
}

TEST_CASE("uncorrelated probe") {
    const Cutoff c(4);
    const UncorrelatedProbe u = make_uncorrelated(4, c);
    CHECK(u.copies == 4);
    const PureState2M noon1 = make_noon(1, c);
    CHECK((u.copy.amp - noon1.amp).norm() == 0.0);
    CHECK(mean_photon_mode1(u.copy) * u.copies == Approx(2.0).epsilon(1e-14));
}

TEST_CASE("alpha_for_mean_photons") {
    CHECK(alpha_for_mean_photons(0.0) == 0.0);
    // inverse of <n_1> = 1.964 lands back on alpha = 2 to the quoted rounding
    CHECK(alpha_for_mean_photons(1.964) == Approx(2.0).margin(5e-3));
    CHECK(alpha_for_mean_photons(2.0) == Approx(2.0170319095500187).margin(1e-6));

    SECTION("residual below 1e-10 across a range") {
        for (double target : {0.25, 0.5, 1.0, 1.964, 2.0, 3.7, 8.0}) {
            const double a = alpha_for_mean_photons(target);
            const double n2 = ecs_normalizer(a) * ecs_normalizer(a);
            CHECK(std::abs(n2 * a * a - target) < 1e-10);
        }
    }
}

TEST_CASE("preparation through the beam splitter") {
    SECTION("vacuum in, vacuum out") {
        const auto [state, fidelity] = prepare_ecs_via_bs(0.0, Cutoff(16));
        CHECK(std::abs(state.amp[0]) == Approx(1.0).epsilon(1e-12));
        CHECK(fidelity == Approx(1.0).epsilon(1e-12));
    }

    SECTION("alpha = sqrt(2) prepares the alpha' = 2 state") {
        const auto [state, fidelity] = prepare_ecs_via_bs(std::sqrt(2.0), Cutoff(32));
        CHECK(fidelity >= 1.0 - 1e-8);
        CHECK(state.norm() == Approx(1.0).epsilon(1e-12));
    }

    SECTION("alpha = 1 prepares the alpha' = sqrt(2) state") {
        const auto [state, fidelity] = prepare_ecs_via_bs(1.0, Cutoff(32));
        CHECK(fidelity >= 1.0 - 1e-8);
        const PureState2M target = make_ecs(std::sqrt(2.0), Cutoff(32));
        CHECK(std::norm(target.amp.dot(state.amp)) == Approx(fidelity).epsilon(1e-12));
    }
}
