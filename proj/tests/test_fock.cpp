#include "qmetro/fock.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>

using namespace qmetro;
using Catch::Approx;

namespace {

// seeded random Hermitian matrix
Matrix random_hermitian(int side, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    Matrix m(side, side);
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j) m(i, j) = complex_t(dist(rng), dist(rng));
    return (m + Matrix(m.adjoint())) / 2.0;
}

}  // namespace

TEST_CASE("cutoff validation") {
    CHECK(Cutoff{}.dim() == 16);
    CHECK(Cutoff{}.max_occupation() == 15);
    CHECK(Cutoff(4).pair_dim() == 16);
    CHECK_THROWS_AS(Cutoff(1), Error);
}

TEST_CASE("coherent vector amplitudes") {
    const Cutoff c(16);

    SECTION("vacuum at alpha = 0") {
        const FockVector v = coherent_vector(0.0, c);
        CHECK(std::abs(v.amp[0]) == Approx(1.0));
        CHECK(v.amp.tail(15).norm() == 0.0);
        CHECK(v.tail_mass == 0.0);
    }

    SECTION("alpha = 2 matches the direct expansion") {
        const FockVector v = coherent_vector(2.0, c);
        // exp(-2) * 2^4 / sqrt(4!) before renormalization
        const double raw = std::exp(-2.0) * 16.0 / std::sqrt(24.0);
        CHECK(raw == Approx(0.44200318416631873).epsilon(1e-12));
        CHECK(std::abs(v.amp[4]) == Approx(0.4420042654450449).epsilon(1e-10));
        CHECK(std::abs(v.amp[4]) == Approx(raw / std::sqrt(1.0 - v.tail_mass)).epsilon(1e-12));
    }

    SECTION("tail budget at alpha = 2, dim = 16") {
        const FockVector v = coherent_vector(2.0, c);
        CHECK(v.tail_mass < 1e-5);
        CHECK(v.tail_mass == Approx(4.892610719564594e-06).epsilon(1e-6));
        CHECK(v.norm() == Approx(1.0).epsilon(1e-12));
    }

    SECTION("overflow is flagged unless opted in") {
        CHECK_THROWS_AS(coherent_vector(3.5, c), TruncationOverflow);
        const FockVector v = coherent_vector(3.5, c, /*allow_truncation=*/true);
        CHECK(v.tail_mass > 1e-5);
        CHECK(v.norm() == Approx(1.0).epsilon(1e-12));
    }

    SECTION("truncation monotonicity in the cutoff") {
        const double t16 = coherent_vector(2.0, Cutoff(16)).tail_mass;
        const double t20 = coherent_vector(2.0, Cutoff(20)).tail_mass;
        CHECK(t20 <= t16);
    }
}

TEST_CASE("coherent overlap law") {
    // |<a|b>|^2 = exp(-|a-b|^2); truncation error must sit below the check
    // tolerance, which caps the amplitude per cutoff
    auto check_grid = [](Cutoff c, double max_amp, double tol) {
        for (double ar : {0.0, 0.3 * max_amp, 0.7 * max_amp, max_amp}) {
            for (double br : {0.0, 0.4 * max_amp, max_amp}) {
                for (double phase : {0.0, 1.1}) {
                    const complex_t a(ar, 0.0);
                    const complex_t b = br * std::exp(complex_t(0.0, phase));
                    const FockVector va = coherent_vector(a, c, true);
                    const FockVector vb = coherent_vector(b, c, true);
                    const double got = std::norm(va.amp.dot(vb.amp));
                    const double want = std::exp(-std::norm(a - b));
                    CHECK(got == Approx(want).margin(tol));
                }
            }
        }
    };
    check_grid(Cutoff(16), 1.5, 1e-6);
    check_grid(Cutoff(32), 2.5, 1e-6);
}

TEST_CASE("cat vector") {
    const Cutoff c(16);
    const FockVector v = cat_vector(1.0, c);
    CHECK(v.norm() == Approx(1.0).epsilon(1e-12));
    // even superposition: odd occupations vanish
    for (int n = 1; n < c.dim(); n += 2) CHECK(std::abs(v.amp[n]) < 1e-15);
    // N_a (c_n(a) + c_n(-a)) = 2 N_a c_n(a) on even n
    const FockVector coh = coherent_vector(1.0, c);
    const double na = 1.0 / std::sqrt(2.0 * (1.0 + std::exp(-2.0)));
    CHECK(std::abs(v.amp[2]) == Approx(2.0 * na * std::abs(coh.amp[2])).epsilon(1e-9));
}

TEST_CASE("operator builders") {
    const Cutoff c(6);
    const OperatorMatrix n_op = number_operator(c);
    const OperatorMatrix parity = parity_operator(c);
    for (int n = 0; n < 6; ++n) {
        CHECK(n_op.mat(n, n).real() == double(n));
        CHECK(parity.mat(n, n).real() == ((n % 2 == 0) ? 1.0 : -1.0));
    }
    CHECK(n_op.mat.cwiseAbs().sum() == Approx(15.0));  // diagonal only

    const OperatorMatrix n2 = mode2_number(c);
    CHECK(n2.mat(pair_index(3, 4, c), pair_index(3, 4, c)).real() == 4.0);
    const RealVector g = mode2_number_pow_diag(c, 2);
    CHECK(g[pair_index(0, 2, c)] == 4.0);
    CHECK(g[pair_index(5, 3, c)] == 9.0);
}

TEST_CASE("hermitian_eig") {
    SECTION("pure-state projector spectrum") {
        std::mt19937 rng(11);
        std::normal_distribution<double> dist(0.0, 1.0);
        Vector psi(9);
        for (int i = 0; i < 9; ++i) psi[i] = complex_t(dist(rng), dist(rng));
        psi.normalize();
        const EigDecomposition eig = hermitian_eig(Matrix(psi * psi.adjoint()));
        for (int i = 0; i < 8; ++i) CHECK(std::abs(eig.eigenvalues[i]) < 1e-10);
        CHECK(eig.eigenvalues[8] == Approx(1.0).epsilon(1e-10));
    }

    SECTION("scaled identity") {
        const int side = 16;
        const EigDecomposition eig =
            hermitian_eig(Matrix(Matrix::Identity(side, side) / double(side)));
        for (int i = 0; i < side; ++i)
            CHECK(eig.eigenvalues[i] == Approx(1.0 / side).epsilon(1e-12));
    }

    SECTION("reconstruction and orthonormality up to side 256") {
        for (int side : {2, 8, 64, 256}) {
            const Matrix m = random_hermitian(side, 100 + side);
            const EigDecomposition eig = hermitian_eig(m);
            const Matrix rebuilt = eig.eigenvectors *
                                   eig.eigenvalues.cast<complex_t>().asDiagonal() *
                                   eig.eigenvectors.adjoint();
            const double scale = m.cwiseAbs().maxCoeff();
            CHECK((rebuilt - m).cwiseAbs().maxCoeff() / scale < 1e-10);
            const Matrix gram = eig.eigenvectors.adjoint() * eig.eigenvectors;
            CHECK((gram - Matrix::Identity(side, side)).cwiseAbs().maxCoeff() < 1e-10);
        }
    }

    SECTION("deterministic output") {
        const Matrix m = random_hermitian(32, 7);
        const EigDecomposition a = hermitian_eig(m);
        const EigDecomposition b = hermitian_eig(m);
        CHECK((a.eigenvectors - b.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
        // phase convention: pivot components real positive
        for (int j = 0; j < 32; ++j) {
            Eigen::Index imax = 0;
            a.eigenvectors.col(j).cwiseAbs().maxCoeff(&imax);
            CHECK(a.eigenvectors(imax, j).imag() == Approx(0.0).margin(1e-14));
            CHECK(a.eigenvectors(imax, j).real() > 0.0);
        }
    }

    SECTION("rejects non-Hermitian input") {
        Matrix m = Matrix::Zero(3, 3);
        m(0, 1) = 1.0;  // deviation 1 >> 1e-6
        CHECK_THROWS_AS(hermitian_eig(m), NotHermitian);
    }
}

TEST_CASE("observable moments") {
    const Cutoff c(8);

    SECTION("two-site superposition") {
        PureState2M s{Vector::Zero(c.pair_dim()), c, 0.0};
        s.amp[pair_index(4, 0, c)] = 1.0 / std::sqrt(2.0);
        s.amp[pair_index(0, 4, c)] = 1.0 / std::sqrt(2.0);
        const Moments m = observable_moments(s, mode2_number(c));
        CHECK(m.mean == Approx(2.0).epsilon(1e-14));
        CHECK(m.variance == Approx(4.0).epsilon(1e-14));
    }

    SECTION("vacuum") {
        PureState2M s{Vector::Zero(c.pair_dim()), c, 0.0};
        s.amp[0] = 1.0;
        const Moments m = observable_moments(s, mode1_number(c));
        CHECK(m.mean == 0.0);
        CHECK(m.variance == 0.0);
    }

    SECTION("density operator route agrees with the pure route") {
        std::mt19937 rng(3);
        std::normal_distribution<double> dist(0.0, 1.0);
        PureState2M s{Vector(c.pair_dim()), c, 0.0};
        for (Eigen::Index i = 0; i < s.amp.size(); ++i) s.amp[i] = complex_t(dist(rng), dist(rng));
        s.normalize();
        const Moments a = observable_moments(s, mode2_number(c));
        const Moments b = observable_moments(to_density(s), mode2_number(c));
        CHECK(a.mean == Approx(b.mean).epsilon(1e-12));
        CHECK(a.variance == Approx(b.variance).epsilon(1e-10));
    }

    SECTION("dimension mismatch") {
        PureState2M s{Vector::Zero(c.pair_dim()), c, 0.0};
        s.amp[0] = 1.0;
        CHECK_THROWS_AS(observable_moments(s, number_operator(c)), DimensionMismatch);
    }
}

TEST_CASE("mode mixer") {
    const Cutoff c(16);
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::Matrix2cd split;
    split << r, r, -r, r;

    SECTION("vacuum is invariant") {
        PureState2M s{Vector::Zero(c.pair_dim()), c, 0.0};
        s.amp[0] = 1.0;
        const PureState2M out = apply_mode_mixer(s, split);
        CHECK(std::abs(out.amp[0]) == Approx(1.0));
        CHECK(out.tail_mass == 0.0);
    }

    SECTION("norm preserved when blocks fit") {
        PureState2M s{Vector::Zero(c.pair_dim()), c, 0.0};
        s.amp[pair_index(3, 2, c)] = std::sqrt(0.5);
        s.amp[pair_index(1, 4, c)] = complex_t(0.0, std::sqrt(0.5));
        const PureState2M out = apply_mode_mixer(s, split);
        CHECK(out.tail_mass == 0.0);
        CHECK(out.norm() == Approx(1.0).epsilon(1e-12));
        // total photon number conserved
        double mass_on_5 = 0.0;
        for (int k = 0; k <= 5; ++k) mass_on_5 += std::norm(out.amp[pair_index(k, 5 - k, c)]);
        CHECK(mass_on_5 == Approx(1.0).epsilon(1e-12));
    }

    SECTION("overflow accounting") {
        PureState2M s{Vector::Zero(c.pair_dim()), c, 0.0};
        s.amp[pair_index(15, 15, c)] = 1.0;  // total n = 30 spills past the cutoff
        CHECK_THROWS_AS(apply_mode_mixer(s, split), TruncationOverflow);
        const PureState2M out = apply_mode_mixer(s, split, /*allow_truncation=*/true);
        CHECK(out.tail_mass > 0.0);
        CHECK(out.norm() == Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("restrict_cutoff") {
    const Cutoff big(12), small(5);
    PureState2M s{Vector::Zero(big.pair_dim()), big, 0.0};
    s.amp[pair_index(4, 0, big)] = 1.0 / std::sqrt(2.0);
    s.amp[pair_index(0, 4, big)] = complex_t(0.0, 1.0 / std::sqrt(2.0));
    const DensityOp2M rho = to_density(s);
    const DensityOp2M cropped = restrict_cutoff(rho, small);
    CHECK(cropped.cutoff.dim() == 5);
    CHECK(cropped.trace() == Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(cropped.rho(pair_index(4, 0, small), pair_index(0, 4, small)) -
                   rho.rho(pair_index(4, 0, big), pair_index(0, 4, big))) < 1e-15);

    PureState2M spill{Vector::Zero(big.pair_dim()), big, 0.0};
    spill.amp[pair_index(7, 0, big)] = 1.0;
    CHECK_THROWS_AS(restrict_cutoff(to_density(spill), small), SupportLeakage);
}
