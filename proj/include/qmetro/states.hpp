#pragma once
// Probe-state constructors: NOON, beam-split twin-Fock (BAT), entangled
// coherent states, uncorrelated single photons, and the mean-photon-number
// resource matching between them.

#include "qmetro/fock.hpp"

#include <utility>
#include <vector>

namespace qmetro {

enum class ProbeKind { noon, bat, ecs, scs, uncorrelated };

inline const char* to_string(ProbeKind k) {
    switch (k) {
        case ProbeKind::noon: return "noon";
        case ProbeKind::bat: return "bat";
        case ProbeKind::ecs: return "ecs";
        case ProbeKind::scs: return "scs";
        case ProbeKind::uncorrelated: return "uncorrelated";
    }
    return "?";
}

struct ProbeSpec {
    ProbeKind kind = ProbeKind::noon;
    int n = 0;           // photon number for noon/bat/uncorrelated
    double alpha = 0.0;  // coherent amplitude for ecs/scs
    Cutoff cutoff{};
};

/// Normalizer of the two-mode entangled coherent state,
/// 1/sqrt(2(1 + e^{-|alpha|^2})). Lies in (0, 1/sqrt 2].
inline double ecs_normalizer(double alpha) {
    return 1.0 / std::sqrt(2.0 * (1.0 + std::exp(-alpha * alpha)));
}

/// Normalizer of the single-mode even cat state,
/// 1/sqrt(2(1 + e^{-2|alpha|^2})).
inline double cat_normalizer(double alpha) {
    return 1.0 / std::sqrt(2.0 * (1.0 + std::exp(-2.0 * alpha * alpha)));
}

/// (|N,0> + |0,N>)/sqrt(2).
inline PureState2M make_noon(int n, Cutoff c) {
    if (n < 1) throw Error("make_noon: need N >= 1");
    if (n >= c.dim())
        throw CutoffTooSmall("make_noon: N=" + std::to_string(n) + " does not fit dim=" +
                             std::to_string(c.dim()));
    PureState2M s{Vector::Zero(c.pair_dim()), c, 0.0};
    s.amp[pair_index(n, 0, c)] = 1.0 / std::sqrt(2.0);
    s.amp[pair_index(0, n, c)] = 1.0 / std::sqrt(2.0);
    return s;
}

/// Twin-Fock input |N/2, N/2> sent through a 50:50 beam splitter. For N=4
/// the amplitudes on {(4,0),(2,2),(0,4)} are (sqrt6/4, -1/2, sqrt6/4); the
/// phase-variance bound that follows is 1/sqrt(N(N/2+1)).
inline PureState2M make_bat(int n, Cutoff c) {
    if (n < 2 || n % 2 != 0) throw OddN("make_bat: need even N >= 2, got " + std::to_string(n));
    if (n >= c.dim())
        throw CutoffTooSmall("make_bat: N=" + std::to_string(n) + " does not fit dim=" +
                             std::to_string(c.dim()));
    PureState2M twin{Vector::Zero(c.pair_dim()), c, 0.0};
    twin.amp[pair_index(n / 2, n / 2, c)] = 1.0;
    Eigen::Matrix2cd split;  // a1+ -> (a1+ + a2+)/sqrt2, a2+ -> (a1+ - a2+)/sqrt2
    const double r = 1.0 / std::sqrt(2.0);
    split << r, r, r, -r;
    return apply_mode_mixer(twin, split);
}

/// Entangled coherent state N_alpha (|alpha>|0> + |0>|alpha>). Support is
/// confined to the rays (n,0) and (0,m).
inline PureState2M make_ecs(double alpha, Cutoff c, bool allow_truncation = false) {
    if (alpha < 0.0) throw Error("make_ecs: alpha must be nonnegative");
    const int d = c.dim();
    Vector ray = Vector::Zero(d);  // exact truncated coherent amplitudes
    ray[0] = std::exp(-0.5 * alpha * alpha);
    for (int n = 1; n < d; ++n) ray[n] = ray[n - 1] * alpha / std::sqrt(double(n));

    PureState2M s{Vector::Zero(c.pair_dim()), c, 0.0};
    const double norm = ecs_normalizer(alpha);
    for (int n = 0; n < d; ++n) {
        s.amp[pair_index(n, 0, c)] += norm * ray[n];
        s.amp[pair_index(0, n, c)] += norm * ray[n];
    }
    s.tail_mass = 1.0 - s.amp.squaredNorm();
    if (s.tail_mass >= kTailBudget && !allow_truncation)
        throw TruncationOverflow("make_ecs: tail mass " + std::to_string(s.tail_mass) +
                                 " at alpha=" + std::to_string(alpha));
    s.normalize();
    return s;
}

/// N independent copies of the single-photon path superposition
/// (|1,0> + |0,1>)/sqrt(2). Fisher information is additive over copies, so
/// one representative copy plus the count is enough.
struct UncorrelatedProbe {
    PureState2M copy;
    int copies = 1;
};

inline UncorrelatedProbe make_uncorrelated(int n, Cutoff c) {
    if (n < 1) throw Error("make_uncorrelated: need N >= 1");
    return {make_noon(1, c), n};
}

/// <n1> on the probe.
inline double mean_photon_mode1(const PureState2M& s) {
    return observable_moments(s, mode1_number(s.cutoff)).mean;
}

/// Inverts N_alpha^2 alpha^2 = target by bisection: the map is strictly
/// increasing on [0, inf) and the bracket [0, 2 sqrt(target)+1] always
/// contains the root.
inline double alpha_for_mean_photons(double target) {
    if (target < 0.0) throw Error("alpha_for_mean_photons: target must be nonnegative");
    if (target == 0.0) return 0.0;
    auto mean = [](double a) { double n = ecs_normalizer(a); return n * n * a * a; };
    double lo = 0.0, hi = 2.0 * std::sqrt(target) + 1.0;
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        (mean(mid) < target ? lo : hi) = mid;
    }
    const double a = 0.5 * (lo + hi);
    if (std::abs(mean(a) - target) > 1e-10)
        throw Error("alpha_for_mean_photons: bisection failed to converge");
    return a;
}

/// Feeds |alpha>_1 (x) cat(alpha)_2 through the 50:50 beam splitter; the
/// output is the entangled coherent state of amplitude sqrt(2) alpha. Returns
/// the prepared state and its fidelity against make_ecs(sqrt(2) alpha).
inline std::pair<PureState2M, double> prepare_ecs_via_bs(double alpha, Cutoff c,
                                                         bool allow_truncation = false) {
    const FockVector in1 = coherent_vector(alpha, c, allow_truncation);
    const FockVector in2 = cat_vector(alpha, c, allow_truncation);
    PureState2M prod = product_state(in1, in2, c);
    Eigen::Matrix2cd split;  // a1+ -> (a1+ + a2+)/sqrt2, a2+ -> (-a1+ + a2+)/sqrt2
    const double r = 1.0 / std::sqrt(2.0);
    split << r, r, -r, r;
    PureState2M out = apply_mode_mixer(prod, split, allow_truncation);
    const PureState2M target = make_ecs(std::sqrt(2.0) * alpha, c, allow_truncation);
    const double fidelity = std::norm(target.amp.dot(out.amp));
    return {std::move(out), fidelity};
}

}  // namespace qmetro
