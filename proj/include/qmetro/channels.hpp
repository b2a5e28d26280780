#pragma once
// Phase imprinting, 50:50 beam splitters, photon loss as equal-transmissivity
// beam splitters into traced-out environment modes (generic Kraus form), and
// the two-component closed form of the lossy entangled coherent state.

#include "qmetro/fock.hpp"
#include "qmetro/states.hpp"

#include <vector>

namespace qmetro {

// ---------------------------------------------------------------------------
// Phase shifter

struct PhaseSpec {
    double phi = 0.0;
    int k = 1;  // nonlinearity order; k=1 is the conventional phase shifter
};

/// exp(i phi (n2)^k) acting on mode 2: multiplies the (n1,n2) amplitude by
/// exp(i phi n2^k). Exactly norm-preserving.
inline PureState2M phase_shift(const PureState2M& psi, PhaseSpec spec) {
    if (spec.k < 1) throw Error("phase_shift: nonlinearity order must be >= 1");
    PureState2M out = psi;
    const int d = psi.cutoff.dim();
    for (int n2 = 0; n2 < d; ++n2) {
        const complex_t ph = std::exp(complex_t(0.0, spec.phi * std::pow(double(n2), spec.k)));
        for (int n1 = 0; n1 < d; ++n1) out.amp[pair_index(n1, n2, psi.cutoff)] *= ph;
    }
    return out;
}

/// Conjugation of a density operator by the same diagonal unitary.
inline DensityOp2M phase_shift(const DensityOp2M& rho, PhaseSpec spec) {
    if (spec.k < 1) throw Error("phase_shift: nonlinearity order must be >= 1");
    const int d = rho.cutoff.dim();
    Vector diag(rho.cutoff.pair_dim());
    for (int n1 = 0; n1 < d; ++n1)
        for (int n2 = 0; n2 < d; ++n2)
            diag[pair_index(n1, n2, rho.cutoff)] =
                std::exp(complex_t(0.0, spec.phi * std::pow(double(n2), spec.k)));
    DensityOp2M out{diag.asDiagonal() * rho.rho * diag.conjugate().asDiagonal(), rho.cutoff};
    return out;
}

// ---------------------------------------------------------------------------
// 50:50 beam splitter

/// The two 50:50 conventions, named by the mode into which equal coherent
/// inputs recombine: |beta>|beta> -> |sqrt2 beta>|0> (sum_to_mode1) or
/// |0>|sqrt2 beta> (sum_to_mode2). sum_to_mode2 sends |alpha>|0> to
/// |alpha/sqrt2>|alpha/sqrt2> and |0>|beta> to |-beta/sqrt2>|beta/sqrt2>;
/// it is the convention under which the mode-2 parity readout reproduces the
/// closed-form interference fringe (see metrology).
enum class BsConvention { sum_to_mode1, sum_to_mode2 };

inline Eigen::Matrix2cd beam_splitter_map(BsConvention conv) {
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::Matrix2cd s;
    if (conv == BsConvention::sum_to_mode1)
        s << r, r, r, -r;   // a1+ -> (a1+ + a2+)/sqrt2, a2+ -> (a1+ - a2+)/sqrt2
    else
        s << r, r, -r, r;   // a1+ -> (a1+ + a2+)/sqrt2, a2+ -> (-a1+ + a2+)/sqrt2
    return s;
}

inline PureState2M beam_splitter_5050(const PureState2M& psi,
                                      BsConvention conv = BsConvention::sum_to_mode2,
                                      bool allow_truncation = false) {
    return apply_mode_mixer(psi, beam_splitter_map(conv), allow_truncation);
}

// ---------------------------------------------------------------------------
// Photon loss

/// Kraus elements of the single-mode loss channel of transmissivity T:
///   <n-l| K_l |n> = sqrt(C(n,l)) sqrt(T)^(n-l) sqrt(1-T)^l.
/// K_l removes exactly l photons; sum_l K_l^dag K_l = 1.
struct KrausSet {
    double transmissivity = 1.0;
    std::vector<Matrix> elements;
};

inline KrausSet loss_kraus(double T, Cutoff c) {
    if (!(T >= 0.0 && T <= 1.0))
        throw BadTransmissivity("loss_kraus: T=" + std::to_string(T) + " outside [0,1]");
    KrausSet set{T, {}};
    set.elements.reserve(c.dim());
    for (int l = 0; l < c.dim(); ++l) {
        Matrix K = Matrix::Zero(c.dim(), c.dim());
        for (int n = l; n < c.dim(); ++n)
            K(n - l, n) = std::sqrt(binomial(n, l)) * std::pow(std::sqrt(T), n - l) *
                          std::pow(std::sqrt(1.0 - T), l);
        set.elements.push_back(std::move(K));
    }
    return set;
}

namespace detail {

// Coefficient table A(l, m) = <m| K_l |m+l> = sqrt(C(m+l, l)) T^(m/2) (1-T)^(l/2).
inline Eigen::MatrixXd loss_coefficients(double T, int dim) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(dim, dim);
    for (int l = 0; l < dim; ++l)
        for (int m = 0; m + l < dim; ++m)
            A(l, m) = std::sqrt(binomial(m + l, l)) * std::pow(T, 0.5 * m) *
                      std::pow(1.0 - T, 0.5 * l);
    return A;
}

// Single-mode loss on the first tensor factor. Because every Kraus element
// K_l is a single lower shift by l, the operator sum collapses to shifted
// diagonal bands:
//   rho'[(m,.),(m',.)] = sum_l A(l,m) A(l,m') rho[(m+l,.),(m'+l,.)]
// which is algebraically identical to sum_l (K_l (x) 1) rho (K_l (x) 1)^dag.
inline Matrix loss_mode1(const Matrix& rho, double T, int dim) {
    const Eigen::MatrixXd A = loss_coefficients(T, dim);
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    for (int l = 0; l < dim; ++l)
        for (int m = 0; m + l < dim; ++m)
            for (int mp = 0; mp + l < dim; ++mp)
                out.block(m * dim, mp * dim, dim, dim) +=
                    A(l, m) * A(l, mp) * rho.block((m + l) * dim, (mp + l) * dim, dim, dim);
    return out;
}

// Relabels the two modes: (n1,n2),(m1,m2) -> (n2,n1),(m2,m1).
inline Matrix swap_modes(const Matrix& rho, int dim) {
    Matrix out(rho.rows(), rho.cols());
    for (int n1 = 0; n1 < dim; ++n1)
        for (int n2 = 0; n2 < dim; ++n2)
            for (int m1 = 0; m1 < dim; ++m1)
                for (int m2 = 0; m2 < dim; ++m2)
                    out(n2 * dim + n1, m2 * dim + m1) = rho(n1 * dim + n2, m1 * dim + m2);
    return out;
}

}  // namespace detail

/// Equal-transmissivity loss on both modes:
///   rho -> sum_{l,m} (K_l (x) K_m) rho (K_l (x) K_m)^dag.
/// Trace-preserving and Hermiticity-preserving; the two single-mode channels
/// commute and are applied in sequence.
inline DensityOp2M apply_loss_both_modes(const DensityOp2M& rho, double T) {
    if (!(T >= 0.0 && T <= 1.0))
        throw BadTransmissivity("apply_loss_both_modes: T=" + std::to_string(T) + " outside [0,1]");
    const int d = rho.cutoff.dim();
    if (T == 1.0) return rho;
    if (T == 0.0) {
        DensityOp2M out{Matrix::Zero(rho.rho.rows(), rho.rho.cols()), rho.cutoff};
        out.rho(0, 0) = rho.rho.trace();
        return out;
    }
    const Matrix stage = detail::loss_mode1(rho.rho, T, d);
    // loss on mode 2 = relabel, lose mode 1, relabel back
    return DensityOp2M{
        detail::swap_modes(detail::loss_mode1(detail::swap_modes(stage, d), T, d), d),
        rho.cutoff};
}

inline DensityOp2M apply_loss_both_modes(const PureState2M& psi, double T) {
    return apply_loss_both_modes(to_density(psi), T);
}

// ---------------------------------------------------------------------------
// Lossy entangled coherent state, two-component form

/// After the phase shift and equal loss T on both arms, the entangled
/// coherent state collapses onto just two components:
///   rho = P00 |S00><S00| + PD (|S_L,0><S_L,0| + |0,S_R><0,S_R|)
/// with S_L = |alpha sqrt T>, S_R = |alpha sqrt T e^{i phi}>, S00 their
/// two-mode entangled superposition, P00 = (e^{a^2 T}+1)/(e^{a^2}+1) the
/// no-loss probability and PD = N_alpha^2 (1 - e^{a^2(T-1)}) the weight of
/// each flagged-loss ray. P00 + 2 PD = 1 holds identically.
struct LossyEcsDecomposition {
    double alpha = 0.0;
    double transmissivity = 1.0;
    double phi = 0.0;
    double p00 = 1.0;
    double pd = 0.0;
    FockVector s_left;
    FockVector s_right;
    DensityOp2M rho;
};

inline LossyEcsDecomposition ecs_lossy_closed_form(double alpha, double T, double phi, Cutoff c,
                                                   bool allow_truncation = false) {
    if (!(T >= 0.0 && T <= 1.0))
        throw BadTransmissivity("ecs_lossy_closed_form: T outside [0,1]");
    const double a2 = alpha * alpha;
    LossyEcsDecomposition out;
    out.alpha = alpha;
    out.transmissivity = T;
    out.phi = phi;
    out.p00 = (std::exp(a2 * T) + 1.0) / (std::exp(a2) + 1.0);
    const double ne = ecs_normalizer(alpha);
    out.pd = ne * ne * (1.0 - std::exp(a2 * (T - 1.0)));

    const double at = alpha * std::sqrt(T);
    out.s_left = coherent_vector(at, c, allow_truncation);
    out.s_right = coherent_vector(at * std::exp(complex_t(0.0, phi)), c, allow_truncation);
    const PureState2M s00 = phase_shift(make_ecs(at, c, allow_truncation), PhaseSpec{phi, 1});

    const FockVector vac = vacuum_vector(c);
    const PureState2M ray_l = product_state(out.s_left, vac, c);
    const PureState2M ray_r = product_state(vac, out.s_right, c);

    out.rho = DensityOp2M{out.p00 * (s00.amp * s00.amp.adjoint()) +
                              out.pd * (ray_l.amp * ray_l.amp.adjoint() +
                                        ray_r.amp * ray_r.amp.adjoint()),
                          c};
    return out;
}

// ---------------------------------------------------------------------------
// Reduced support basis

/// Density operators produced from entangled-coherent probes live on
/// span{|n,0>, |0,m>}, a (2 dim - 1)-dimensional subspace. This re-expresses
/// such an operator on that basis; `expand` is the exact inverse.
struct ReducedSupport {
    std::vector<int> basis;           // flattened two-mode indices, (0,0) first
    Eigen::VectorXd generator_diag;   // n2 restricted to the support basis
    Matrix compressed;
    double leakage = 0.0;
    Cutoff cutoff;
};

inline ReducedSupport reduced_support_basis(const DensityOp2M& rho, double leak_tol = 1e-10) {
    const int d = rho.cutoff.dim();
    ReducedSupport out;
    out.cutoff = rho.cutoff;
    out.basis.reserve(2 * d - 1);
    for (int n = 0; n < d; ++n) out.basis.push_back(pair_index(n, 0, rho.cutoff));
    for (int m = 1; m < d; ++m) out.basis.push_back(pair_index(0, m, rho.cutoff));

    out.generator_diag.resize(2 * d - 1);
    for (int n = 0; n < d; ++n) out.generator_diag[n] = 0.0;
    for (int m = 1; m < d; ++m) out.generator_diag[d + m - 1] = double(m);

    // off-support mass: remainder of the diagonal (positivity bounds every
    // off-support row by its diagonal entry)
    double on_support = 0.0;
    for (int i : out.basis) on_support += rho.rho(i, i).real();
    out.leakage = rho.trace() - on_support;
    if (out.leakage > leak_tol)
        throw SupportLeakage("reduced_support_basis: off-support mass " +
                             std::to_string(out.leakage));

    const int side = 2 * d - 1;
    out.compressed.resize(side, side);
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j)
            out.compressed(i, j) = rho.rho(out.basis[i], out.basis[j]);
    return out;
}

inline DensityOp2M expand_from_support(const ReducedSupport& rs) {
    DensityOp2M out{Matrix::Zero(rs.cutoff.pair_dim(), rs.cutoff.pair_dim()), rs.cutoff};
    const int side = static_cast<int>(rs.basis.size());
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j)
            out.rho(rs.basis[i], rs.basis[j]) = rs.compressed(i, j);
    return out;
}

}  // namespace qmetro
