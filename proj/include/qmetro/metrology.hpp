#pragma once
// Quantum Fisher information for pure and mixed probes, the Cramér-Rao phase
// bound, analytic/finite-difference derivative routes, and the parity-readout
// uncertainty with its working-point optimizer.

#include "qmetro/channels.hpp"
#include "qmetro/fock.hpp"
#include "qmetro/states.hpp"

#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace qmetro {

enum class QfiMethod { pure_numeric, pure_analytic, mixed_eig, closed_form, parity_min };

inline const char* to_string(QfiMethod m) {
    switch (m) {
        case QfiMethod::pure_numeric: return "pure-numeric";
        case QfiMethod::pure_analytic: return "pure-analytic";
        case QfiMethod::mixed_eig: return "mixed-eig";
        case QfiMethod::closed_form: return "closed-form";
        case QfiMethod::parity_min: return "parity-min";
    }
    return "?";
}

/// Fisher information together with the single-parameter Cramér-Rao bound
/// delta_phi = 1/sqrt(mu F) it implies (infinite when F = 0).
struct QfiResult {
    double fisher_information = 0.0;
    double delta_phi = std::numeric_limits<double>::infinity();
    int mu = 1;
    QfiMethod method = QfiMethod::pure_numeric;
    int spectrum_cut = 0;  // eigenvalue pairs dropped from the mixed-state sum
};

inline QfiResult make_qfi_result(double F, int mu, QfiMethod method, int spectrum_cut = 0) {
    QfiResult r;
    r.fisher_information = F;
    r.mu = mu;
    r.method = method;
    r.spectrum_cut = spectrum_cut;
    r.delta_phi = F > 0.0 ? 1.0 / std::sqrt(double(mu) * F)
                          : std::numeric_limits<double>::infinity();
    return r;
}

/// Cramér-Rao bound for mu shots.
inline double crb(double fisher_information, int mu = 1) {
    if (mu < 1) throw Error("crb: shot count must be >= 1");
    if (!(fisher_information > 0.0))
        throw ZeroInformation("crb: Fisher information is not positive");
    return 1.0 / std::sqrt(double(mu) * fisher_information);
}

// ---------------------------------------------------------------------------
// Pure-state Fisher information

/// F = 4 [ <psi'|psi'> - |<psi'|psi>|^2 ] with |psi'> = i G |psi>, i.e.
/// 4 Var(G) on the probe. `generator` defaults to the mode-2 number operator.
inline QfiResult qfi_pure(const PureState2M& psi, const Matrix& generator, int mu = 1) {
    const Moments m = observable_moments(psi, generator);
    return make_qfi_result(4.0 * m.variance, mu, QfiMethod::pure_numeric);
}

inline QfiResult qfi_pure(const PureState2M& psi, int mu = 1) {
    return qfi_pure(psi, mode2_number(psi.cutoff).mat, mu);
}

/// Exact pure bounds for the photon-number probes.
inline QfiResult qfi_noon_closed(int n, int mu = 1) {
    return make_qfi_result(double(n) * double(n), mu, QfiMethod::pure_analytic);
}

inline QfiResult qfi_bat_closed(int n, int mu = 1) {
    if (n % 2 != 0) throw OddN("qfi_bat_closed: need even N");
    return make_qfi_result(double(n) * (double(n) / 2.0 + 1.0), mu, QfiMethod::pure_analytic);
}

/// Closed form for the pure entangled coherent probe:
/// F = 4 a^2 N_a^2 (1 + (1 - N_a^2) a^2).
inline QfiResult qfi_pure_ecs_closed(double alpha, int mu = 1) {
    const double n2 = ecs_normalizer(alpha) * ecs_normalizer(alpha);
    const double a2 = alpha * alpha;
    const double F = 4.0 * a2 * n2 * (1.0 + (1.0 - n2) * a2);
    return make_qfi_result(F, mu, QfiMethod::closed_form);
}

// ---------------------------------------------------------------------------
// Phase derivative of a lossy pipeline

/// A rebuildable phase pipeline: phi -> density operator at that phase.
using StateRecipe = std::function<DensityOp2M(double)>;

/// i [G, rho] with G the diagonal generator n2^k. Valid as d(rho)/d(phi)
/// because the loss channel commutes with the mode-2 phase rotation, so the
/// phase dependence of the pipeline output is exactly conjugation by the
/// phase unitary.
inline Matrix drho_dphi_analytic(const DensityOp2M& rho, int k = 1) {
    const RealVector g = mode2_number_pow_diag(rho.cutoff, k);
    Matrix d(rho.rho.rows(), rho.rho.cols());
    for (Eigen::Index r = 0; r < d.rows(); ++r)
        for (Eigen::Index c = 0; c < d.cols(); ++c)
            d(r, c) = complex_t(0.0, g[r] - g[c]) * rho.rho(r, c);
    return d;
}

/// Central difference (rho(phi+h) - rho(phi-h)) / 2h. Validation route only.
inline Matrix drho_dphi_fd(const StateRecipe& rebuild, double phi, double h = 1e-5) {
    if (!rebuild) throw Error("drho_dphi_fd: no recipe provided");
    const DensityOp2M plus = rebuild(phi + h);
    const DensityOp2M minus = rebuild(phi - h);
    return (plus.rho - minus.rho) / (2.0 * h);
}

/// Confirms the analytic commutator matches the finite difference of the
/// recipe at the working phase; a pipeline with a step that fails to commute
/// with the phase rotation breaks this and is rejected.
inline void check_phase_covariance(const DensityOp2M& rho_at_phi, const StateRecipe& rebuild,
                                   double phi, double tol = 1e-6) {
    const Matrix a = drho_dphi_analytic(rho_at_phi);
    const Matrix f = drho_dphi_fd(rebuild, phi);
    const double dev = (a - f).cwiseAbs().maxCoeff();
    if (dev > tol)
        throw PipelineNotCovariant("check_phase_covariance: analytic vs finite-difference "
                                   "deviation " + std::to_string(dev));
}

// ---------------------------------------------------------------------------
// Mixed-state Fisher information

/// Eigendecomposition form F = sum_{ij} 2 |<i| drho |j>|^2 / (li + lj) over
/// pairs with li + lj above `pair_cutoff_rel` times the largest eigenvalue;
/// the formula is singular on the null space, so dropped pairs are counted.
inline QfiResult qfi_mixed(const DensityOp2M& rho, const Matrix& drho,
                           double pair_cutoff_rel = 1e-12, int mu = 1) {
    if (drho.rows() != rho.rho.rows() || drho.cols() != rho.rho.cols())
        throw DimensionMismatch("qfi_mixed: derivative size does not match state");
    if (std::abs(rho.trace() - 1.0) > 1e-8)
        throw NotDensityOperator("qfi_mixed: trace " + std::to_string(rho.trace()));

    const EigDecomposition eig = hermitian_eig(rho.rho);
    const double lmax = eig.eigenvalues.maxCoeff();
    if (eig.eigenvalues.minCoeff() < -1e-8)
        throw NotDensityOperator("qfi_mixed: eigenvalue " +
                                 std::to_string(eig.eigenvalues.minCoeff()));
    const double cut = pair_cutoff_rel * lmax;

    const Matrix d_eig = eig.eigenvectors.adjoint() * drho * eig.eigenvectors;
    const Eigen::Index n = eig.eigenvalues.size();
    double F = 0.0;
    int dropped = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double s = eig.eigenvalues[i] + eig.eigenvalues[j];
            if (s <= cut) { ++dropped; continue; }
            F += 2.0 * std::norm(d_eig(i, j)) / s;
        }
    }
    return make_qfi_result(F, mu, QfiMethod::mixed_eig, dropped);
}

/// Same eigensum on a support-compressed operator (diagonal generator given
/// on the compressed basis). Exact whenever the compression is.
inline QfiResult qfi_mixed_compressed(const Matrix& rho_c, const Eigen::VectorXd& generator_diag,
                                      double pair_cutoff_rel = 1e-12, int mu = 1) {
    if (rho_c.rows() != rho_c.cols() || rho_c.rows() != generator_diag.size())
        throw DimensionMismatch("qfi_mixed_compressed: generator does not match operator");
    Matrix drho(rho_c.rows(), rho_c.cols());
    for (Eigen::Index r = 0; r < rho_c.rows(); ++r)
        for (Eigen::Index c = 0; c < rho_c.cols(); ++c)
            drho(r, c) = complex_t(0.0, generator_diag[r] - generator_diag[c]) * rho_c(r, c);

    const EigDecomposition eig = hermitian_eig(rho_c);
    const double cut = pair_cutoff_rel * eig.eigenvalues.maxCoeff();
    const Matrix d_eig = eig.eigenvectors.adjoint() * drho * eig.eigenvectors;
    double F = 0.0;
    int dropped = 0;
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i)
        for (Eigen::Index j = 0; j < eig.eigenvalues.size(); ++j) {
            const double s = eig.eigenvalues[i] + eig.eigenvalues[j];
            if (s <= cut) { ++dropped; continue; }
            F += 2.0 * std::norm(d_eig(i, j)) / s;
        }
    return make_qfi_result(F, mu, QfiMethod::mixed_eig, dropped);
}

// ---------------------------------------------------------------------------
// Lossy bound sweep

/// Phase -> loss -> mixed Fisher information for one probe across a grid of
/// transmissivities. The result is independent of the working phase (the
/// phase unitary commutes with the loss channel); a nonzero default is used
/// so complex off-diagonals are exercised. Uncorrelated probes contribute
/// additively: N times the single-photon value.
inline std::vector<QfiResult> lossy_bound_sweep(const ProbeSpec& probe,
                                                const std::vector<double>& t_grid,
                                                double working_phi = 0.3, int mu = 1) {
    std::vector<QfiResult> out;
    out.reserve(t_grid.size());

    auto mixed_qfi_of = [&](const PureState2M& input, double T) {
        const DensityOp2M rho =
            apply_loss_both_modes(phase_shift(input, PhaseSpec{working_phi, 1}), T);
        return qfi_mixed(rho, drho_dphi_analytic(rho), 1e-12, mu);
    };

    for (double T : t_grid) {
        switch (probe.kind) {
            case ProbeKind::noon:
                out.push_back(mixed_qfi_of(make_noon(probe.n, probe.cutoff), T));
                break;
            case ProbeKind::bat:
                out.push_back(mixed_qfi_of(make_bat(probe.n, probe.cutoff), T));
                break;
            case ProbeKind::ecs: {
                const PureState2M psi = make_ecs(probe.alpha, probe.cutoff);
                const DensityOp2M rho =
                    apply_loss_both_modes(phase_shift(psi, PhaseSpec{working_phi, 1}), T);
                const ReducedSupport rs = reduced_support_basis(rho);
                QfiResult r = qfi_mixed_compressed(rs.compressed, rs.generator_diag, 1e-12, mu);
                out.push_back(r);
                break;
            }
            case ProbeKind::uncorrelated: {
                const UncorrelatedProbe u = make_uncorrelated(probe.n, probe.cutoff);
                QfiResult per_copy = mixed_qfi_of(u.copy, T);
                out.push_back(make_qfi_result(per_copy.fisher_information * u.copies, mu,
                                              QfiMethod::mixed_eig, per_copy.spectrum_cut));
                break;
            }
            case ProbeKind::scs:
                throw Error("lossy_bound_sweep: single-mode cat probes are not swept");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parity readout

/// Interference fringe of the mode-2 parity readout on the phase-shifted,
/// recombined entangled coherent state:
///   <Pi2> = (2 + 2 e^{-a^2 cos phi} cos(a^2 sin phi)) / (2 + 2 e^{a^2}).
inline double parity_expectation_closed(double alpha, double phi) {
    const double a2 = alpha * alpha;
    return (2.0 + 2.0 * std::exp(-a2 * std::cos(phi)) * std::cos(a2 * std::sin(phi))) /
           (2.0 + 2.0 * std::exp(a2));
}

/// d<Pi2>/d(phi) of the closed form.
inline double parity_derivative_closed(double alpha, double phi) {
    const double a2 = alpha * alpha;
    return 2.0 * a2 * std::exp(-a2 * std::cos(phi)) *
           (std::sin(phi) * std::cos(a2 * std::sin(phi)) -
            std::cos(phi) * std::sin(a2 * std::sin(phi))) /
           (2.0 + 2.0 * std::exp(a2));
}

/// Fock-space route: phase-shifted entangled coherent state through the
/// 50:50 recombiner, then the diagonal parity observable on mode 2.
inline double parity_expectation_numeric(double alpha, double phi, Cutoff c) {
    const PureState2M out = beam_splitter_5050(
        phase_shift(make_ecs(alpha, c), PhaseSpec{phi, 1}), BsConvention::sum_to_mode2);
    return observable_moments(out, mode2_parity(c)).mean;
}

/// Error-propagated phase uncertainty of the parity readout,
///  (delta phi)^2 = (1 - <Pi2>^2) / (d<Pi2>/dphi)^2.
inline double parity_uncertainty(double alpha, double phi) {
    const double deriv = parity_derivative_closed(alpha, phi);
    if (std::abs(deriv) < 1e-12)
        throw StationaryPoint("parity_uncertainty: fringe is stationary at phi=" +
                              std::to_string(phi));
    const double p = parity_expectation_closed(alpha, phi);
    return std::sqrt(std::max(0.0, 1.0 - p * p)) / std::abs(deriv);
}

struct ParityOptimum {
    double phi_star = 0.0;
    double delta_star = std::numeric_limits<double>::infinity();
};

/// Minimizes the parity uncertainty over phi in (0, pi): a fixed 2048-point
/// scan followed by golden-section refinement of the best bracket down to
/// 1e-8 in phi. Deterministic for a given alpha.
inline ParityOptimum optimize_parity_uncertainty(double alpha) {
    if (!(alpha > 0.0)) throw Error("optimize_parity_uncertainty: need alpha > 0");
    constexpr int kGrid = 2048;
    const double pi = std::numbers::pi;

    auto objective = [alpha](double phi) {
        const double deriv = parity_derivative_closed(alpha, phi);
        if (std::abs(deriv) < 1e-12) return std::numeric_limits<double>::infinity();
        const double p = parity_expectation_closed(alpha, phi);
        return std::sqrt(std::max(0.0, 1.0 - p * p)) / std::abs(deriv);
    };

    int best_i = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= kGrid; ++i) {
        const double v = objective(pi * i / (kGrid + 1));
        if (v < best) { best = v; best_i = i; }
    }
    if (best_i < 0) return {0.0, std::numeric_limits<double>::infinity()};

    double lo = pi * (best_i - 1) / (kGrid + 1);
    double hi = pi * (best_i + 1) / (kGrid + 1);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    while (hi - lo > 1e-8) {
        if (objective(c) < objective(d)) hi = d; else lo = c;
        c = hi - gr * (hi - lo);
        d = lo + gr * (hi - lo);
    }
    const double phi_star = 0.5 * (lo + hi);
    return {phi_star, objective(phi_star)};
}

}  // namespace qmetro
