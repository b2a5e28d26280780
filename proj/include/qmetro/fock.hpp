#pragma once
// Dense linear algebra on a truncated Fock space: one- and two-mode state
// containers, operator builders, a deterministic Hermitian eigensolver and
// truncation-loss accounting.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmetro {

using complex_t = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Probability mass a state may lose to truncation before it is rejected
/// for metrology-grade computations.
inline constexpr double kTailBudget = 1e-5;

// ---------------------------------------------------------------------------
// Errors

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TruncationOverflow : Error { using Error::Error; };
struct NotHermitian : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct CutoffTooSmall : Error { using Error::Error; };
struct OddN : Error { using Error::Error; };
struct BadTransmissivity : Error { using Error::Error; };
struct SupportLeakage : Error { using Error::Error; };
struct PipelineNotCovariant : Error { using Error::Error; };
struct NotDensityOperator : Error { using Error::Error; };
struct StationaryPoint : Error { using Error::Error; };
struct ZeroInformation : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

// ---------------------------------------------------------------------------
// Basis bookkeeping

/// Number of retained Fock levels per mode (occupations 0 .. dim-1).
class Cutoff {
public:
    static constexpr int kDefault = 16;

    constexpr Cutoff() = default;
    explicit Cutoff(int dim) : dim_(dim) {
        if (dim < 2) throw Error("Cutoff: need at least two Fock levels, got " + std::to_string(dim));
    }

    constexpr int dim() const { return dim_; }
    constexpr int max_occupation() const { return dim_ - 1; }
    constexpr int pair_dim() const { return dim_ * dim_; }

    friend constexpr bool operator==(Cutoff a, Cutoff b) { return a.dim_ == b.dim_; }
    friend constexpr bool operator!=(Cutoff a, Cutoff b) { return a.dim_ != b.dim_; }

private:
    int dim_ = kDefault;
};

/// Flat index of the two-mode basis ket |n1, n2>.
inline int pair_index(int n1, int n2, Cutoff c) { return n1 * c.dim() + n2; }

inline double factorial(int n) {
    static const auto table = [] {
        std::array<double, 171> f{};
        f[0] = 1.0;
        for (int k = 1; k <= 170; ++k) f[k] = f[k - 1] * k;
        return f;
    }();
    if (n < 0 || n > 170) throw Error("factorial: argument out of double range");
    return table[static_cast<std::size_t>(n)];
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    return factorial(n) / (factorial(k) * factorial(n - k));
}

// ---------------------------------------------------------------------------
// State containers

/// Single-mode state vector. `tail_mass` is the probability lost when the
/// state was truncated to the cutoff (0 for states that fit exactly).
struct FockVector {
    Vector amp;
    double tail_mass = 0.0;

    int dim() const { return static_cast<int>(amp.size()); }
    double norm() const { return amp.norm(); }
};

/// Two-mode pure state on the truncated basis, amplitudes indexed by
/// pair_index(n1, n2).
struct PureState2M {
    Vector amp;
    Cutoff cutoff;
    double tail_mass = 0.0;

    double norm() const { return amp.norm(); }

    void normalize() {
        const double n = amp.norm();
        if (n <= 0.0) throw Error("PureState2M: cannot normalize a null vector");
        amp /= n;
    }

    /// Probability sitting on the outermost retained level of either mode.
    /// A cheap convergence diagnostic for states of unknown provenance.
    double boundary_mass() const {
        const int d = cutoff.dim();
        double m = 0.0;
        for (int n2 = 0; n2 < d; ++n2) m += std::norm(amp[pair_index(d - 1, n2, cutoff)]);
        for (int n1 = 0; n1 + 1 < d; ++n1) m += std::norm(amp[pair_index(n1, d - 1, cutoff)]);
        return m;
    }
};

/// Two-mode density operator (side dim^2).
struct DensityOp2M {
    Matrix rho;
    Cutoff cutoff;

    double trace() const { return rho.trace().real(); }

    double hermiticity_error() const {
        return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    }
};

inline DensityOp2M to_density(const PureState2M& psi) {
    return DensityOp2M{psi.amp * psi.amp.adjoint(), psi.cutoff};
}

enum class OpKind { generic, number, parity, beam_splitter, phase, kraus };

/// Dense operator together with a role tag (single-mode side dim, or
/// two-mode side dim^2).
struct OperatorMatrix {
    Matrix mat;
    OpKind kind = OpKind::generic;
};

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

/// Spectrum in ascending order; column i of `eigenvectors` is the unit
/// eigenvector for eigenvalues[i].
struct EigDecomposition {
    RealVector eigenvalues;
    Matrix eigenvectors;
};

// ---------------------------------------------------------------------------
// Elementary constructors

inline FockVector vacuum_vector(Cutoff c) {
    FockVector v{Vector::Zero(c.dim()), 0.0};
    v.amp[0] = 1.0;
    return v;
}

/// Coherent state |alpha> truncated to the cutoff. Amplitudes follow the
/// recurrence c_n = c_{n-1} * alpha / sqrt(n) with c_0 = exp(-|alpha|^2/2);
/// the exact probability lost to truncation is recorded and the vector
/// renormalized. Throws TruncationOverflow when the loss exceeds the tail
/// budget unless `allow_truncation` is set.
inline FockVector coherent_vector(complex_t alpha, Cutoff c, bool allow_truncation = false) {
    FockVector v{Vector::Zero(c.dim()), 0.0};
    v.amp[0] = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < c.dim(); ++n) v.amp[n] = v.amp[n - 1] * alpha / std::sqrt(double(n));
    const double kept = v.amp.squaredNorm();
    v.tail_mass = 1.0 - kept;
    if (v.tail_mass >= kTailBudget && !allow_truncation) {
        throw TruncationOverflow("coherent_vector: tail mass " + std::to_string(v.tail_mass) +
                                 " at |alpha|=" + std::to_string(std::abs(alpha)) +
                                 ", dim=" + std::to_string(c.dim()));
    }
    v.amp /= std::sqrt(kept);
    return v;
}

/// Even cat state N_a (|alpha> + |-alpha>) with N_a = 1/sqrt(2(1+e^{-2|a|^2})).
inline FockVector cat_vector(complex_t alpha, Cutoff c, bool allow_truncation = false) {
    FockVector v{Vector::Zero(c.dim()), 0.0};
    Vector plus = Vector::Zero(c.dim()), minus = Vector::Zero(c.dim());
    plus[0] = minus[0] = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < c.dim(); ++n) {
        plus[n] = plus[n - 1] * alpha / std::sqrt(double(n));
        minus[n] = minus[n - 1] * (-alpha) / std::sqrt(double(n));
    }
    const double norm_cat = 1.0 / std::sqrt(2.0 * (1.0 + std::exp(-2.0 * std::norm(alpha))));
    v.amp = norm_cat * (plus + minus);
    const double kept = v.amp.squaredNorm();
    v.tail_mass = 1.0 - kept;
    if (v.tail_mass >= kTailBudget && !allow_truncation)
        throw TruncationOverflow("cat_vector: tail mass " + std::to_string(v.tail_mass));
    v.amp /= std::sqrt(kept);
    return v;
}

inline PureState2M product_state(const FockVector& a, const FockVector& b, Cutoff c) {
    if (a.dim() != c.dim() || b.dim() != c.dim())
        throw DimensionMismatch("product_state: factor dimensions do not match cutoff");
    PureState2M s{Vector::Zero(c.pair_dim()), c, 0.0};
    for (int n1 = 0; n1 < c.dim(); ++n1)
        for (int n2 = 0; n2 < c.dim(); ++n2)
            s.amp[pair_index(n1, n2, c)] = a.amp[n1] * b.amp[n2];
    // independent factors: retained mass is the product of the retained masses
    s.tail_mass = 1.0 - (1.0 - a.tail_mass) * (1.0 - b.tail_mass);
    return s;
}

// ---------------------------------------------------------------------------
// Operators

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Single-mode photon-number operator diag(0, 1, ..., dim-1).
inline OperatorMatrix number_operator(Cutoff c) {
    Matrix m = Matrix::Zero(c.dim(), c.dim());
    for (int n = 0; n < c.dim(); ++n) m(n, n) = double(n);
    return {std::move(m), OpKind::number};
}

/// Single-mode parity operator diag((-1)^n).
inline OperatorMatrix parity_operator(Cutoff c) {
    Matrix m = Matrix::Zero(c.dim(), c.dim());
    for (int n = 0; n < c.dim(); ++n) m(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
    return {std::move(m), OpKind::parity};
}

inline OperatorMatrix embed_mode1(const OperatorMatrix& op, Cutoff c) {
    if (op.mat.rows() != c.dim())
        throw DimensionMismatch("embed_mode1: operator side does not match cutoff");
    return {kron(op.mat, Matrix::Identity(c.dim(), c.dim())), op.kind};
}

inline OperatorMatrix embed_mode2(const OperatorMatrix& op, Cutoff c) {
    if (op.mat.rows() != c.dim())
        throw DimensionMismatch("embed_mode2: operator side does not match cutoff");
    return {kron(Matrix::Identity(c.dim(), c.dim()), op.mat), op.kind};
}

/// Diagonal of the two-mode operator (n2)^k, the generator of the mode-2
/// phase rotation of nonlinearity order k.
inline RealVector mode2_number_pow_diag(Cutoff c, int k = 1) {
    if (k < 1) throw Error("mode2_number_pow_diag: nonlinearity order must be >= 1");
    RealVector g(c.pair_dim());
    for (int n1 = 0; n1 < c.dim(); ++n1)
        for (int n2 = 0; n2 < c.dim(); ++n2)
            g[pair_index(n1, n2, c)] = std::pow(double(n2), k);
    return g;
}

inline OperatorMatrix mode1_number(Cutoff c) { return embed_mode1(number_operator(c), c); }
inline OperatorMatrix mode2_number(Cutoff c) { return embed_mode2(number_operator(c), c); }
inline OperatorMatrix mode2_parity(Cutoff c) { return embed_mode2(parity_operator(c), c); }

// ---------------------------------------------------------------------------
// Eigendecomposition

/// Hermitian eigendecomposition with deterministic output. The input is
/// symmetrized as (m + m^dag)/2 to absorb channel roundoff; a deviation
/// beyond 1e-6 before symmetrization is an error. Each eigenvector column is
/// phase-fixed so that its largest-magnitude component is real positive
/// (first such component on ties).
inline EigDecomposition hermitian_eig(const Matrix& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("hermitian_eig: matrix not square");
    const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (dev > 1e-6)
        throw NotHermitian("hermitian_eig: deviation from Hermiticity " + std::to_string(dev));

    Eigen::SelfAdjointEigenSolver<Matrix> solver((m + m.adjoint()) / 2.0);
    if (solver.info() != Eigen::Success) throw Error("hermitian_eig: solver failed to converge");

    EigDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
    for (Eigen::Index j = 0; j < out.eigenvectors.cols(); ++j) {
        Eigen::Index imax = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < out.eigenvectors.rows(); ++i) {
            const double a = std::abs(out.eigenvectors(i, j));
            if (a > best) { best = a; imax = i; }
        }
        const complex_t pivot = out.eigenvectors(imax, j);
        if (std::abs(pivot) > 0.0)
            out.eigenvectors.col(j) *= std::conj(pivot) / std::abs(pivot);
    }
    return out;
}

inline EigDecomposition hermitian_eig(const OperatorMatrix& m) { return hermitian_eig(m.mat); }
inline EigDecomposition hermitian_eig(const DensityOp2M& rho) { return hermitian_eig(rho.rho); }

// ---------------------------------------------------------------------------
// Moments

inline Moments observable_moments(const PureState2M& psi, const Matrix& obs) {
    if (obs.rows() != obs.cols() || obs.rows() != psi.amp.size())
        throw DimensionMismatch("observable_moments: operator side does not match state");
    const Vector op_psi = obs * psi.amp;
    const double mean = psi.amp.dot(op_psi).real();
    const double second = op_psi.squaredNorm();  // <psi|O^dag O|psi> = <O^2> for Hermitian O
    return {mean, second - mean * mean};
}

inline Moments observable_moments(const DensityOp2M& rho, const Matrix& obs) {
    if (obs.rows() != obs.cols() || obs.rows() != rho.rho.rows())
        throw DimensionMismatch("observable_moments: operator side does not match state");
    const double mean = (rho.rho * obs).trace().real();
    const double second = (rho.rho * obs * obs).trace().real();
    return {mean, second - mean * mean};
}

inline Moments observable_moments(const PureState2M& psi, const OperatorMatrix& obs) {
    return observable_moments(psi, obs.mat);
}
inline Moments observable_moments(const DensityOp2M& rho, const OperatorMatrix& obs) {
    return observable_moments(rho, obs.mat);
}

// ---------------------------------------------------------------------------
// Passive mode mixing

/// Applies the linear-optics unitary defined by the creation-operator map
///   a1+ -> S(0,0) a1+ + S(0,1) a2+,   a2+ -> S(1,0) a1+ + S(1,1) a2+
/// (S unitary). Total photon number is conserved, so the action is exact
/// within each total-occupation block; mass pushed past the cutoff is
/// dropped, accounted into tail_mass, and the output renormalized.
inline PureState2M apply_mode_mixer(const PureState2M& psi, const Eigen::Matrix2cd& S,
                                    bool allow_truncation = false) {
    const int d = psi.cutoff.dim();
    if (d > 85) throw Error("apply_mode_mixer: cutoff too large for exact factorial arithmetic");
    const complex_t x = S(0, 0), y = S(0, 1), z = S(1, 0), w = S(1, 1);

    // scratch grid covering every occupation reachable from the retained
    // blocks (total photon number up to 2(d-1))
    const int big = 2 * d - 1;
    Vector scratch = Vector::Zero(big * big);

    for (int n1 = 0; n1 < d; ++n1) {
        for (int n2 = 0; n2 < d; ++n2) {
            const complex_t a = psi.amp[pair_index(n1, n2, psi.cutoff)];
            if (a == complex_t(0.0)) continue;
            const int tot = n1 + n2;
            for (int k1 = 0; k1 <= tot; ++k1) {
                const int k2 = tot - k1;
                // coefficient of |k1,k2> in (x a1+ + y a2+)^n1 (z a1+ + w a2+)^n2 |00>
                complex_t coeff = 0.0;
                for (int j = std::max(0, k1 - n2); j <= std::min(n1, k1); ++j) {
                    coeff += binomial(n1, j) * binomial(n2, k1 - j) *
                             std::pow(x, j) * std::pow(y, n1 - j) *
                             std::pow(z, k1 - j) * std::pow(w, n2 - (k1 - j));
                }
                coeff *= std::sqrt(factorial(k1) * factorial(k2) / (factorial(n1) * factorial(n2)));
                scratch[k1 * big + k2] += a * coeff;
            }
        }
    }

    PureState2M out{Vector::Zero(psi.cutoff.pair_dim()), psi.cutoff, 0.0};
    double lost = 0.0;
    for (int k1 = 0; k1 < big; ++k1) {
        for (int k2 = 0; k2 < big - k1; ++k2) {
            const complex_t a = scratch[k1 * big + k2];
            if (k1 < d && k2 < d)
                out.amp[pair_index(k1, k2, psi.cutoff)] = a;
            else
                lost += std::norm(a);
        }
    }
    out.tail_mass = psi.tail_mass + lost;
    if (out.tail_mass >= kTailBudget && !allow_truncation)
        throw TruncationOverflow("apply_mode_mixer: output tail mass " + std::to_string(out.tail_mass));
    out.normalize();
    return out;
}

// ---------------------------------------------------------------------------
// Container surgery

/// Restricts a density operator to a smaller cutoff. Valid when the state
/// carries (numerically) no mass on the dropped levels; the discarded
/// diagonal mass is checked against `leak_tol`.
inline DensityOp2M restrict_cutoff(const DensityOp2M& rho, Cutoff smaller, double leak_tol = 1e-12) {
    const int d = rho.cutoff.dim(), s = smaller.dim();
    if (s > d) throw DimensionMismatch("restrict_cutoff: target cutoff larger than source");
    double dropped = 0.0;
    for (int n1 = 0; n1 < d; ++n1)
        for (int n2 = 0; n2 < d; ++n2)
            if (n1 >= s || n2 >= s) dropped += rho.rho(pair_index(n1, n2, rho.cutoff),
                                                       pair_index(n1, n2, rho.cutoff)).real();
    if (dropped > leak_tol)
        throw SupportLeakage("restrict_cutoff: dropped diagonal mass " + std::to_string(dropped));

    DensityOp2M out{Matrix::Zero(s * s, s * s), smaller};
    for (int n1 = 0; n1 < s; ++n1)
        for (int n2 = 0; n2 < s; ++n2)
            for (int m1 = 0; m1 < s; ++m1)
                for (int m2 = 0; m2 < s; ++m2)
                    out.rho(pair_index(n1, n2, smaller), pair_index(m1, m2, smaller)) =
                        rho.rho(pair_index(n1, n2, rho.cutoff), pair_index(m1, m2, rho.cutoff));
    return out;
}

}  // namespace qmetro
