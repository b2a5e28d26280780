#pragma once
// Deterministic sweep drivers behind the command-line tool: each run maps a
// config to a fixed-order row list, serialized as CSV or JSON with pinned
// float formatting so identical configs produce byte-identical output.

#include "qmetro/channels.hpp"
#include "qmetro/fock.hpp"
#include "qmetro/metrology.hpp"
#include "qmetro/states.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace qmetro {

using ordered_json = nlohmann::ordered_json;

/// 12 significant digits, scientific. Below every test tolerance in the
/// suite, above double roundoff noise.
inline std::string format_sci(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.11e", v);
    return buf;
}

struct SweepRow {
    std::string state;
    int n = 0;
    double alpha = 0.0;
    double transmissivity = 1.0;
    double fisher_information = 0.0;
    double delta_phi = std::numeric_limits<double>::infinity();
    std::string method;
    int spectrum_cut = 0;
    double tail_mass = 0.0;
    std::optional<double> agreement;  // dual-route check, loss sweep only
};

inline const char* kCsvHeader = "state,N,alpha,T,F,delta_phi,method,spectrum_cut,tail_mass";

inline std::string to_csv(const std::vector<SweepRow>& rows, bool with_agreement = false) {
    std::string out = kCsvHeader;
    if (with_agreement) out += ",agreement";
    out += "\n";
    for (const SweepRow& r : rows) {
        out += r.state + "," + std::to_string(r.n) + "," + format_sci(r.alpha) + "," +
               format_sci(r.transmissivity) + "," + format_sci(r.fisher_information) + "," +
               format_sci(r.delta_phi) + "," + r.method + "," + std::to_string(r.spectrum_cut) +
               "," + format_sci(r.tail_mass);
        if (with_agreement) out += "," + format_sci(r.agreement.value_or(0.0));
        out += "\n";
    }
    return out;
}

inline ordered_json row_to_json(const SweepRow& r, bool with_agreement) {
    ordered_json j;
    j["state"] = r.state;
    j["N"] = r.n;
    j["alpha"] = r.alpha;
    j["T"] = r.transmissivity;
    j["F"] = r.fisher_information;
    j["delta_phi"] = std::isfinite(r.delta_phi) ? ordered_json(r.delta_phi) : ordered_json("inf");
    j["method"] = r.method;
    j["spectrum_cut"] = r.spectrum_cut;
    j["tail_mass"] = r.tail_mass;
    if (with_agreement) j["agreement"] = r.agreement.value_or(0.0);
    return j;
}

inline std::string to_json(const std::vector<SweepRow>& rows, const ordered_json& config_echo,
                           bool with_agreement = false) {
    ordered_json j;
    j["config"] = config_echo;
    j["rows"] = ordered_json::array();
    for (const SweepRow& r : rows) j["rows"].push_back(row_to_json(r, with_agreement));
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Pure sweep (no loss): NOON and twin-Fock bounds per photon number, the
// entangled coherent bound at matched mean photon number, and the optimized
// parity readout for the same probe.

struct PureSweepConfig {
    int n_min = 1;
    int n_max = 8;
    bool matched_resources = true;  // alpha from <n1> = N/2; otherwise forced_alpha
    double forced_alpha = 0.0;
    Cutoff cutoff{};
    int mu = 1;
};

inline std::vector<SweepRow> run_pure_sweep(const PureSweepConfig& cfg) {
    if (cfg.n_min < 1 || cfg.n_max < cfg.n_min)
        throw ConfigError("pure-sweep: need 1 <= n_min <= n_max");
    if (cfg.cutoff.dim() < cfg.n_max + 1)
        throw ConfigError("pure-sweep: cutoff must be at least n_max + 1");
    if (!cfg.matched_resources && !(cfg.forced_alpha > 0.0))
        throw ConfigError("pure-sweep: forced alpha must be positive when not matching resources");
    if (cfg.mu < 1) throw ConfigError("pure-sweep: mu must be >= 1");

    std::vector<SweepRow> rows;
    for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
        {
            const QfiResult q = qfi_pure(make_noon(n, cfg.cutoff), cfg.mu);
            rows.push_back({"noon", n, 0.0, 1.0, q.fisher_information, q.delta_phi,
                            to_string(q.method), q.spectrum_cut, 0.0, std::nullopt});
        }
        if (n % 2 == 0) {
            const QfiResult q = qfi_pure(make_bat(n, cfg.cutoff), cfg.mu);
            rows.push_back({"bat", n, 0.0, 1.0, q.fisher_information, q.delta_phi,
                            to_string(q.method), q.spectrum_cut, 0.0, std::nullopt});
        }
        {
            const double alpha = cfg.matched_resources ? alpha_for_mean_photons(n / 2.0)
                                                       : cfg.forced_alpha;
            const QfiResult q = qfi_pure_ecs_closed(alpha, cfg.mu);
            rows.push_back({"ecs", n, alpha, 1.0, q.fisher_information, q.delta_phi,
                            to_string(q.method), q.spectrum_cut, 0.0, std::nullopt});

            const ParityOptimum p = optimize_parity_uncertainty(alpha);
            const double delta = p.delta_star / std::sqrt(double(cfg.mu));
            rows.push_back({"ecs", n, alpha, 1.0, 1.0 / (delta * delta), delta,
                            to_string(QfiMethod::parity_min), 0, 0.0, std::nullopt});
        }
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Loss sweep: the four probes against a transmissivity grid, every row backed
// by an independent second route whose residual lands in the agreement column.

struct LossSweepConfig {
    int photon_number = 4;    // NOON / twin-Fock / uncorrelated size
    double ecs_alpha = 2.0;
    double t_min = 0.05;
    double t_max = 0.95;
    int t_steps = 19;
    // Dual-route agreement at 1e-8 needs the truncation error of the
    // coherent rays well below that; dim=32 is converged for alpha <= 2.5
    // (dim=16 leaves the two routes ~1e-3 apart).
    Cutoff cutoff{32};
    double working_phi = 0.3;
    int mu = 1;
};

inline std::vector<double> linear_grid(double lo, double hi, int steps) {
    if (steps < 1) throw ConfigError("grid needs at least one point");
    std::vector<double> g(steps);
    if (steps == 1) { g[0] = lo; return g; }
    for (int i = 0; i < steps; ++i) g[i] = lo + (hi - lo) * i / (steps - 1);
    return g;
}

inline std::vector<SweepRow> run_loss_sweep(const LossSweepConfig& cfg) {
    if (!(cfg.t_min >= 0.0 && cfg.t_max <= 1.0 && cfg.t_min <= cfg.t_max))
        throw ConfigError("loss-sweep: T grid must lie in [0,1]");
    if (cfg.photon_number < 1 || cfg.photon_number % 2 != 0)
        throw ConfigError("loss-sweep: photon number must be even and positive");
    if (cfg.cutoff.dim() < cfg.photon_number + 1)
        throw ConfigError("loss-sweep: cutoff must be at least N + 1");
    if (cfg.mu < 1) throw ConfigError("loss-sweep: mu must be >= 1");

    const std::vector<double> grid = linear_grid(cfg.t_min, cfg.t_max, cfg.t_steps);
    const int n = cfg.photon_number;
    // photon-number probes never occupy levels above N, so the exact
    // computation lives in the (N+1)-level block whatever the cutoff
    const Cutoff block(n + 1);
    const double phi = cfg.working_phi;

    std::vector<SweepRow> rows;

    auto fd_recipe = [&](const PureState2M& input, double T) {
        return [input, T](double p) {
            return apply_loss_both_modes(phase_shift(input, PhaseSpec{p, 1}), T);
        };
    };

    // NOON: eigensum route vs the flagged-loss closed form N^2 T^N
    {
        const PureState2M probe = make_noon(n, block);
        for (double T : grid) {
            const DensityOp2M rho = apply_loss_both_modes(phase_shift(probe, PhaseSpec{phi, 1}), T);
            const QfiResult q = qfi_mixed(rho, drho_dphi_analytic(rho), 1e-12, cfg.mu);
            const double oracle = std::pow(double(n), 2) * std::pow(T, n);
            rows.push_back({"noon", n, 0.0, T, q.fisher_information, q.delta_phi,
                            to_string(q.method), q.spectrum_cut, 0.0,
                            std::abs(q.fisher_information - oracle)});
        }
    }
    // twin-Fock through the splitter: analytic commutator vs finite difference
    {
        const PureState2M probe = make_bat(n, block);
        for (double T : grid) {
            const DensityOp2M rho = apply_loss_both_modes(phase_shift(probe, PhaseSpec{phi, 1}), T);
            const QfiResult q = qfi_mixed(rho, drho_dphi_analytic(rho), 1e-12, cfg.mu);
            const QfiResult q_fd = qfi_mixed(rho, drho_dphi_fd(fd_recipe(probe, T), phi), 1e-12, cfg.mu);
            rows.push_back({"bat", n, 0.0, T, q.fisher_information, q.delta_phi,
                            to_string(q.method), q.spectrum_cut, 0.0,
                            std::abs(q.fisher_information - q_fd.fisher_information)});
        }
    }
    // entangled coherent state: generic Kraus route vs the two-component form
    {
        const PureState2M probe = make_ecs(cfg.ecs_alpha, cfg.cutoff);
        for (double T : grid) {
            const DensityOp2M rho = apply_loss_both_modes(phase_shift(probe, PhaseSpec{phi, 1}), T);
            const ReducedSupport rs = reduced_support_basis(rho);
            const QfiResult q = qfi_mixed_compressed(rs.compressed, rs.generator_diag, 1e-12, cfg.mu);

            const LossyEcsDecomposition closed = ecs_lossy_closed_form(cfg.ecs_alpha, T, phi, cfg.cutoff);
            const ReducedSupport rs_closed = reduced_support_basis(closed.rho);
            const QfiResult q_closed =
                qfi_mixed_compressed(rs_closed.compressed, rs_closed.generator_diag, 1e-12, cfg.mu);

            rows.push_back({"ecs", 0, cfg.ecs_alpha, T, q.fisher_information, q.delta_phi,
                            to_string(q.method), q.spectrum_cut, probe.tail_mass,
                            std::abs(q.fisher_information - q_closed.fisher_information)});
        }
    }
    // uncorrelated single photons: per-copy eigensum times N, vs N T
    {
        const UncorrelatedProbe probe = make_uncorrelated(n, Cutoff(2));
        for (double T : grid) {
            const DensityOp2M rho =
                apply_loss_both_modes(phase_shift(probe.copy, PhaseSpec{phi, 1}), T);
            const QfiResult per_copy = qfi_mixed(rho, drho_dphi_analytic(rho), 1e-12, cfg.mu);
            const QfiResult q = make_qfi_result(per_copy.fisher_information * probe.copies,
                                                cfg.mu, QfiMethod::mixed_eig, per_copy.spectrum_cut);
            rows.push_back({"uncorrelated", n, 0.0, T, q.fisher_information, q.delta_phi,
                            to_string(q.method), q.spectrum_cut, 0.0,
                            std::abs(q.fisher_information - double(n) * T)});
        }
    }
    return rows;
}

/// All dual-route residuals below the bar?
inline bool rows_pass_agreement(const std::vector<SweepRow>& rows, double bar = 1e-8) {
    for (const SweepRow& r : rows)
        if (r.agreement && !(*r.agreement < bar)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Parity sweep

struct ParitySweepConfig {
    double alpha_min = 0.5;
    double alpha_max = 2.5;
    int alpha_steps = 5;
    bool emit_curve = false;  // per-phi fringe table instead of per-alpha optima
    int phi_steps = 64;
    int mu = 1;
};

inline std::vector<SweepRow> run_parity_sweep(const ParitySweepConfig& cfg) {
    if (!(cfg.alpha_min >= 0.0 && cfg.alpha_max >= cfg.alpha_min))
        throw ConfigError("parity-sweep: bad alpha grid");
    if (cfg.mu < 1) throw ConfigError("parity-sweep: mu must be >= 1");
    std::vector<SweepRow> rows;
    for (double alpha : linear_grid(cfg.alpha_min, cfg.alpha_max, cfg.alpha_steps)) {
        if (alpha == 0.0) {
            // flat fringe, no information: degenerate row
            rows.push_back({"ecs", 0, alpha, 1.0, 0.0,
                            std::numeric_limits<double>::infinity(),
                            to_string(QfiMethod::parity_min), 0, 0.0, std::nullopt});
            continue;
        }
        const ParityOptimum p = optimize_parity_uncertainty(alpha);
        const double delta = p.delta_star / std::sqrt(double(cfg.mu));
        rows.push_back({"ecs", 0, alpha, 1.0, 1.0 / (delta * delta), delta,
                        to_string(QfiMethod::parity_min), 0, 0.0, std::nullopt});
    }
    return rows;
}

/// Fringe table: alpha, phi, <Pi2>, error-propagated uncertainty.
inline std::string parity_curve_csv(const ParitySweepConfig& cfg) {
    std::string out = "alpha,phi,parity_expectation,delta_phi_pm\n";
    const double pi = std::numbers::pi;
    for (double alpha : linear_grid(cfg.alpha_min, cfg.alpha_max, cfg.alpha_steps)) {
        for (double phi : linear_grid(0.0, pi, cfg.phi_steps)) {
            const double p = parity_expectation_closed(alpha, phi);
            double delta = std::numeric_limits<double>::infinity();
            if (std::abs(parity_derivative_closed(alpha, phi)) >= 1e-12)
                delta = parity_uncertainty(alpha, phi) / std::sqrt(double(cfg.mu));
            out += format_sci(alpha) + "," + format_sci(phi) + "," + format_sci(p) + "," +
                   format_sci(delta) + "\n";
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Single-state report and resource matching

struct StateInfoConfig {
    ProbeSpec probe;
};

inline ordered_json run_state_info(const StateInfoConfig& cfg) {
    const ProbeSpec& p = cfg.probe;
    ordered_json j;
    j["config"] = {{"state", to_string(p.kind)},
                   {"N", p.n},
                   {"alpha", p.alpha},
                   {"cutoff", p.cutoff.dim()}};

    PureState2M state{Vector{}, p.cutoff, 0.0};
    int copies = 1;
    switch (p.kind) {
        case ProbeKind::noon: state = make_noon(p.n, p.cutoff); break;
        case ProbeKind::bat: state = make_bat(p.n, p.cutoff); break;
        case ProbeKind::ecs:
            state = make_ecs(p.alpha, p.cutoff);
            j["normalizer"] = ecs_normalizer(p.alpha);
            break;
        case ProbeKind::scs:
            state = product_state(cat_vector(p.alpha, p.cutoff), vacuum_vector(p.cutoff), p.cutoff);
            j["normalizer"] = cat_normalizer(p.alpha);
            break;
        case ProbeKind::uncorrelated: {
            const UncorrelatedProbe u = make_uncorrelated(p.n, p.cutoff);
            state = u.copy;
            copies = u.copies;
            break;
        }
    }

    int support = 0;
    for (Eigen::Index i = 0; i < state.amp.size(); ++i)
        if (std::abs(state.amp[i]) > 1e-12) ++support;

    j["copies"] = copies;
    j["mean_n1"] = mean_photon_mode1(state) * copies;
    j["tail_mass"] = state.tail_mass;
    j["boundary_mass"] = state.boundary_mass();
    j["support_size"] = support;
    j["norm"] = state.norm();
    return j;
}

inline ordered_json run_resource_match(double target_mean_n1) {
    const double alpha = alpha_for_mean_photons(target_mean_n1);
    const double n2 = ecs_normalizer(alpha) * ecs_normalizer(alpha);
    ordered_json j;
    j["config"] = {{"target_mean_n1", target_mean_n1}};
    j["alpha"] = alpha;
    j["residual"] = n2 * alpha * alpha - target_mean_n1;
    return j;
}

}  // namespace qmetro
