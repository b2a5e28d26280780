// Command-line front end: deterministic sweep data (CSV/JSON) for the
// phase-estimation bounds of NOON / twin-Fock / entangled-coherent /
// uncorrelated probes, with and without photon loss, plus single-state
// diagnostics and mean-photon resource matching.
//
// Exit codes: 0 success, 1 configuration or validation failure, 2 internal
// dual-route agreement failure.

#include "qmetro/qmetro.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

namespace {

int write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot open output file " << path << "\n";
        return 1;
    }
    f << text;
    return 0;
}

qmetro::ordered_json grid_echo(double lo, double hi, int steps) {
    return {{"min", lo}, {"max", hi}, {"steps", steps}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-mode bosonic phase-estimation workbench"};
    app.require_subcommand(1);

    std::string out_path;
    std::string format = "csv";
    app.add_option("--out", out_path, "output file (default: stdout)");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    // pure-sweep --------------------------------------------------------
    auto* pure = app.add_subcommand("pure-sweep", "lossless bounds per photon number");
    qmetro::PureSweepConfig pure_cfg;
    int pure_cutoff = qmetro::Cutoff::kDefault;
    double forced_alpha = 0.0;
    pure->add_option("--n-min", pure_cfg.n_min, "smallest photon number");
    pure->add_option("--n-max", pure_cfg.n_max, "largest photon number");
    pure->add_option("--cutoff", pure_cutoff, "Fock levels per mode");
    pure->add_option("--mu", pure_cfg.mu, "shot count in the Cramér-Rao bound");
    pure->add_option("--ecs-alpha", forced_alpha,
                     "force this coherent amplitude instead of matching <n1> = N/2");

    // loss-sweep --------------------------------------------------------
    auto* loss = app.add_subcommand("loss-sweep", "bounds against transmissivity");
    qmetro::LossSweepConfig loss_cfg;
    int loss_cutoff = loss_cfg.cutoff.dim();
    loss->add_option("--N", loss_cfg.photon_number, "photon number of the number probes");
    loss->add_option("--alpha", loss_cfg.ecs_alpha, "entangled-coherent amplitude");
    loss->add_option("--t-min", loss_cfg.t_min, "lowest transmissivity");
    loss->add_option("--t-max", loss_cfg.t_max, "highest transmissivity");
    loss->add_option("--t-steps", loss_cfg.t_steps, "grid points");
    loss->add_option("--cutoff", loss_cutoff, "Fock levels per mode");
    loss->add_option("--phi", loss_cfg.working_phi, "working phase (bounds are phase-invariant)");
    loss->add_option("--mu", loss_cfg.mu, "shot count");

    // parity-sweep ------------------------------------------------------
    auto* parity = app.add_subcommand("parity-sweep", "optimized parity readout per amplitude");
    qmetro::ParitySweepConfig parity_cfg;
    parity->add_option("--alpha-min", parity_cfg.alpha_min, "smallest amplitude");
    parity->add_option("--alpha-max", parity_cfg.alpha_max, "largest amplitude");
    parity->add_option("--alpha-steps", parity_cfg.alpha_steps, "grid points");
    parity->add_flag("--emit-curve", parity_cfg.emit_curve,
                     "emit the full fringe table instead of per-alpha optima (csv only)");
    parity->add_option("--phi-steps", parity_cfg.phi_steps, "fringe samples per amplitude");
    parity->add_option("--mu", parity_cfg.mu, "shot count");

    // state-info --------------------------------------------------------
    auto* info = app.add_subcommand("state-info", "single-probe diagnostics (json)");
    std::string info_state = "ecs";
    int info_n = 4;
    double info_alpha = 2.0;
    int info_cutoff = qmetro::Cutoff::kDefault;
    info->add_option("--state", info_state, "noon, bat, ecs, scs or uncorrelated")
        ->check(CLI::IsMember({"noon", "bat", "ecs", "scs", "uncorrelated"}));
    info->add_option("--N", info_n, "photon number (noon/bat/uncorrelated)");
    info->add_option("--alpha", info_alpha, "coherent amplitude (ecs/scs)");
    info->add_option("--cutoff", info_cutoff, "Fock levels per mode");

    // resource-match ----------------------------------------------------
    auto* match = app.add_subcommand("resource-match",
                                     "amplitude with a given mode-1 mean photon number (json)");
    double match_target = -1.0;
    int match_n = 0;
    auto* opt_target = match->add_option("--target", match_target, "target <n1>");
    auto* opt_n = match->add_option("--N", match_n, "photon number; target becomes N/2");
    opt_target->excludes(opt_n);

    CLI11_PARSE(app, argc, argv);

    try {
        if (pure->parsed()) {
            pure_cfg.cutoff = qmetro::Cutoff(pure_cutoff);
            if (forced_alpha > 0.0) {
                pure_cfg.matched_resources = false;
                pure_cfg.forced_alpha = forced_alpha;
            }
            const auto rows = qmetro::run_pure_sweep(pure_cfg);
            if (format == "csv") return write_output(qmetro::to_csv(rows), out_path);
            qmetro::ordered_json echo = {{"command", "pure-sweep"},
                                         {"n_min", pure_cfg.n_min},
                                         {"n_max", pure_cfg.n_max},
                                         {"matched_resources", pure_cfg.matched_resources},
                                         {"forced_alpha", pure_cfg.forced_alpha},
                                         {"cutoff", pure_cfg.cutoff.dim()},
                                         {"mu", pure_cfg.mu}};
            return write_output(qmetro::to_json(rows, echo), out_path);
        }

        if (loss->parsed()) {
            loss_cfg.cutoff = qmetro::Cutoff(loss_cutoff);
            const auto rows = qmetro::run_loss_sweep(loss_cfg);
            int rc;
            if (format == "csv") {
                rc = write_output(qmetro::to_csv(rows, /*with_agreement=*/true), out_path);
            } else {
                qmetro::ordered_json echo = {{"command", "loss-sweep"},
                                             {"N", loss_cfg.photon_number},
                                             {"alpha", loss_cfg.ecs_alpha},
                                             {"T", grid_echo(loss_cfg.t_min, loss_cfg.t_max,
                                                             loss_cfg.t_steps)},
                                             {"cutoff", loss_cfg.cutoff.dim()},
                                             {"phi", loss_cfg.working_phi},
                                             {"mu", loss_cfg.mu}};
                rc = write_output(qmetro::to_json(rows, echo, /*with_agreement=*/true), out_path);
            }
            if (rc != 0) return rc;
            if (!qmetro::rows_pass_agreement(rows)) {
                std::cerr << "error: dual-route agreement above 1e-8 on at least one row "
                             "(raise --cutoff)\n";
                return 2;
            }
            return 0;
        }

        if (parity->parsed()) {
            if (parity_cfg.emit_curve)
                return write_output(qmetro::parity_curve_csv(parity_cfg), out_path);
            const auto rows = qmetro::run_parity_sweep(parity_cfg);
            if (format == "csv") return write_output(qmetro::to_csv(rows), out_path);
            qmetro::ordered_json echo = {{"command", "parity-sweep"},
                                         {"alpha", grid_echo(parity_cfg.alpha_min,
                                                             parity_cfg.alpha_max,
                                                             parity_cfg.alpha_steps)},
                                         {"mu", parity_cfg.mu}};
            return write_output(qmetro::to_json(rows, echo), out_path);
        }

        if (info->parsed()) {
            qmetro::StateInfoConfig cfg;
            cfg.probe.cutoff = qmetro::Cutoff(info_cutoff);
            cfg.probe.n = info_n;
            cfg.probe.alpha = info_alpha;
            if (info_state == "noon") cfg.probe.kind = qmetro::ProbeKind::noon;
            else if (info_state == "bat") cfg.probe.kind = qmetro::ProbeKind::bat;
            else if (info_state == "ecs") cfg.probe.kind = qmetro::ProbeKind::ecs;
            else if (info_state == "scs") cfg.probe.kind = qmetro::ProbeKind::scs;
            else cfg.probe.kind = qmetro::ProbeKind::uncorrelated;
            return write_output(qmetro::run_state_info(cfg).dump(2) + "\n", out_path);
        }

        if (match->parsed()) {
            if (match_target < 0.0 && match_n <= 0)
                throw qmetro::ConfigError("resource-match: give --target or --N");
            const double target = match_target >= 0.0 ? match_target : match_n / 2.0;
            return write_output(qmetro::run_resource_match(target).dump(2) + "\n", out_path);
        }
    } catch (const qmetro::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
