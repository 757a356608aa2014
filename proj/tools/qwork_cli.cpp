// qwork_cli.cpp — command-line front end: run scenarios, export circuits,
// run the bath-thermometry stage, list presets.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical/runtime error.

#include "qwork/experiment.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> mode;
    std::optional<int> shots;
};

void add_common_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("-c,--config", o.config,
                    "config file path or preset name (see list-scenarios)")
        ->required();
    cmd->add_option("--seed", o.seed, "override the master seed");
    cmd->add_option("--out", o.out, "override the output directory");
    cmd->add_option("--mode", o.mode, "override the run mode")
        ->check(CLI::IsMember({"exact", "shots"}));
    cmd->add_option("--shots", o.shots, "override the shot count (implies --mode shots)")
        ->check(CLI::PositiveNumber);
}

qwork::ExperimentConfig resolve_with_overrides(const Overrides& o) {
    qwork::ExperimentConfig cfg = qwork::resolve_config(o.config);
    if (o.seed)
        cfg.seed = *o.seed;
    if (o.out)
        cfg.out_dir = *o.out;
    if (o.mode)
        cfg.mode = (*o.mode == "shots") ? qwork::RunMode::Shots : qwork::RunMode::Exact;
    if (o.shots) {
        cfg.shots = *o.shots;
        cfg.mode = qwork::RunMode::Shots;
    }
    cfg.validate();
    return cfg;
}

void print_summary(const qwork::ScenarioReport& rep) {
    std::printf("scenario %s: %d sweep points, %s mode\n", rep.config.scenario.c_str(),
                rep.config.sweep_points,
                rep.config.mode == qwork::RunMode::Exact ? "exact" : "shot-sampled");
    std::printf("total reconstructed mass: %.6f\n", rep.total_mass);
    for (const qwork::PeakEntry& p : rep.peaks)
        std::printf("peak at w = %+.4f ueV: weight %.6f\n", p.position_ueV, p.weight);
    std::printf("coherence verdict: %s (max window score %.3g, threshold %.3g)\n",
                rep.coherence.symmetric ? "symmetric" : "asymmetric",
                rep.coherence.asymmetry_score, rep.coherence.threshold);
    if (rep.jarzynski)
        std::printf("bath temperature estimate: %.2f mK (bracket [%.2f, %.2f] mK)\n",
                    rep.jarzynski->solve.root.mK, rep.jarzynski->solve.bracket_mK.first,
                    rep.jarzynski->solve.bracket_mK.second);
    for (const std::string& w : rep.warnings)
        std::printf("note: %s\n", w.c_str());
    std::printf("report: %s\n", rep.report_path.string().c_str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"work-statistics simulator: characteristic-function sweeps, work-PDF "
                 "reconstruction, and bath thermometry for few-qubit systems"};
    app.require_subcommand(1);

    Overrides run_opts;
    CLI::App* run_cmd = app.add_subcommand(
        "run", "run a scenario end to end and write CSVs plus a report");
    add_common_options(run_cmd, run_opts);

    Overrides export_opts;
    CLI::App* export_cmd = app.add_subcommand(
        "export-circuits", "write one OpenQASM 3 file per sweep point");
    add_common_options(export_cmd, export_opts);

    Overrides jz_opts;
    CLI::App* jz_cmd = app.add_subcommand(
        "jarzynski", "run the bath-thermometry stage and print the estimated temperature");
    add_common_options(jz_cmd, jz_opts);

    CLI::App* list_cmd = app.add_subcommand("list-scenarios", "list the shipped presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e); // prints help or the usage error
        return code == 0 ? 0 : 2;
    }

    try {
        if (list_cmd->parsed()) {
            for (const std::string& name : qwork::preset_names())
                std::printf("%-22s %s\n", name.c_str(),
                            qwork::preset_description(name).c_str());
            return 0;
        }
        if (run_cmd->parsed()) {
            print_summary(qwork::run_scenario(resolve_with_overrides(run_opts)));
            return 0;
        }
        if (export_cmd->parsed()) {
            qwork::ExperimentConfig cfg = resolve_with_overrides(export_opts);
            const std::filesystem::path dir =
                export_opts.out ? std::filesystem::path(*export_opts.out)
                                : std::filesystem::path(cfg.out_dir) / "circuits";
            const auto files = qwork::export_circuits(cfg, dir);
            std::printf("wrote %zu circuit files to %s\n", files.size(), dir.string().c_str());
            return 0;
        }
        if (jz_cmd->parsed()) {
            qwork::ExperimentConfig cfg = resolve_with_overrides(jz_opts);
            if (!cfg.jarzynski)
                throw qwork::ConfigError(
                    "config: this scenario has no jarzynski stage (add a jarzynski block "
                    "or use the fig3-jarzynski-sweep preset)");
            const qwork::ScenarioReport rep = qwork::run_scenario(cfg);
            print_summary(rep);
            return 0;
        }
    } catch (const qwork::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
