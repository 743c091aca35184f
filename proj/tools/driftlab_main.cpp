// driftlab command-line tool: simulate / infer / theory / report.
//
// Exit codes: 0 success, 1 validation error, 2 I/O error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "driftlab/experiment.hpp"

namespace {

struct Overrides {
    std::string out;
    int workers = -1;
    long long seed_base = -1;
    std::string scenario;

    void apply(driftlab::ExperimentConfig& cfg) const {
        if (!out.empty()) cfg.out_dir = out;
        if (workers >= 0) cfg.workers = workers;
        if (seed_base >= 0) {
            cfg.seed_base = static_cast<std::uint64_t>(seed_base);
            cfg.seeds.clear(); // a new base replaces an explicit list
        }
        if (!scenario.empty()) cfg.scenario = driftlab::parse_scenario(scenario);
    }
};

driftlab::ExperimentConfig load(const std::string& config_path, const Overrides& ov) {
    driftlab::ExperimentConfig cfg = driftlab::load_config(config_path);
    ov.apply(cfg);
    cfg.validate();
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and inference laboratory for periodic diffusions"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides ov;
    app.add_option("--config", config_path, "experiment configuration file");
    app.add_option("--out", ov.out, "output directory (overrides the config)");
    app.add_option("--workers", ov.workers, "worker threads (0 = hardware)");
    app.add_option("--seed-base", ov.seed_base,
                   "base seed; replicate i uses seed-base + i");
    app.add_option("--scenario", ov.scenario,
                   "fixed_prior | scale_hier | alpha_hier (overrides the config)");

    auto* sim = app.add_subcommand("simulate", "write one path file per (T, seed)");
    auto* inf = app.add_subcommand(
        "infer", "posterior summaries and rate-table rows from stored paths");
    auto* theo = app.add_subcommand(
        "theory", "small-ball ladders, approximation-bound grid, normalizer checks");
    auto* rep = app.add_subcommand("report", "merge rate tables and emit plot data");

    std::string theory_out = "theory_results";
    long theory_samples = 100000;
    theo->add_option("--samples", theory_samples, "Monte Carlo samples per ladder point");

    std::vector<std::string> report_dirs;
    std::string report_out = "report_results";
    rep->add_option("dirs", report_dirs, "result directories to merge")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (sim->parsed()) {
            if (config_path.empty())
                throw driftlab::ValidationError("simulate requires --config");
            const auto cfg = load(config_path, ov);
            const auto files = driftlab::run_simulate(cfg);
            std::printf("wrote %zu path files to %s\n", files.size(),
                        cfg.out_dir.c_str());
        } else if (inf->parsed()) {
            if (config_path.empty())
                throw driftlab::ValidationError("infer requires --config");
            const auto cfg = load(config_path, ov);
            const driftlab::FilePathSource source{cfg.out_dir};
            const auto result = driftlab::run_infer(cfg, source);
            std::printf("wrote %zu rate rows to %s/rate_table.csv\n",
                        result.table.size(), cfg.out_dir.c_str());
        } else if (theo->parsed()) {
            if (!ov.out.empty()) theory_out = ov.out;
            if (theory_samples < 1000)
                throw driftlab::ValidationError("theory: --samples must be >= 1000");
            const auto report = driftlab::run_theory(0x7e0, theory_samples);
            driftlab::write_theory_outputs(report, theory_out);
            std::printf("theory checks: %s (details in %s)\n",
                        report.all_ok() ? "all ok" : "SOME CHECKS FAILED",
                        theory_out.c_str());
        } else if (rep->parsed()) {
            if (!ov.out.empty()) report_out = ov.out;
            std::vector<std::filesystem::path> dirs(report_dirs.begin(),
                                                    report_dirs.end());
            const auto merged = driftlab::run_report(dirs, report_out);
            std::printf("merged %zu rows into %s\n", merged.size(), report_out.c_str());
        }
    } catch (const driftlab::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const driftlab::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
