// polcoh: batch front end for simulation, coherence maps and Husimi fits.

#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "polcoh/cli/commands.hpp"

namespace {

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::size_t threads = 0;
    std::vector<double> pumps;
    std::string input;
    std::string output;
    bool bistable = false;
    std::optional<double> bin_width;
    std::optional<std::size_t> resamples;
};

polcoh::cli::RunConfig resolve(const Flags& f) {
    auto cfg = f.config.empty() ? polcoh::cli::default_config() : polcoh::cli::load_config(f.config);
    if (f.seed) {
        cfg.trajectory.seed = *f.seed;
        cfg.homodyne.seed = *f.seed;
        cfg.generator.seed = *f.seed;
    }
    if (f.out) cfg.output_directory = *f.out;
    if (f.bin_width) cfg.homodyne.histogram.bin_width = *f.bin_width;
    if (f.resamples) cfg.homodyne.resamples = *f.resamples;
    cfg.validate();
    return cfg;
}

std::size_t worker_count(const Flags& f) {
    return f.threads > 0 ? f.threads : std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

int main(int argc, char** argv) {
    using namespace polcoh::cli;
    CLI::App app{"Coherence of polariton condensates: TWA simulation and homodyne Husimi analysis"};
    app.require_subcommand(1);
    Flags f;
    app.add_option("--config", f.config, "JSON run configuration (defaults: desk scale)");
    app.add_option("--seed", f.seed, "Override every seed in the configuration");
    app.add_option("--out", f.out, "Output directory");
    app.add_option("--threads", f.threads, "Worker threads (0 = hardware parallelism)");

    auto* simulate = app.add_subcommand("simulate", "Run the TWA ensemble at given pump powers and report coherence");
    simulate->add_option("--pump", f.pumps, "Pump power in units of P_thr (repeatable; default: config list)");
    auto* sweep = app.add_subcommand("sweep", "Run the configured pump sweep");
    auto* cmap = app.add_subcommand("coherence-map", "Tabulate C over the (nbar, |alpha0|^2) grid");
    auto* fit = app.add_subcommand("husimi-fit", "Fit a displaced thermal state to a quadrature stream or histogram");
    fit->add_option("input", f.input, "Stream (.csv t,x1,x2 or binary) or histogram CSV")->required();
    fit->add_flag("--bistable", f.bistable, "Segment into high/low states and fit each");
    fit->add_option("--bin-width", f.bin_width, "Histogram bin width in quadrature units");
    fit->add_option("--resamples", f.resamples, "Monte Carlo resamples for the errors (0 = linearized)");
    auto* gen = app.add_subcommand("gen", "Write a synthetic homodyne stream from the generator settings");
    gen->add_option("output", f.output, "Output path (.csv for text, anything else binary)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kSuccess : kConfigFailure;
    }

    try {
        const auto cfg = stage("config", [&] { return resolve(f); });
        const std::size_t threads = worker_count(f);
        const Console io{std::cout, std::cerr, ::isatty(STDERR_FILENO) != 0};
        if (*simulate) {
            cmd_simulate(cfg, f.pumps.empty() ? cfg.pump_ratios : f.pumps, threads, io);
        } else if (*sweep) {
            cmd_sweep(cfg, threads, io);
        } else if (*cmap) {
            cmd_coherence_map(cfg, io);
        } else if (*fit) {
            cmd_husimi_fit(cfg, f.input, f.bistable, threads, io);
        } else if (*gen) {
            cmd_gen(cfg, f.output, io);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_of(e);
    }
    return kSuccess;
}
