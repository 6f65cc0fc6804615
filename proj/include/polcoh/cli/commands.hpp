/**
 *  @file   commands.hpp
 *  @brief  Subcommand implementations behind the polcoh executable.
 *
 *  Each command writes CSV tables plus a `<table>.plot.json` sidecar naming the
 *  axes and series to plot. Failures are rethrown as StageError, which keeps
 *  the pipeline stage and the process exit code:
 *  0 success, 1 configuration error, 2 runtime or numerical error, 3 insufficient data.
 */

#ifndef POLCOH_CLI_COMMANDS_HPP
#define POLCOH_CLI_COMMANDS_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "polcoh/cli/config.hpp"
#include "polcoh/coherence/displaced_thermal.hpp"
#include "polcoh/fitting.hpp"
#include "polcoh/homodyne.hpp"
#include "polcoh/observables.hpp"
#include "polcoh/twa.hpp"

namespace polcoh::cli {

enum ExitCode : int { kSuccess = 0, kConfigFailure = 1, kRuntimeFailure = 2, kInsufficientData = 3 };

class StageError : public Error {
  public:
    StageError(std::string stage, int code, const std::string& what)
        : Error("[" + stage + "] " + what), stage_(std::move(stage)), code_(code) {}
    const std::string& stage() const noexcept { return stage_; }
    int code() const noexcept { return code_; }

  private:
    std::string stage_;
    int code_;
};

inline int exit_code_of(const std::exception& e) {
    if (const auto* s = dynamic_cast<const StageError*>(&e)) return s->code();
    if (dynamic_cast<const ConfigError*>(&e)) return kConfigFailure;
    if (dynamic_cast<const InsufficientData*>(&e)) return kInsufficientData;
    return kRuntimeFailure;
}

/// Runs f, relabelling any failure with the stage name.
template <class F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, exit_code_of(e), e.what());
    }
}

struct Console {
    std::ostream& out = std::cout;  ///< one summary line per unit of work
    std::ostream& log = std::cerr;  ///< progress and warnings
    bool progress = false;           ///< redraw a per-trajectory counter on `log`
};

namespace detail {

namespace fs = std::filesystem;

inline std::string number_tag(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

inline std::ofstream open_output(const fs::path& path) {
    fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    return out;
}

struct Axis {
    std::string column;
    std::string label;
    std::string error_column = {};
};

inline void write_plot_sidecar(const fs::path& table, const std::string& kind, const std::string& title, const Axis& x,
                               const std::vector<Axis>& ys, const std::string& series_column = {}) {
    auto axis = [](const Axis& a) {
        nlohmann::ordered_json o{{"column", a.column}, {"label", a.label}};
        if (!a.error_column.empty()) o["error_column"] = a.error_column;
        return o;
    };
    nlohmann::ordered_json j;
    j["data"] = table.filename().string();
    j["kind"] = kind;
    j["title"] = title;
    j["x"] = axis(x);
    j["y"] = nlohmann::ordered_json::array();
    for (const auto& y : ys) j["y"].push_back(axis(y));
    if (!series_column.empty()) j["series"] = series_column;
    auto out = open_output(fs::path(table.string() + ".plot.json"));
    out << j.dump(2) << '\n';
}

}  // namespace detail

// --- simulate / sweep --------------------------------------------------------

struct SimulationOutput {
    std::vector<CoherenceReport> reports;
    std::vector<G1Series> g1;
};

inline SimulationOutput cmd_simulate(const RunConfig& cfg, const std::vector<double>& pump_ratios, std::size_t threads,
                                     const Console& io = {}) {
    namespace fs = std::filesystem;
    stage("config", [&] { cfg.validate(); });
    if (pump_ratios.empty()) throw StageError("config", kConfigFailure, "pump.ratios: no pump values");
    const auto validity = check_validity(cfg.model, cfg.grid);
    if (!validity.ok) throw StageError("config", kConfigFailure, "grid: " + validity.warning);
    if (!validity.warning.empty()) io.log << "warning: " << validity.warning << '\n';

    const double p_thr = twa::threshold_power(cfg.model);
    const fs::path dir(cfg.output_directory);
    SimulationOutput result;
    for (std::size_t i = 0; i < pump_ratios.size(); ++i) {
        const double ratio = pump_ratios[i];
        const std::string which = "pump " + std::to_string(i) + " (P/P_thr = " + detail::number_tag(ratio) + ")";
        const std::string name = "simulate " + which;
        const twa::PumpProfile pump{ratio * p_thr, cfg.pump_width};
        std::size_t done = 0;
        const auto ens = stage(name, [&] {
            return twa::run_ensemble(cfg.trajectory, cfg.model, pump, cfg.grid, threads, [&](std::size_t) {
                ++done;
                if (io.progress) io.log << "\r" << name << ": " << done << "/" << cfg.trajectory.realizations << std::flush;
            });
        });
        if (io.progress) io.log << '\n';
        if (!ens.failed.empty()) io.log << "warning: " << ens.failed.size() << " trajectories blew up and were dropped\n";
        if (cfg.write_archive) {
            stage("archive", [&] {
                fs::create_directories(dir);
                twa::write_ensemble_archive((dir / ("ensemble_P" + detail::number_tag(ratio) + ".bin")).string(), ens);
            });
        }
        const auto report = stage("report " + which, [&] { return coherence_report(ens, cfg.window, ratio); });
        auto points = stage("g1 " + which, [&] { return g1_spatial(ens, 0.0, 0.0, cfg.g1_distances); });
        result.reports.push_back(report);
        result.g1.push_back({ratio, std::move(points)});
        io.out << "P/P_thr=" << detail::number_tag(ratio) << " <n_c>=" << report.mean_n_c << " var=" << report.var_n_c
               << " nbar=" << report.nbar << " alpha0_sq=" << report.alpha0_sq << " g2=" << report.g2 << " +- "
               << report.err_g2 << " C=" << report.coherence_C << " +- " << report.err_C
               << (report.clamped ? " (clamped: " + report.warning + ")" : std::string()) << '\n';
    }

    stage("write", [&] {
        {
            auto out = detail::open_output(dir / "report.csv");
            write_report_csv(out, result.reports);
        }
        {
            auto out = detail::open_output(dir / "g1.csv");
            write_g1_csv(out, result.g1);
        }
        detail::write_plot_sidecar(dir / "report.csv", "errorbar", "Coherence versus pump", {"pump_ratio", "P / P_thr"},
                                   {{"g2", "g2(0)", "err_g2"}, {"C", "C", "err_C"}});
        detail::write_plot_sidecar(dir / "g1.csv", "errorbar", "First-order coherence versus distance",
                                   {"distance", "r (um)"}, {{"g1", "|g1(0, r)|", "err"}}, "pump_ratio");
    });
    return result;
}

/// The configured pump list, one report row per pump.
inline SimulationOutput cmd_sweep(const RunConfig& cfg, std::size_t threads, const Console& io = {}) {
    return cmd_simulate(cfg, cfg.pump_ratios, threads, io);
}

// --- coherence-map -----------------------------------------------------------

inline void cmd_coherence_map(const RunConfig& cfg, const Console& io = {}) {
    namespace fs = std::filesystem;
    stage("config", [&] { cfg.validate(); });
    const auto& m = cfg.coherence_map;
    const fs::path path = fs::path(cfg.output_directory) / "coherence_map.csv";
    stage("write", [&] {
        auto out = detail::open_output(path);
        out << "nbar,alpha0_sq,C\n" << std::setprecision(12);
        const double steps = static_cast<double>(m.resolution - 1);
        for (std::size_t i = 0; i < m.resolution; ++i) {
            const double nbar = m.nbar_max * static_cast<double>(i) / steps;
            for (std::size_t j = 0; j < m.resolution; ++j) {
                const double a2 = m.alpha0_sq_max * static_cast<double>(j) / steps;
                out << nbar << ',' << a2 << ',' << coherence(nbar, a2) << '\n';
            }
        }
        detail::write_plot_sidecar(path, "heatmap", "Coherence of displaced thermal states",
                                   {"alpha0_sq", "|alpha0|^2"}, {{"nbar", "nbar"}}, "C");
    });
    io.out << "coherence map " << m.resolution << "x" << m.resolution << " -> " << path.string() << '\n';
}

// --- gen ---------------------------------------------------------------------

/// Writes a synthetic stream; ".csv" paths get the CSV format, anything else the binary one.
inline void cmd_gen(const RunConfig& cfg, const std::string& path, const Console& io = {}) {
    stage("config", [&] { cfg.validate(); });
    const auto s = stage("generate", [&] { return synth_homodyne_stream(cfg.generator); });
    stage("write", [&] {
        std::filesystem::path p(path);
        if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
        if (p.extension() == ".csv") {
            write_stream_csv(path, s);
        } else {
            write_stream_binary(path, s);
        }
    });
    io.out << "generated " << s.size() << " records -> " << path << '\n';
}

// --- husimi-fit --------------------------------------------------------------

struct LabelledFit {
    std::string label;
    FitResult fit;
};

namespace detail {

inline bool is_histogram_csv(const std::string& path) {
    std::ifstream in(path);
    std::string line;
    return in && std::getline(in, line) && line.rfind("q,p,Q,sigma_Q", 0) == 0;
}

inline FitResult fit_with_errors(const HusimiHistogram& h, const RunConfig& cfg, std::size_t threads,
                                 const std::string& tag) {
    FitOptions fo;
    fo.weighting = cfg.homodyne.weighting;
    auto fit = stage("fit" + tag, [&] { return fit_displaced_thermal(h, fo); });
    if (cfg.homodyne.resamples > 0) {
        fit = stage("errors" + tag, [&] {
            return propagate_errors_mc(h, fit, {cfg.homodyne.resamples, cfg.homodyne.seed, threads}, fo);
        });
    }
    return fit;
}

inline void write_labelled_fits(const fs::path& path, const std::vector<LabelledFit>& fits, bool with_label) {
    std::ostringstream body;
    write_fit_csv(body, [&] {
        std::vector<FitResult> rows;
        for (const auto& f : fits) rows.push_back(f.fit);
        return rows;
    }());
    auto out = open_output(path);
    if (!with_label) {
        out << body.str();
        return;
    }
    std::istringstream lines(body.str());
    std::string line;
    std::getline(lines, line);
    out << "label," << line << '\n';
    for (const auto& f : fits) {
        std::getline(lines, line);
        out << f.label << ',' << line << '\n';
    }
}

}  // namespace detail

inline std::vector<LabelledFit> cmd_husimi_fit(const RunConfig& cfg, const std::string& input, bool bistable,
                                               std::size_t threads, const Console& io = {}) {
    namespace fs = std::filesystem;
    stage("config", [&] { cfg.validate(); });
    const fs::path dir(cfg.output_directory);
    const auto& hs = cfg.homodyne;
    std::vector<LabelledFit> fits;

    if (stage("ingest", [&] {
            if (!fs::exists(input)) throw Error("input file not found: " + input);
            return detail::is_histogram_csv(input);
        })) {
        if (bistable) throw StageError("config", kConfigFailure, "--bistable needs a quadrature stream, not a histogram");
        const auto h = stage("ingest", [&] { return read_histogram_csv(input); });
        fits.push_back({"all", detail::fit_with_errors(h, cfg, threads, "")});
    } else {
        const auto raw = stage("ingest", [&] { return read_stream(input); });
        PreprocessDiagnostics diag;
        const auto clean = stage("preprocess", [&] { return preprocess(raw, &diag); });
        const auto sel = stage("postselect", [&] { return postselect_orthogonal(clean, hs.postselect); });
        io.log << "postselected " << sel.points.size() << " of " << sel.input_records << " records ("
               << 100.0 * sel.retention() << "%), lag-1 correlations " << diag.lag1_x1 << ", " << diag.lag1_x2 << '\n';

        auto fit_points = [&](const std::vector<PhaseSpacePoint>& pts, const std::string& label) {
            const std::string tag = label == "all" ? "" : " " + label;
            const auto h = stage("histogram" + tag, [&] { return build_husimi_histogram(pts, hs.histogram); });
            if (!h.warning.empty()) io.log << "warning: " << h.warning << '\n';
            stage("write", [&] {
                const auto path = dir / (label == "all" ? "histogram.csv" : "histogram_" + label + ".csv");
                fs::create_directories(dir);
                write_histogram_csv(path.string(), h);
                detail::write_plot_sidecar(path, "heatmap", "Husimi function (" + label + ")", {"q", "q"}, {{"p", "p"}}, "Q");
            });
            fits.push_back({label, detail::fit_with_errors(h, cfg, threads, tag)});
        };

        if (!bistable) {
            fit_points(sel.points, "all");
        } else {
            const auto windows = stage("segment", [&] { return photon_stats_timeseries(sel, hs.window_points); });
            const auto seg = stage("segment", [&] { return segment_bistable(windows); });
            stage("write", [&] {
                const auto path = dir / "timeseries.csv";
                auto out = detail::open_output(path);
                out << "t,mean_n,err_mean_n,g2,err_g2,label\n" << std::setprecision(10);
                for (std::size_t k = 0; k < windows.size(); ++k) {
                    const auto& w = windows[k];
                    out << w.t << ',' << w.stats.mean_n << ',' << w.stats.err_mean_n << ',' << w.stats.g2 << ','
                        << w.stats.err_g2 << ',' << (seg.labels[k] == StateLabel::High ? "high" : "low") << '\n';
                }
                detail::write_plot_sidecar(path, "line", "Time-resolved photon number", {"t", "t (ps)"},
                                           {{"mean_n", "<n>", "err_mean_n"}, {"g2", "g2(0)", "err_g2"}}, "label");
            });
            io.log << "segmentation threshold " << seg.threshold_n << ", " << seg.runs.size() << " runs\n";
            for (const auto& [label, name] : {std::pair{StateLabel::High, "high"}, std::pair{StateLabel::Low, "low"}}) {
                const auto part = stage(std::string("postselect ") + name, [&] {
                    return postselect_orthogonal(records_with_label(clean, windows, seg, label, 1), hs.postselect);
                });
                io.log << name << ": postselected " << part.points.size() << " of " << part.input_records
                       << " records\n";
                fit_points(part.points, name);
            }
        }
    }

    stage("write", [&] { detail::write_labelled_fits(dir / "fit.csv", fits, bistable); });
    for (const auto& f : fits) {
        io.out << f.label << ": nbar=" << f.fit.nbar << " +- " << f.fit.err_nbar << " alpha0_sq=" << f.fit.alpha0_sq
               << " +- " << f.fit.err_alpha0_sq << " ring=" << f.fit.ring_radius() << " g2=" << f.fit.g2
               << " C=" << f.fit.coherence_C << " +- " << f.fit.err_C << " chi2/dof="
               << f.fit.chi2 / static_cast<double>(std::max<std::size_t>(f.fit.dof, 1)) << '\n';
    }
    return fits;
}

}  // namespace polcoh::cli

#endif  // POLCOH_CLI_COMMANDS_HPP
