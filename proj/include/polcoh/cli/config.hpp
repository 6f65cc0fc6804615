/**
 *  @file   config.hpp
 *  @brief  Versioned JSON run configuration with key-path validation.
 *
 *  Every section and key is optional; omitted values keep the desk defaults.
 *  Unknown keys, wrong types and out-of-domain values raise ConfigError
 *  naming the offending key path (e.g. "trajectory.dt").
 */

#ifndef POLCOH_CLI_CONFIG_HPP
#define POLCOH_CLI_CONFIG_HPP

#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "polcoh/error.hpp"
#include "polcoh/fitting/husimi_fit.hpp"
#include "polcoh/homodyne/generator.hpp"
#include "polcoh/homodyne/histogram.hpp"
#include "polcoh/homodyne/preprocess.hpp"
#include "polcoh/observables/kspace.hpp"
#include "polcoh/twa/model.hpp"

namespace polcoh::cli {

inline constexpr int kSchemaVersion = 1;

struct HomodyneSettings {
    PostselectOptions postselect;
    HistogramOptions histogram;
    FitWeighting weighting = FitWeighting::Model;
    std::size_t resamples = 200;
    std::size_t window_points = 2000;  ///< postselected points per photon-statistics window
    std::uint64_t seed = 1;            ///< Monte Carlo resampling
};

struct CoherenceMapSettings {
    double nbar_max = 10.0;
    double alpha0_sq_max = 10.0;
    std::size_t resolution = 101;
};

struct RunConfig {
    twa::SimulationGrid grid;
    twa::ModelParams model;
    double mass_ratio = 1e-4;
    double pump_width = 16.0;
    std::vector<double> pump_ratios{0.5, 2.0, 4.0, 6.0};
    twa::TrajectoryConfig trajectory;
    KSpaceWindow window;
    std::vector<double> g1_distances{0.0, 1.8, 3.6, 7.2, 10.8, 14.4, 21.6};
    HomodyneSettings homodyne;
    GeneratorOptions generator = [] {
        GeneratorOptions g;
        g.high = DisplacedThermalState::from_photon_numbers(1.7, 53.0);
        g.n_samples = 33000000;
        return g;
    }();
    CoherenceMapSettings coherence_map;
    std::string output_directory = "out";
    bool write_archive = true;

    /// Module-level invariants, reported against config key paths.
    void validate() const;
};

namespace detail {

using nlohmann::json;

class Reader {
  public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

    template <class T>
    void get(const std::string& k, T& out) {
        seen_.insert(k);
        if (!j_.contains(k)) return;
        const json& v = j_.at(k);
        try {
            if constexpr (std::is_same_v<T, bool>) {
                if (!v.is_boolean()) throw ConfigError(key(k), "expected a boolean");
            } else if constexpr (std::is_integral_v<T>) {
                if (!v.is_number_integer() || (std::is_unsigned_v<T> && v.get<long long>() < 0)) {
                    throw ConfigError(key(k), "expected a non-negative integer");
                }
            } else if constexpr (std::is_floating_point_v<T>) {
                if (!v.is_number()) throw ConfigError(key(k), "expected a number");
            } else if constexpr (std::is_same_v<T, std::string>) {
                if (!v.is_string()) throw ConfigError(key(k), "expected a string");
            } else {
                if (!v.is_array()) throw ConfigError(key(k), "expected an array");
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (!v[i].is_number()) throw ConfigError(key(k) + "[" + std::to_string(i) + "]", "expected a number");
                }
            }
            out = v.get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(key(k), e.what());
        }
    }

    std::optional<Reader> section(const std::string& k) {
        seen_.insert(k);
        if (!j_.contains(k)) return std::nullopt;
        return Reader(j_.at(k), key(k));
    }

    void reject_unknown() const {
        for (const auto& [k, v] : j_.items()) {
            if (!seen_.count(k)) throw ConfigError(key(k), "unknown key");
        }
    }

  private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

template <class F>
void rethrow_as(const std::string& key, F&& f) {
    try {
        f();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        // "section: field must ..." becomes key "section.field"
        std::string msg = e.what();
        if (msg.rfind(key + ": ", 0) == 0) msg.erase(0, key.size() + 2);
        const auto space = msg.find(' ');
        const auto field = msg.substr(0, space);
        if (space != std::string::npos && msg.compare(space, 6, " must ") == 0 &&
            field.find_first_not_of("abcdefghijklmnopqrstuvwxyz_0123456789") == std::string::npos) {
            throw ConfigError(key + "." + field, msg.substr(space + 1));
        }
        throw ConfigError(key, msg);
    }
}

}  // namespace detail

inline void RunConfig::validate() const {
    detail::rethrow_as("grid", [&] { grid.validate(); });
    detail::rethrow_as("model", [&] { model.validate(); });
    if (!(mass_ratio > 0.0)) throw ConfigError("model.mass_ratio", "must be positive");
    if (!(pump_width > 0.0)) throw ConfigError("pump.width", "must be positive");
    for (std::size_t i = 0; i < pump_ratios.size(); ++i) {
        if (!(pump_ratios[i] >= 0.0)) throw ConfigError("pump.ratios[" + std::to_string(i) + "]", "must be >= 0");
    }
    detail::rethrow_as("trajectory", [&] { trajectory.validate(); });
    if (trajectory.realizations < 2) throw ConfigError("trajectory.realizations", "need at least 2");
    detail::rethrow_as("window", [&] { window.validate(grid); });
    for (std::size_t i = 0; i < g1_distances.size(); ++i) {
        if (!(g1_distances[i] >= 0.0 && g1_distances[i] <= grid.length / 2.0)) {
            throw ConfigError("g1.distances[" + std::to_string(i) + "]", "must lie in [0, grid.length / 2]");
        }
    }
    const auto& h = homodyne;
    if (!(h.histogram.bin_width > 0.0)) throw ConfigError("homodyne.bin_width", "must be positive");
    if (!(h.postselect.margin >= 0.0)) throw ConfigError("homodyne.margin", "must be >= 0");
    if (h.postselect.smoothing_window == 0) throw ConfigError("homodyne.smoothing_window", "must be >= 1");
    if (!(h.postselect.pair_scale > 0.0)) throw ConfigError("homodyne.pair_scale", "must be positive");
    if (h.resamples != 0 && h.resamples < 200) throw ConfigError("homodyne.resamples", "must be 0 (off) or >= 200");
    if (h.window_points < 1000) throw ConfigError("homodyne.window_points", "must be >= 1000");
    detail::rethrow_as("generator", [&] { generator.validate(); });
    if (!(coherence_map.nbar_max >= 0.0)) throw ConfigError("coherence_map.nbar_max", "must be >= 0");
    if (!(coherence_map.alpha0_sq_max >= 0.0)) throw ConfigError("coherence_map.alpha0_sq_max", "must be >= 0");
    if (coherence_map.resolution < 2) throw ConfigError("coherence_map.resolution", "must be >= 2");
    if (output_directory.empty()) throw ConfigError("output.directory", "must not be empty");
}

inline RunConfig parse_config(const nlohmann::json& j) {
    RunConfig c;
    detail::Reader root(j, "");
    int version = -1;
    root.get("schema_version", version);
    if (version != kSchemaVersion) {
        throw ConfigError("schema_version", "expected " + std::to_string(kSchemaVersion));
    }
    if (auto s = root.section("grid")) {
        s->get("n_side", c.grid.n_side);
        s->get("length", c.grid.length);
        s->reject_unknown();
    }
    if (auto s = root.section("model")) {
        s->get("mass_ratio", c.mass_ratio);
        s->get("gamma_c", c.model.gamma_c);
        s->get("gamma_r", c.model.gamma_r);
        s->get("condensation_rate", c.model.condensation_rate);
        s->get("g_c", c.model.g_c);
        s->get("g_r", c.model.g_r);
        s->get("vacuum_subtraction", c.model.vacuum_subtraction);
        s->reject_unknown();
    }
    if (!(c.mass_ratio > 0.0)) throw ConfigError("model.mass_ratio", "must be positive");
    c.model.kinetic_coeff = twa::units::kinetic_coefficient(c.mass_ratio);
    if (auto s = root.section("pump")) {
        s->get("width", c.pump_width);
        s->get("ratios", c.pump_ratios);
        s->reject_unknown();
    }
    if (auto s = root.section("trajectory")) {
        s->get("dt", c.trajectory.dt);
        s->get("total_time", c.trajectory.total_time);
        s->get("burn_in_fraction", c.trajectory.burn_in_fraction);
        s->get("snapshot_stride", c.trajectory.snapshot_stride);
        s->get("realizations", c.trajectory.realizations);
        s->get("noise_substeps", c.trajectory.noise_substeps);
        s->get("seed", c.trajectory.seed);
        s->reject_unknown();
    }
    if (auto s = root.section("window")) {
        s->get("side", c.window.side);
        s->reject_unknown();
    }
    if (auto s = root.section("g1")) {
        s->get("distances", c.g1_distances);
        s->reject_unknown();
    }
    if (auto s = root.section("homodyne")) {
        auto& h = c.homodyne;
        s->get("bin_width", h.histogram.bin_width);
        s->get("margin", h.postselect.margin);
        s->get("smoothing_window", h.postselect.smoothing_window);
        s->get("pair_scale", h.postselect.pair_scale);
        std::string ref = "product";
        s->get("ptp_reference", ref);
        if (ref == "product") {
            h.postselect.reference = PeakToPeakReference::Product;
        } else if (ref == "channels") {
            h.postselect.reference = PeakToPeakReference::Channels;
        } else {
            throw ConfigError(s->key("ptp_reference"), "expected \"product\" or \"channels\"");
        }
        std::string weighting = "model";
        s->get("weighting", weighting);
        if (weighting == "model") {
            h.weighting = FitWeighting::Model;
        } else if (weighting == "observed") {
            h.weighting = FitWeighting::Observed;
        } else {
            throw ConfigError(s->key("weighting"), "expected \"model\" or \"observed\"");
        }
        s->get("resamples", h.resamples);
        s->get("window_points", h.window_points);
        s->get("seed", h.seed);
        s->reject_unknown();
    }
    if (auto s = root.section("generator")) {
        auto& g = c.generator;
        double nbar = g.high.nbar, a2 = g.high.coherent_number();
        s->get("nbar", nbar);
        s->get("alpha0_sq", a2);
        if (!(a2 >= 0.0)) throw ConfigError(s->key("alpha0_sq"), "must be >= 0");
        g.high = {{std::sqrt(a2), 0.0}, nbar};
        if (auto low = s->section("low")) {
            double ln = 0.0, la = 0.0;
            low->get("nbar", ln);
            low->get("alpha0_sq", la);
            low->reject_unknown();
            if (!(la >= 0.0)) throw ConfigError(low->key("alpha0_sq"), "must be >= 0");
            g.low = DisplacedThermalState{{std::sqrt(la), 0.0}, ln};
        }
        s->get("switching_period", g.switching_period);
        s->get("phase_coherence_time", g.phase_coherence_time);
        s->get("sweep_period", g.sweep_period);
        s->get("sample_interval", g.sample_interval);
        s->get("n_samples", g.n_samples);
        s->get("detector_gain", g.detector_gain);
        s->get("ar1", g.ar1);
        s->get("seed", g.seed);
        s->reject_unknown();
    }
    if (auto s = root.section("coherence_map")) {
        s->get("nbar_max", c.coherence_map.nbar_max);
        s->get("alpha0_sq_max", c.coherence_map.alpha0_sq_max);
        s->get("resolution", c.coherence_map.resolution);
        s->reject_unknown();
    }
    if (auto s = root.section("output")) {
        s->get("directory", c.output_directory);
        s->get("write_archive", c.write_archive);
        s->reject_unknown();
    }
    root.reject_unknown();
    c.validate();
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot open " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("--config", std::string("parse error: ") + e.what());
    }
    return parse_config(j);
}

/// Defaults, i.e. the desk configuration.
inline RunConfig default_config() {
    return parse_config(nlohmann::json{{"schema_version", kSchemaVersion}});
}

}  // namespace polcoh::cli

#endif  // POLCOH_CLI_CONFIG_HPP
