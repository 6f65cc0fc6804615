/**
 *  @file   model.hpp
 *  @brief  Grid, physical parameters and pump profile of the driven-dissipative
 *          polariton model.
 */

#ifndef POLCOH_TWA_MODEL_HPP
#define POLCOH_TWA_MODEL_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>

#include "polcoh/error.hpp"

namespace polcoh::twa {

namespace units {
inline constexpr double hbar_mev_ps = 0.6582119569;
inline constexpr double hbar_c_ev_um = 0.1973269804;
inline constexpr double electron_rest_energy_ev = 0.51099895000e6;

/// hbar^2 / (2 m) in meV um^2 for m = mass_ratio * m_e.
constexpr double kinetic_coefficient(double mass_ratio) {
    return 1e3 * hbar_c_ev_um * hbar_c_ev_um / (2.0 * mass_ratio * electron_rest_energy_ev);
}
}  // namespace units

/// Periodic n_side x n_side grid of side length L (um).
struct SimulationGrid {
    std::size_t n_side = 64;
    double length = 57.6;

    std::size_t cells() const { return n_side * n_side; }
    double spacing() const { return length / static_cast<double>(n_side); }
    double cell_volume() const { return spacing() * spacing(); }
    double volume() const { return length * length; }
    double dk() const { return 2.0 * std::numbers::pi / length; }

    /// Coordinate of index i, centred so that index n/2 sits at the origin.
    double coordinate(std::size_t i) const {
        return (static_cast<double>(i) - static_cast<double>(n_side / 2)) * spacing();
    }
    /// FFT-ordered wavevector component of index i.
    double wavevector(std::size_t i) const {
        const auto n = static_cast<std::ptrdiff_t>(n_side);
        auto j = static_cast<std::ptrdiff_t>(i);
        if (j >= n / 2) j -= n;
        return dk() * static_cast<double>(j);
    }

    void validate() const {
        if (n_side < 4 || (n_side & (n_side - 1)) != 0) {
            throw DomainError("grid: n_side must be a power of two >= 4");
        }
        if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("grid: length must be positive");
    }
};

struct ModelParams {
    double kinetic_coeff = units::kinetic_coefficient(1e-4);  // meV um^2
    double gamma_c = 0.2;                                     // 1/ps
    double gamma_r = 0.3;                                     // 1/ps
    double condensation_rate = 0.015;                         // um^2/ps
    double g_c = 6e-3;                                        // meV um^2
    double g_r = 0.012;                                       // meV um^2
    double hbar = units::hbar_mev_ps;                         // meV ps
    /// |psi|^2_- = |psi|^2 - vacuum_subtraction / dV.
    double vacuum_subtraction = 1.0;

    void validate() const {
        const double all[] = {kinetic_coeff, gamma_c, gamma_r, condensation_rate, g_c, g_r, vacuum_subtraction};
        for (double v : all) {
            if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("model: rates and couplings must be finite and >= 0");
        }
        if (!(hbar > 0.0)) throw DomainError("model: hbar must be positive");
    }
};

/// gamma_c gamma_r / R, the threshold of the homogeneous system.
inline double threshold_power(const ModelParams& p) {
    if (!(p.condensation_rate > 0.0)) throw DomainError("threshold_power: condensation rate must be positive");
    return p.gamma_c * p.gamma_r / p.condensation_rate;
}

/// Super-Gaussian pump P(r) = p0 exp(-r^4 / w^4).
struct PumpProfile {
    double p0 = 0.0;
    double width = 16.0;

    double operator()(double x, double y) const {
        const double r2 = (x * x + y * y) / (width * width);
        return p0 * std::exp(-r2 * r2);
    }
    void validate() const {
        if (!(p0 >= 0.0) || !std::isfinite(p0)) throw DomainError("pump: p0 must be >= 0");
        if (!(width > 0.0)) throw DomainError("pump: width must be positive");
    }
};

struct ValidityReport {
    double ratio = 0.0;  ///< hbar gamma_c / (g_c / dV)
    bool ok = true;
    std::string warning;
};

/// TWA validity hbar gamma_c >> g_c / dV: error below 10x, warning below 20x.
inline ValidityReport check_validity(const ModelParams& p, const SimulationGrid& g) {
    ValidityReport r;
    const double noise_scale = p.g_c / g.cell_volume();
    r.ratio = noise_scale > 0.0 ? p.hbar * p.gamma_c / noise_scale : INFINITY;
    if (r.ratio < 10.0) {
        r.ok = false;
        r.warning = "TWA validity violated: hbar*gamma_c / (g_c/dV) = " + std::to_string(r.ratio) + " < 10";
    } else if (r.ratio < 20.0) {
        r.warning = "TWA validity marginal: hbar*gamma_c / (g_c/dV) = " + std::to_string(r.ratio) + " < 20";
    }
    return r;
}

/// Largest dt allowed by the explicit-scheme bounds for a reservoir ceiling n_max.
inline double max_stable_dt(const ModelParams& p, const SimulationGrid& g, double n_max) {
    const double dx_over_pi = g.spacing() / std::numbers::pi;
    double dt = p.kinetic_coeff > 0.0 ? 0.5 * p.hbar / p.kinetic_coeff * dx_over_pi * dx_over_pi : INFINITY;
    const double rate = p.condensation_rate * n_max + p.gamma_c;
    if (rate > 0.0) dt = std::min(dt, 0.1 / rate);
    return dt;
}

struct TrajectoryConfig {
    double dt = 0.04;               // ps
    double total_time = 2000.0;     // ps
    double burn_in_fraction = 0.5;
    std::size_t snapshot_stride = 500;
    std::uint64_t seed = 1;
    std::size_t realizations = 32;
    std::size_t noise_substeps = 1;  ///< see TwaStepper::step

    std::size_t total_steps() const { return static_cast<std::size_t>(std::llround(total_time / dt)); }
    std::size_t burn_in_steps() const {
        return static_cast<std::size_t>(std::floor(burn_in_fraction * static_cast<double>(total_steps())));
    }
    std::size_t snapshot_count() const {
        const std::size_t post = total_steps() - burn_in_steps();
        return snapshot_stride == 0 ? 0 : post / snapshot_stride;
    }

    void validate() const {
        if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("trajectory: dt must be positive");
        if (!(total_time > 0.0)) throw DomainError("trajectory: total_time must be positive");
        if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0)) {
            throw DomainError("trajectory: burn_in_fraction must lie in [0, 1)");
        }
        if (noise_substeps == 0) throw DomainError("trajectory: noise_substeps must be positive");
        if (snapshot_stride == 0) throw DomainError("trajectory: snapshot_stride must be positive");
        if (snapshot_count() < 8) throw DomainError("trajectory: fewer than 8 snapshots after burn-in");
    }
};

}  // namespace polcoh::twa

#endif  // POLCOH_TWA_MODEL_HPP
