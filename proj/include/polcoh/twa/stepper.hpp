/**
 *  @file   stepper.hpp
 *  @brief  One stochastic step of the open-dissipative Gross-Pitaevskii
 *          equation coupled to a reservoir.
 *
 *  Drift: classical RK4 over (psi, n_res) with a spectral Laplacian.
 *  Noise: one additive complex Wiener increment per cell and step with
 *  <dW dW*> = (R n_res + gamma_c) dt / (2 dV), amplitude frozen at step start.
 */

#ifndef POLCOH_TWA_STEPPER_HPP
#define POLCOH_TWA_STEPPER_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "polcoh/error.hpp"
#include "polcoh/twa/fft.hpp"
#include "polcoh/twa/field.hpp"
#include "polcoh/twa/model.hpp"
#include "polcoh/twa/rng.hpp"

namespace polcoh::twa {

class TwaStepper {
  public:
    using cplx = std::complex<double>;

    TwaStepper(const ModelParams& params, const PumpProfile& pump, const SimulationGrid& grid)
        : params_(params), grid_(grid), fft_(grid.n_side) {
        params.validate();
        pump.validate();
        grid.validate();
        pump_ = sample_pump(pump, grid);
        const std::size_t n = grid.n_side;
        const double norm = 1.0 / static_cast<double>(grid.cells());
        kinetic_.resize(grid.cells());
        for (std::size_t iy = 0; iy < n; ++iy) {
            const double ky = grid.wavevector(iy);
            for (std::size_t ix = 0; ix < n; ++ix) {
                const double kx = grid.wavevector(ix);
                kinetic_[iy * n + ix] = params.kinetic_coeff * (kx * kx + ky * ky) * norm;
            }
        }
        vacuum_density_ = params.vacuum_subtraction / grid.cell_volume();
        const std::size_t c = grid.cells();
        acc_psi_.resize(c);
        for (auto* v : {&y_psi_, &spec_, &lap_}) v->resize(c);
        for (auto* v : {&acc_n_, &y_n_, &noise_sd_}) v->resize(c);
    }

    const SimulationGrid& grid() const { return grid_; }
    const ModelParams& params() const { return params_; }
    const std::vector<double>& pump() const { return pump_; }

    /// Advance by dt. noise_substeps > 1 sums that many independent sub-increments
    /// (same total variance), which couples the noise path to a run with dt / noise_substeps.
    void step(FieldState& s, double dt, RandomStream* rng, std::size_t step_index = 0,
              std::size_t noise_substeps = 1) {
        const std::size_t c = grid_.cells();
        if (s.psi.size() != c || s.n_res.size() != c) throw DomainError("twa_step: state does not match grid");

        const double inv_4dv = 1.0 / (4.0 * grid_.cell_volume());
        if (rng != nullptr) {
            for (std::size_t i = 0; i < c; ++i) {
                noise_sd_[i] = std::sqrt((params_.condensation_rate * s.n_res[i] + params_.gamma_c) * dt * inv_4dv);
            }
        }

        // RK4 with fused stage updates: acc collects sum_j b_j k_j, y holds the next stage input.
        acc_psi_ = s.psi;
        acc_n_ = s.n_res;
        std::copy(s.psi.begin(), s.psi.end(), y_psi_.begin());
        y_n_ = s.n_res;
        const double b[4] = {dt / 6.0, dt / 3.0, dt / 3.0, dt / 6.0};
        const double h[4] = {0.5 * dt, 0.5 * dt, dt, 0.0};
        for (std::size_t j = 0; j < 4; ++j) stage(s, b[j], h[j], j == 3);
        s.psi.swap(acc_psi_);
        s.n_res.swap(acc_n_);

        if (rng != nullptr) {
            const double sub = 1.0 / std::sqrt(static_cast<double>(noise_substeps));
            for (std::size_t k = 0; k < noise_substeps; ++k) {
                for (std::size_t i = 0; i < c; ++i) {
                    const double re = rng->normal();
                    const double im = rng->normal();
                    s.psi[i] += noise_sd_[i] * sub * cplx(re, im);
                }
            }
        }

        for (std::size_t i = 0; i < c; ++i) {
            if (s.n_res[i] < 0.0) {
                s.n_res[i] = 0.0;
                ++s.clipped_cells;
            }
            if (!std::isfinite(s.psi[i].real()) || !std::isfinite(s.psi[i].imag()) || !std::isfinite(s.n_res[i])) {
                throw NumericalBlowup("twa_step: non-finite field at step " + std::to_string(step_index), step_index);
            }
        }
        s.time += dt;
    }

  private:
    // Evaluates the drift k at y, then acc += b k and (unless last) y = s + h k.
    void stage(const FieldState& s, double b, double h, bool last) {
        const std::size_t c = grid_.cells();
        fft_.forward(y_psi_, spec_);
        for (std::size_t i = 0; i < c; ++i) spec_[i] *= kinetic_[i];
        fft_.backward(spec_, lap_);

        const double inv_hbar = 1.0 / params_.hbar;
        const double R = params_.condensation_rate;
        const double gc = params_.g_c;
        const double gr = params_.g_r;
        const double gamma_c = params_.gamma_c;
        const double gamma_r = params_.gamma_r;
        for (std::size_t i = 0; i < c; ++i) {
            const double pr = y_psi_[i].real();
            const double pi = y_psi_[i].imag();
            const double n = y_n_[i];
            const double dens = pr * pr + pi * pi - vacuum_density_;
            const double energy = gr * n + gc * dens;
            const double gain = 0.5 * (R * n - gamma_c);
            const double hr = lap_[i].real() + energy * pr;
            const double hi = lap_[i].imag() + energy * pi;
            // -i H psi / hbar + gain psi
            const double kr = hi * inv_hbar + gain * pr;
            const double ki = -hr * inv_hbar + gain * pi;
            const double kn = -(gamma_r + R * dens) * n + pump_[i];
            acc_psi_[i] += cplx(b * kr, b * ki);
            acc_n_[i] += b * kn;
            if (!last) {
                y_psi_[i] = s.psi[i] + cplx(h * kr, h * ki);
                y_n_[i] = s.n_res[i] + h * kn;
            }
        }
    }

    ModelParams params_;
    SimulationGrid grid_;
    Fft2D fft_;
    std::vector<double> pump_;
    std::vector<double> kinetic_;
    double vacuum_density_ = 0.0;
    std::vector<cplx> acc_psi_;
    AlignedComplexVector y_psi_, spec_, lap_;
    std::vector<double> acc_n_, y_n_, noise_sd_;
};

/// Convenience single step; builds a stepper (FFT plans included) on every call.
inline FieldState twa_step(FieldState state, const ModelParams& params, const PumpProfile& pump,
                           const SimulationGrid& grid, double dt, RandomStream* rng) {
    TwaStepper stepper(params, pump, grid);
    stepper.step(state, dt, rng);
    return state;
}

}  // namespace polcoh::twa

#endif  // POLCOH_TWA_STEPPER_HPP
