/**
 *  @file   generator.hpp
 *  @brief  Synthetic eight-port homodyne records from displaced thermal states.
 *
 *  The signal mode a (Wigner sample: alpha0 e^{i phi} plus complex Gaussian
 *  noise of variance nbar + 1/2) is mixed with a vacuum port v on a 50:50
 *  splitter and each output is measured at phase theta_k:
 *    x1 = Re[(a + v) e^{-i theta_1}],   x2 = Re[(a - v) e^{-i theta_2}].
 *  With theta_1 = 0 and theta_2 = pi/2, (x1 + i x2) = a + v* is a Husimi
 *  sample of the signal, so sqrt(2) (x1, x2) are exact (q, p) draws from Q.
 *  theta_2 sweeps as pi/2 + 2 pi t / sweep_period; phi diffuses with
 *  Var[dphi] = 2 dt / phase_coherence_time.
 */

#ifndef POLCOH_HOMODYNE_GENERATOR_HPP
#define POLCOH_HOMODYNE_GENERATOR_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>

#include "polcoh/coherence/displaced_thermal.hpp"
#include "polcoh/error.hpp"
#include "polcoh/homodyne/stream.hpp"
#include "polcoh/twa/rng.hpp"

namespace polcoh {

inline constexpr std::uint32_t kHomodyneStreamTag = 0x484f4d31;

struct GeneratorOptions {
    DisplacedThermalState high;
    std::optional<DisplacedThermalState> low;  ///< second state for switching emission
    double switching_period = 0.0;             ///< ps; high for the first half of each period
    double phase_coherence_time = 100.0;       ///< ps; 0 disables phase diffusion
    double sweep_period = 2.0e9;               ///< ps; 0 keeps the channels orthogonal
    double sample_interval = 13158.0;          ///< ps between records (76 MHz)
    std::size_t n_samples = 0;
    std::uint64_t seed = 1;
    double detector_gain = 1.0;  ///< raw = gain * quadrature; lo_scale = 1 / gain
    double ar1 = 0.0;            ///< y_i = sqrt(1 - c^2) x_i + c y_{i-1}, per channel

    void validate() const {
        high.validate();
        if (low) low->validate();
        if (low && !(switching_period > 0.0)) {
            throw DomainError("generator: switching_period must be positive when a low state is set");
        }
        if (!(phase_coherence_time >= 0.0)) throw DomainError("generator: phase_coherence_time must be >= 0");
        if (!(sweep_period >= 0.0)) throw DomainError("generator: sweep_period must be >= 0");
        if (!(sample_interval > 0.0)) throw DomainError("generator: sample_interval must be positive");
        if (!(detector_gain > 0.0)) throw DomainError("generator: detector_gain must be positive");
        if (!(std::abs(ar1) < 1.0)) throw DomainError("generator: ar1 must satisfy |ar1| < 1");
    }
};

inline QuadratureStream synth_homodyne_stream(const GeneratorOptions& opt) {
    opt.validate();
    RandomStream rng(opt.seed, 0, kHomodyneStreamTag);
    QuadratureStream out;
    out.lo_scale = 1.0 / opt.detector_gain;
    out.records.resize(opt.n_samples);

    const double phase_step = opt.phase_coherence_time > 0.0
                                  ? std::sqrt(2.0 * opt.sample_interval / opt.phase_coherence_time)
                                  : 0.0;
    const double ar_in = std::sqrt(1.0 - opt.ar1 * opt.ar1);
    const double vac_sd = 0.5;  // sqrt(1/4) per component, E|v|^2 = 1/2
    double phi = 0.0;
    double y1 = 0.0, y2 = 0.0;

    for (std::size_t i = 0; i < opt.n_samples; ++i) {
        const double t = static_cast<double>(i) * opt.sample_interval;
        const bool is_high = !opt.low || std::fmod(t, opt.switching_period) < 0.5 * opt.switching_period;
        const DisplacedThermalState& s = is_high ? opt.high : *opt.low;
        const double sig_sd = std::sqrt(0.5 * (s.nbar + 0.5));

        const std::complex<double> a =
            s.alpha0 * std::polar(1.0, phi) + std::complex<double>(sig_sd * rng.normal(), sig_sd * rng.normal());
        const std::complex<double> v(vac_sd * rng.normal(), vac_sd * rng.normal());
        const double theta2 = std::numbers::pi / 2.0 +
                              (opt.sweep_period > 0.0 ? 2.0 * std::numbers::pi * t / opt.sweep_period : 0.0);
        const double x1 = (a + v).real();
        const double x2 = ((a - v) * std::polar(1.0, -theta2)).real();

        y1 = i == 0 ? x1 : ar_in * x1 + opt.ar1 * y1;
        y2 = i == 0 ? x2 : ar_in * x2 + opt.ar1 * y2;
        out.records[i] = {t, opt.detector_gain * y1, opt.detector_gain * y2};
        if (phase_step > 0.0) phi += phase_step * rng.normal();
    }
    return out;
}

inline QuadratureStream synth_homodyne_stream(const DisplacedThermalState& high,
                                              const std::optional<DisplacedThermalState>& low,
                                              double switching_period, double phase_coherence_time,
                                              double sweep_period, std::size_t n_samples, std::uint64_t seed) {
    GeneratorOptions opt;
    opt.high = high;
    opt.low = low;
    opt.switching_period = switching_period;
    opt.phase_coherence_time = phase_coherence_time;
    opt.sweep_period = sweep_period;
    opt.n_samples = n_samples;
    opt.seed = seed;
    return synth_homodyne_stream(opt);
}

}  // namespace polcoh

#endif  // POLCOH_HOMODYNE_GENERATOR_HPP
