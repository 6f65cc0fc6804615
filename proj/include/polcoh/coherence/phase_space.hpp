/**
 *  @file   phase_space.hpp
 *  @brief  Glauber-Sudarshan, Wigner and Husimi densities of displaced thermal
 *          states, and the phase-averaged Husimi function.
 */

#ifndef POLCOH_COHERENCE_PHASE_SPACE_HPP
#define POLCOH_COHERENCE_PHASE_SPACE_HPP

#include <cmath>
#include <complex>
#include <algorithm>
#include <numbers>
#include <vector>

#include "polcoh/coherence/displaced_thermal.hpp"
#include "polcoh/coherence/special.hpp"
#include "polcoh/error.hpp"

namespace polcoh {

/// Quadrature pair with [q, p] = i; alpha = (q + i p) / sqrt(2).
struct PhaseSpacePoint {
    double q = 0.0;
    double p = 0.0;

    static PhaseSpacePoint from_alpha(std::complex<double> alpha) {
        return {std::numbers::sqrt2 * alpha.real(), std::numbers::sqrt2 * alpha.imag()};
    }
    std::complex<double> alpha() const { return {q / std::numbers::sqrt2, p / std::numbers::sqrt2}; }
    double radius() const { return std::hypot(q, p); }
};

enum class Representation { GlauberSudarshan, Wigner, Husimi };

/// Gaussian width (variance of |alpha - alpha0|^2 / 1) of each representation.
inline double representation_width(double nbar, Representation kind) {
    switch (kind) {
        case Representation::GlauberSudarshan: return nbar;
        case Representation::Wigner: return nbar + 0.5;
        case Representation::Husimi: return nbar + 1.0;
    }
    return nbar;
}

/**
 * Phase-space density in the alpha measure d^2 alpha,
 * exp(-|alpha - alpha0|^2 / w) / (pi w) with w = nbar, nbar + 1/2, nbar + 1.
 */
inline double phase_space_density(const DisplacedThermalState& s, std::complex<double> alpha,
                                  Representation kind) {
    s.validate();
    const double w = representation_width(s.nbar, kind);
    if (kind == Representation::GlauberSudarshan && w == 0.0) {
        throw DomainError("Glauber-Sudarshan function of a coherent state is a Dirac delta");
    }
    return std::exp(-std::norm(alpha - s.alpha0) / w) / (std::numbers::pi * w);
}

inline double phase_space_density(const DisplacedThermalState& s, const PhaseSpacePoint& point,
                                  Representation kind) {
    return phase_space_density(s, point.alpha(), kind);
}

/**
 * Phase-averaged Husimi function at radius |alpha|:
 * exp[-(|a|^2 + |a0|^2)/(n+1)] I0(2|a||a0|/(n+1)) / (pi (n+1)).
 */
inline double phase_averaged_husimi(double nbar, double alpha0_sq, double alpha_abs) {
    if (!(nbar >= 0.0) || !(alpha0_sq >= 0.0)) throw DomainError("phase_averaged_husimi: negative photon number");
    const double w = nbar + 1.0;
    const double a0 = std::sqrt(alpha0_sq);
    const double arg = 2.0 * alpha_abs * a0 / w;
    // exp(-(r - a0)^2 / w) * exp(-arg) I0(arg)
    const double d = alpha_abs - a0;
    return std::exp(-d * d / w) * bessel_i0_scaled(arg) / (std::numbers::pi * w);
}

inline double phase_averaged_husimi(const DisplacedThermalState& s, const PhaseSpacePoint& point) {
    s.validate();
    return phase_averaged_husimi(s.nbar, s.coherent_number(), std::abs(point.alpha()));
}

/// Husimi density in the quadrature measure dq dp (half the alpha-measure value).
inline double husimi_quadrature_density(double nbar, double alpha0_sq, double q, double p) {
    return 0.5 * phase_averaged_husimi(nbar, alpha0_sq, std::hypot(q, p) / std::numbers::sqrt2);
}

/// Phase average of any of the three Gaussian representations at radius r.
inline double phase_averaged_density(double nbar, double alpha0_sq, double r, Representation kind) {
    const double w = representation_width(nbar, kind);
    if (w <= 0.0) throw DomainError("phase_averaged_density: degenerate width");
    const double a0 = std::sqrt(alpha0_sq);
    const double d = r - a0;
    return std::exp(-d * d / w) * bessel_i0_scaled(2.0 * r * a0 / w) / (std::numbers::pi * w);
}

namespace detail {

// Composite Gauss-Legendre over [a, b] with panels no wider than h.
template <class F>
double composite_gl(F&& f, double a, double b, double h, std::size_t order = 16) {
    const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / h)));
    const QuadratureRule ref = gauss_legendre(order, -1.0, 1.0);
    const double width = (b - a) / static_cast<double>(panels);
    double total = 0.0;
    for (std::size_t k = 0; k < panels; ++k) {
        const double lo = a + width * static_cast<double>(k);
        const double mid = lo + 0.5 * width;
        double panel = 0.0;
        for (std::size_t i = 0; i < order; ++i) {
            panel += ref.weights[i] * f(mid + 0.5 * width * ref.nodes[i]);
        }
        total += 0.5 * width * panel;
    }
    return total;
}

}  // namespace detail

/**
 * Fock populations <n|rho|n> = \int d^2a P(a) |<a|n>|^2 for n < count,
 * integrated radially against the phase-averaged P function. Requires nbar > 0.
 */
inline std::vector<double> fock_populations_phase_space(const DisplacedThermalState& s, std::size_t count) {
    s.validate();
    if (s.nbar <= 0.0) throw DomainError("fock_populations_phase_space: needs nbar > 0");
    const double a0_sq = s.coherent_number();
    const double sigma = std::sqrt(s.nbar);
    const double r_max = std::sqrt(a0_sq) + 10.0 * sigma + std::sqrt(static_cast<double>(count)) + 10.0;
    const double h = std::min(0.25, 0.5 * sigma);
    std::vector<double> pops(count);
    for (std::size_t n = 0; n < count; ++n) {
        const double lg = std::lgamma(static_cast<double>(n) + 1.0);
        auto integrand = [&](double r) {
            if (r <= 0.0) return 0.0;
            const double overlap = std::exp(2.0 * static_cast<double>(n) * std::log(r) - r * r - lg);
            return 2.0 * std::numbers::pi * r *
                   phase_averaged_density(s.nbar, a0_sq, r, Representation::GlauberSudarshan) * overlap;
        };
        pops[n] = detail::composite_gl(integrand, 0.0, r_max, h);
    }
    return pops;
}

/// Tensor-product Gauss-Legendre integral of f(alpha) over an 8 sigma box around center.
template <class F>
double phase_space_integral(F&& f, std::complex<double> center, double sigma, std::size_t nodes = 96) {
    const double half = 8.0 * sigma;
    const QuadratureRule x = gauss_legendre(nodes, center.real() - half, center.real() + half);
    const QuadratureRule y = gauss_legendre(nodes, center.imag() - half, center.imag() + half);
    double total = 0.0;
    for (std::size_t i = 0; i < nodes; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < nodes; ++j) {
            row += y.weights[j] * f(std::complex<double>(x.nodes[i], y.nodes[j]));
        }
        total += x.weights[i] * row;
    }
    return total;
}

/// Purity as pi \int P Q (needs nbar > 0).
inline double purity_from_p_and_q(const DisplacedThermalState& s) {
    const double sigma = std::sqrt(0.5 * s.nbar);
    return std::numbers::pi * phase_space_integral(
                                  [&](std::complex<double> a) {
                                      return phase_space_density(s, a, Representation::GlauberSudarshan) *
                                             phase_space_density(s, a, Representation::Husimi);
                                  },
                                  s.alpha0, sigma);
}

/// Purity as pi \int W^2.
inline double purity_from_wigner(const DisplacedThermalState& s) {
    const double sigma = std::sqrt(0.5 * (s.nbar + 0.5));
    return std::numbers::pi * phase_space_integral(
                                  [&](std::complex<double> a) {
                                      const double w = phase_space_density(s, a, Representation::Wigner);
                                      return w * w;
                                  },
                                  s.alpha0, sigma);
}

}  // namespace polcoh

#endif  // POLCOH_COHERENCE_PHASE_SPACE_HPP
