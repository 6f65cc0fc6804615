/**
 *  @file   displaced_thermal.hpp
 *  @brief  Displaced thermal states: closed-form coherence, photon statistics,
 *          quadrature moments and the linear-coupling (loss) map.
 */

#ifndef POLCOH_COHERENCE_DISPLACED_THERMAL_HPP
#define POLCOH_COHERENCE_DISPLACED_THERMAL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "polcoh/coherence/special.hpp"
#include "polcoh/error.hpp"

namespace polcoh {

/**
 * Gaussian state with coherent amplitude alpha0 and thermal occupation nbar.
 * Its Glauber-Sudarshan function is a Gaussian of width nbar centered at alpha0.
 */
struct DisplacedThermalState {
    std::complex<double> alpha0{0.0, 0.0};
    double nbar = 0.0;

    /// State with real, non-negative amplitude sqrt(alpha0_sq).
    static DisplacedThermalState from_photon_numbers(double nbar, double alpha0_sq) {
        if (!(alpha0_sq >= 0.0)) throw DomainError("coherent photon number must be >= 0");
        DisplacedThermalState s{{std::sqrt(alpha0_sq), 0.0}, nbar};
        s.validate();
        return s;
    }

    double coherent_number() const { return std::norm(alpha0); }
    double mean_number() const { return nbar + coherent_number(); }

    void validate() const {
        if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
            throw DomainError("displaced thermal state: nbar must be finite and >= 0");
        }
        if (!std::isfinite(alpha0.real()) || !std::isfinite(alpha0.imag())) {
            throw DomainError("displaced thermal state: alpha0 must be finite");
        }
    }
};

/// Photon-number variance of a displaced thermal state.
inline double photon_variance(double nbar, double alpha0_sq) {
    return alpha0_sq * (2.0 * nbar + 1.0) + nbar * nbar + nbar;
}

/**
 * Hilbert-Schmidt coherence in closed form,
 * C = [1 - exp(-X) I0(X)] / (2 nbar + 1),  X = 2|alpha0|^2 / (2 nbar + 1).
 * The Bessel product is evaluated in scaled form and stays finite for any X.
 */
inline double coherence(double nbar, double alpha0_sq) {
    if (!(nbar >= 0.0)) throw DomainError("coherence: nbar must be >= 0");
    if (!(alpha0_sq >= 0.0)) throw DomainError("coherence: |alpha0|^2 must be >= 0");
    const double denom = 2.0 * nbar + 1.0;
    const double x = 2.0 * alpha0_sq / denom;
    return (1.0 - bessel_i0_scaled(x)) / denom;
}

inline double coherence(const DisplacedThermalState& s) {
    s.validate();
    return coherence(s.nbar, s.coherent_number());
}

struct CoherenceGradient {
    double d_nbar = 0.0;
    double d_alpha0_sq = 0.0;
};

/// Partial derivatives of the closed-form coherence; d_nbar <= 0 <= d_alpha0_sq.
inline CoherenceGradient coherence_gradient(double nbar, double alpha0_sq) {
    const double denom = 2.0 * nbar + 1.0;
    const double x = 2.0 * alpha0_sq / denom;
    // (2 pi)^-1 \int (1 - cos) e^{x cos - x} = e^{-x} (I0 - I1)
    const double kernel = bessel_i0_scaled(x) - bessel_i1_scaled(x);
    CoherenceGradient g;
    g.d_alpha0_sq = 2.0 * kernel / (denom * denom);
    g.d_nbar = -2.0 * coherence(nbar, alpha0_sq) / denom -
               4.0 * alpha0_sq * kernel / (denom * denom * denom);
    return g;
}

/// Equal-time g2 = 2 - (1 + nbar/|alpha0|^2)^-2; exactly 2 for alpha0 = 0.
inline double g2_displaced_thermal(double nbar, double alpha0_sq) {
    if (!(nbar >= 0.0) || !(alpha0_sq >= 0.0)) throw DomainError("g2: photon numbers must be >= 0");
    if (nbar == 0.0 && alpha0_sq == 0.0) throw UndefinedStatistic("g2 is undefined for the vacuum");
    if (alpha0_sq == 0.0) return 2.0;
    const double m = nbar + alpha0_sq;
    const double ratio = alpha0_sq / m;
    return 2.0 - ratio * ratio;
}

inline double g2_displaced_thermal(const DisplacedThermalState& s) {
    s.validate();
    return g2_displaced_thermal(s.nbar, s.coherent_number());
}

struct G2Gradient {
    double d_nbar = 0.0;
    double d_alpha0_sq = 0.0;
};

inline G2Gradient g2_gradient(double nbar, double alpha0_sq) {
    const double m = nbar + alpha0_sq;
    if (m <= 0.0) return {};
    const double m3 = m * m * m;
    return {2.0 * alpha0_sq * alpha0_sq / m3, -2.0 * alpha0_sq * nbar / m3};
}

/// Result of inverting (mean, variance) onto the displaced-thermal family.
struct MomentDecomposition {
    double nbar = 0.0;
    double alpha0_sq = 0.0;
    bool clamped = false;
    std::string warning;
};

/**
 * Solve <n> = nbar + |a|^2 and Var(n) = |a|^2 (2 nbar + 1) + nbar^2 + nbar.
 * Pairs outside mean <= var <= mean^2 + mean are clamped to the nearest
 * boundary and flagged.
 */
inline MomentDecomposition decompose_photon_moments(double mean_n, double var_n) {
    if (!std::isfinite(mean_n) || !std::isfinite(var_n)) {
        throw DomainError("decompose_photon_moments: non-finite input");
    }
    MomentDecomposition out;
    double s = mean_n;
    double v = var_n;
    if (s < 0.0) {
        out.clamped = true;
        out.warning = "mean below 0 clamped to 0";
        s = 0.0;
    }
    const double lo = s;
    const double hi = s * s + s;
    if (v < lo) {
        out.clamped = true;
        out.warning += (out.warning.empty() ? "" : "; ") + std::string("variance below Poisson bound clamped");
        v = lo;
    } else if (v > hi) {
        out.clamped = true;
        out.warning += (out.warning.empty() ? "" : "; ") + std::string("variance above thermal bound clamped");
        v = hi;
    }
    const double disc = std::max(0.0, s * s + s - v);
    // s - sqrt(disc) rewritten without cancellation
    const double root = std::sqrt(disc);
    double nbar = (s + root > 0.0) ? (v - s) / (s + root) : 0.0;
    nbar = std::clamp(nbar, 0.0, s);
    out.nbar = nbar;
    out.alpha0_sq = s - nbar;
    return out;
}

struct QuadratureMoments {
    double mean_q = 0.0;
    double mean_p = 0.0;
    double var_q = 0.5;
    double var_p = 0.5;
    double cov_qp = 0.0;
};

/// First and second quadrature moments for the convention [q, p] = i.
inline QuadratureMoments quadrature_moments(const DisplacedThermalState& s) {
    s.validate();
    const double r2 = std::sqrt(2.0);
    return {r2 * s.alpha0.real(), r2 * s.alpha0.imag(), s.nbar + 0.5, s.nbar + 0.5, 0.0};
}

/**
 * Output light of a beam-splitter-like linear coupling with reflectance r:
 * the P function is rescaled, alpha0 -> -r alpha0, nbar -> |r|^2 nbar.
 */
inline DisplacedThermalState linear_coupling_map(const DisplacedThermalState& s, std::complex<double> r) {
    s.validate();
    if (!(std::abs(r) <= 1.0)) throw DomainError("linear_coupling_map: |r| must be <= 1");
    return {-r * s.alpha0, std::norm(r) * s.nbar};
}

}  // namespace polcoh

#endif  // POLCOH_COHERENCE_DISPLACED_THERMAL_HPP
