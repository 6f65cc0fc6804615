/**
 *  @file   husimi_fit.hpp
 *  @brief  Weighted least-squares fit of the phase-averaged displaced-thermal
 *          Husimi function to a binned histogram.
 *
 *  Residuals are (Q_bin - model(q_bin, p_bin)) / sigma_bin over bins with
 *  sigma > 0. Internal parameters are (ln nbar, ln alpha0_sq, q_c, p_c); the
 *  logarithms are clamped to [1e-8, 1e3] and [1e-8, 1e5] respectively.
 *  A Nelder-Mead simplex locates the basin and Levenberg-Marquardt polishes.
 */

#ifndef POLCOH_FITTING_HUSIMI_FIT_HPP
#define POLCOH_FITTING_HUSIMI_FIT_HPP

#include <Eigen/Dense>
#include <gsl/gsl_blas.h>
#include <gsl/gsl_multifit_nlinear.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "polcoh/coherence/displaced_thermal.hpp"
#include "polcoh/coherence/phase_space.hpp"
#include "polcoh/coherence/special.hpp"
#include "polcoh/error.hpp"
#include "polcoh/homodyne/histogram.hpp"

namespace polcoh {

struct FitResult {
    double nbar = 0.0;
    double alpha0_sq = 0.0;
    double q_c = 0.0;
    double p_c = 0.0;
    double n_total = 0.0;  ///< nbar + alpha0_sq
    double g2 = 0.0;
    double coherence_C = 0.0;
    double chi2 = 0.0;
    std::size_t dof = 0;
    bool converged = false;
    std::size_t iterations = 0;

    /// Standard errors; from the LM covariance after fitting, replaced by propagate_errors_mc.
    double err_nbar = 0.0;
    double err_alpha0_sq = 0.0;
    double err_q_c = 0.0;
    double err_p_c = 0.0;
    double err_g2 = 0.0;
    double err_C = 0.0;

    /// Radius of the coherent ring in quadrature units, sqrt(2 alpha0_sq).
    double ring_radius() const { return std::sqrt(2.0 * alpha0_sq); }
};

class FitFailure : public Error {
  public:
    FitFailure(const std::string& what, FitResult best) : Error(what), best_(best) {}
    const FitResult& best() const noexcept { return best_; }

  private:
    FitResult best_;
};

enum class FitWeighting {
    /// sigma from the observed bin fraction; bins with sigma = 0 are dropped.
    Observed,
    /// sigma from the fitted density (iteratively reweighted), all bins kept;
    /// the fraction is floored at min_expected_count counts.
    Model
};

struct FitOptions {
    FitWeighting weighting = FitWeighting::Model;
    std::size_t max_reweights = 20;
    std::size_t max_simplex_iterations = 4000;
    std::size_t max_lm_iterations = 500;
    double xtol = 1e-8;
    std::size_t min_occupied_bins = 10;
    double min_expected_count = 0.01;  ///< model-weighted variance floor, in counts per bin
};

namespace detail {

inline constexpr double kNbarMin = 1e-8, kNbarMax = 1e3;
inline constexpr double kAlphaMin = 1e-8, kAlphaMax = 1e5;
// The reported chi2 floors expected counts at one so the Pearson statistic stays chi2-distributed.
inline constexpr double kGoodnessFloorCount = 1.0;

struct FitParams {
    double nbar, alpha0_sq, q_c, p_c;
};

inline FitParams decode(const double* u) {
    return {std::exp(std::clamp(u[0], std::log(kNbarMin), std::log(kNbarMax))),
            std::exp(std::clamp(u[1], std::log(kAlphaMin), std::log(kAlphaMax))), u[2], u[3]};
}

// Bins entering the objective, flattened.
struct FitData {
    std::vector<double> q, p, value, sigma_obs, inv_sigma;
    double area = 1.0;
    double nu = 1.0;

    std::size_t size() const { return q.size(); }

    // Model density and its log-derivatives with respect to the internal parameters.
    template <bool WithGradient>
    double model(std::size_t i, const FitParams& x, double* dlog = nullptr) const {
        const double w = x.nbar + 1.0;
        const double a0 = std::sqrt(x.alpha0_sq);
        const double dq = q[i] - x.q_c, dp = p[i] - x.p_c;
        const double rad = std::hypot(dq, dp) / std::numbers::sqrt2;  // |alpha - alpha_c|
        const double d = rad - a0;
        const double z = 2.0 * rad * a0 / w;
        const double i0s = bessel_i0_scaled(z);
        const double m = std::exp(-d * d / w) * i0s / (2.0 * std::numbers::pi * w);
        if constexpr (WithGradient) {
            const double kappa = i0s > 0.0 ? bessel_i1_scaled(z) / i0s - 1.0 : 0.0;  // d ln(e^-z I0) / dz
            const double d_w = d * d / (w * w) - kappa * z / w - 1.0 / w;
            const double d_rad = -2.0 * d / w + kappa * 2.0 * a0 / w;
            dlog[0] = x.nbar * d_w;
            dlog[1] = 0.5 * a0 * (2.0 * d / w + kappa * 2.0 * rad / w);
            if (rad > 0.0) {
                dlog[2] = d_rad * (-dq / (2.0 * rad));
                dlog[3] = d_rad * (-dp / (2.0 * rad));
            } else {
                dlog[2] = dlog[3] = 0.0;
            }
        }
        return m;
    }

    void residuals(const double* u, double* r) const {
        const FitParams x = decode(u);
        for (std::size_t i = 0; i < size(); ++i) r[i] = (value[i] - model<false>(i, x)) * inv_sigma[i];
    }

    // Row-major n x 4 Jacobian of the residuals.
    void jacobian(const double* u, double* jac) const {
        const FitParams x = decode(u);
        double dlog[4];
        for (std::size_t i = 0; i < size(); ++i) {
            const double m = model<true>(i, x, dlog);
            for (int k = 0; k < 4; ++k) jac[4 * i + k] = -m * dlog[k] * inv_sigma[i];
        }
        // Clamped log-parameters do not move the model.
        if (u[0] < std::log(kNbarMin) || u[0] > std::log(kNbarMax)) {
            for (std::size_t i = 0; i < size(); ++i) jac[4 * i] = 0.0;
        }
        if (u[1] < std::log(kAlphaMin) || u[1] > std::log(kAlphaMax)) {
            for (std::size_t i = 0; i < size(); ++i) jac[4 * i + 1] = 0.0;
        }
    }

    double chi2(const double* u) const {
        std::vector<double> r(size());
        residuals(u, r.data());
        double acc = 0.0;
        for (double v : r) acc += v * v;
        return std::isfinite(acc) ? acc : std::numeric_limits<double>::max();
    }

    // Drops empty bins whose expected count is below min_expected; they carry no weight.
    void prune(const double* u, double min_expected) {
        const FitParams x = decode(u);
        std::size_t k = 0;
        for (std::size_t i = 0; i < size(); ++i) {
            if (value[i] == 0.0 && model<false>(i, x) * area * nu < min_expected) continue;
            q[k] = q[i];
            p[k] = p[i];
            value[k] = value[i];
            sigma_obs[k] = sigma_obs[i];
            inv_sigma[k] = inv_sigma[i];
            ++k;
        }
        for (auto* v : {&q, &p, &value, &sigma_obs, &inv_sigma}) v->resize(k);
    }

    // sigma = sqrt(p (1 - p) / nu) / area with p = max(model * area, floor_count / nu).
    void reweight(const double* u, double floor_count) {
        const FitParams x = decode(u);
        for (std::size_t i = 0; i < size(); ++i) {
            const double pm = std::max(model<false>(i, x) * area, floor_count / nu);
            inv_sigma[i] = area / std::sqrt(pm * (1.0 - std::min(pm, 0.5)) / nu);
        }
    }
};

inline FitData fit_data(const HusimiHistogram& h, FitWeighting weighting) {
    FitData d;
    d.area = h.bin_area();
    d.nu = static_cast<double>(h.total_count);
    for (std::size_t iq = 0; iq < h.q_bins(); ++iq) {
        for (std::size_t ip = 0; ip < h.p_bins(); ++ip) {
            const std::size_t i = h.index(iq, ip);
            const double s = h.sigma(i);
            if (weighting == FitWeighting::Observed && !(s > 0.0)) continue;
            d.q.push_back(h.q_center(iq));
            d.p.push_back(h.p_center(ip));
            d.value.push_back(h.density(i));
            d.sigma_obs.push_back(s);
            d.inv_sigma.push_back(s > 0.0 ? 1.0 / s : 0.0);
        }
    }
    return d;
}

// Starting point from the histogram's Husimi moments about its centroid.
inline std::array<double, 4> initial_guess(const HusimiHistogram& h) {
    double sq = 0.0, sp = 0.0;
    for (std::size_t iq = 0; iq < h.q_bins(); ++iq) {
        for (std::size_t ip = 0; ip < h.p_bins(); ++ip) {
            const double f = h.fraction(h.index(iq, ip));
            sq += f * h.q_center(iq);
            sp += f * h.p_center(ip);
        }
    }
    double u = 0.0, w = 0.0;
    for (std::size_t iq = 0; iq < h.q_bins(); ++iq) {
        for (std::size_t ip = 0; ip < h.p_bins(); ++ip) {
            const double f = h.fraction(h.index(iq, ip));
            const double dq = h.q_center(iq) - sq, dp = h.p_center(ip) - sp;
            const double a2 = 0.5 * (dq * dq + dp * dp);
            u += f * a2;
            w += f * a2 * a2;
        }
    }
    const double mean = u - 1.0;
    const double var = (w - 3.0 * mean - 2.0) - mean * mean;
    double nbar = 0.5, a2 = 1.0;
    if (mean > 0.0) {
        try {
            const auto m = decompose_photon_moments(mean, std::max(var, 0.0));
            nbar = m.nbar;
            a2 = m.alpha0_sq;
        } catch (const Error&) {
            nbar = mean;
            a2 = 0.0;
        }
    }
    nbar = std::clamp(nbar, 1e-2, kNbarMax);
    a2 = std::clamp(a2, 1e-2, kAlphaMax);
    return {std::log(nbar), std::log(a2), sq, sp};
}

struct LmOutcome {
    std::array<double, 4> u;
    double chi2;
    std::size_t iterations;
    bool converged;
    int status;
};

inline int lm_f(const gsl_vector* x, void* params, gsl_vector* f) {
    const auto* d = static_cast<const FitData*>(params);
    d->residuals(x->data, f->data);
    for (std::size_t i = 0; i < d->size(); ++i) {
        if (!std::isfinite(f->data[i])) return GSL_EDOM;
    }
    return GSL_SUCCESS;
}

inline int lm_df(const gsl_vector* x, void* params, gsl_matrix* jac) {
    static_cast<const FitData*>(params)->jacobian(x->data, jac->data);
    return GSL_SUCCESS;
}

inline LmOutcome levenberg_marquardt(const FitData& d, std::array<double, 4> u0, const FitOptions& opt) {
    gsl_quiet();
    const std::size_t n = d.size(), p = 4;
    gsl_multifit_nlinear_parameters fp = gsl_multifit_nlinear_default_parameters();
    fp.trs = gsl_multifit_nlinear_trs_lm;
    std::unique_ptr<gsl_multifit_nlinear_workspace, decltype(&gsl_multifit_nlinear_free)> ws(
        gsl_multifit_nlinear_alloc(gsl_multifit_nlinear_trust, &fp, n, p), &gsl_multifit_nlinear_free);
    gsl_multifit_nlinear_fdf fdf{};
    fdf.f = lm_f;
    fdf.df = lm_df;
    fdf.n = n;
    fdf.p = p;
    fdf.params = const_cast<FitData*>(&d);
    u0[0] = std::clamp(u0[0], std::log(kNbarMin), std::log(kNbarMax));
    u0[1] = std::clamp(u0[1], std::log(kAlphaMin), std::log(kAlphaMax));
    gsl_vector_view x0 = gsl_vector_view_array(u0.data(), p);
    gsl_multifit_nlinear_init(&x0.vector, &fdf, ws.get());
    int info = 0;
    const int status = gsl_multifit_nlinear_driver(opt.max_lm_iterations, opt.xtol, 1e-12, 0.0, nullptr, nullptr,
                                                   &info, ws.get());
    LmOutcome out{};
    const gsl_vector* x = gsl_multifit_nlinear_position(ws.get());
    for (std::size_t i = 0; i < p; ++i) out.u[i] = gsl_vector_get(x, i);
    out.u[0] = std::clamp(out.u[0], std::log(kNbarMin), std::log(kNbarMax));
    out.u[1] = std::clamp(out.u[1], std::log(kAlphaMin), std::log(kAlphaMax));
    const gsl_vector* f = gsl_multifit_nlinear_residual(ws.get());
    double chi2 = 0.0;
    gsl_blas_ddot(f, f, &chi2);
    out.chi2 = chi2;
    out.iterations = gsl_multifit_nlinear_niter(ws.get());
    out.status = status;
    // A start that is already optimal makes no progress on the first step; that is convergence too.
    const bool optimal_start = status == GSL_EMAXITER && info == GSL_ENOPROG && out.iterations <= 1;
    out.converged = (status == GSL_SUCCESS || optimal_start) && std::isfinite(chi2);

    return out;
}

inline double simplex_cost(const gsl_vector* x, void* params) {
    return static_cast<const FitData*>(params)->chi2(x->data);
}

inline std::array<double, 4> simplex(const FitData& d, std::array<double, 4> u0, const FitOptions& opt) {
    gsl_quiet();
    std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> m(
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 4), &gsl_multimin_fminimizer_free);
    gsl_multimin_function fn{&simplex_cost, 4, const_cast<FitData*>(&d)};
    std::array<double, 4> steps{0.3, 0.3, 0.2, 0.2};
    gsl_vector_view x = gsl_vector_view_array(u0.data(), 4);
    gsl_vector_view s = gsl_vector_view_array(steps.data(), 4);
    gsl_multimin_fminimizer_set(m.get(), &fn, &x.vector, &s.vector);
    for (std::size_t it = 0; it < opt.max_simplex_iterations; ++it) {
        if (gsl_multimin_fminimizer_iterate(m.get()) != GSL_SUCCESS) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m.get()), 1e-6) == GSL_SUCCESS) break;
    }
    std::array<double, 4> out;
    for (std::size_t i = 0; i < 4; ++i) out[i] = gsl_vector_get(m->x, i);
    return out;
}

inline void fill_derived(FitResult& r) {
    r.n_total = r.nbar + r.alpha0_sq;
    r.g2 = g2_displaced_thermal(r.nbar, r.alpha0_sq);
    r.coherence_C = coherence(r.nbar, r.alpha0_sq);
}

// Linearized covariance in (nbar, alpha0_sq, q_c, p_c). Near alpha0_sq = 0 the nbar and
// alpha0_sq directions coincide to first order and the errors diverge.
inline Eigen::Matrix4d linear_covariance(const FitData& d, const std::array<double, 4>& u) {
    std::vector<double> jac(4 * d.size());
    d.jacobian(u.data(), jac.data());
    const FitParams x = decode(u.data());
    Eigen::Matrix4d jtj = Eigen::Matrix4d::Zero();
    for (std::size_t i = 0; i < d.size(); ++i) {
        Eigen::Vector4d row(jac[4 * i] / x.nbar, jac[4 * i + 1] / x.alpha0_sq, jac[4 * i + 2], jac[4 * i + 3]);
        jtj += row * row.transpose();
    }
    Eigen::FullPivLU<Eigen::Matrix4d> lu(jtj);
    if (!lu.isInvertible()) return Eigen::Matrix4d::Constant(std::numeric_limits<double>::quiet_NaN());
    return lu.inverse();
}

inline FitResult make_result(const LmOutcome& lm, const FitData& d, std::size_t occupied) {
    FitResult r;
    const FitParams x = decode(lm.u.data());
    r.nbar = x.nbar;
    r.alpha0_sq = x.alpha0_sq;
    r.q_c = x.q_c;
    r.p_c = x.p_c;
    fill_derived(r);
    r.chi2 = lm.chi2;
    r.dof = occupied > 4 ? occupied - 4 : 0;
    r.converged = lm.converged;
    r.iterations = lm.iterations;
    const Eigen::Matrix4d c = linear_covariance(d, lm.u);
    r.err_nbar = std::sqrt(std::max(c(0, 0), 0.0));
    r.err_alpha0_sq = std::sqrt(std::max(c(1, 1), 0.0));
    r.err_q_c = std::sqrt(std::max(c(2, 2), 0.0));
    r.err_p_c = std::sqrt(std::max(c(3, 3), 0.0));
    auto propagate = [&](double dn, double da) {
        return std::sqrt(std::max(0.0, dn * dn * c(0, 0) + da * da * c(1, 1) + 2.0 * dn * da * c(0, 1)));
    };
    const auto gc = coherence_gradient(r.nbar, r.alpha0_sq);
    const auto gg = g2_gradient(r.nbar, r.alpha0_sq);
    r.err_C = propagate(gc.d_nbar, gc.d_alpha0_sq);
    r.err_g2 = propagate(gg.d_nbar, gg.d_alpha0_sq);
    return r;
}

}  // namespace detail

/**
 * Fits (nbar, alpha0_sq, q_c, p_c). Errors in the result are the
 * linearized covariance estimates; see propagate_errors_mc for resampling.
 */
inline FitResult fit_displaced_thermal(const HusimiHistogram& h, const FitOptions& opt = {}) {
    if (h.total_count == 0 || h.occupied_bins() < opt.min_occupied_bins) {
        throw InsufficientData("fit_displaced_thermal: fewer than " + std::to_string(opt.min_occupied_bins) +
                               " occupied bins");
    }
    auto data = detail::fit_data(h, opt.weighting);
    auto u = detail::simplex(data, detail::initial_guess(h), opt);
    auto lm = detail::levenberg_marquardt(data, u, opt);
    if (opt.weighting == FitWeighting::Model) {
        data.prune(lm.u.data(), 1e-6);
        for (std::size_t k = 0; k < opt.max_reweights; ++k) {
            data.reweight(lm.u.data(), opt.min_expected_count);
            const auto prev = lm.u;
            lm = detail::levenberg_marquardt(data, lm.u, opt);
            double change = 0.0;
            for (std::size_t i = 0; i < 4; ++i) change = std::max(change, std::abs(lm.u[i] - prev[i]));
            if (change < 1e-7) break;
        }
    }
    FitResult r = detail::make_result(lm, data, h.occupied_bins());
    if (opt.weighting == FitWeighting::Model) {
        data.reweight(lm.u.data(), detail::kGoodnessFloorCount);
        r.chi2 = data.chi2(lm.u.data());
    }
    if (!r.converged) throw FitFailure("fit_displaced_thermal: least-squares polish did not converge", r);
    return r;
}

}  // namespace polcoh

#endif  // POLCOH_FITTING_HUSIMI_FIT_HPP
