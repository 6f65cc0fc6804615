/**
 *  @file   mc_errors.hpp
 *  @brief  Monte Carlo error propagation for Husimi fits, and the fit report CSV.
 */

#ifndef POLCOH_FITTING_MC_ERRORS_HPP
#define POLCOH_FITTING_MC_ERRORS_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <thread>
#include <vector>

#include "polcoh/fitting/husimi_fit.hpp"
#include "polcoh/observables/statistics.hpp"
#include "polcoh/twa/rng.hpp"

namespace polcoh {

inline constexpr std::uint32_t kFitResampleTag = 0x46495431;

class PropagationFailure : public Error {
  public:
    using Error::Error;
};

struct McOptions {
    std::size_t resamples = 200;
    std::uint64_t seed = 1;
    std::size_t threads = 1;  ///< 0 = hardware concurrency
    double max_failure_fraction = 0.05;
};

/**
 * Perturbs every bin by N(0, sigma_bin), refits each resample starting from
 * `fit` (least-squares polish, weights frozen at the central fit) and
 * replaces the errors of `fit` by the standard deviations over resamples.
 * Resample r draws from RandomStream(seed, r), so the result does not depend
 * on the thread count.
 */
inline FitResult propagate_errors_mc(const HusimiHistogram& h, const FitResult& fit, const McOptions& mc = {},
                                     const FitOptions& opt = {}) {
    if (!fit.converged) throw DomainError("propagate_errors_mc: needs a converged fit");
    if (mc.resamples < 200) throw DomainError("propagate_errors_mc: need at least 200 resamples");
    auto base = detail::fit_data(h, opt.weighting);
    const std::array<double, 4> u0{std::log(std::max(fit.nbar, detail::kNbarMin)),
                                   std::log(std::max(fit.alpha0_sq, detail::kAlphaMin)), fit.q_c, fit.p_c};
    if (opt.weighting == FitWeighting::Model) {
        base.prune(u0.data(), 1e-6);
        base.reweight(u0.data(), opt.min_expected_count);
    }

    std::vector<std::optional<std::array<double, 6>>> out(mc.resamples);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        auto data = base;
        for (std::size_t r = next++; r < mc.resamples; r = next++) {
            RandomStream rng(mc.seed, r, kFitResampleTag);
            for (std::size_t i = 0; i < data.size(); ++i) data.value[i] = base.value[i] + base.sigma_obs[i] * rng.normal();
            const auto lm = detail::levenberg_marquardt(data, u0, opt);
            if (!lm.converged) continue;
            const auto x = detail::decode(lm.u.data());
            out[r] = {x.nbar, x.alpha0_sq, x.q_c, x.p_c, g2_displaced_thermal(x.nbar, x.alpha0_sq),
                      coherence(x.nbar, x.alpha0_sq)};
        }
    };
    std::size_t threads = mc.threads ? mc.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, mc.resamples);
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
    }

    std::vector<std::vector<double>> cols(6);
    for (const auto& o : out) {
        if (!o) continue;
        for (std::size_t k = 0; k < 6; ++k) cols[k].push_back((*o)[k]);
    }
    const std::size_t failed = mc.resamples - cols[0].size();
    if (static_cast<double>(failed) > mc.max_failure_fraction * static_cast<double>(mc.resamples) ||
        cols[0].size() < 2) {
        throw PropagationFailure("propagate_errors_mc: " + std::to_string(failed) + " of " +
                                 std::to_string(mc.resamples) + " resample fits failed");
    }
    auto sd = [](const std::vector<double>& v) {
        const double n = static_cast<double>(v.size());
        const double m = pairwise_sum(v) / n;
        std::vector<double> d2(v.size());
        std::transform(v.begin(), v.end(), d2.begin(), [m](double x) { return (x - m) * (x - m); });
        return std::sqrt(pairwise_sum(d2) / (n - 1.0));
    };
    FitResult r = fit;
    r.err_nbar = sd(cols[0]);
    r.err_alpha0_sq = sd(cols[1]);
    r.err_q_c = sd(cols[2]);
    r.err_p_c = sd(cols[3]);
    r.err_g2 = sd(cols[4]);
    r.err_C = sd(cols[5]);
    return r;
}

inline constexpr const char* kFitCsvHeader = "nbar,alpha0_sq,n_total,g2,C,err_nbar,err_alpha0_sq,err_g2,err_C,chi2,converged";

inline void write_fit_csv(std::ostream& out, const std::vector<FitResult>& rows) {
    out << kFitCsvHeader << '\n';
    const auto old = out.precision(12);
    for (const auto& r : rows) {
        out << r.nbar << ',' << r.alpha0_sq << ',' << r.n_total << ',' << r.g2 << ',' << r.coherence_C << ','
            << r.err_nbar << ',' << r.err_alpha0_sq << ',' << r.err_g2 << ',' << r.err_C << ',' << r.chi2 << ','
            << (r.converged ? 1 : 0) << '\n';
    }
    out.precision(old);
}

}  // namespace polcoh

#endif  // POLCOH_FITTING_MC_ERRORS_HPP
