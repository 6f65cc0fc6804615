/**
 *  @file   statistics.hpp
 *  @brief  Order-stable summation and leave-one-out (jackknife) errors.
 */

#ifndef POLCOH_OBSERVABLES_STATISTICS_HPP
#define POLCOH_OBSERVABLES_STATISTICS_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace polcoh {

/// Pairwise (cascade) summation; the result depends only on the element order.
inline double pairwise_sum(std::span<const double> x) {
    if (x.size() <= 8) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    const std::size_t half = x.size() / 2;
    return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

struct MeanError {
    double mean = 0.0;
    double error = 0.0;  ///< standard error of the mean
};

inline MeanError mean_and_standard_error(std::span<const double> x) {
    MeanError out;
    const double n = static_cast<double>(x.size());
    if (x.empty()) return out;
    out.mean = pairwise_sum(x) / n;
    if (x.size() < 2) return out;
    std::vector<double> sq(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) sq[i] = (x[i] - out.mean) * (x[i] - out.mean);
    out.error = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
    return out;
}

/**
 * Jackknife covariance of a vector statistic from its leave-one-out
 * replicates: (T - 1) / T * sum_i (theta_i - mean)(theta_i - mean)^T.
 */
inline std::vector<std::vector<double>> jackknife_covariance(const std::vector<std::vector<double>>& replicates) {
    const std::size_t t = replicates.size();
    const std::size_t d = t ? replicates.front().size() : 0;
    std::vector<std::vector<double>> cov(d, std::vector<double>(d, 0.0));
    if (t < 2) return cov;
    std::vector<double> mean(d, 0.0);
    std::vector<double> col(t);
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t i = 0; i < t; ++i) col[i] = replicates[i][k];
        mean[k] = pairwise_sum(col) / static_cast<double>(t);
    }
    const double f = static_cast<double>(t - 1) / static_cast<double>(t);
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = a; b < d; ++b) {
            for (std::size_t i = 0; i < t; ++i) col[i] = (replicates[i][a] - mean[a]) * (replicates[i][b] - mean[b]);
            cov[a][b] = cov[b][a] = f * pairwise_sum(col);
        }
    }
    return cov;
}

}  // namespace polcoh

#endif  // POLCOH_OBSERVABLES_STATISTICS_HPP
