/**
 *  @file   preprocess.hpp
 *  @brief  LO normalization, lag-1 decorrelation and orthogonality postselection.
 */

#ifndef POLCOH_HOMODYNE_PREPROCESS_HPP
#define POLCOH_HOMODYNE_PREPROCESS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "polcoh/coherence/phase_space.hpp"
#include "polcoh/error.hpp"
#include "polcoh/homodyne/stream.hpp"

namespace polcoh {

struct PreprocessDiagnostics {
    double lag1_x1 = 0.0;  ///< estimated lag-1 autocorrelation before whitening
    double lag1_x2 = 0.0;
};

/// Empirical lag-1 autocorrelation of one channel (mean removed).
template <class Get>
double lag1_autocorrelation(const std::vector<QuadratureRecord>& r, Get get) {
    const std::size_t n = r.size();
    if (n < 2) return 0.0;
    double mean = 0.0;
    for (const auto& rec : r) mean += get(rec);
    mean /= static_cast<double>(n);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = get(r[i]) - mean;
        den += d * d;
        if (i > 0) num += d * (get(r[i - 1]) - mean);
    }
    return den > 0.0 ? num / den : 0.0;
}

/**
 * Scales both channels by lo_scale, then whitens each channel with
 * x'_i = (x_i - c x_{i-1}) / sqrt(1 - c^2), c the empirical lag-1
 * autocorrelation. This inverts an AR(1) filter
 * y_i = sqrt(1 - c^2) x_i + c y_{i-1} exactly. The first record is kept as is.
 * The result has lo_scale = 1.
 */
inline QuadratureStream preprocess(QuadratureStream s, PreprocessDiagnostics* diag = nullptr) {
    s.validate();
    if (s.size() < 1000) throw InsufficientData("preprocess: need at least 1000 records");
    for (auto& r : s.records) {
        r.x1 *= s.lo_scale;
        r.x2 *= s.lo_scale;
    }
    s.lo_scale = 1.0;

    auto whiten = [&](auto member) {
        const double c = lag1_autocorrelation(s.records, [&](const QuadratureRecord& r) { return r.*member; });
        if (std::abs(c) > 0.9) throw DomainError("preprocess: pathological lag-1 correlation " + std::to_string(c));
        const double norm = 1.0 / std::sqrt(1.0 - c * c);
        double prev = s.records.front().*member;
        for (std::size_t i = 1; i < s.size(); ++i) {
            const double cur = s.records[i].*member;
            s.records[i].*member = (cur - c * prev) * norm;
            prev = cur;
        }
        return c;
    };
    const double c1 = whiten(&QuadratureRecord::x1);
    const double c2 = whiten(&QuadratureRecord::x2);
    if (diag != nullptr) *diag = {c1, c2};
    return s;
}

enum class PeakToPeakReference {
    Product,  ///< margin times the peak-to-peak of the (smoothed) product series
    Channels  ///< margin times ptp(x1) * ptp(x2)
};

struct PostselectOptions {
    double margin = 0.025;
    /// Records in the centred moving average of x1*x2; 1 applies the rule record by record.
    std::size_t smoothing_window = 4096;
    PeakToPeakReference reference = PeakToPeakReference::Product;
    /// Kept pairs map to (q, p) = pair_scale * (x1, x2); sqrt(2) undoes the 3 dB split of the eight-port.
    double pair_scale = std::numbers::sqrt2;
};

struct PostselectResult {
    std::vector<PhaseSpacePoint> points;
    std::vector<double> times;
    std::size_t input_records = 0;
    double threshold = 0.0;

    double retention() const {
        return input_records ? static_cast<double>(points.size()) / static_cast<double>(input_records) : 0.0;
    }
};

/// Centred moving average of x1 * x2 over `window` records (shrinking at the ends).
inline std::vector<double> smoothed_product(const std::vector<QuadratureRecord>& r, std::size_t window) {
    const std::size_t n = r.size();
    std::vector<double> prod(n);
    for (std::size_t i = 0; i < n; ++i) prod[i] = r[i].x1 * r[i].x2;
    if (window <= 1) return prod;
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + prod[i];
    std::vector<double> out(n);
    const std::size_t half = window / 2;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i > half ? i - half : 0;
        const std::size_t hi = std::min(n, lo + window);
        out[i] = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
    }
    return out;
}

/**
 * Keep records whose (smoothed) product x1*x2 lies within +-margin of the
 * peak-to-peak value, i.e. where the two channels measure orthogonal quadratures.
 */
inline PostselectResult postselect_orthogonal(const QuadratureStream& s, const PostselectOptions& opt = {}) {
    if (!(opt.margin >= 0.0)) throw DomainError("postselect: margin must be >= 0");
    PostselectResult out;
    out.input_records = s.size();
    if (s.records.empty()) throw InsufficientData("postselect: empty stream");
    const auto prod = smoothed_product(s.records, opt.smoothing_window);
    double scale = 0.0;
    if (opt.reference == PeakToPeakReference::Product) {
        const auto [lo, hi] = std::minmax_element(prod.begin(), prod.end());
        scale = *hi - *lo;
    } else {
        auto ptp = [&](auto member) {
            const auto [lo, hi] = std::minmax_element(s.records.begin(), s.records.end(),
                                                      [&](const auto& a, const auto& b) { return a.*member < b.*member; });
            return (*hi).*member - (*lo).*member;
        };
        scale = ptp(&QuadratureRecord::x1) * ptp(&QuadratureRecord::x2);
    }
    out.threshold = opt.margin * scale;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (std::abs(prod[i]) <= out.threshold) {
            out.points.push_back({opt.pair_scale * s.records[i].x1, opt.pair_scale * s.records[i].x2});
            out.times.push_back(s.records[i].t);
        }
    }
    if (static_cast<double>(out.points.size()) < 1e-3 * static_cast<double>(s.size())) {
        throw InsufficientData("postselect: retention below 0.1% (" + std::to_string(out.points.size()) + " of " +
                               std::to_string(s.size()) + ")");
    }
    return out;
}

/// All records as phase-space points, for streams whose channels are orthogonal by construction.
inline PostselectResult take_all_points(const QuadratureStream& s, double pair_scale = std::numbers::sqrt2) {
    PostselectResult out;
    out.input_records = s.size();
    out.points.reserve(s.size());
    out.times.reserve(s.size());
    for (const auto& r : s.records) {
        out.points.push_back({pair_scale * r.x1, pair_scale * r.x2});
        out.times.push_back(r.t);
    }
    return out;
}

}  // namespace polcoh

#endif  // POLCOH_HOMODYNE_PREPROCESS_HPP
