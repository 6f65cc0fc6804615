/**
 *  @file   photon_stats.hpp
 *  @brief  Photon-number moments from Husimi samples, windowed in time, and
 *          two-level segmentation of the resulting series.
 *
 *  With u = E|alpha|^2 and w = E|alpha|^4 over Husimi samples,
 *  <n> = u - 1 and <n^2> = w - 3<n> - 2 (antinormal ordering).
 */

#ifndef POLCOH_HOMODYNE_PHOTON_STATS_HPP
#define POLCOH_HOMODYNE_PHOTON_STATS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "polcoh/coherence/phase_space.hpp"
#include "polcoh/error.hpp"
#include "polcoh/homodyne/preprocess.hpp"

namespace polcoh {

struct HusimiPhotonStats {
    double mean_n = 0.0;
    double second_n = 0.0;
    double g2 = std::numeric_limits<double>::quiet_NaN();  ///< NaN when <n> <= 0
    double err_mean_n = 0.0;
    double err_g2 = std::numeric_limits<double>::quiet_NaN();
    std::size_t points = 0;
};

/// Moment estimators with delta-method standard errors.
inline HusimiPhotonStats husimi_photon_stats(std::span<const PhaseSpacePoint> pts) {
    if (pts.size() < 2) throw InsufficientData("husimi_photon_stats: need at least 2 points");
    const double n = static_cast<double>(pts.size());
    double su = 0.0, sw = 0.0;
    for (const auto& x : pts) {
        const double a2 = 0.5 * (x.q * x.q + x.p * x.p);
        su += a2;
        sw += a2 * a2;
    }
    const double u = su / n, w = sw / n;
    double cuu = 0.0, cww = 0.0, cuw = 0.0;
    for (const auto& x : pts) {
        const double a2 = 0.5 * (x.q * x.q + x.p * x.p);
        const double du = a2 - u, dw = a2 * a2 - w;
        cuu += du * du;
        cww += dw * dw;
        cuw += du * dw;
    }
    cuu /= (n - 1.0) * n;
    cww /= (n - 1.0) * n;
    cuw /= (n - 1.0) * n;

    HusimiPhotonStats s;
    s.points = pts.size();
    s.mean_n = u - 1.0;
    s.second_n = w - 3.0 * s.mean_n - 2.0;
    s.err_mean_n = std::sqrt(cuu);
    if (s.mean_n > 0.0) {
        const double m = s.mean_n;
        const double num = w - 4.0 * u + 2.0;
        s.g2 = num / (m * m);
        const double dw = 1.0 / (m * m);
        const double du = -4.0 / (m * m) - 2.0 * num / (m * m * m);
        s.err_g2 = std::sqrt(du * du * cuu + dw * dw * cww + 2.0 * du * dw * cuw);
    }
    return s;
}

struct PhotonStatsWindow {
    double t = 0.0;  ///< mean timestamp of the window's points
    double t_begin = 0.0;
    double t_end = 0.0;
    std::size_t first = 0;  ///< index range into the postselected points
    std::size_t last = 0;
    HusimiPhotonStats stats;
};

/**
 * Splits the postselected points into consecutive windows of `window_size`
 * points (a trailing remainder shorter than half a window is merged into
 * the last window) and evaluates the moment estimators in each.
 */
inline std::vector<PhotonStatsWindow> photon_stats_timeseries(const PostselectResult& sel, std::size_t window_size) {
    if (window_size < 1000) throw DomainError("photon_stats_timeseries: window must hold >= 1000 points");
    const std::size_t n = sel.points.size();
    if (n < window_size) throw InsufficientData("photon_stats_timeseries: fewer points than one window");
    std::vector<PhotonStatsWindow> out;
    std::size_t begin = 0;
    while (begin < n) {
        std::size_t end = std::min(n, begin + window_size);
        if (n - end < window_size / 2) end = n;
        PhotonStatsWindow w;
        w.first = begin;
        w.last = end;
        w.t_begin = sel.times[begin];
        w.t_end = sel.times[end - 1];
        double ts = 0.0;
        for (std::size_t i = begin; i < end; ++i) ts += sel.times[i];
        w.t = ts / static_cast<double>(end - begin);
        w.stats = husimi_photon_stats(std::span(sel.points).subspan(begin, end - begin));
        out.push_back(w);
        begin = end;
    }
    return out;
}

enum class StateLabel { Low, High };

struct BistableSegmentation {
    struct Run {
        StateLabel label;
        std::size_t first;  ///< window indices [first, last)
        std::size_t last;
    };
    double threshold_n = 0.0;
    std::vector<StateLabel> labels;
    std::vector<Run> runs;
};

/// Labels each value High when >= (max + min) / 2, Low otherwise.
inline BistableSegmentation segment_bistable(std::span<const double> series) {
    if (series.size() < 2) throw InsufficientData("segment_bistable: need at least 2 values");
    const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
    BistableSegmentation seg;
    seg.threshold_n = (*hi + *lo) / 2.0;
    seg.labels.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        const StateLabel l = series[i] >= seg.threshold_n ? StateLabel::High : StateLabel::Low;
        seg.labels.push_back(l);
        if (seg.runs.empty() || seg.runs.back().label != l) seg.runs.push_back({l, i, i});
        seg.runs.back().last = i + 1;
    }
    return seg;
}

inline BistableSegmentation segment_bistable(const std::vector<PhotonStatsWindow>& windows) {
    std::vector<double> n(windows.size());
    std::transform(windows.begin(), windows.end(), n.begin(), [](const auto& w) { return w.stats.mean_n; });
    return segment_bistable(std::span<const double>(n));
}

namespace detail {

/// Window range [first, last) of a run after dropping `guard` windows at interior state changes.
inline std::pair<std::size_t, std::size_t> guarded_range(const BistableSegmentation::Run& run, std::size_t n_windows,
                                                         std::size_t guard) {
    const std::size_t first = run.first == 0 ? 0 : run.first + guard;
    const std::size_t last = run.last == n_windows ? run.last : (run.last > guard ? run.last - guard : 0);
    return {first, std::max(first, last)};
}

}  // namespace detail

/**
 * Postselected points of all windows carrying `label`. With guard > 0 the
 * `guard` windows next to each state change are skipped, since they usually
 * straddle the switch and mix both states.
 */
inline std::vector<PhaseSpacePoint> points_with_label(const PostselectResult& sel,
                                                      const std::vector<PhotonStatsWindow>& windows,
                                                      const BistableSegmentation& seg, StateLabel label,
                                                      std::size_t guard = 0) {
    if (seg.labels.size() != windows.size()) throw DomainError("points_with_label: segmentation/window mismatch");
    std::vector<PhaseSpacePoint> out;
    for (const auto& run : seg.runs) {
        if (run.label != label) continue;
        const auto [first, last] = detail::guarded_range(run, windows.size(), guard);
        for (std::size_t k = first; k < last; ++k) {
            out.insert(out.end(), sel.points.begin() + static_cast<std::ptrdiff_t>(windows[k].first),
                       sel.points.begin() + static_cast<std::ptrdiff_t>(windows[k].last));
        }
    }
    return out;
}

/**
 * Records of `stream` whose timestamps fall inside the runs carrying `label`
 * (same guard rule as points_with_label). Postselecting this sub-stream
 * again sets the margin from that state's own product range.
 */
inline QuadratureStream records_with_label(const QuadratureStream& stream, const std::vector<PhotonStatsWindow>& windows,
                                           const BistableSegmentation& seg, StateLabel label, std::size_t guard = 0) {
    if (seg.labels.size() != windows.size()) throw DomainError("records_with_label: segmentation/window mismatch");
    QuadratureStream out;
    out.lo_scale = stream.lo_scale;
    const auto by_time = [](const QuadratureRecord& r, double t) { return r.t < t; };
    for (const auto& run : seg.runs) {
        if (run.label != label) continue;
        const auto [first, last] = detail::guarded_range(run, windows.size(), guard);
        if (first >= last) continue;
        const auto lo = std::lower_bound(stream.records.begin(), stream.records.end(), windows[first].t_begin, by_time);
        const auto hi = std::upper_bound(stream.records.begin(), stream.records.end(), windows[last - 1].t_end,
                                         [](double t, const QuadratureRecord& r) { return t < r.t; });
        out.records.insert(out.records.end(), lo, hi);
    }
    return out;
}

}  // namespace polcoh

#endif  // POLCOH_HOMODYNE_PHOTON_STATS_HPP
