/**
 *  @file   histogram.hpp
 *  @brief  Binned Husimi density from phase-space samples.
 *
 *  Bins are square and centred on the origin (the origin is a bin centre).
 *  For a bin of area A holding a fraction p of the nu points,
 *  Q = p / A and sigma_Q = sqrt(p (1 - p) / nu) / A, so that Q and sigma_Q are
 *  both in units of the quadrature measure dq dp.
 */

#ifndef POLCOH_HOMODYNE_HISTOGRAM_HPP
#define POLCOH_HOMODYNE_HISTOGRAM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polcoh/coherence/phase_space.hpp"
#include "polcoh/error.hpp"
#include "polcoh/homodyne/stream.hpp"

namespace polcoh {

struct HusimiHistogram {
    std::vector<double> q_edges;
    std::vector<double> p_edges;
    std::vector<std::uint64_t> counts;  ///< row-major, index iq * p_bins() + ip
    std::uint64_t total_count = 0;      ///< nu, points inside the extent
    std::uint64_t overflow = 0;         ///< points outside the extent
    std::string warning;

    std::size_t q_bins() const { return q_edges.empty() ? 0 : q_edges.size() - 1; }
    std::size_t p_bins() const { return p_edges.empty() ? 0 : p_edges.size() - 1; }
    std::size_t bins() const { return q_bins() * p_bins(); }
    std::size_t index(std::size_t iq, std::size_t ip) const { return iq * p_bins() + ip; }
    double bin_width() const { return q_edges.size() > 1 ? q_edges[1] - q_edges[0] : 0.0; }
    double bin_area() const { return (q_edges[1] - q_edges[0]) * (p_edges[1] - p_edges[0]); }
    double q_center(std::size_t iq) const { return 0.5 * (q_edges[iq] + q_edges[iq + 1]); }
    double p_center(std::size_t ip) const { return 0.5 * (p_edges[ip] + p_edges[ip + 1]); }

    double fraction(std::size_t i) const {
        return total_count ? static_cast<double>(counts[i]) / static_cast<double>(total_count) : 0.0;
    }
    double density(std::size_t i) const { return fraction(i) / bin_area(); }
    double sigma(std::size_t i) const {
        const double p = fraction(i);
        return std::sqrt(p * (1.0 - p) / static_cast<double>(total_count)) / bin_area();
    }

    std::size_t occupied_bins() const {
        return static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }));
    }
};

struct HistogramOptions {
    double bin_width = 0.25;
    /// Half-width of the square domain; unset means auto-size from the data.
    std::optional<double> extent;
    /// Auto extent: this factor times the 99.99% quantile of max(|q|, |p|).
    double auto_extent_factor = 1.25;
    double max_overflow_fraction = 0.01;
    std::size_t recommended_points = 10000;
};

/// Half-width used when HistogramOptions::extent is unset.
inline double auto_extent(std::span<const PhaseSpacePoint> points, const HistogramOptions& opt) {
    std::vector<double> m(points.size());
    std::transform(points.begin(), points.end(), m.begin(),
                   [](const PhaseSpacePoint& x) { return std::max(std::abs(x.q), std::abs(x.p)); });
    const auto k = static_cast<std::size_t>(0.9999 * static_cast<double>(m.size() - 1));
    std::nth_element(m.begin(), m.begin() + static_cast<std::ptrdiff_t>(k), m.end());
    return opt.auto_extent_factor * m[k] + 2.0 * opt.bin_width;
}

inline HusimiHistogram build_husimi_histogram(std::span<const PhaseSpacePoint> points, const HistogramOptions& opt = {}) {
    if (!(opt.bin_width > 0.0)) throw DomainError("histogram: bin width must be positive");
    if (points.empty()) throw InsufficientData("histogram: no points");
    const double extent = opt.extent ? *opt.extent : auto_extent(points, opt);
    if (!(extent > 0.0)) throw DomainError("histogram: extent must be positive");

    const double w = opt.bin_width;
    const auto half = static_cast<std::size_t>(std::ceil(extent / w - 0.5));
    const std::size_t n = 2 * half + 1;
    const double lo = -(static_cast<double>(half) + 0.5) * w;

    HusimiHistogram h;
    h.q_edges.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) h.q_edges[i] = lo + static_cast<double>(i) * w;
    h.p_edges = h.q_edges;
    h.counts.assign(n * n, 0);

    const double inv_w = 1.0 / w;
    for (const auto& x : points) {
        const double fq = std::floor((x.q - lo) * inv_w);
        const double fp = std::floor((x.p - lo) * inv_w);
        if (fq < 0.0 || fp < 0.0 || fq >= static_cast<double>(n) || fp >= static_cast<double>(n) ||
            !std::isfinite(fq) || !std::isfinite(fp)) {
            ++h.overflow;
            continue;
        }
        ++h.counts[static_cast<std::size_t>(fq) * n + static_cast<std::size_t>(fp)];
        ++h.total_count;
    }
    const double overflow_fraction = static_cast<double>(h.overflow) / static_cast<double>(points.size());
    if (overflow_fraction > opt.max_overflow_fraction) {
        throw DomainError("histogram: " + std::to_string(h.overflow) + " points outside the extent (" +
                          std::to_string(100.0 * overflow_fraction) + "%)");
    }
    if (points.size() < opt.recommended_points) {
        h.warning = "only " + std::to_string(points.size()) + " points; per-bin errors will be large";
    }
    return h;
}

/// Grid CSV with header `q,p,Q,sigma_Q`, one row per bin centre.
inline void write_histogram_csv(const std::string& path, const HusimiHistogram& h) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "q,p,Q,sigma_Q\n" << std::setprecision(17);
    for (std::size_t iq = 0; iq < h.q_bins(); ++iq) {
        for (std::size_t ip = 0; ip < h.p_bins(); ++ip) {
            const std::size_t i = h.index(iq, ip);
            out << h.q_center(iq) << ',' << h.p_center(ip) << ',' << h.density(i) << ',' << h.sigma(i) << '\n';
        }
    }
    if (!out) throw Error("write failed: " + path);
}

/**
 * Reads a grid CSV back. Counts are reconstructed from Q and sigma_Q, which
 * together fix nu; the file must hold at least one bin with 0 < p < 1.
 */
inline HusimiHistogram read_histogram_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("q,p,Q,sigma_Q", 0) != 0) throw Error(path + ": not a histogram CSV");
    std::map<double, std::size_t> qs, ps;
    struct Row { double q, p, Q, s; };
    std::vector<Row> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = detail::split_csv(line);
        if (f.size() != 4) throw Error(path + ": expected 4 columns");
        rows.push_back({detail::parse_double(f[0], path), detail::parse_double(f[1], path),
                        detail::parse_double(f[2], path), detail::parse_double(f[3], path)});
        qs.emplace(rows.back().q, 0);
        ps.emplace(rows.back().p, 0);
    }
    if (qs.size() < 2 || ps.size() < 2 || rows.size() != qs.size() * ps.size()) throw Error(path + ": not a full grid");
    std::size_t k = 0;
    for (auto& [v, i] : qs) i = k++;
    k = 0;
    for (auto& [v, i] : ps) i = k++;

    HusimiHistogram h;
    auto edges = [](const std::map<double, std::size_t>& c) {
        std::vector<double> centres;
        for (const auto& [v, i] : c) centres.push_back(v);
        const double w = (centres.back() - centres.front()) / static_cast<double>(centres.size() - 1);
        std::vector<double> e(centres.size() + 1);
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = centres.front() - 0.5 * w + static_cast<double>(i) * w;
        return e;
    };
    h.q_edges = edges(qs);
    h.p_edges = edges(ps);
    const double area = h.bin_area();

    double nu = 0.0, best = 0.0;
    for (const auto& r : rows) {
        const double p = r.Q * area;
        if (p > 0.0 && p < 1.0 && r.s > 0.0 && p * (1.0 - p) > best) {
            best = p * (1.0 - p);
            nu = best / ((r.s * area) * (r.s * area));
        }
    }
    if (!(nu > 0.0)) throw Error(path + ": cannot infer the sample count");
    const double nu_rounded = std::round(nu);
    h.counts.assign(h.bins(), 0);
    std::uint64_t total = 0;
    for (const auto& r : rows) {
        const auto c = static_cast<std::uint64_t>(std::llround(r.Q * area * nu_rounded));
        h.counts[h.index(qs.at(r.q), ps.at(r.p))] = c;
        total += c;
    }
    h.total_count = total;
    return h;
}

}  // namespace polcoh

#endif  // POLCOH_HOMODYNE_HISTOGRAM_HPP
