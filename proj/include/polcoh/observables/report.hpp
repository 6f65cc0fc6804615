/**
 *  @file   report.hpp
 *  @brief  Per-pump coherence report and its CSV emitters.
 */

#ifndef POLCOH_OBSERVABLES_REPORT_HPP
#define POLCOH_OBSERVABLES_REPORT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "polcoh/coherence/displaced_thermal.hpp"
#include "polcoh/error.hpp"
#include "polcoh/observables/g1.hpp"
#include "polcoh/observables/number_stats.hpp"

namespace polcoh {

struct CoherenceReport {
    double pump_ratio = 0.0;
    double mean_n_c = 0.0, err_mean_n_c = 0.0;
    double var_n_c = 0.0, err_var_n_c = 0.0;
    double nbar = 0.0, err_nbar = 0.0;
    double alpha0_sq = 0.0, err_alpha0_sq = 0.0;
    double g2 = 0.0, err_g2 = 0.0;
    double coherence_C = 0.0, err_C = 0.0;
    bool clamped = false;
    std::string warning;
};

namespace detail {

struct ReportValues {
    double nbar, alpha0_sq, g2, c;
};

inline ReportValues report_values(double mean, double var) {
    const auto d = decompose_photon_moments(mean, var);
    ReportValues v{d.nbar, d.alpha0_sq, std::numeric_limits<double>::quiet_NaN(), coherence(d.nbar, d.alpha0_sq)};
    if (d.nbar + d.alpha0_sq > 0.0) v.g2 = g2_displaced_thermal(d.nbar, d.alpha0_sq);
    return v;
}

}  // namespace detail

/**
 * Decompose (<n_c>, Var n_c) onto the displaced-thermal family and evaluate
 * g2 and C. Errors: first-order propagation through the analytic Jacobian of
 * the decomposition using the (mean, var) covariance; on the clamped boundary,
 * where that Jacobian is singular, the half-spread over the one-sigma corners
 * of (mean, var) is reported instead.
 */
inline CoherenceReport coherence_report(const NumberStats& st, double pump_ratio) {
    CoherenceReport r;
    r.pump_ratio = pump_ratio;
    r.mean_n_c = st.mean_n_c;
    r.err_mean_n_c = st.err_mean_n_c;
    r.var_n_c = st.var_n_c;
    r.err_var_n_c = st.err_var_n_c;

    const auto d = decompose_photon_moments(st.mean_n_c, st.var_n_c);
    r.clamped = d.clamped;
    r.warning = d.warning;
    r.nbar = d.nbar;
    r.alpha0_sq = d.alpha0_sq;
    r.coherence_C = coherence(d.nbar, d.alpha0_sq);
    if (d.nbar + d.alpha0_sq > 0.0) {
        r.g2 = g2_displaced_thermal(d.nbar, d.alpha0_sq);
    } else {
        r.g2 = std::numeric_limits<double>::quiet_NaN();
        r.warning += (r.warning.empty() ? "" : "; ") + std::string("vacuum window: g2 undefined");
    }

    const double s = std::max(st.mean_n_c, 0.0);
    const double root = std::sqrt(std::max(0.0, s * s + s - st.var_n_c));
    const double ss = st.err_mean_n_c * st.err_mean_n_c;
    const double vv = st.err_var_n_c * st.err_var_n_c;
    const double sv = st.cov_mean_var;
    if (!d.clamped && root > 1e-9 * (1.0 + s)) {
        // d(nbar, a2) / d(s, v)
        const double a = (2.0 * s + 1.0) / (2.0 * root);
        const double b = 1.0 / (2.0 * root);
        const std::array<double, 2> jn{1.0 - a, b};
        const std::array<double, 2> ja{a, -b};
        auto propagate = [&](std::array<double, 2> j) {
            return std::sqrt(std::max(0.0, j[0] * j[0] * ss + 2.0 * j[0] * j[1] * sv + j[1] * j[1] * vv));
        };
        r.err_nbar = propagate(jn);
        r.err_alpha0_sq = propagate(ja);
        const auto gg = g2_gradient(d.nbar, d.alpha0_sq);
        const auto gc = coherence_gradient(d.nbar, d.alpha0_sq);
        r.err_g2 = propagate({gg.d_nbar * jn[0] + gg.d_alpha0_sq * ja[0], gg.d_nbar * jn[1] + gg.d_alpha0_sq * ja[1]});
        r.err_C = propagate({gc.d_nbar * jn[0] + gc.d_alpha0_sq * ja[0], gc.d_nbar * jn[1] + gc.d_alpha0_sq * ja[1]});
    } else {
        double lo[4], hi[4];
        std::fill(lo, lo + 4, std::numeric_limits<double>::infinity());
        std::fill(hi, hi + 4, -std::numeric_limits<double>::infinity());
        for (int i : {-1, 1}) {
            for (int k : {-1, 1}) {
                const auto v = detail::report_values(st.mean_n_c + i * st.err_mean_n_c, st.var_n_c + k * st.err_var_n_c);
                const double vals[4] = {v.nbar, v.alpha0_sq, v.g2, v.c};
                for (int q = 0; q < 4; ++q) {
                    if (std::isnan(vals[q])) continue;
                    lo[q] = std::min(lo[q], vals[q]);
                    hi[q] = std::max(hi[q], vals[q]);
                }
            }
        }
        auto half = [&](int q) { return hi[q] >= lo[q] ? 0.5 * (hi[q] - lo[q]) : 0.0; };
        r.err_nbar = half(0);
        r.err_alpha0_sq = half(1);
        r.err_g2 = half(2);
        r.err_C = half(3);
    }
    return r;
}

inline CoherenceReport coherence_report(const twa::TrajectoryEnsemble& ens, const KSpaceWindow& window,
                                        double pump_ratio) {
    return coherence_report(condensate_number_stats(ens, window), pump_ratio);
}

inline constexpr const char* kReportCsvHeader =
    "pump_ratio,mean_n_c,err_mean_n_c,var_n_c,err_var_n_c,nbar,err_nbar,alpha0_sq,err_alpha0_sq,g2,err_g2,C,err_C,"
    "clamped";

inline void write_report_csv(std::ostream& out, const std::vector<CoherenceReport>& rows) {
    out << kReportCsvHeader << '\n' << std::setprecision(10);
    for (const auto& r : rows) {
        out << r.pump_ratio << ',' << r.mean_n_c << ',' << r.err_mean_n_c << ',' << r.var_n_c << ',' << r.err_var_n_c
            << ',' << r.nbar << ',' << r.err_nbar << ',' << r.alpha0_sq << ',' << r.err_alpha0_sq << ',' << r.g2
            << ',' << r.err_g2 << ',' << r.coherence_C << ',' << r.err_C << ',' << (r.clamped ? 1 : 0) << '\n';
    }
}

inline constexpr const char* kG1CsvHeader = "pump_ratio,distance,g1,err";

struct G1Series {
    double pump_ratio = 0.0;
    std::vector<G1Point> points;
};

inline void write_g1_csv(std::ostream& out, const std::vector<G1Series>& series) {
    out << kG1CsvHeader << '\n' << std::setprecision(10);
    for (const auto& s : series) {
        for (const auto& p : s.points) out << s.pump_ratio << ',' << p.distance << ',' << p.g1 << ',' << p.error << '\n';
    }
}

}  // namespace polcoh

#endif  // POLCOH_OBSERVABLES_REPORT_HPP
