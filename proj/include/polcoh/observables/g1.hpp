/**
 *  @file   g1.hpp
 *  @brief  Equal-time first-order spatial coherence from ensemble snapshots.
 */

#ifndef POLCOH_OBSERVABLES_G1_HPP
#define POLCOH_OBSERVABLES_G1_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "polcoh/error.hpp"
#include "polcoh/observables/statistics.hpp"
#include "polcoh/twa/ensemble.hpp"

namespace polcoh {

namespace detail {

struct CellPairSums {
    std::complex<double> cross{0.0, 0.0};  // sum psi*(a) psi(b)
    double dens_a = 0.0;
    double dens_b = 0.0;
    double count = 0.0;
};

inline std::size_t nearest_cell(const twa::SimulationGrid& g, double x, double y) {
    const auto n = static_cast<long>(g.n_side);
    auto wrap = [n](long i) { return static_cast<std::size_t>(((i % n) + n) % n); };
    const long ix = std::lround(x / g.spacing()) + n / 2;
    const long iy = std::lround(y / g.spacing()) + n / 2;
    return wrap(iy) * g.n_side + wrap(ix);
}

// Normally ordered g1 between the cells of one accumulated pair; symmetric
// densities lose 1/(2 dV), the cross term needs no correction for a != b.
inline std::complex<double> g1_from_sums(const CellPairSums& s, double vacuum, bool same_cell) {
    if (same_cell) return {1.0, 0.0};
    const double na = s.dens_a / s.count - vacuum;
    const double nb = s.dens_b / s.count - vacuum;
    if (!(na > 0.0) || !(nb > 0.0)) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
    return (s.cross / s.count) / std::sqrt(na * nb);
}

}  // namespace detail

/// Complex g1(r_a, r_b) between two grid cells (flat indices).
inline std::complex<double> g1_cells(const twa::TrajectoryEnsemble& ens, std::size_t a, std::size_t b) {
    if (a >= ens.grid.cells() || b >= ens.grid.cells()) throw DomainError("g1_cells: cell index out of range");
    detail::CellPairSums s;
    for (const auto& t : ens.trajectories) {
        for (const auto& snap : t.snapshots) {
            s.cross += std::conj(snap.psi[a]) * snap.psi[b];
            s.dens_a += std::norm(snap.psi[a]);
            s.dens_b += std::norm(snap.psi[b]);
            s.count += 1.0;
        }
    }
    if (s.count == 0.0) throw InsufficientData("g1_cells: empty ensemble");
    return detail::g1_from_sums(s, 0.5 / ens.grid.cell_volume(), a == b);
}

struct G1Point {
    double distance = 0.0;
    double g1 = 0.0;
    double error = 0.0;
};

/**
 * |g1| between the cell nearest to (cx, cy) and cells on a circle of each
 * requested radius, averaged over the azimuth. Errors are leave-one-trajectory-out
 * jackknife estimates.
 */
inline std::vector<G1Point> g1_spatial(const twa::TrajectoryEnsemble& ens, double cx, double cy,
                                       const std::vector<double>& distances) {
    const auto& g = ens.grid;
    if (ens.trajectories.size() < 2) throw InsufficientData("g1_spatial: need at least 2 trajectories");
    const std::size_t center = detail::nearest_cell(g, cx, cy);
    const double vacuum = 0.5 / g.cell_volume();

    std::vector<std::vector<std::size_t>> rings;
    for (double d : distances) {
        if (!(d >= 0.0) || d > 0.5 * g.length) throw DomainError("g1_spatial: distance outside [0, L/2]");
        const auto m = static_cast<std::size_t>(std::max(8.0, std::ceil(2.0 * std::numbers::pi * d / g.spacing())));
        auto& ring = rings.emplace_back();
        for (std::size_t k = 0; k < m; ++k) {
            const double th = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
            ring.push_back(detail::nearest_cell(g, cx + d * std::cos(th), cy + d * std::sin(th)));
        }
    }

    // sums[trajectory][ring][member]
    const std::size_t nt = ens.trajectories.size();
    std::vector<std::vector<std::vector<detail::CellPairSums>>> sums(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        sums[t].resize(rings.size());
        for (std::size_t r = 0; r < rings.size(); ++r) sums[t][r].resize(rings[r].size());
        for (const auto& snap : ens.trajectories[t].snapshots) {
            const auto pc = snap.psi[center];
            for (std::size_t r = 0; r < rings.size(); ++r) {
                for (std::size_t k = 0; k < rings[r].size(); ++k) {
                    auto& s = sums[t][r][k];
                    const auto pb = snap.psi[rings[r][k]];
                    s.cross += std::conj(pc) * pb;
                    s.dens_a += std::norm(pc);
                    s.dens_b += std::norm(pb);
                    s.count += 1.0;
                }
            }
        }
    }

    auto evaluate = [&](std::size_t skip) {
        std::vector<double> out(rings.size());
        for (std::size_t r = 0; r < rings.size(); ++r) {
            std::vector<double> mags(rings[r].size());
            for (std::size_t k = 0; k < rings[r].size(); ++k) {
                detail::CellPairSums tot;
                for (std::size_t t = 0; t < nt; ++t) {
                    if (t == skip) continue;
                    const auto& s = sums[t][r][k];
                    tot.cross += s.cross;
                    tot.dens_a += s.dens_a;
                    tot.dens_b += s.dens_b;
                    tot.count += s.count;
                }
                mags[k] = std::abs(detail::g1_from_sums(tot, vacuum, rings[r][k] == center));
            }
            out[r] = pairwise_sum(mags) / static_cast<double>(mags.size());
        }
        return out;
    };

    const auto full = evaluate(nt);
    std::vector<std::vector<double>> reps;
    for (std::size_t t = 0; t < nt; ++t) reps.push_back(evaluate(t));
    const auto cov = jackknife_covariance(reps);
    std::vector<G1Point> out(rings.size());
    for (std::size_t r = 0; r < rings.size(); ++r) out[r] = {distances[r], full[r], std::sqrt(cov[r][r])};
    return out;
}

}  // namespace polcoh

#endif  // POLCOH_OBSERVABLES_G1_HPP
