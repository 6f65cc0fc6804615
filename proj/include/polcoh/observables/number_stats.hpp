/**
 *  @file   number_stats.hpp
 *  @brief  Condensate number statistics in a k-space window with
 *          trajectory-level jackknife errors.
 */

#ifndef POLCOH_OBSERVABLES_NUMBER_STATS_HPP
#define POLCOH_OBSERVABLES_NUMBER_STATS_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "polcoh/error.hpp"
#include "polcoh/observables/kspace.hpp"
#include "polcoh/observables/ordering.hpp"
#include "polcoh/observables/statistics.hpp"
#include "polcoh/twa/ensemble.hpp"

namespace polcoh {

/// |b_j|^2 of the window modes: samples[trajectory][snapshot][mode].
using WindowSamples = std::vector<std::vector<std::vector<double>>>;

inline WindowSamples extract_window_samples(const twa::TrajectoryEnsemble& ens, const KSpaceWindow& window) {
    const auto idx = window.indices(ens.grid);
    twa::Fft2D fft(ens.grid.n_side);
    WindowSamples out;
    out.reserve(ens.trajectories.size());
    for (const auto& traj : ens.trajectories) {
        auto& t = out.emplace_back();
        t.reserve(traj.snapshots.size());
        for (const auto& snap : traj.snapshots) {
            const auto beta = project_to_kspace(snap.psi, ens.grid, fft);
            auto& row = t.emplace_back(idx.size());
            for (std::size_t j = 0; j < idx.size(); ++j) row[j] = std::norm(beta[idx[j]]);
        }
    }
    return out;
}

namespace detail {

// Flattened per-trajectory sums: [count, s_j..., s_jj..., s_jk (row-major)].
inline std::vector<double> trajectory_moment_sums(const std::vector<std::vector<double>>& snaps, std::size_t np) {
    std::vector<double> s(1 + 2 * np + np * np, 0.0);
    for (const auto& w : snaps) {
        if (w.size() != np) throw DomainError("window samples with inconsistent mode count");
        s[0] += 1.0;
        for (std::size_t j = 0; j < np; ++j) {
            s[1 + j] += w[j];
            s[1 + np + j] += w[j] * w[j];
            for (std::size_t k = 0; k < np; ++k) s[1 + 2 * np + j * np + k] += w[j] * w[k];
        }
    }
    return s;
}

inline WindowWignerMoments moments_from_sums(const std::vector<double>& s, std::size_t np) {
    WindowWignerMoments m;
    const double n = s[0];
    m.second.resize(np);
    m.fourth.resize(np);
    m.cross.assign(np, std::vector<double>(np));
    for (std::size_t j = 0; j < np; ++j) {
        m.second[j] = s[1 + j] / n;
        m.fourth[j] = s[1 + np + j] / n;
        for (std::size_t k = 0; k < np; ++k) m.cross[j][k] = s[1 + 2 * np + j * np + k] / n;
    }
    return m;
}

// Pairwise sum over trajectories of each component, skipping `skip`.
inline std::vector<double> combine_sums(const std::vector<std::vector<double>>& per_traj, std::size_t skip) {
    const std::size_t d = per_traj.front().size();
    std::vector<double> out(d);
    std::vector<double> col;
    col.reserve(per_traj.size());
    for (std::size_t c = 0; c < d; ++c) {
        col.clear();
        for (std::size_t t = 0; t < per_traj.size(); ++t) {
            if (t != skip) col.push_back(per_traj[t][c]);
        }
        out[c] = pairwise_sum(col);
    }
    return out;
}

}  // namespace detail

struct NumberStats {
    double mean_n_c = 0.0;
    double var_n_c = 0.0;
    double err_mean_n_c = 0.0;
    double err_var_n_c = 0.0;
    double cov_mean_var = 0.0;
    std::size_t modes = 0;
    std::size_t trajectories = 0;
    std::size_t snapshots = 0;
};

/**
 * <n_c> = <N> / N_p and <(dn_c)^2> = <(dN)^2> / N_p, normally ordered.
 * Errors come from leave-one-trajectory-out jackknife replicates.
 */
inline NumberStats condensate_number_stats(const WindowSamples& samples) {
    if (samples.size() < 2) throw InsufficientData("condensate_number_stats: need at least 2 trajectories");
    std::size_t total = 0;
    std::size_t np = 0;
    for (const auto& t : samples) {
        total += t.size();
        if (!t.empty()) np = t.front().size();
    }
    if (total < 8) throw InsufficientData("condensate_number_stats: fewer than 8 steady-state snapshots");
    if (np == 0) throw InsufficientData("condensate_number_stats: empty window");

    std::vector<std::vector<double>> per_traj;
    per_traj.reserve(samples.size());
    for (const auto& t : samples) per_traj.push_back(detail::trajectory_moment_sums(t, np));

    const double npd = static_cast<double>(np);
    auto evaluate = [&](std::size_t skip) {
        const auto sums = detail::combine_sums(per_traj, skip);
        if (sums[0] <= 0.0) throw InsufficientData("condensate_number_stats: empty jackknife replicate");
        const auto nm = wigner_to_normal_moments(detail::moments_from_sums(sums, np));
        return std::vector<double>{nm.mean_N / npd, nm.var_N / npd};
    };

    NumberStats out;
    const auto full = evaluate(per_traj.size());
    out.mean_n_c = full[0];
    out.var_n_c = full[1];
    std::vector<std::vector<double>> reps;
    reps.reserve(per_traj.size());
    for (std::size_t t = 0; t < per_traj.size(); ++t) reps.push_back(evaluate(t));
    const auto cov = jackknife_covariance(reps);
    out.err_mean_n_c = std::sqrt(cov[0][0]);
    out.err_var_n_c = std::sqrt(cov[1][1]);
    out.cov_mean_var = cov[0][1];
    out.modes = np;
    out.trajectories = samples.size();
    out.snapshots = total;
    return out;
}

inline NumberStats condensate_number_stats(const twa::TrajectoryEnsemble& ens, const KSpaceWindow& window) {
    return condensate_number_stats(extract_window_samples(ens, window));
}

/// Per-mode normally ordered occupation <|b_j|^2>_W - 1/2 with jackknife errors.
inline std::vector<MeanError> mode_occupations(const WindowSamples& samples) {
    if (samples.size() < 2) throw InsufficientData("mode_occupations: need at least 2 trajectories");
    std::size_t np = 0;
    for (const auto& t : samples) {
        if (!t.empty()) np = t.front().size();
    }
    std::vector<std::vector<double>> per_traj;
    for (const auto& t : samples) per_traj.push_back(detail::trajectory_moment_sums(t, np));
    auto evaluate = [&](std::size_t skip) {
        const auto s = detail::combine_sums(per_traj, skip);
        std::vector<double> occ(np);
        for (std::size_t j = 0; j < np; ++j) occ[j] = s[1 + j] / s[0] - 0.5;
        return occ;
    };
    const auto full = evaluate(per_traj.size());
    std::vector<std::vector<double>> reps;
    for (std::size_t t = 0; t < per_traj.size(); ++t) reps.push_back(evaluate(t));
    const auto cov = jackknife_covariance(reps);
    std::vector<MeanError> out(np);
    for (std::size_t j = 0; j < np; ++j) out[j] = {full[j], std::sqrt(cov[j][j])};
    return out;
}

}  // namespace polcoh

#endif  // POLCOH_OBSERVABLES_NUMBER_STATS_HPP
