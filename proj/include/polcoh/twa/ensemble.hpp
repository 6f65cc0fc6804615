/**
 *  @file   ensemble.hpp
 *  @brief  Trajectories and ensembles of independently seeded realizations.
 */

#ifndef POLCOH_TWA_ENSEMBLE_HPP
#define POLCOH_TWA_ENSEMBLE_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "polcoh/error.hpp"
#include "polcoh/twa/field.hpp"
#include "polcoh/twa/model.hpp"
#include "polcoh/twa/rng.hpp"
#include "polcoh/twa/stepper.hpp"

namespace polcoh::twa {

struct Trajectory {
    std::size_t index = 0;
    std::vector<FieldState> snapshots;
};

struct TrajectoryEnsemble {
    SimulationGrid grid;
    ModelParams params;
    PumpProfile pump;
    TrajectoryConfig config;
    std::vector<Trajectory> trajectories;  ///< ordered by index, failed ones omitted
    std::vector<std::size_t> failed;       ///< indices that blew up

    std::size_t snapshot_total() const {
        std::size_t n = 0;
        for (const auto& t : trajectories) n += t.snapshots.size();
        return n;
    }
};

/// Stream tag that separates trajectory noise from any other use of the same seed.
inline constexpr std::uint32_t kTrajectoryStreamTag = 0x54574131u;

/**
 * One realization from the Wigner vacuum. Snapshots are taken every
 * snapshot_stride steps once the burn-in has elapsed.
 */
inline Trajectory run_trajectory(const TrajectoryConfig& config, const ModelParams& params, const PumpProfile& pump,
                                 const SimulationGrid& grid, std::size_t trajectory_index) {
    config.validate();
    RandomStream rng(config.seed, trajectory_index, kTrajectoryStreamTag);
    TwaStepper stepper(params, pump, grid);
    FieldState state = init_vacuum_state(grid, rng);

    Trajectory out;
    out.index = trajectory_index;
    out.snapshots.reserve(config.snapshot_count());
    const std::size_t steps = config.total_steps();
    const std::size_t burn = config.burn_in_steps();
    for (std::size_t k = 1; k <= steps; ++k) {
        try {
            stepper.step(state, config.dt, &rng, k, config.noise_substeps);
        } catch (const NumericalBlowup& e) {
            throw NumericalBlowup(e.what(), e.step(), trajectory_index);
        }
        if (k > burn && (k - burn) % config.snapshot_stride == 0) out.snapshots.push_back(state);
    }
    return out;
}

/// Run `realizations` trajectories on `threads` workers (0 = hardware concurrency).
inline TrajectoryEnsemble run_ensemble(const TrajectoryConfig& config, const ModelParams& params,
                                       const PumpProfile& pump, const SimulationGrid& grid,
                                       std::size_t threads = 0,
                                       const std::function<void(std::size_t)>& on_done = {}) {
    config.validate();
    if (config.realizations < 2) throw DomainError("run_ensemble: need at least 2 realizations");
    const std::size_t count = config.realizations;
    if (threads == 0) threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    threads = std::min(threads, count);

    std::vector<std::optional<Trajectory>> slots(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                slots[i] = run_trajectory(config, params, pump, grid, i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
            if (on_done) on_done(i);
        }
    };
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
    }

    TrajectoryEnsemble ens{grid, params, pump, config, {}, {}};
    for (std::size_t i = 0; i < count; ++i) {
        if (slots[i]) {
            ens.trajectories.push_back(std::move(*slots[i]));
            continue;
        }
        try {
            std::rethrow_exception(errors[i]);
        } catch (const NumericalBlowup&) {
            ens.failed.push_back(i);
        }
    }
    if (10 * ens.failed.size() > count) {
        throw NumericalBlowup("run_ensemble: " + std::to_string(ens.failed.size()) + " of " + std::to_string(count) +
                                  " trajectories blew up",
                              0, ens.failed.front());
    }
    return ens;
}

}  // namespace polcoh::twa

#endif  // POLCOH_TWA_ENSEMBLE_HPP
