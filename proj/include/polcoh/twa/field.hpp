#ifndef POLCOH_TWA_FIELD_HPP
#define POLCOH_TWA_FIELD_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "polcoh/twa/model.hpp"
#include "polcoh/twa/rng.hpp"

namespace polcoh::twa {

/// Polariton field psi (um^-1) and reservoir density n_res (um^-2) on the grid, row-major (y, x).
struct FieldState {
    std::vector<std::complex<double>> psi;
    std::vector<double> n_res;
    double time = 0.0;
    std::size_t clipped_cells = 0;  ///< cumulative count of negative reservoir values set to 0

    bool operator==(const FieldState&) const = default;
};

/// Wigner vacuum: each cell complex Gaussian with <|psi|^2> = 1/(2 dV); empty reservoir.
inline FieldState init_vacuum_state(const SimulationGrid& grid, RandomStream& rng) {
    grid.validate();
    FieldState s;
    const std::size_t n = grid.cells();
    s.psi.resize(n);
    s.n_res.assign(n, 0.0);
    const double sd = std::sqrt(1.0 / (4.0 * grid.cell_volume()));
    for (auto& v : s.psi) {
        const double re = rng.normal();
        const double im = rng.normal();
        v = {sd * re, sd * im};
    }
    return s;
}

/// Pump sampled on the grid cells.
inline std::vector<double> sample_pump(const PumpProfile& pump, const SimulationGrid& grid) {
    std::vector<double> out(grid.cells());
    for (std::size_t iy = 0; iy < grid.n_side; ++iy) {
        for (std::size_t ix = 0; ix < grid.n_side; ++ix) {
            out[iy * grid.n_side + ix] = pump(grid.coordinate(ix), grid.coordinate(iy));
        }
    }
    return out;
}

}  // namespace polcoh::twa

#endif  // POLCOH_TWA_FIELD_HPP
