/**
 *  @file   kspace.hpp
 *  @brief  Projection of the field on plane-wave modes and the k = 0 window.
 */

#ifndef POLCOH_OBSERVABLES_KSPACE_HPP
#define POLCOH_OBSERVABLES_KSPACE_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "polcoh/error.hpp"
#include "polcoh/twa/fft.hpp"
#include "polcoh/twa/field.hpp"
#include "polcoh/twa/model.hpp"

namespace polcoh {

/**
 * beta_k = V^{-1/2} dV sum_r exp(-i k r) psi(r) for every grid mode, in FFT
 * order. The phase reference is the grid index origin.
 */
inline std::vector<std::complex<double>> project_to_kspace(const std::vector<std::complex<double>>& psi,
                                                           const twa::SimulationGrid& grid, twa::Fft2D& fft) {
    if (psi.size() != grid.cells() || fft.side() != grid.n_side) {
        throw DomainError("project_to_kspace: field does not match grid");
    }
    std::vector<std::complex<double>> beta(grid.cells());
    fft.forward(psi, beta);
    const double scale = grid.cell_volume() / std::sqrt(grid.volume());
    for (auto& b : beta) b *= scale;
    return beta;
}

inline std::vector<std::complex<double>> project_to_kspace(const twa::FieldState& s, const twa::SimulationGrid& grid) {
    twa::Fft2D fft(grid.n_side);
    return project_to_kspace(s.psi, grid, fft);
}

/// Square of side x side modes centred on k = 0 (side odd).
struct KSpaceWindow {
    std::size_t side = 3;

    std::size_t modes() const { return side * side; }

    void validate(const twa::SimulationGrid& grid) const {
        if (side % 2 == 0 || side == 0) throw DomainError("k-space window side must be odd");
        if (side > grid.n_side) throw DomainError("k-space window larger than the grid");
    }

    /// FFT-order flat indices of the window modes, row-major over (ky, kx).
    std::vector<std::size_t> indices(const twa::SimulationGrid& grid) const {
        validate(grid);
        const auto n = static_cast<std::ptrdiff_t>(grid.n_side);
        const auto h = static_cast<std::ptrdiff_t>(side / 2);
        std::vector<std::size_t> out;
        out.reserve(modes());
        for (std::ptrdiff_t dy = -h; dy <= h; ++dy) {
            for (std::ptrdiff_t dx = -h; dx <= h; ++dx) {
                const auto iy = (dy + n) % n;
                const auto ix = (dx + n) % n;
                out.push_back(static_cast<std::size_t>(iy * n + ix));
            }
        }
        return out;
    }
};

}  // namespace polcoh

#endif  // POLCOH_OBSERVABLES_KSPACE_HPP
