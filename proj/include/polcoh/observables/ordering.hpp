/**
 *  @file   ordering.hpp
 *  @brief  Symmetric (Wigner) to normal ordering of window number moments.
 */

#ifndef POLCOH_OBSERVABLES_ORDERING_HPP
#define POLCOH_OBSERVABLES_ORDERING_HPP

#include <cstddef>
#include <vector>

#include "polcoh/error.hpp"

namespace polcoh {

/// Symmetric-ordered moments of the window modes: <|b_j|^2>_W, <|b_j|^4>_W, <|b_j|^2 |b_k|^2>_W.
struct WindowWignerMoments {
    std::vector<double> second;              ///< per mode
    std::vector<double> fourth;              ///< per mode
    std::vector<std::vector<double>> cross;  ///< full matrix, diagonal unused
};

struct NormalNumberMoments {
    double mean_N = 0.0;
    double second_N = 0.0;  ///< <N^2>
    double var_N = 0.0;
};

/**
 * Per mode <n> = <|b|^2>_W - 1/2 and <n^2> = <|b|^4>_W - <|b|^2>_W;
 * for j != k, <n_j n_k> = <|b_j|^2 |b_k|^2>_W - (<|b_j|^2>_W + <|b_k|^2>_W) / 2 + 1/4.
 */
inline NormalNumberMoments wigner_to_normal_moments(const WindowWignerMoments& m) {
    const std::size_t np = m.second.size();
    if (np == 0 || m.fourth.size() != np) throw DomainError("wigner_to_normal_moments: inconsistent mode count");
    if (np > 1 && m.cross.size() != np) throw DomainError("wigner_to_normal_moments: cross moments missing");
    NormalNumberMoments out;
    for (std::size_t j = 0; j < np; ++j) {
        out.mean_N += m.second[j] - 0.5;
        out.second_N += m.fourth[j] - m.second[j];
        for (std::size_t k = 0; k < np; ++k) {
            if (k == j) continue;
            out.second_N += m.cross[j][k] - 0.5 * (m.second[j] + m.second[k]) + 0.25;
        }
    }
    out.var_N = out.second_N - out.mean_N * out.mean_N;
    return out;
}

}  // namespace polcoh

#endif  // POLCOH_OBSERVABLES_ORDERING_HPP
