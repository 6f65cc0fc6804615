/**
 *  @file   entanglement.hpp
 *  @brief  Coherence-to-entanglement conversion |n> -> |n> (x) |n>.
 */

#ifndef POLCOH_COHERENCE_ENTANGLEMENT_HPP
#define POLCOH_COHERENCE_ENTANGLEMENT_HPP

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "polcoh/error.hpp"

namespace polcoh {

struct SchmidtDecomposition {
    std::vector<double> coefficients;
    std::size_t rank = 0;
    double entropy_bits = 0.0;
};

/**
 * Pair conversion maps sum psi_n |n> to sum psi_n |n>|n>, whose Schmidt
 * coefficients are |psi_n|. Entropy is -sum |psi_n|^2 log2 |psi_n|^2.
 */
inline SchmidtDecomposition pair_conversion_schmidt(std::span<const std::complex<double>> psi) {
    double norm = 0.0;
    for (const auto& c : psi) norm += std::norm(c);
    if (std::abs(norm - 1.0) > 1e-10) {
        throw NormalizationError("pair_conversion_schmidt: input norm " + std::to_string(norm) + " != 1");
    }
    SchmidtDecomposition out;
    out.coefficients.reserve(psi.size());
    for (const auto& c : psi) {
        const double lambda = std::abs(c);
        out.coefficients.push_back(lambda);
        if (lambda > 1e-12) ++out.rank;
        const double w = lambda * lambda;
        if (w > 0.0) out.entropy_bits -= w * std::log2(w);
    }
    return out;
}

}  // namespace polcoh

#endif  // POLCOH_COHERENCE_ENTANGLEMENT_HPP
