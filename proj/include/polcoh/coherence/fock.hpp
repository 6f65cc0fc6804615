/**
 *  @file   fock.hpp
 *  @brief  Truncated Fock-space density matrices and the brute-force
 *          Hilbert-Schmidt coherence.
 */

#ifndef POLCOH_COHERENCE_FOCK_HPP
#define POLCOH_COHERENCE_FOCK_HPP

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include "polcoh/coherence/displaced_thermal.hpp"
#include "polcoh/error.hpp"

namespace polcoh {

/**
 * Density matrix rho_{m,n} in the Fock basis |0>, ..., |dim-1>.
 * The truncation deficit records how much probability the cut discards.
 */
class FockDensityMatrix {
  public:
    static constexpr double kHermitianTol = 1e-12;

    FockDensityMatrix() = default;

    explicit FockDensityMatrix(Eigen::MatrixXcd elements, double truncation_deficit = 0.0)
        : rho_(std::move(elements)), deficit_(truncation_deficit) {
        if (rho_.rows() != rho_.cols()) throw InvariantError("density matrix must be square");
    }

    std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
    const Eigen::MatrixXcd& elements() const { return rho_; }
    std::complex<double> operator()(std::size_t m, std::size_t n) const {
        return rho_(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    }
    double population(std::size_t n) const { return (*this)(n, n).real(); }
    double truncation_deficit() const { return deficit_; }
    double trace() const { return rho_.trace().real(); }
    double purity() const { return (rho_ * rho_).trace().real(); }

    double hermiticity_defect() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }

    /// Throws InvariantError naming the first violated invariant.
    void validate() const {
        if (dim() == 0) throw InvariantError("density matrix is empty");
        if (hermiticity_defect() > kHermitianTol) {
            throw InvariantError("density matrix is not Hermitian");
        }
        const double tr = trace();
        if (tr > 1.0 + 1e-10 || tr < 1.0 - deficit_ - 1e-10) {
            throw InvariantError("density matrix trace " + std::to_string(tr) +
                                 " outside [1 - deficit, 1]");
        }
        for (Eigen::Index n = 0; n < rho_.rows(); ++n) {
            if (rho_(n, n).real() < -kHermitianTol || std::abs(rho_(n, n).imag()) > kHermitianTol) {
                throw InvariantError("density matrix diagonal must be real and non-negative");
            }
        }
    }

  private:
    Eigen::MatrixXcd rho_;
    double deficit_ = 0.0;
};

/// Annihilation operator truncated to dim levels.
inline Eigen::MatrixXcd annihilation_operator(std::size_t dim) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t n = 1; n < dim; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

/// Truncation guideline 8 (nbar + |alpha0|^2) + 32.
inline std::size_t recommended_truncation(const DisplacedThermalState& s) {
    return static_cast<std::size_t>(std::ceil(8.0 * s.mean_number())) + 32;
}

/**
 * D(alpha0) rho_th D(alpha0)^dagger in a dim-level Fock space.
 *
 * The displacement is the scaling-and-squaring matrix exponential of the
 * truncated generator alpha0 a^dagger - conj(alpha0) a. The reported deficit
 * is the cut thermal tail plus the population of the top eighth of the
 * levels, which is where boundary artefacts of the truncated exponential land.
 */
inline FockDensityMatrix build_displaced_thermal_density_matrix(const DisplacedThermalState& s,
                                                                std::size_t n_trunc,
                                                                double max_deficit = 1e-6) {
    s.validate();
    if (n_trunc == 0) throw DomainError("n_trunc must be positive");
    const auto dim = static_cast<Eigen::Index>(n_trunc);

    Eigen::VectorXd thermal(dim);
    const double ratio = s.nbar / (s.nbar + 1.0);
    double pn = 1.0 / (s.nbar + 1.0);
    double kept = 0.0;
    for (Eigen::Index n = 0; n < dim; ++n) {
        thermal(n) = pn;
        kept += pn;
        pn *= ratio;
    }
    const double thermal_tail = std::max(0.0, 1.0 - kept);

    Eigen::MatrixXcd rho;
    if (s.alpha0 == std::complex<double>(0.0, 0.0)) {
        rho = thermal.cast<std::complex<double>>().asDiagonal();
    } else {
        const Eigen::MatrixXcd a = annihilation_operator(n_trunc);
        const Eigen::MatrixXcd generator = s.alpha0 * a.adjoint() - std::conj(s.alpha0) * a;
        const Eigen::MatrixXcd d = generator.exp();
        rho = d * thermal.cast<std::complex<double>>().asDiagonal() * d.adjoint();
        rho = 0.5 * (rho + rho.adjoint()).eval();
    }

    double boundary = 0.0;
    const Eigen::Index top = dim - std::max<Eigen::Index>(1, dim / 8);
    for (Eigen::Index n = top; n < dim; ++n) boundary += rho(n, n).real();
    const double deficit = thermal_tail + boundary;
    if (deficit > max_deficit) {
        throw TruncationError("Fock truncation at " + std::to_string(n_trunc) +
                                  " levels leaves deficit " + std::to_string(deficit),
                              deficit);
    }
    return FockDensityMatrix(std::move(rho), deficit);
}

/// Incoherent counterpart: same diagonal, off-diagonals removed.
inline FockDensityMatrix dephase(const FockDensityMatrix& rho) {
    Eigen::MatrixXcd diag = rho.elements().diagonal().asDiagonal();
    return FockDensityMatrix(std::move(diag), rho.truncation_deficit());
}

/// Sum over m != n of |rho_{m,n}|^2.
inline double coherence_from_density_matrix(const FockDensityMatrix& rho) {
    if (rho.hermiticity_defect() > FockDensityMatrix::kHermitianTol) {
        throw InvariantError("coherence_from_density_matrix: input is not Hermitian");
    }
    const Eigen::MatrixXcd& m = rho.elements();
    double total = m.cwiseAbs2().sum();
    double diag = m.diagonal().cwiseAbs2().sum();
    return total - diag;
}

/// Pure state |psi><psi| from (normalized) Fock amplitudes.
inline FockDensityMatrix pure_state_density_matrix(const Eigen::VectorXcd& psi) {
    return FockDensityMatrix(psi * psi.adjoint(), std::max(0.0, 1.0 - psi.squaredNorm()));
}

/// Truncated coherent-state amplitudes e^{-|a|^2/2} a^n / sqrt(n!).
inline Eigen::VectorXcd coherent_state_amplitudes(std::complex<double> alpha, std::size_t dim) {
    Eigen::VectorXcd psi(static_cast<Eigen::Index>(dim));
    std::complex<double> c = std::exp(-0.5 * std::norm(alpha));
    for (std::size_t n = 0; n < dim; ++n) {
        psi(static_cast<Eigen::Index>(n)) = c;
        c *= alpha / std::sqrt(static_cast<double>(n + 1));
    }
    return psi;
}

}  // namespace polcoh

#endif  // POLCOH_COHERENCE_FOCK_HPP
