#include <gtest/gtest.h>

#include <gsl/gsl_integration.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "polcoh/coherence.hpp"

using namespace polcoh;
using cd = std::complex<double>;

namespace {

// ---- independent oracles -------------------------------------------------

double poisson(std::size_t n, double mean) {
    return std::exp(static_cast<double>(n) * std::log(mean) - mean - std::lgamma(n + 1.0));
}

// <n|rho|n> = \int_0^inf 2 pi r P_inc(r) r^{2n} e^{-r^2} / n! dr with adaptive QAGS.
double radial_population_oracle(double nbar, double alpha0_sq, std::size_t n) {
    struct Ctx {
        double nbar, a0;
        std::size_t n;
    } ctx{nbar, std::sqrt(alpha0_sq), n};
    gsl_function f;
    f.params = &ctx;
    f.function = [](double r, void* p) -> double {
        auto* c = static_cast<Ctx*>(p);
        if (r <= 0.0) return 0.0;
        const double arg = 2.0 * r * c->a0 / c->nbar;
        // P_inc(r) = exp(-(r^2 + a0^2)/nbar) I0(arg) / (pi nbar), computed in log form
        const double log_i0 = arg + std::log(gsl_sf_bessel_I0_scaled(arg));
        const double log_p = -(r * r + c->a0 * c->a0) / c->nbar + log_i0 - std::log(std::numbers::pi * c->nbar);
        const double log_overlap = 2.0 * c->n * std::log(r) - r * r - std::lgamma(c->n + 1.0);
        return 2.0 * std::numbers::pi * r * std::exp(log_p + log_overlap);
    };
    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(2000);
    double result = 0.0, err = 0.0;
    gsl_integration_qagiu(&f, 0.0, 1e-14, 1e-12, 2000, ws, &result, &err);
    gsl_integration_workspace_free(ws);
    return result;
}

// <n(n-1)> / <n>^2 from the populations of a density matrix.
double g2_from_populations(const FockDensityMatrix& rho) {
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t n = 0; n < rho.dim(); ++n) {
        const double p = rho.population(n);
        m1 += n * p;
        m2 += n * (n - 1.0) * p;
    }
    return m2 / (m1 * m1);
}

}  // namespace

// ---- closed-form coherence -----------------------------------------------

TEST(CoherenceClosedForm, VanishesWithoutDisplacement) {
    EXPECT_EQ(coherence(3.7, 0.0), 0.0);
    EXPECT_EQ(coherence(DisplacedThermalState{{0.0, 0.0}, 3.7}), 0.0);
}

TEST(CoherenceClosedForm, ReproducesMeasuredPlateauValue) {
    // |alpha0|^2 = 53, nbar = 1.7 quoted as C = 0.208 +- 0.001
    EXPECT_NEAR(coherence(1.7, 53.0), 0.208, 0.001);
}

TEST(CoherenceClosedForm, MatchesFockSumForCoherentState) {
    const auto s = DisplacedThermalState::from_photon_numbers(0.0, 10.0);
    const auto rho = build_displaced_thermal_density_matrix(s, 256);
    EXPECT_NEAR(coherence(s), coherence_from_density_matrix(rho), 1e-8);
    EXPECT_NEAR(coherence(s), 0.910219688115174, 1e-12);
}

TEST(CoherenceClosedForm, NoOverflowForHugeAmplitude) {
    const double c = coherence(0.0, 1e6);
    EXPECT_TRUE(std::isfinite(c));
    EXPECT_GT(c, 0.99);
    EXPECT_GT(coherence(0.0, 1e4), 0.99);
}

TEST(CoherenceClosedForm, RejectsNegativeThermalOccupation) {
    EXPECT_THROW(coherence(-0.1, 1.0), DomainError);
    EXPECT_THROW(coherence(DisplacedThermalState{{1.0, 0.0}, -1.0}), DomainError);
}

TEST(CoherenceClosedForm, GradientMatchesFiniteDifferences) {
    for (double nbar : {0.0, 0.3, 1.7, 6.0}) {
        for (double a2 : {0.0, 0.5, 4.0, 53.0}) {
            const auto g = coherence_gradient(nbar, a2);
            const double h = 1e-6;
            const double dn = (coherence(nbar + h, a2) - coherence(std::max(0.0, nbar - h), a2)) /
                              (nbar + h - std::max(0.0, nbar - h));
            const double da = (coherence(nbar, a2 + h) - coherence(nbar, std::max(0.0, a2 - h))) /
                              (a2 + h - std::max(0.0, a2 - h));
            // one-sided at the nbar = 0 and a2 = 0 edges, hence O(h) slack
            EXPECT_NEAR(g.d_nbar, dn, 1e-5) << nbar << " " << a2;
            EXPECT_NEAR(g.d_alpha0_sq, da, 1e-5) << nbar << " " << a2;
            EXPECT_LE(g.d_nbar, 0.0);
            EXPECT_GE(g.d_alpha0_sq, 0.0);
        }
    }
}

TEST(CoherenceClosedForm, MonotoneOnDenseGrid) {
    constexpr int n = 120;
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i) grid[i] = 10.0 * i / (n - 1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double c = coherence(grid[i], grid[j]);
            EXPECT_GE(c, 0.0);
            EXPECT_LE(c, 1.0);
            if (j > 0) {
                EXPECT_GE(c, coherence(grid[i], grid[j - 1]));
            }
            if (i > 0) {
                EXPECT_LE(c, coherence(grid[i - 1], grid[j]));
            }
        }
    }
}

// ---- density matrices ------------------------------------------------------

TEST(DensityMatrix, DiagonalHasNoCoherence) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
    m.diagonal() << 0.1, 0.2, 0.3, 0.4;
    EXPECT_EQ(coherence_from_density_matrix(FockDensityMatrix(m)), 0.0);
}

TEST(DensityMatrix, PureCoherentStateMatchesPoissonSum) {
    const auto rho = pure_state_density_matrix(coherent_state_amplitudes({1.0, 0.0}, 64));
    double sum_p2 = 0.0;
    for (std::size_t n = 0; n < 64; ++n) sum_p2 += poisson(n, 1.0) * poisson(n, 1.0);
    EXPECT_NEAR(coherence_from_density_matrix(rho), 1.0 - sum_p2, 1e-13);
    EXPECT_NEAR(coherence_from_density_matrix(rho), 0.691491677446329, 1e-12);
}

TEST(DensityMatrix, BuiltMatrixMatchesClosedForm) {
    const auto s = DisplacedThermalState::from_photon_numbers(1.0, 4.0);
    const auto rho = build_displaced_thermal_density_matrix(s, 128);
    EXPECT_NEAR(coherence_from_density_matrix(rho), coherence(s), 1e-6);
    EXPECT_NEAR(rho.purity(), 1.0 / 3.0, 1e-9);
}

TEST(DensityMatrix, HilbertSchmidtIdentityHolds) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 10; ++k) {
        DisplacedThermalState s{std::polar(std::sqrt(6.0 * u(rng)), 6.28 * u(rng)), 3.0 * u(rng)};
        const auto rho = build_displaced_thermal_density_matrix(s, recommended_truncation(s));
        rho.validate();
        const auto inc = dephase(rho);
        EXPECT_NEAR(coherence_from_density_matrix(rho), rho.purity() - inc.purity(), 1e-12);
    }
}

TEST(DensityMatrix, RejectsNonHermitianInput) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 0) = 0.5;
    m(1, 1) = 0.5;
    m(0, 1) = 0.1;
    EXPECT_THROW(coherence_from_density_matrix(FockDensityMatrix(m)), InvariantError);
    EXPECT_THROW(FockDensityMatrix(m).validate(), InvariantError);
}

TEST(BuildDisplacedThermal, ThermalStateIsGeometric) {
    const auto rho = build_displaced_thermal_density_matrix({{0.0, 0.0}, 2.0}, 64);
    EXPECT_NEAR(rho.population(0), 1.0 / 3.0, 1e-15);
    for (std::size_t n = 1; n < 10; ++n) {
        EXPECT_NEAR(rho.population(n) / rho.population(n - 1), 2.0 / 3.0, 1e-14);
    }
    EXPECT_EQ(coherence_from_density_matrix(rho), 0.0);
}

TEST(BuildDisplacedThermal, CoherentStateIsPoisson) {
    const auto rho = build_displaced_thermal_density_matrix({{2.0, 0.0}, 0.0}, 64);
    for (std::size_t n = 0; n < 30; ++n) EXPECT_NEAR(rho.population(n), poisson(n, 4.0), 1e-12);
}

TEST(BuildDisplacedThermal, DiagonalMatchesRadialPhaseSpaceIntegral) {
    const auto rho = build_displaced_thermal_density_matrix({{1.0, 0.0}, 1.0}, 96);
    for (std::size_t n = 0; n < 25; ++n) {
        EXPECT_NEAR(rho.population(n), radial_population_oracle(1.0, 1.0, n), 1e-8) << n;
    }
}

TEST(BuildDisplacedThermal, InsufficientTruncationIsReported) {
    const auto s = DisplacedThermalState::from_photon_numbers(2.0, 30.0);
    try {
        build_displaced_thermal_density_matrix(s, 24);
        FAIL() << "expected TruncationError";
    } catch (const TruncationError& e) {
        EXPECT_GT(e.deficit(), 1e-6);
    }
}

TEST(Dephase, KeepsDiagonalAndRemovesCoherence) {
    const auto rho = build_displaced_thermal_density_matrix({{1.0, 0.0}, 0.0}, 48);
    const auto inc = dephase(rho);
    for (std::size_t n = 0; n < 20; ++n) EXPECT_NEAR(inc.population(n), poisson(n, 1.0), 1e-13);
    EXPECT_EQ(coherence_from_density_matrix(inc), 0.0);
    const auto twice = dephase(inc);
    EXPECT_EQ((twice.elements() - inc.elements()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Dephase, DiagonalMatchesPhaseAveragedRepresentation) {
    for (auto s : {DisplacedThermalState{{1.5, -0.5}, 0.7}, DisplacedThermalState{{0.0, 2.0}, 2.5}}) {
        const auto inc = dephase(build_displaced_thermal_density_matrix(s, recommended_truncation(s)));
        const auto pops = fock_populations_phase_space(s, 30);
        for (std::size_t n = 0; n < pops.size(); ++n) EXPECT_NEAR(inc.population(n), pops[n], 1e-8) << n;
    }
}

// ---- phase space ---------------------------------------------------------

TEST(PhaseSpace, PointRoundTrip) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 5.0);
    for (int i = 0; i < 100; ++i) {
        const PhaseSpacePoint p{g(rng), g(rng)};
        const auto back = PhaseSpacePoint::from_alpha(p.alpha());
        EXPECT_NEAR(back.q, p.q, 1e-14 * (1 + std::abs(p.q)));
        EXPECT_NEAR(back.p, p.p, 1e-14 * (1 + std::abs(p.p)));
    }
}

TEST(PhaseSpace, HusimiPeakOfCoherentState) {
    const DisplacedThermalState s{{1.2, 0.4}, 0.0};
    EXPECT_NEAR(phase_space_density(s, s.alpha0, Representation::Husimi), 1.0 / std::numbers::pi, 1e-15);
}

TEST(PhaseSpace, HusimiAtOriginForRingState) {
    const auto s = DisplacedThermalState::from_photon_numbers(1.7, 53.0);
    const double expected = std::exp(-53.0 / 2.7) / (2.7 * std::numbers::pi);
    EXPECT_NEAR(phase_space_density(s, PhaseSpacePoint{0.0, 0.0}, Representation::Husimi), expected,
                1e-12 * expected);
}

TEST(PhaseSpace, AllRepresentationsNormalized) {
    const DisplacedThermalState s{{0.8, -1.1}, 0.6};
    for (auto kind : {Representation::GlauberSudarshan, Representation::Wigner, Representation::Husimi}) {
        const double sigma = std::sqrt(0.5 * representation_width(s.nbar, kind));
        // the helper integrates over +-8 of its sigma argument: a 6 sigma box
        const double total = phase_space_integral(
            [&](cd a) { return phase_space_density(s, a, kind); }, s.alpha0, 0.75 * sigma);
        EXPECT_NEAR(total, 1.0, 1e-7);
    }
}

TEST(PhaseSpace, DegenerateGlauberSudarshan) {
    const DisplacedThermalState s{{1.0, 0.0}, 0.0};
    EXPECT_THROW(phase_space_density(s, cd{1.0, 0.0}, Representation::GlauberSudarshan), DomainError);
}

TEST(PhaseSpace, PurityIdentities) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> un(0.1, 5.0), ua(0.0, 20.0), ph(0.0, 6.28318);
    for (int k = 0; k < 8; ++k) {
        DisplacedThermalState s{std::polar(std::sqrt(ua(rng)), ph(rng)), un(rng)};
        const double expected = 1.0 / (2.0 * s.nbar + 1.0);
        EXPECT_NEAR(purity_from_p_and_q(s), expected, 1e-6);
        EXPECT_NEAR(purity_from_wigner(s), expected, 1e-6);
    }
}

TEST(PhaseAveragedHusimi, ReducesToThermalHusimi) {
    const DisplacedThermalState s{{0.0, 0.0}, 1.3};
    for (double r : {0.0, 0.5, 1.0, 3.0}) {
        const PhaseSpacePoint pt = PhaseSpacePoint::from_alpha({r, 0.0});
        EXPECT_NEAR(phase_averaged_husimi(s, pt), phase_space_density(s, pt, Representation::Husimi), 1e-15);
    }
}

TEST(PhaseAveragedHusimi, RingRadius) {
    const double a2 = 53.0, nbar = 1.7;
    double best_r = 0.0, best = -1.0;
    for (int i = 0; i <= 20000; ++i) {
        const double r = 5.0 + 5.0 * i / 20000.0;
        const double v = phase_averaged_husimi(nbar, a2, r);
        if (v > best) best = v, best_r = r;
    }
    EXPECT_NEAR(best_r, std::sqrt(a2), 0.02 * std::sqrt(a2));
    EXPECT_NEAR(std::sqrt(2.0 * a2), 10.4, 0.2);
}

TEST(PhaseAveragedHusimi, EqualsAngularAverage) {
    auto angular = [](const DisplacedThermalState& s, cd alpha, int points) {
        double acc = 0.0;
        for (int k = 0; k < points; ++k) {
            const cd rotated = alpha * std::polar(1.0, 2.0 * std::numbers::pi * k / points);
            acc += phase_space_density(s, rotated, Representation::Husimi);
        }
        return acc / points;
    };
    // small Bessel arguments: a 12-point rule is exact to rounding
    for (auto s : {DisplacedThermalState{{0.5, 0.2}, 1.0}, DisplacedThermalState{{0.0, 0.7}, 2.0}}) {
        for (double r : {0.1, 0.6, 1.2}) {
            const cd a{r, 0.0};
            EXPECT_NEAR(phase_averaged_husimi(s, PhaseSpacePoint::from_alpha(a)), angular(s, a, 12), 1e-10);
        }
    }
    // larger arguments need a finer periodic rule
    const auto ring = DisplacedThermalState::from_photon_numbers(1.7, 53.0);
    for (double r : {5.0, 7.0, 9.0}) {
        const cd a{r, 0.0};
        EXPECT_NEAR(phase_averaged_husimi(ring, PhaseSpacePoint::from_alpha(a)), angular(ring, a, 256), 1e-10);
    }
}

// ---- photon statistics -----------------------------------------------------

TEST(G2, Limits) {
    EXPECT_EQ(g2_displaced_thermal(1.0, 0.0), 2.0);
    EXPECT_EQ(g2_displaced_thermal(0.0, 9.0), 1.0);
    EXPECT_THROW(g2_displaced_thermal(0.0, 0.0), UndefinedStatistic);
}

TEST(G2, MatchesFockMatrixFactorialMoment) {
    const auto s = DisplacedThermalState::from_photon_numbers(2.0, 2.0);
    const auto rho = build_displaced_thermal_density_matrix(s, 64, 1e-5);
    EXPECT_NEAR(g2_displaced_thermal(s), 1.75, 1e-15);
    EXPECT_NEAR(g2_from_populations(rho), 1.75, 1e-6);
}

TEST(DecomposeMoments, BoundaryCases) {
    auto thermal = decompose_photon_moments(2.0, 6.0);
    EXPECT_NEAR(thermal.nbar, 2.0, 1e-14);
    EXPECT_NEAR(thermal.alpha0_sq, 0.0, 1e-14);
    EXPECT_FALSE(thermal.clamped);
    auto poissonian = decompose_photon_moments(5.0, 5.0);
    EXPECT_NEAR(poissonian.nbar, 0.0, 1e-14);
    EXPECT_NEAR(poissonian.alpha0_sq, 5.0, 1e-14);
}

TEST(DecomposeMoments, InvertsMeasuredFitValues) {
    const double var = photon_variance(1.7, 53.0);
    EXPECT_NEAR(var, 237.79, 1e-10);
    const auto d = decompose_photon_moments(54.7, var);
    EXPECT_NEAR(d.nbar, 1.7, 1e-10);
    EXPECT_NEAR(d.alpha0_sq, 53.0, 1e-10);
}

TEST(DecomposeMoments, RoundTripProperty) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 50.0);
    for (int i = 0; i < 1000; ++i) {
        const double nbar = u(rng) / 5.0, a2 = u(rng);
        const auto d = decompose_photon_moments(nbar + a2, photon_variance(nbar, a2));
        EXPECT_NEAR(d.nbar + d.alpha0_sq, nbar + a2, 1e-10);
        EXPECT_NEAR(photon_variance(d.nbar, d.alpha0_sq), photon_variance(nbar, a2), 1e-10 * (1 + a2 * nbar));
        EXPECT_NEAR(d.nbar, nbar, 1e-8);
    }
}

TEST(DecomposeMoments, ClampsOutOfModelPairs) {
    auto below = decompose_photon_moments(4.0, 3.5);
    EXPECT_TRUE(below.clamped);
    EXPECT_EQ(below.nbar, 0.0);
    EXPECT_EQ(below.alpha0_sq, 4.0);
    auto above = decompose_photon_moments(1.0, 2.5);
    EXPECT_TRUE(above.clamped);
    EXPECT_NEAR(above.nbar, 1.0, 1e-15);
    EXPECT_NEAR(above.alpha0_sq, 0.0, 1e-15);
    EXPECT_FALSE(above.warning.empty());
}

TEST(QuadratureMoments, VacuumAndDisplaced) {
    auto vac = quadrature_moments({{0.0, 0.0}, 0.0});
    EXPECT_EQ(vac.mean_q, 0.0);
    EXPECT_EQ(vac.var_q, 0.5);
    EXPECT_EQ(vac.var_p, 0.5);
    EXPECT_EQ(vac.cov_qp, 0.0);
    auto d = quadrature_moments({{1.0, 1.0}, 0.0});
    EXPECT_NEAR(d.mean_q, std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(d.mean_p, std::sqrt(2.0), 1e-15);
    const DisplacedThermalState s{{3.0, -4.0}, 1.2};
    auto m = quadrature_moments(s);
    EXPECT_NEAR((m.mean_q * m.mean_q + m.mean_p * m.mean_p) / 2.0, s.coherent_number(), 1e-12);
    EXPECT_NEAR(m.var_q, 1.7, 1e-15);
}

TEST(LinearCoupling, RescalesAndPreservesG2) {
    const auto s = DisplacedThermalState::from_photon_numbers(1.7, 53.0);
    const auto half = linear_coupling_map(s, {std::sqrt(0.5), 0.0});
    EXPECT_NEAR(half.coherent_number(), 26.5, 1e-12);
    EXPECT_NEAR(half.nbar, 0.85, 1e-15);
    EXPECT_NEAR(g2_displaced_thermal(half), g2_displaced_thermal(s), 1e-12);

    const auto same = linear_coupling_map(s, std::polar(1.0, 0.7));
    EXPECT_NEAR(same.coherent_number(), s.coherent_number(), 1e-12);
    EXPECT_NEAR(same.nbar, s.nbar, 1e-15);

    const auto lost = linear_coupling_map(s, {0.0, 0.0});
    EXPECT_EQ(lost.coherent_number(), 0.0);
    EXPECT_EQ(lost.nbar, 0.0);

    EXPECT_THROW(linear_coupling_map(s, {1.01, 0.0}), DomainError);
}

// ---- entanglement ------------------------------------------------------------

TEST(PairConversion, IncoherentInputHasNoEntanglement) {
    const std::vector<cd> psi{{1.0, 0.0}, {0.0, 0.0}};
    const auto r = pair_conversion_schmidt(psi);
    EXPECT_EQ(r.rank, 1u);
    EXPECT_EQ(r.entropy_bits, 0.0);
}

TEST(PairConversion, BellPair) {
    const double h = 1.0 / std::sqrt(2.0);
    const std::vector<cd> psi{{h, 0.0}, {0.0, h}};
    const auto r = pair_conversion_schmidt(psi);
    EXPECT_EQ(r.rank, 2u);
    EXPECT_NEAR(r.entropy_bits, 1.0, 1e-15);
    EXPECT_NEAR(r.coefficients[1], h, 1e-16);
}

TEST(PairConversion, CoherentStateEntropyIsPoissonEntropy) {
    Eigen::VectorXcd amps = coherent_state_amplitudes({1.0, 0.0}, 32);
    amps /= amps.norm();
    const std::vector<cd> psi(amps.data(), amps.data() + amps.size());
    double oracle = 0.0;
    for (std::size_t n = 0; n < 32; ++n) {
        const double p = poisson(n, 1.0);
        if (p > 0.0) oracle -= p * std::log2(p);
    }
    EXPECT_NEAR(pair_conversion_schmidt(psi).entropy_bits, oracle, 1e-12);
}

TEST(PairConversion, RejectsUnnormalizedInput) {
    const std::vector<cd> psi{{1.0, 0.0}, {1.0, 0.0}};
    EXPECT_THROW(pair_conversion_schmidt(psi), NormalizationError);
}
