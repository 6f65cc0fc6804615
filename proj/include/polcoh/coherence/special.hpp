/**
 *  @file   special.hpp
 *  @brief  Exponentially scaled Bessel functions and Gauss-Legendre rules.
 */

#ifndef POLCOH_COHERENCE_SPECIAL_HPP
#define POLCOH_COHERENCE_SPECIAL_HPP

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_bessel.h>

#include <cmath>
#include <memory>
#include <vector>

#include "polcoh/error.hpp"

namespace polcoh {

namespace detail {

// GSL aborts on error by default; we check status codes instead.
inline void gsl_quiet() {
    static const bool done = [] {
        gsl_set_error_handler_off();
        return true;
    }();
    (void)done;
}

}  // namespace detail

/// exp(-|x|) * I0(x), finite for any finite x.
inline double bessel_i0_scaled(double x) {
    detail::gsl_quiet();
    gsl_sf_result r;
    if (gsl_sf_bessel_I0_scaled_e(x, &r) != GSL_SUCCESS) {
        throw DomainError("bessel_i0_scaled: evaluation failed");
    }
    return r.val;
}

/// exp(-|x|) * I1(x).
inline double bessel_i1_scaled(double x) {
    detail::gsl_quiet();
    gsl_sf_result r;
    if (gsl_sf_bessel_I1_scaled_e(x, &r) != GSL_SUCCESS) {
        throw DomainError("bessel_i1_scaled: evaluation failed");
    }
    return r.val;
}

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped onto [a, b].
inline QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
    detail::gsl_quiet();
    std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)>
        table(gsl_integration_glfixed_table_alloc(n), &gsl_integration_glfixed_table_free);
    if (!table) throw DomainError("gauss_legendre: cannot build rule");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        gsl_integration_glfixed_point(a, b, i, &rule.nodes[i], &rule.weights[i], table.get());
    }
    return rule;
}

}  // namespace polcoh

#endif  // POLCOH_COHERENCE_SPECIAL_HPP
