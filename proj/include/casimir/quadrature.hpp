#pragma once

// Semi-infinite adaptive quadrature and series summation.
//
// Both engines are serial and evaluate in a fixed order, so identical inputs
// give bit-identical outputs.

#include <cstddef>
#include <functional>

#include "casimir/core.hpp"

namespace casimir {

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t evaluations = 0;
  // True iff abs_error_estimate <= max(tol * |value|, abs_tol).
  bool converged = false;
};

struct QuadratureOptions {
  double abs_tol = 0.0;
  std::size_t max_evaluations = 400000;
};

/// Integral of f over (0, inf), where f(q) decays roughly like
/// exp(-q * decay_scale). Works in u = q * decay_scale: geometric panels in u
/// are refined by global adaptive Gauss-Kronrod (7/15) bisection, and panels
/// are appended until the integrand falls below 1e-16 of its running maximum.
/// The error estimate is the summed |K15 - G7| difference.
QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f,
                                         double decay_scale, double tol,
                                         const QuadratureOptions& options = {});

struct SeriesResult {
  double value = 0.0;
  std::size_t terms_used = 0;
  double tail_bound = 0.0;
  bool converged = false;
};

/// Sum of term(n) for n = 1, 2, ...
///
/// With ratio_bound < 1 the caller promises |term(n+1)| <= ratio_bound *
/// |term(n)|; summation stops once |term(N)| r / (1 - r) <= tol * |partial|,
/// and that geometric bound is returned as tail_bound. A violated promise
/// throws ConvergenceError.
///
/// With ratio_bound >= 1 the terms are assumed to fall off like a power law
/// n^-p; the tail is added by Euler-Maclaurin integral comparison with p
/// fitted from the terms, and tail_bound is the change of the extrapolated
/// total between successive doublings of N.
SeriesResult sum_geometric_like(const std::function<double(std::size_t)>& term,
                                double ratio_bound, double tol,
                                std::size_t max_terms = 1u << 20);

/// zeta(3), summed by the power-law path of sum_geometric_like.
double zeta3(double tol = 1e-15);

/// Li_3(z) = sum z^n / n^3 for |z| < 1.
double polylog3(double z, double tol = 1e-16);

}  // namespace casimir
