#pragma once

// Parallel slabs and particle/half-space geometry.
//
// Both half-spaces z < 0 and z > gap_a hold the same medium; the gap is
// vacuum. Results are beta-scaled: beta*f is a force per area (1/length^3),
// beta*F a free energy per area (1/length^2), beta*V dimensionless.
// Negative forces are attractive.

#include <array>
#include <cstddef>

#include "casimir/core.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {

/// Squared interface mismatch ((eps q_k - q) / (eps q_k + q))^2.
struct ReflectionFactor {
  double value = 0.0;
  /// ln(value), computed without cancellation; -inf when value == 0.
  double log_value = 0.0;
};

ReflectionFactor reflection_A(const Medium& medium, double q);

/// Amplitude D of the transmitted potential e^{-q_k z} beyond the second
/// slab. log_factor carries (q_k - q) a.
ExpScaled coefficient_D_plates(const Medium& medium, double q, double gap_a);

/// Same amplitude for a single half-space at z > gap_a seen from a source
/// layer at z = 0. log_factor carries (q_k - q) a.
ExpScaled coefficient_D_halfspace(const Medium& medium, double q, double gap_a);

/// Piecewise potential of a unit source at z0 < 0:
///   z0 < z < 0 : 2pi e^{q_k z0} (e^{-q_k z}/(eps q_k) + B e^{q_k z})
///   0 < z < a  : 2pi e^{q_k z0} (C e^{-q z} + C1 e^{q z})
///   a < z      : 2pi e^{q_k z0} D e^{-q_k z}
struct PlanarCoefficients {
  double B = 0.0;
  double C = 0.0;
  double C1 = 0.0;
  ExpScaled D;
  double q = 0.0;
  double q_kappa = 0.0;
  double epsilon = 1.0;
  double gap_a = 0.0;
  double z0 = 0.0;

  /// Potential at z > z0.
  double potential(double z) const;
};

/// Numerical solve of the four continuity conditions (potential and
/// eps * dPhi/dz at z = 0 and z = gap_a). The coefficients do not depend on
/// z0 in this normalization; z0 is kept for potential().
PlanarCoefficients solve_planar_coefficients(const Medium& medium, double q,
                                             double gap_a, double z0);

/// Residuals of the four continuity equations, each divided by the largest
/// term entering it.
std::array<double, 4> continuity_residuals(const PlanarCoefficients& c);

/// Fourier-space pair correlation of free charges divided by beta q_c^2,
/// for z0 < 0 and z > gap_a: -2 pi D e^{-q_k (z - z0)}.
double correlation_hat(const Medium& medium, double q, double z, double z0,
                       double gap_a);

struct PlanarOptions {
  double tol = kDefaultTolerance;
  /// Evaluate the geometric-series cross-check alongside the quadrature.
  bool series_check = true;
  std::size_t max_series_terms = 1u << 16;
  /// Test hook: multiplies the reflection factor A in force_per_area and
  /// free_energy_per_area. Leave at 1 for physics.
  double reflection_scale = 1.0;
};

struct Estimate {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

struct PlanarForce : Estimate {
  /// Sum over n of the integrals of A^n q^2 e^{-2nqa}, scaled like value.
  SeriesResult series;
  bool series_evaluated = false;
};

/// Force between the slabs from the free ions alone (no dipole
/// contribution): -(kappa^4 / 8 pi) int D e^{-(q_k+q)a} q / (q_k+q)^2 dq.
Estimate force_ionic_raw(const Medium& medium, double gap_a,
                         const PlanarOptions& options = {});

/// beta f = -(1/2pi) int A e^{-2qa} / (1 - A e^{-2qa}) q^2 dq.
PlanarForce force_per_area(const Medium& medium, double gap_a,
                           const PlanarOptions& options = {});

/// beta F = (1/4pi) int q ln(1 - A e^{-2qa}) dq; f = -dF/da.
Estimate free_energy_per_area(const Medium& medium, double gap_a,
                              const PlanarOptions& options = {});

/// Interaction potential of a particle with polarizability alpha at
/// distance gap_a from the half-space:
///   beta V = -alpha int (eps q_k - q)/(eps q_k + q) e^{-2qa} q^2 dq.
Estimate particle_potential(const Medium& medium, double alpha, double gap_a,
                            const PlanarOptions& options = {});

/// Force on the particle, -dV/da:
///   beta f = -2 alpha int (eps q_k - q)/(eps q_k + q) e^{-2qa} q^3 dq.
Estimate particle_force(const Medium& medium, double alpha, double gap_a,
                        const PlanarOptions& options = {});

}  // namespace casimir
