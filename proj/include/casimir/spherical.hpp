#pragma once

// Concentric spheres: a ball of radius a inside a cavity of radius b in the
// same medium, vacuum in between. Zero-frequency TM eigenvalues lambda_l and
// the resulting beta-scaled free energy.

#include <array>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "casimir/core.hpp"
#include "casimir/special_fn.hpp"

namespace casimir {

struct SphericalEigenvalue {
  int l = 0;
  double lambda = 0.0;
  /// Smallest ratio |factor| / |largest term in factor| over the four
  /// two-term factors; 1 means no cancellation.
  double cancellation = 1.0;
  /// Set when more than six digits cancel in some factor.
  bool precision_warning = false;
};

/// Radial basis values entering the eigenvalue: vacuum s, e and medium
/// s_eps, e_eps at the two surfaces.
struct EigenBasis {
  BasisValue s_a, e_a, s_eps_a, e_eps_a;
  BasisValue s_b, e_b, e_eps_b;
};

EigenBasis eigen_basis(const SphericalSetup& setup, int l);

/// Closed-form eigenvalue
///   (eps s_a s_eps_a' - s_a' s_eps_a)(eps e_b e_eps_b' - e_b' e_eps_b)
///   / ((eps e_a s_eps_a' - e_a' s_eps_a)(eps e_eps_b' s_b - e_eps_b s_b')).
/// Invariant under rescaling any basis family by a constant. Throws
/// DomainError if the result leaves [0, 1).
SphericalEigenvalue lambda_from_basis(double epsilon, int l,
                                      const EigenBasis& basis);

SphericalEigenvalue lambda_eps_l(const SphericalSetup& setup, int l);

/// Unscreened limit:
/// (eps-1)^2 l(l+1) / ((eps l + l + 1)(eps (l+1) + l)) (a/b)^(2l+1).
double lambda_static(double epsilon, int l, double radius_a, double radius_b);

using HighPrecision = boost::multiprecision::cpp_bin_float_50;

/// Continuity of Phi and eps Phi' at r = a and r = b for the unknowns
/// (B, C, C1, D), plus the single-surface constants c1 (outer surface
/// removed) and c2 (inner ball removed), D0 = c1 c2.
struct BoundarySystem {
  std::array<std::array<HighPrecision, 4>, 4> matrix;
  std::array<HighPrecision, 4> rhs;
  HighPrecision c1;
  HighPrecision c2;
};

BoundarySystem boundary_system(const SphericalSetup& setup, int l);

struct LinearSolveEigenvalue {
  double lambda = 0.0;
  HighPrecision D;
  HighPrecision D0;
};

/// Eigenvalue from D = D0 / (1 - lambda), with D from a 50-digit solve of
/// the boundary system. The extended precision keeps 1 - D0/D meaningful
/// down to lambda ~ 1e-30.
LinearSolveEigenvalue solve_boundary_system(const SphericalSetup& setup, int l);

double lambda_via_D(const SphericalSetup& setup, int l);

struct SphereEnergy {
  double value = 0.0;
  int terms = 0;  // L, the last order included
  double tail_bound = 0.0;
};

/// beta F = 1/2 sum_{l=1}^{L} (2l+1) ln(1 - lambda_l), truncated once the
/// geometric tail bound |t_{L+1}| / (1 - r), r = max((a/b)^2, t_{L+1}/t_L),
/// drops below tol * |partial sum|. Throws ConvergenceError past max_order.
SphereEnergy sphere_free_energy(const SphericalSetup& setup,
                                double tol = kDefaultTolerance,
                                int max_order = kMaxBesselOrder - 1);

/// The same sum with a fixed number of orders.
double sphere_free_energy_fixed(const SphericalSetup& setup, int orders);

struct SphereForce {
  double value = 0.0;  // d(beta F)/db at fixed a
  int terms = 0;
  double step = 0.0;
};

/// Central difference of the free energy in b at fixed a, step b * 1e-4
/// unless given; all three evaluations share one truncation order.
SphereForce sphere_force(const SphericalSetup& setup,
                         double tol = kDefaultTolerance, double step = 0.0);

}  // namespace casimir
