#pragma once

// Finite-difference solutions of the screened Poisson equation
//   (eps Phi')' - eps (q^2 + kappa_eps^2) Phi = -4 pi delta      (planar)
//   (eps r^2 Phi')' - eps (l(l+1) + kappa_eps^2 r^2) Phi = -delta  (radial)
// on layered media, used to check the closed-form coefficients. The
// discretisation is finite-volume with interfaces on nodes, so the
// matrices are symmetric and second-order accurate.

#include <cstddef>
#include <vector>

#include "casimir/core.hpp"

namespace casimir {

/// Uniform grid of n nodes on [z_min, z_max].
struct Grid1D {
  double z_min = 0.0;
  double z_max = 0.0;
  std::size_t n = 0;

  double h() const { return (z_max - z_min) / static_cast<double>(n - 1); }
  double node(std::size_t i) const {
    return z_min + static_cast<double>(i) * h();
  }
  /// Index of the node at z; throws InvalidArgument if z is not a node.
  std::size_t index_of(double z) const;
};

/// Grid for the slab problem with spacing gap_a / cells_per_gap, z0 on a
/// node, and at least 8 / q of extra room beyond z0 and gap_a.
Grid1D planar_grid(const Medium& medium, double q, double gap_a, double z0,
                   std::size_t cells_per_gap);

struct PlanarBvpSolution {
  Grid1D grid;
  std::vector<double> phi;
  /// Relative mismatch of eps dPhi/dz across z = 0 and z = gap_a, from
  /// one-sided second-order differences.
  double interface_residual = 0.0;
  bool coarse_warning = false;
};

/// Requires z_min < z0 < 0 < gap_a < z_max with z0, 0 and gap_a on nodes.
PlanarBvpSolution solve_planar_bvp(const Medium& medium, double q,
                                   double gap_a, double z0, const Grid1D& grid,
                                   double residual_tol = 1e-2);

struct PlanarTailEstimate {
  /// Amplitude D of the e^{-q_k z} tail, read off at z = gap_a.
  ExpScaled D;
  double h = 0.0;
  bool coarse_warning = false;
};

PlanarTailEstimate planar_tail_amplitude(const Medium& medium, double q,
                                         double gap_a, double z0,
                                         std::size_t cells_per_gap);

struct RadialBvpSolution {
  Grid1D grid;
  std::vector<double> phi;  // phi[0] = 0 at the origin
  double interface_residual = 0.0;
  bool coarse_warning = false;
};

/// Ball of radius_a and exterior r > radius_b filled with the medium,
/// vacuum in between; unit source at source_r. With uniform = true the
/// medium fills all space. radius_a, radius_b and source_r must be nodes.
RadialBvpSolution solve_radial_bvp(const Medium& medium, int l,
                                   double radius_a, double radius_b,
                                   double source_r, const Grid1D& grid,
                                   bool uniform = false,
                                   double residual_tol = 1e-2);

/// Grid with spacing radius_b / cells_per_b reaching
/// b + min(max(b, 12 / kappa_eps), 50 b).
Grid1D radial_grid(const SphericalSetup& setup, std::size_t cells_per_b);

struct RadialLambdaEstimate {
  double lambda = 0.0;
  double D = 0.0;   // Phi(b) with both surfaces over Phi(b) in uniform medium
  double D0 = 0.0;  // single-surface product, closed form
  double h = 0.0;
  bool coarse_warning = false;
};

/// lambda = 1 - D0 / D with D from a pair of radial solves, source in the
/// inner ball.
RadialLambdaEstimate radial_lambda(const SphericalSetup& setup, int l,
                                   std::size_t cells_per_b);

}  // namespace casimir
