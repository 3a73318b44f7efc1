#include "casimir/bvp_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "casimir/special_fn.hpp"
#include "casimir/spherical.hpp"

namespace casimir {
namespace {

// Symmetric tridiagonal solve; off[i] couples unknowns i and i+1.
std::vector<double> solve_tridiagonal(std::vector<double> diag,
                                      const std::vector<double>& off,
                                      std::vector<double> rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = off[i - 1] / diag[i - 1];
    diag[i] -= w * off[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    x[i] = (rhs[i] - off[i] * x[i + 1]) / diag[i];
  }
  return x;
}

// Relative jump of eps dPhi/dx across node i from one-sided differences.
double flux_mismatch(const std::vector<double>& phi, std::size_t i, double h,
                     double eps_left, double eps_right) {
  const double left =
      eps_left * (3.0 * phi[i] - 4.0 * phi[i - 1] + phi[i - 2]) / (2.0 * h);
  const double right =
      eps_right * (-3.0 * phi[i] + 4.0 * phi[i + 1] - phi[i + 2]) / (2.0 * h);
  const double scale = std::max(std::abs(left), std::abs(right));
  return scale == 0.0 ? 0.0 : std::abs(left - right) / scale;
}

std::size_t cells_for(double length, double h) {
  return static_cast<std::size_t>(std::ceil(length / h - 1e-9));
}

}  // namespace

std::size_t Grid1D::index_of(double z) const {
  const double position = (z - z_min) / h();
  const double rounded = std::round(position);
  if (std::abs(position - rounded) > 1e-6 || rounded < 0.0 ||
      rounded > static_cast<double>(n - 1)) {
    throw InvalidArgument("point is not a grid node");
  }
  return static_cast<std::size_t>(rounded);
}

Grid1D planar_grid(const Medium& medium, double q, double gap_a, double z0,
                   std::size_t cells_per_gap) {
  detail::require_positive(q, "q");
  detail::require_positive(gap_a, "gap_a");
  if (!(z0 < 0.0)) throw InvalidArgument("z0 must be < 0");
  if (cells_per_gap < 2) throw InvalidArgument("cells_per_gap must be >= 2");
  const double h = gap_a / static_cast<double>(cells_per_gap);
  const double source_cells = std::round(-z0 / h);
  if (std::abs(-z0 / h - source_cells) > 1e-6) {
    throw InvalidArgument("z0 must be a multiple of gap_a / cells_per_gap");
  }
  const double room = 8.0 / std::min(q, q_kappa(medium, q));
  const std::size_t pad = std::max<std::size_t>(cells_for(room, h), 2);
  const auto left = static_cast<std::size_t>(source_cells) + pad;
  Grid1D g;
  g.z_min = -static_cast<double>(left) * h;
  g.z_max = gap_a + static_cast<double>(pad) * h;
  g.n = left + cells_per_gap + pad + 1;
  return g;
}

PlanarBvpSolution solve_planar_bvp(const Medium& medium, double q,
                                   double gap_a, double z0, const Grid1D& grid,
                                   double residual_tol) {
  detail::require_positive(q, "q");
  detail::require_positive(gap_a, "gap_a");
  if (grid.n < 3) throw InvalidArgument("grid needs at least 3 nodes");
  if (!(grid.z_min < z0 && z0 < 0.0 && gap_a < grid.z_max)) {
    throw InvalidArgument("need z_min < z0 < 0 < gap_a < z_max");
  }
  const double h = grid.h();
  const std::size_t i_src = grid.index_of(z0);
  const std::size_t i_left = grid.index_of(0.0);
  const std::size_t i_right = grid.index_of(gap_a);
  if (i_src < 2 || i_left < i_src + 2 || i_right < i_left + 2 ||
      i_right + 2 >= grid.n) {
    throw InvalidArgument("grid too coarse to separate source and interfaces");
  }

  const double eps_m = medium.epsilon();
  const double qk = q_kappa(medium, q);
  const double medium_reaction = eps_m * qk * qk;
  const double gap_reaction = q * q;
  const std::size_t cells = grid.n - 1;
  std::vector<double> cell_eps(cells), cell_reaction(cells);
  for (std::size_t j = 0; j < cells; ++j) {
    const bool in_gap = j >= i_left && j < i_right;
    cell_eps[j] = in_gap ? 1.0 : eps_m;
    cell_reaction[j] = in_gap ? gap_reaction : medium_reaction;
  }

  std::vector<double> diag(grid.n, 0.0), off(cells), rhs(grid.n, 0.0);
  for (std::size_t j = 0; j < cells; ++j) {
    const double k = cell_eps[j] / h;
    const double m = 0.5 * h * cell_reaction[j];
    diag[j] += k + m;
    diag[j + 1] += k + m;
    off[j] = -k;
  }
  // Outgoing decay at both ends: eps Phi' = +-eps q_k Phi.
  diag.front() += eps_m * qk;
  diag.back() += eps_m * qk;
  rhs[i_src] = 4.0 * kPi;

  PlanarBvpSolution out;
  out.grid = grid;
  out.phi = solve_tridiagonal(std::move(diag), off, std::move(rhs));
  out.interface_residual =
      std::max(flux_mismatch(out.phi, i_left, h, eps_m, 1.0),
               flux_mismatch(out.phi, i_right, h, 1.0, eps_m));
  out.coarse_warning = out.interface_residual > residual_tol;
  return out;
}

PlanarTailEstimate planar_tail_amplitude(const Medium& medium, double q,
                                         double gap_a, double z0,
                                         std::size_t cells_per_gap) {
  const Grid1D grid = planar_grid(medium, q, gap_a, z0, cells_per_gap);
  const PlanarBvpSolution sol = solve_planar_bvp(medium, q, gap_a, z0, grid);
  const double phi_a = sol.phi[grid.index_of(gap_a)];
  PlanarTailEstimate out;
  out.D = {phi_a / (2.0 * kPi), q_kappa(medium, q) * (gap_a - z0)};
  out.h = grid.h();
  out.coarse_warning = sol.coarse_warning;
  return out;
}

RadialBvpSolution solve_radial_bvp(const Medium& medium, int l,
                                   double radius_a, double radius_b,
                                   double source_r, const Grid1D& grid,
                                   bool uniform, double residual_tol) {
  if (l < 1) throw InvalidArgument("l must be >= 1");
  const SphericalSetup setup(medium, radius_a, radius_b);
  if (grid.z_min != 0.0) throw InvalidArgument("radial grid must start at 0");
  if (!(source_r > 0.0 && source_r < radius_a && radius_b < grid.z_max)) {
    throw InvalidArgument("need 0 < source_r < radius_a < radius_b < r_max");
  }
  const double h = grid.h();
  const std::size_t i_src = grid.index_of(source_r);
  const std::size_t i_a = grid.index_of(radius_a);
  const std::size_t i_b = grid.index_of(radius_b);
  if (i_a < 2 || i_b < i_a + 2 || i_b + 2 >= grid.n) {
    throw InvalidArgument("grid too coarse to resolve the surfaces");
  }

  const double eps_m = medium.epsilon();
  const double kappa = medium.kappa_eps();
  const double ll = static_cast<double>(l) * (l + 1);
  const std::size_t cells = grid.n - 1;
  std::vector<bool> cell_in_medium(cells);
  for (std::size_t j = 0; j < cells; ++j) {
    cell_in_medium[j] = uniform || j < i_a || j >= i_b;
  }
  const auto reaction = [&](bool in_medium, double r) {
    return in_medium ? eps_m * (ll + kappa * kappa * r * r) : ll;
  };

  // Unknowns are phi[1..n-1]; phi[0] = 0.
  const std::size_t m = grid.n - 1;
  std::vector<double> diag(m, 0.0), off(m - 1, 0.0), rhs(m, 0.0);
  for (std::size_t j = 0; j < cells; ++j) {
    const double r_face = grid.node(j) + 0.5 * h;
    const double e = cell_in_medium[j] ? eps_m : 1.0;
    const double k = e * r_face * r_face / h;
    const double left_r = grid.node(j);
    const double right_r = grid.node(j + 1);
    if (j > 0) {
      diag[j - 1] += k + 0.5 * h * reaction(cell_in_medium[j], left_r);
      off[j - 1] = -k;
    }
    diag[j] += k + 0.5 * h * reaction(cell_in_medium[j], right_r);
  }
  const double r_max = grid.z_max;
  double log_derivative = -(l + 1.0) / r_max;
  if (kappa > 0.0) {
    const ScaledBesselPair kb = modified_spherical_bessel(l, kappa * r_max);
    log_derivative = kappa * kb.dk_scaled / kb.k_scaled;
  }
  diag[m - 1] -= eps_m * r_max * r_max * log_derivative;
  rhs[i_src - 1] = 1.0;

  const std::vector<double> x =
      solve_tridiagonal(std::move(diag), off, std::move(rhs));
  RadialBvpSolution out;
  out.grid = grid;
  out.phi.assign(grid.n, 0.0);
  std::copy(x.begin(), x.end(), out.phi.begin() + 1);
  if (!uniform) {
    out.interface_residual =
        std::max(flux_mismatch(out.phi, i_a, h, eps_m, 1.0),
                 flux_mismatch(out.phi, i_b, h, 1.0, eps_m));
  }
  out.coarse_warning = out.interface_residual > residual_tol;
  return out;
}

Grid1D radial_grid(const SphericalSetup& setup, std::size_t cells_per_b) {
  if (cells_per_b < 4) throw InvalidArgument("cells_per_b must be >= 4");
  const double b = setup.radius_b();
  const double kappa = setup.medium().kappa_eps();
  const double reach = kappa > 0.0 ? std::max(b, 12.0 / kappa) : 50.0 * b;
  const double h = b / static_cast<double>(cells_per_b);
  Grid1D g;
  g.z_min = 0.0;
  g.n = cells_per_b + cells_for(std::min(reach, 50.0 * b), h) + 1;
  g.z_max = static_cast<double>(g.n - 1) * h;
  return g;
}

RadialLambdaEstimate radial_lambda(const SphericalSetup& setup, int l,
                                   std::size_t cells_per_b) {
  const Grid1D grid = radial_grid(setup, cells_per_b);
  const double a = setup.radius_a();
  const double b = setup.radius_b();
  const std::size_t i_a = grid.index_of(a);
  const double source_r = grid.node(std::max<std::size_t>(1, i_a / 2));
  const RadialBvpSolution full =
      solve_radial_bvp(setup.medium(), l, a, b, source_r, grid, false);
  const RadialBvpSolution bare =
      solve_radial_bvp(setup.medium(), l, a, b, source_r, grid, true);
  const std::size_t i_b = grid.index_of(b);

  const BoundarySystem sys = boundary_system(setup, l);
  RadialLambdaEstimate out;
  out.D = full.phi[i_b] / bare.phi[i_b];
  out.D0 = static_cast<double>(sys.c1 * sys.c2);
  out.lambda = 1.0 - out.D0 / out.D;
  out.h = grid.h();
  out.coarse_warning = full.coarse_warning;
  return out;
}

}  // namespace casimir
