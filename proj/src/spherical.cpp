#include "casimir/spherical.hpp"

#include <algorithm>
#include <cmath>

#include "casimir/detail/small_linear.hpp"

namespace casimir {
namespace {

const Medium kVacuum(1.0, 0.0);
constexpr double kWarningCancellation = 1e-6;

void require_order(int l) {
  if (l < 1 || l >= kMaxBesselOrder) {
    throw InvalidArgument("angular order must be in [1, " +
                          std::to_string(kMaxBesselOrder - 1) + "]");
  }
}

// t1 - t2 where both terms share the scale factor exp(log_scale).
struct Factor {
  double value = 0.0;
  double largest = 0.0;
  double log_scale = 0.0;
};

Factor two_term(double t1, double t2, double log_scale) {
  return {t1 - t2, std::max(std::abs(t1), std::abs(t2)), log_scale};
}

double cancellation_of(const Factor& f) {
  return f.largest == 0.0 ? 1.0 : std::abs(f.value) / f.largest;
}

HighPrecision actual(const BasisValue& v) {
  return HighPrecision(v.value) * exp(HighPrecision(v.log_scale));
}

HighPrecision actual_derivative(const BasisValue& v) {
  return HighPrecision(v.derivative) * exp(HighPrecision(v.log_scale));
}

}  // namespace

EigenBasis eigen_basis(const SphericalSetup& setup, int l) {
  require_order(l);
  const double a = setup.radius_a();
  const double b = setup.radius_b();
  const RadialBasis vac_a = radial_basis(kVacuum, l, a);
  const RadialBasis vac_b = radial_basis(kVacuum, l, b);
  const RadialBasis med_a = radial_basis(setup.medium(), l, a);
  const RadialBasis med_b = radial_basis(setup.medium(), l, b);
  EigenBasis basis;
  basis.s_a = vac_a.regular;
  basis.e_a = vac_a.irregular;
  basis.s_eps_a = med_a.regular;
  basis.e_eps_a = med_a.irregular;
  basis.s_b = vac_b.regular;
  basis.e_b = vac_b.irregular;
  basis.e_eps_b = med_b.irregular;
  return basis;
}

SphericalEigenvalue lambda_from_basis(double epsilon, int l,
                                      const EigenBasis& basis) {
  const double eps = epsilon;
  const BasisValue& sa = basis.s_a;
  const BasisValue& ea = basis.e_a;
  const BasisValue& sea = basis.s_eps_a;
  const BasisValue& sb = basis.s_b;
  const BasisValue& eb = basis.e_b;
  const BasisValue& eeb = basis.e_eps_b;

  const Factor num_a = two_term(eps * sa.value * sea.derivative,
                                sa.derivative * sea.value,
                                sa.log_scale + sea.log_scale);
  const Factor num_b = two_term(eps * eb.value * eeb.derivative,
                                eb.derivative * eeb.value,
                                eb.log_scale + eeb.log_scale);
  const Factor den_a = two_term(eps * ea.value * sea.derivative,
                                ea.derivative * sea.value,
                                ea.log_scale + sea.log_scale);
  const Factor den_b = two_term(eps * eeb.derivative * sb.value,
                                eeb.value * sb.derivative,
                                eeb.log_scale + sb.log_scale);

  // The medium functions appear once above and once below the line, so
  // their exponential scales cancel identically.
  const double medium_net =
      (sea.log_scale + eeb.log_scale) - (sea.log_scale + eeb.log_scale);
  if (medium_net != 0.0) {
    throw PrecisionLoss("medium basis scales failed to cancel");
  }
  const double vacuum_net =
      sa.log_scale + eb.log_scale - ea.log_scale - sb.log_scale;

  SphericalEigenvalue out;
  out.l = l;
  out.cancellation = std::min({cancellation_of(num_a), cancellation_of(num_b),
                               cancellation_of(den_a), cancellation_of(den_b)});
  out.precision_warning = out.cancellation < kWarningCancellation;

  if (den_a.value == 0.0 || den_b.value == 0.0) {
    throw DomainError("eigenvalue denominator vanishes at l = " +
                      std::to_string(l));
  }
  if (num_a.value == 0.0 || num_b.value == 0.0) {
    out.lambda = 0.0;
    return out;
  }
  const int negatives = (num_a.value < 0) + (num_b.value < 0) +
                        (den_a.value < 0) + (den_b.value < 0);
  const bool negative = negatives % 2 == 1;
  const double log_magnitude =
      std::log(std::abs(num_a.value)) + std::log(std::abs(num_b.value)) -
      std::log(std::abs(den_a.value)) - std::log(std::abs(den_b.value)) +
      vacuum_net;
  const double magnitude = std::exp(log_magnitude);
  if (negative) {
    // Tolerate a rounding-level negative result from cancelling factors.
    const double noise_scale =
        std::exp(std::log(num_a.largest) + std::log(num_b.largest) -
                 std::log(std::abs(den_a.value)) -
                 std::log(std::abs(den_b.value)) + vacuum_net);
    if (magnitude > 1e-12 * noise_scale) {
      throw DomainError("eigenvalue is negative at l = " + std::to_string(l));
    }
    out.lambda = 0.0;
    return out;
  }
  if (!(magnitude < 1.0)) {
    throw DomainError("eigenvalue >= 1 at l = " + std::to_string(l));
  }
  out.lambda = magnitude;
  return out;
}

SphericalEigenvalue lambda_eps_l(const SphericalSetup& setup, int l) {
  return lambda_from_basis(setup.medium().epsilon(), l, eigen_basis(setup, l));
}

double lambda_static(double epsilon, int l, double radius_a, double radius_b) {
  const SphericalSetup checked(Medium(epsilon, 0.0), radius_a, radius_b);
  require_order(l);
  const double eps = epsilon;
  const double order = l;
  const double prefactor = (eps - 1.0) * (eps - 1.0) * (order + 1.0) * order /
                           ((eps * order + order + 1.0) *
                            (eps * (order + 1.0) + order));
  return prefactor * std::pow(checked.ratio(), 2.0 * order + 1.0);
}

BoundarySystem boundary_system(const SphericalSetup& setup, int l) {
  const EigenBasis basis = eigen_basis(setup, l);
  const HighPrecision eps(setup.medium().epsilon());

  const HighPrecision sa = actual(basis.s_a), dsa = actual_derivative(basis.s_a);
  const HighPrecision ea = actual(basis.e_a), dea = actual_derivative(basis.e_a);
  const HighPrecision sea = actual(basis.s_eps_a);
  const HighPrecision dsea = actual_derivative(basis.s_eps_a);
  const HighPrecision eea = actual(basis.e_eps_a);
  const HighPrecision deea = actual_derivative(basis.e_eps_a);
  const HighPrecision sb = actual(basis.s_b), dsb = actual_derivative(basis.s_b);
  const HighPrecision eb = actual(basis.e_b), deb = actual_derivative(basis.e_b);
  const HighPrecision eeb = actual(basis.e_eps_b);
  const HighPrecision deeb = actual_derivative(basis.e_eps_b);

  BoundarySystem sys;
  const HighPrecision zero(0);
  // e_eps + B s_eps = C e + C1 s                  at r = a
  // eps (e_eps' + B s_eps') = C e' + C1 s'        at r = a
  // C e + C1 s = D e_eps                          at r = b
  // C e' + C1 s' = eps D e_eps'                   at r = b
  sys.matrix = {{
      {sea, -ea, -sa, zero},
      {eps * dsea, -dea, -dsa, zero},
      {zero, eb, sb, -eeb},
      {zero, deb, dsb, -eps * deeb},
  }};
  sys.rhs = {-eea, -eps * deea, zero, zero};
  sys.c2 = (deb * sb - eb * dsb) / (eps * deeb * sb - eeb * dsb);
  sys.c1 = eps * (eea * dsea - deea * sea) / (eps * ea * dsea - dea * sea);
  return sys;
}

LinearSolveEigenvalue solve_boundary_system(const SphericalSetup& setup, int l) {
  BoundarySystem sys = boundary_system(setup, l);
  auto& m = sys.matrix;
  auto& rhs = sys.rhs;
  // Row then column equilibration; the entries span many decades.
  for (std::size_t i = 0; i < 4; ++i) {
    HighPrecision largest(0);
    for (const auto& v : m[i]) largest = std::max(largest, HighPrecision(abs(v)));
    for (auto& v : m[i]) v /= largest;
    rhs[i] /= largest;
  }
  std::array<HighPrecision, 4> column_scale;
  for (std::size_t j = 0; j < 4; ++j) {
    HighPrecision largest(0);
    for (std::size_t i = 0; i < 4; ++i) {
      largest = std::max(largest, HighPrecision(abs(m[i][j])));
    }
    column_scale[j] = largest;
    for (std::size_t i = 0; i < 4; ++i) m[i][j] /= largest;
  }
  const auto y = detail::solve_dense(m, rhs);

  LinearSolveEigenvalue out;
  out.D = y[3] / column_scale[3];
  out.D0 = sys.c1 * sys.c2;
  out.lambda = static_cast<double>(HighPrecision(1) - out.D0 / out.D);
  return out;
}

double lambda_via_D(const SphericalSetup& setup, int l) {
  return solve_boundary_system(setup, l).lambda;
}

namespace {

double energy_term(const SphericalSetup& setup, int l) {
  const double lambda = lambda_eps_l(setup, l).lambda;
  return 0.5 * (2.0 * l + 1.0) * std::log1p(-lambda);
}

}  // namespace

SphereEnergy sphere_free_energy(const SphericalSetup& setup, double tol,
                                int max_order) {
  detail::require_positive(tol, "tol");
  max_order = std::min(max_order, kMaxBesselOrder - 1);
  const double ratio_sq = setup.ratio() * setup.ratio();
  double partial = energy_term(setup, 1);
  double previous = partial;
  for (int l = 2; l <= max_order; ++l) {
    const double t = energy_term(setup, l);
    const double observed = previous == 0.0 ? 0.0 : t / previous;
    const double r = std::max(ratio_sq, observed);
    if (r < 1.0) {
      const double bound = std::abs(t) / (1.0 - r);
      if (bound <= tol * std::abs(partial)) {
        return {partial, l - 1, bound};
      }
    }
    partial += t;
    previous = t;
  }
  throw ConvergenceError("sphere free energy not converged by l = " +
                         std::to_string(max_order));
}

double sphere_free_energy_fixed(const SphericalSetup& setup, int orders) {
  if (orders < 1) throw InvalidArgument("orders must be >= 1");
  double sum = 0.0;
  for (int l = 1; l <= orders; ++l) sum += energy_term(setup, l);
  return sum;
}

SphereForce sphere_force(const SphericalSetup& setup, double tol, double step) {
  const double b = setup.radius_b();
  const double h = step > 0.0 ? step : b * 1e-4;
  const SphericalSetup inner(setup.medium(), setup.radius_a(), b - h);
  const SphericalSetup outer(setup.medium(), setup.radius_a(), b + h);
  // The closer surfaces converge slowest.
  const int orders = sphere_free_energy(inner, tol).terms + 1;
  const double f_plus = sphere_free_energy_fixed(outer, orders);
  const double f_minus = sphere_free_energy_fixed(inner, orders);
  return {(f_plus - f_minus) / (2.0 * h), orders, h};
}

}  // namespace casimir
