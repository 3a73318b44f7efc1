#include "casimir/planar.hpp"

#include <algorithm>
#include <cmath>

#include "casimir/detail/small_linear.hpp"

namespace casimir {
namespace {

// ln(1 - e^x) for x <= 0.
double log1m_exp(double x) {
  return x > -std::numbers::ln2 ? std::log(-std::expm1(x))
                                : std::log1p(-std::exp(x));
}

// e^x / (1 - e^x) for x < 0.
double geometric_ratio(double x) { return std::exp(x) / -std::expm1(x); }

// q_k - q without cancellation.
double screening_excess(double q, double qk, double kappa) {
  return kappa == 0.0 ? 0.0 : kappa * kappa / (qk + q);
}

double scaled_log_reflection(const Medium& medium, double q, double scale) {
  const double log_a = reflection_A(medium, q).log_value;
  return scale == 1.0 ? log_a : log_a + std::log(scale);
}

Estimate scaled(const QuadratureResult& r, double prefactor) {
  Estimate e;
  e.value = prefactor * r.value;
  e.abs_error = std::abs(prefactor) * r.abs_error_estimate;
  e.evaluations = r.evaluations;
  e.converged = r.converged;
  return e;
}

Estimate exact_zero() {
  Estimate e;
  e.converged = true;
  return e;
}

void validate_common(double gap_a, const PlanarOptions& options) {
  detail::require_positive(gap_a, "gap_a");
  detail::require_positive(options.tol, "tol");
  detail::require_positive(options.reflection_scale, "reflection_scale");
}

// C1 * e^{qa} without forming e^{qa} on its own.
double times_growth(double coefficient, double exponent) {
  if (coefficient == 0.0) return 0.0;
  return std::copysign(std::exp(std::log(std::abs(coefficient)) + exponent),
                       coefficient);
}

}  // namespace

ReflectionFactor reflection_A(const Medium& medium, double q) {
  detail::require_positive(q, "q");
  const double qk = q_kappa(medium, q);
  const double denom = medium.epsilon() * qk + q;
  const double ratio = (medium.epsilon() * qk - q) / denom;
  ReflectionFactor a;
  a.value = ratio * ratio;
  // (eps q_k - q)/(eps q_k + q) = 1 - 2q/(eps q_k + q)
  a.log_value = 2.0 * std::log1p(-2.0 * q / denom);
  return a;
}

ExpScaled coefficient_D_plates(const Medium& medium, double q, double gap_a) {
  detail::require_positive(gap_a, "gap_a");
  const ReflectionFactor a = reflection_A(medium, q);
  const double qk = q_kappa(medium, q);
  const double denom = medium.epsilon() * qk + q;
  const double multiple = -std::expm1(a.log_value - 2.0 * q * gap_a);
  return {4.0 * q / (denom * denom * multiple),
          screening_excess(q, qk, medium.kappa_eps()) * gap_a};
}

ExpScaled coefficient_D_halfspace(const Medium& medium, double q, double gap_a) {
  detail::require_positive(q, "q");
  detail::require_positive(gap_a, "gap_a");
  const double qk = q_kappa(medium, q);
  return {2.0 / (medium.epsilon() * qk + q),
          screening_excess(q, qk, medium.kappa_eps()) * gap_a};
}

double PlanarCoefficients::potential(double z) const {
  detail::require_finite(z, "z");
  if (!(z > z0)) {
    throw InvalidArgument("potential is only evaluated for z > z0");
  }
  const double two_pi = 2.0 * kPi;
  if (z < 0.0) {
    return two_pi * (std::exp(-q_kappa * (z - z0)) / (epsilon * q_kappa) +
                     B * std::exp(q_kappa * (z + z0)));
  }
  if (z <= gap_a) {
    return two_pi * (C * std::exp(q_kappa * z0 - q * z) +
                     C1 * std::exp(q_kappa * z0 + q * z));
  }
  return two_pi * D.times_exp(q_kappa * (z0 - z));
}

PlanarCoefficients solve_planar_coefficients(const Medium& medium, double q,
                                             double gap_a, double z0) {
  detail::require_positive(q, "q");
  detail::require_positive(gap_a, "gap_a");
  detail::require_finite(z0, "z0");
  if (!(z0 < 0.0)) throw InvalidArgument("z0 must be < 0");

  const double eps = medium.epsilon();
  const double qk = q_kappa(medium, q);
  const double decay = std::exp(-q * gap_a);
  // Unknowns: B, C, C1 e^{qa}, D e^{-(q_k - q) a}.
  const std::array<std::array<double, 4>, 4> m = {{
      {1.0, -1.0, -decay, 0.0},
      {eps * qk, q, -q * decay, 0.0},
      {0.0, decay, 1.0, -decay},
      {0.0, -q * decay, q, eps * qk * decay},
  }};
  const std::array<double, 4> rhs = {-1.0 / (eps * qk), 1.0, 0.0, 0.0};
  const auto x = detail::solve_dense(m, rhs);

  PlanarCoefficients c;
  c.B = x[0];
  c.C = x[1];
  c.C1 = x[2] * decay;
  c.D = {x[3], screening_excess(q, qk, medium.kappa_eps()) * gap_a};
  c.q = q;
  c.q_kappa = qk;
  c.epsilon = eps;
  c.gap_a = gap_a;
  c.z0 = z0;
  return c;
}

std::array<double, 4> continuity_residuals(const PlanarCoefficients& c) {
  const double eps = c.epsilon;
  const double qk = c.q_kappa;
  const double q = c.q;
  const double a = c.gap_a;
  auto relative = [](double lhs, double rhs, std::initializer_list<double> terms) {
    double scale = 0.0;
    for (double t : terms) scale = std::max(scale, std::abs(t));
    return scale == 0.0 ? 0.0 : std::abs(lhs - rhs) / scale;
  };
  const double source = 1.0 / (eps * qk);
  const double c_at_a = c.C * std::exp(-q * a);
  const double c1_at_a = times_growth(c.C1, q * a);
  const double d_at_a = c.D.times_exp(-qk * a);
  return {
      relative(source + c.B, c.C + c.C1, {source, c.B, c.C, c.C1}),
      relative(-1.0 + eps * qk * c.B, q * (c.C1 - c.C),
               {1.0, eps * qk * c.B, q * c.C, q * c.C1}),
      relative(c_at_a + c1_at_a, d_at_a, {c_at_a, c1_at_a, d_at_a}),
      relative(q * (c1_at_a - c_at_a), -eps * qk * d_at_a,
               {q * c_at_a, q * c1_at_a, eps * qk * d_at_a}),
  };
}

double correlation_hat(const Medium& medium, double q, double z, double z0,
                       double gap_a) {
  detail::require_positive(gap_a, "gap_a");
  detail::require_finite(z, "z");
  detail::require_finite(z0, "z0");
  if (!(z0 < 0.0)) throw InvalidArgument("z0 must be < 0");
  if (!(z > gap_a)) throw InvalidArgument("z must be > gap_a");
  const ExpScaled d = coefficient_D_plates(medium, q, gap_a);
  return -2.0 * kPi * d.times_exp(-q_kappa(medium, q) * (z - z0));
}

Estimate force_ionic_raw(const Medium& medium, double gap_a,
                         const PlanarOptions& options) {
  validate_common(gap_a, options);
  if (medium.kappa_eps() == 0.0) return exact_zero();
  const auto integrand = [&](double q) {
    const double qk = q_kappa(medium, q);
    const ExpScaled d = coefficient_D_plates(medium, q, gap_a);
    const double sum = qk + q;
    return d.times_exp(-sum * gap_a) * q / (sum * sum);
  };
  const QuadratureResult r =
      integrate_semi_infinite(integrand, 2.0 * gap_a, options.tol);
  const double kappa4 = medium.kappa_squared() * medium.kappa_squared();
  return scaled(r, -kappa4 / (8.0 * kPi));
}

PlanarForce force_per_area(const Medium& medium, double gap_a,
                           const PlanarOptions& options) {
  validate_common(gap_a, options);
  const double scale = options.reflection_scale;
  const auto integrand = [&](double q) {
    const double x = scaled_log_reflection(medium, q, scale) - 2.0 * q * gap_a;
    return geometric_ratio(x) * q * q;
  };
  const double prefactor = -1.0 / (2.0 * kPi);
  PlanarForce out;
  static_cast<Estimate&>(out) = scaled(
      integrate_semi_infinite(integrand, 2.0 * gap_a, options.tol), prefactor);

  if (options.series_check) {
    // A is q-independent only without screening; otherwise sup_q A = 1 at
    // q -> 0 and the terms fall off like n^-3.
    double ratio_bound = 1.0;
    if (medium.kappa_eps() == 0.0) {
      const double e = medium.epsilon();
      ratio_bound = scale * ((e - 1.0) / (e + 1.0)) * ((e - 1.0) / (e + 1.0));
    }
    const double term_tol = options.tol * 1e-2;
    const auto term = [&](std::size_t n) {
      const double order = static_cast<double>(n);
      const auto f = [&](double q) {
        const double x =
            scaled_log_reflection(medium, q, scale) - 2.0 * q * gap_a;
        return std::exp(order * x) * q * q;
      };
      const QuadratureResult r =
          integrate_semi_infinite(f, 2.0 * order * gap_a, term_tol);
      out.evaluations += r.evaluations;
      return r.value;
    };
    SeriesResult s = sum_geometric_like(term, ratio_bound, options.tol,
                                        options.max_series_terms);
    s.value *= prefactor;
    s.tail_bound *= -prefactor;
    out.series = s;
    out.series_evaluated = true;
  }
  return out;
}

Estimate free_energy_per_area(const Medium& medium, double gap_a,
                              const PlanarOptions& options) {
  validate_common(gap_a, options);
  const double scale = options.reflection_scale;
  const auto integrand = [&](double q) {
    const double x = scaled_log_reflection(medium, q, scale) - 2.0 * q * gap_a;
    return q * log1m_exp(x);
  };
  return scaled(integrate_semi_infinite(integrand, 2.0 * gap_a, options.tol),
                1.0 / (4.0 * kPi));
}

namespace {

double reflection_amplitude(const Medium& medium, double q) {
  const double qk = q_kappa(medium, q);
  return 1.0 - 2.0 * q / (medium.epsilon() * qk + q);
}

}  // namespace

Estimate particle_potential(const Medium& medium, double alpha, double gap_a,
                            const PlanarOptions& options) {
  validate_common(gap_a, options);
  detail::require_non_negative(alpha, "alpha");
  if (alpha == 0.0) return exact_zero();
  const auto integrand = [&](double q) {
    return reflection_amplitude(medium, q) * std::exp(-2.0 * q * gap_a) * q * q;
  };
  return scaled(integrate_semi_infinite(integrand, 2.0 * gap_a, options.tol),
                -alpha);
}

Estimate particle_force(const Medium& medium, double alpha, double gap_a,
                        const PlanarOptions& options) {
  validate_common(gap_a, options);
  detail::require_non_negative(alpha, "alpha");
  if (alpha == 0.0) return exact_zero();
  const auto integrand = [&](double q) {
    return reflection_amplitude(medium, q) * std::exp(-2.0 * q * gap_a) * q * q *
           q;
  };
  return scaled(integrate_semi_infinite(integrand, 2.0 * gap_a, options.tol),
                -2.0 * alpha);
}

}  // namespace casimir
