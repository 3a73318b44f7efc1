#include "casimir/core.hpp"


namespace casimir {
namespace detail {

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw InvalidArgument(std::string(name) + " must be finite");
  }
}

void require_positive(double value, const char* name) {
  require_finite(value, name);
  if (!(value > 0.0)) {
    throw InvalidArgument(std::string(name) + " must be > 0, got " +
                          std::to_string(value));
  }
}

void require_non_negative(double value, const char* name) {
  require_finite(value, name);
  if (value < 0.0) {
    throw InvalidArgument(std::string(name) + " must be >= 0, got " +
                          std::to_string(value));
  }
}

}  // namespace detail

Medium::Medium(double epsilon, double kappa_eps)
    : epsilon_(epsilon), kappa_eps_(kappa_eps) {
  detail::require_finite(epsilon, "epsilon");
  if (epsilon < 1.0) {
    throw InvalidArgument("epsilon must be >= 1, got " +
                          std::to_string(epsilon));
  }
  detail::require_non_negative(kappa_eps, "kappa_eps");
  if (!std::isfinite(kappa_squared())) {
    throw InvalidArgument("epsilon * kappa_eps^2 overflows");
  }
}

Medium medium_from_inputs(const MediumInputs& inputs) {
  detail::require_positive(inputs.beta, "beta");
  detail::require_finite(inputs.q_c, "q_c");
  detail::require_non_negative(inputs.rho, "rho");
  detail::require_finite(inputs.epsilon, "epsilon");
  if (inputs.epsilon < 1.0) {
    throw InvalidArgument("epsilon must be >= 1");
  }
  const double kappa_sq =
      4.0 * kPi * inputs.beta * inputs.q_c * inputs.q_c * inputs.rho;
  if (!std::isfinite(kappa_sq)) {
    throw InvalidArgument("4 pi beta q_c^2 rho overflows");
  }
  return Medium(inputs.epsilon, std::sqrt(kappa_sq / inputs.epsilon));
}

double q_kappa(const Medium& medium, double q) {
  detail::require_non_negative(q, "q");
  return std::hypot(q, medium.kappa_eps());
}

TransverseMode::TransverseMode(const Medium& medium, double q)
    : q_(q), q_kappa_(casimir::q_kappa(medium, q)) {}

PlanarSetup::PlanarSetup(Medium medium, double gap_a)
    : medium_(medium), gap_a_(gap_a) {
  detail::require_positive(gap_a, "gap_a");
}

SphericalSetup::SphericalSetup(Medium medium, double radius_a, double radius_b)
    : medium_(medium), radius_a_(radius_a), radius_b_(radius_b) {
  detail::require_positive(radius_a, "radius_a");
  detail::require_positive(radius_b, "radius_b");
  if (!(radius_a < radius_b)) {
    throw InvalidArgument("radius_a must be < radius_b");
  }
}

}  // namespace casimir
