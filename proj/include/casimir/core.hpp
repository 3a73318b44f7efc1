#pragma once

// Shared domain types for the screened Casimir calculations.
//
// Units are Gaussian throughout. Every physics result in this library is
// multiplied by beta = 1/(k_B T), so temperature never appears past the
// construction of a Medium.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace casimir {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kDefaultTolerance = 1e-10;

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a runtime-checked mathematical assumption fails
/// (e.g. an eigenvalue leaves [0, 1)).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PrecisionLoss : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Microscopic parameters of a charged dielectric.
struct MediumInputs {
  double beta = 1.0;     // 1 / (k_B T)
  double q_c = 0.0;      // ionic charge
  double rho = 0.0;      // number density
  double epsilon = 1.0;  // relative permittivity
};

/// Dielectric with free charges: permittivity and the in-medium inverse
/// Debye-Hueckel screening length kappa_eps.
class Medium {
 public:
  Medium(double epsilon, double kappa_eps);

  double epsilon() const { return epsilon_; }
  double kappa_eps() const { return kappa_eps_; }
  /// kappa^2 = epsilon * kappa_eps^2, i.e. 4 pi beta q_c^2 rho.
  double kappa_squared() const { return epsilon_ * kappa_eps_ * kappa_eps_; }

  bool operator==(const Medium&) const = default;

 private:
  double epsilon_;
  double kappa_eps_;
};

Medium medium_from_inputs(const MediumInputs& inputs);

/// sqrt(q^2 + kappa_eps^2).
double q_kappa(const Medium& medium, double q);

/// Transverse Fourier mode q = |k_perp| and its screened partner q_kappa.
class TransverseMode {
 public:
  TransverseMode(const Medium& medium, double q);

  double q() const { return q_; }
  double q_kappa() const { return q_kappa_; }

 private:
  double q_;
  double q_kappa_;
};

/// Two identical half-spaces separated by a vacuum gap of width gap_a.
class PlanarSetup {
 public:
  PlanarSetup(Medium medium, double gap_a);

  const Medium& medium() const { return medium_; }
  double gap_a() const { return gap_a_; }

 private:
  Medium medium_;
  double gap_a_;
};

/// Ball of radius a inside a spherical cavity of radius b, same medium.
class SphericalSetup {
 public:
  SphericalSetup(Medium medium, double radius_a, double radius_b);

  const Medium& medium() const { return medium_; }
  double radius_a() const { return radius_a_; }
  double radius_b() const { return radius_b_; }
  double ratio() const { return radius_a_ / radius_b_; }

 private:
  Medium medium_;
  double radius_a_;
  double radius_b_;
};

/// A positive quantity carried as mantissa * exp(log_factor) so that large
/// exponentials can be combined analytically before evaluation.
struct ExpScaled {
  double mantissa = 0.0;
  double log_factor = 0.0;

  double value() const { return mantissa * std::exp(log_factor); }
  /// mantissa * exp(log_factor + extra), with the exponents summed first.
  double times_exp(double extra) const {
    return mantissa * std::exp(log_factor + extra);
  }
};

namespace detail {

void require_finite(double value, const char* name);
void require_positive(double value, const char* name);
void require_non_negative(double value, const char* name);

}  // namespace detail
}  // namespace casimir
