#pragma once

// Modified spherical Bessel functions i_l, k_l with exponential scaling.
//
// Conventions:
//   i_0(x) = sinh(x) / x,  k_0(x) = (pi/2) e^{-x} / x,
//   x^2 (i_l k_l' - i_l' k_l) = -pi/2.
// Stored values carry e^{-x} (for i) and e^{+x} (for k). Where the power-law
// behaviour at small x or large l would leave the double range, an extra
// binary exponent tag is carried as well; it is zero otherwise.

#include "casimir/core.hpp"

namespace casimir {

/// Largest order supported by modified_spherical_bessel.
inline constexpr int kMaxBesselOrder = 5000;

struct ScaledBesselPair {
  int l = 0;
  double x = 0.0;
  // i_l(x) = ldexp(i_scaled, i_exponent) * e^{x}; same scale for di_scaled.
  double i_scaled = 0.0;
  double di_scaled = 0.0;
  int i_exponent = 0;
  // k_l(x) = ldexp(k_scaled, k_exponent) * e^{-x}; same scale for dk_scaled.
  double k_scaled = 0.0;
  double dk_scaled = 0.0;
  int k_exponent = 0;

  // Unscaled values. These overflow or underflow outside moderate ranges.
  double i() const;
  double di() const;
  double k() const;
  double dk() const;

  /// Natural log of the factor dropped from i_scaled / k_scaled.
  double i_log_scale() const;
  double k_log_scale() const;
};

/// Scaled i_l(x), k_l(x) and their x-derivatives, relative error ~1e-12 for
/// l <= kMaxBesselOrder and x in [1e-8, 1e4]. Throws InvalidArgument for
/// x <= 0 or l out of range, PrecisionLoss if the downward recurrence for i_l
/// does not settle.
ScaledBesselPair modified_spherical_bessel(int l, double x);

/// A radial function value f(r) and df/dr, both multiplied by exp(-log_scale).
struct BasisValue {
  double value = 0.0;
  double derivative = 0.0;
  double log_scale = 0.0;

  double actual() const { return value * std::exp(log_scale); }
  double actual_derivative() const { return derivative * std::exp(log_scale); }
};

/// Regular (s) and decaying (e) radial solutions of the screened Laplace
/// equation for angular order l at radius r.
struct RadialBasis {
  BasisValue regular;    // s_eps = i_l(kappa_eps r), or r^l in vacuum
  BasisValue irregular;  // e_eps = k_l(kappa_eps r), or r^-(l+1) in vacuum
};

/// Radial basis in `medium` at radius r. With kappa_eps = 0 this is exactly
/// the power-law pair r^l, r^-(l+1); otherwise s = i_l(kappa_eps r),
/// e = k_l(kappa_eps r) with derivatives taken with respect to r.
RadialBasis radial_basis(const Medium& medium, int l, double r);

}  // namespace casimir
