#include "casimir/special_fn.hpp"

#include <algorithm>
#include <cstdlib>
#include <numbers>

namespace casimir {
namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr int kRescaleBits = 600;
const double kRescaleThreshold = std::ldexp(1.0, kRescaleBits);
constexpr double kSeriesCutoff = 1e-3;

// m * 2^e
struct Tagged {
  double m = 0.0;
  long e = 0;
};

// Folds the binary exponent into the mantissas when both stay well inside
// the double range; otherwise renormalizes so |value| is in [0.5, 1).
void settle_exponent(double& value, double& derivative, int& exponent,
                     long raw_exponent) {
  int frexp_exp = 0;
  const double frac = std::frexp(value, &frexp_exp);
  const long total = raw_exponent + frexp_exp;
  if (total > -900 && total < 900) {
    value = std::ldexp(value, static_cast<int>(raw_exponent));
    derivative = std::ldexp(derivative, static_cast<int>(raw_exponent));
    exponent = 0;
    return;
  }
  value = frac;
  derivative = std::ldexp(derivative, -frexp_exp);
  exponent = static_cast<int>(total);
}

struct MillerRatios {
  Tagged f_l;    // f_l / f_0
  Tagged f_lp1;  // f_{l+1} / f_0
};

// Miller's downward recurrence i_{n-1} = i_{n+1} + (2n+1)/x i_n started at
// order `start` with f_{start+1} = 0, f_start = 1.
MillerRatios miller_ratios(int l, double x, int start) {
  double f_next = 0.0;
  double f = 1.0;
  long e = 0;
  Tagged f_l{};
  Tagged f_lp1{};
  for (int n = start; n >= 1; --n) {
    if (n == l + 1) f_lp1 = {f, e};
    if (n == l) f_l = {f, e};
    const double f_prev = f_next + (2.0 * n + 1.0) / x * f;
    f_next = f;
    f = f_prev;
    if (std::abs(f) > kRescaleThreshold) {
      f = std::ldexp(f, -kRescaleBits);
      f_next = std::ldexp(f_next, -kRescaleBits);
      e += kRescaleBits;
    }
  }
  if (l == 0) f_l = {f, e};
  return {{f_l.m / f, f_l.e - e}, {f_lp1.m / f, f_lp1.e - e}};
}

double relative_gap(const Tagged& lhs, const Tagged& rhs) {
  // Both share the same sign; compare after aligning exponents.
  const double aligned = std::ldexp(rhs.m, static_cast<int>(rhs.e - lhs.e));
  return std::abs(lhs.m - aligned) / std::abs(lhs.m);
}

// e^{-x} i_0(x), stable for all x > 0.
double scaled_i0(double x) { return -std::expm1(-2.0 * x) / (2.0 * x); }

void fill_i_by_recurrence(ScaledBesselPair& out) {
  const int l = out.l;
  const double x = out.x;
  int start = l + std::max({15, static_cast<int>(std::ceil(std::sqrt(40.0 * l))),
                            static_cast<int>(std::ceil(std::sqrt(60.0 * x)))});
  MillerRatios ratios = miller_ratios(l, x, start);
  bool settled = false;
  for (int attempt = 0; attempt < 6; ++attempt) {
    const int next_start = start + std::max(16, start / 4);
    const MillerRatios check = miller_ratios(l, x, next_start);
    const bool agree = relative_gap(check.f_l, ratios.f_l) < 1e-13 &&
                       relative_gap(check.f_lp1, ratios.f_lp1) < 1e-13;
    ratios = check;
    start = next_start;
    if (agree) {
      settled = true;
      break;
    }
  }
  if (!settled) {
    throw PrecisionLoss("downward recurrence for i_" + std::to_string(l) +
                        " did not settle at x = " + std::to_string(x));
  }

  const double i0 = scaled_i0(x);
  // Work relative to the exponent of f_l.
  const long e = ratios.f_l.e;
  const double il = ratios.f_l.m * i0;
  const double ilp1 =
      std::ldexp(ratios.f_lp1.m, static_cast<int>(ratios.f_lp1.e - e)) * i0;
  // i_l' = i_{l+1} + (l / x) i_l
  double value = il;
  double derivative = ilp1 + (l / x) * il;
  settle_exponent(value, derivative, out.i_exponent, e);
  out.i_scaled = value;
  out.di_scaled = derivative;
}

// Ascending series i_l(x) = x^l/(2l+1)!! sum_k (x^2/2)^k / (k! prod_j (2l+2j+1)).
void fill_i_by_series(ScaledBesselPair& out) {
  const int l = out.l;
  const double x = out.x;
  const double half_x2 = 0.5 * x * x;

  auto series = [&](int order) {
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 50; ++k) {
      term *= half_x2 / (k * (2.0 * order + 2.0 * k + 1.0));
      sum += term;
      if (term < 1e-18 * sum) break;
    }
    return sum;
  };

  // Prefactor x^l / (2l+1)!! carried as mantissa * 2^e.
  double prefactor = 1.0;
  long e = 0;
  for (int j = 1; j <= l; ++j) {
    prefactor *= x / (2.0 * j + 1.0);
    int shift = 0;
    prefactor = std::frexp(prefactor, &shift);
    e += shift;
  }
  const double scale = std::exp(-x);
  const double il = prefactor * series(l) * scale;
  const double ilp1 = prefactor * x / (2.0 * l + 3.0) * series(l + 1) * scale;
  double value = il;
  double derivative = ilp1 + (l / x) * il;
  settle_exponent(value, derivative, out.i_exponent, e);
  out.i_scaled = value;
  out.di_scaled = derivative;
}

// Upward recurrence k_{n+1} = k_{n-1} + (2n+1)/x k_n, stable for k.
void fill_k(ScaledBesselPair& out) {
  const int l = out.l;
  const double x = out.x;
  const double half_pi = 0.5 * kPi;
  double k_prev = half_pi / x;                   // e^x k_0
  double k_cur = half_pi * (1.0 + x) / (x * x);  // e^x k_1
  long e = 0;
  for (int n = 1; n <= l; ++n) {
    const double k_next = k_prev + (2.0 * n + 1.0) / x * k_cur;
    k_prev = k_cur;
    k_cur = k_next;
    if (k_cur > kRescaleThreshold) {
      k_cur = std::ldexp(k_cur, -kRescaleBits);
      k_prev = std::ldexp(k_prev, -kRescaleBits);
      e += kRescaleBits;
    }
  }
  // Now k_prev = k_l, k_cur = k_{l+1}.  k_l' = (l / x) k_l - k_{l+1}.
  double value = k_prev;
  double derivative = (l / x) * k_prev - k_cur;
  settle_exponent(value, derivative, out.k_exponent, e);
  out.k_scaled = value;
  out.dk_scaled = derivative;
}

BasisValue power_law(double r, double exponent) {
  const double log_value = exponent * std::log(r);
  if (std::abs(log_value) < 700.0) {
    return {std::pow(r, exponent), exponent * std::pow(r, exponent - 1.0), 0.0};
  }
  return {1.0, exponent / r, log_value};
}

}  // namespace

double ScaledBesselPair::i() const {
  return std::ldexp(i_scaled, i_exponent) * std::exp(x);
}
double ScaledBesselPair::di() const {
  return std::ldexp(di_scaled, i_exponent) * std::exp(x);
}
double ScaledBesselPair::k() const {
  return std::ldexp(k_scaled, k_exponent) * std::exp(-x);
}
double ScaledBesselPair::dk() const {
  return std::ldexp(dk_scaled, k_exponent) * std::exp(-x);
}
double ScaledBesselPair::i_log_scale() const { return x + i_exponent * kLn2; }
double ScaledBesselPair::k_log_scale() const { return -x + k_exponent * kLn2; }

ScaledBesselPair modified_spherical_bessel(int l, double x) {
  if (l < 0 || l > kMaxBesselOrder) {
    throw InvalidArgument("Bessel order out of range: " + std::to_string(l));
  }
  detail::require_positive(x, "x");
  ScaledBesselPair out;
  out.l = l;
  out.x = x;
  if (x < kSeriesCutoff) {
    fill_i_by_series(out);
  } else {
    fill_i_by_recurrence(out);
  }
  fill_k(out);
  return out;
}

RadialBasis radial_basis(const Medium& medium, int l, double r) {
  if (l < 0) throw InvalidArgument("l must be >= 0");
  detail::require_positive(r, "r");
  const double kappa = medium.kappa_eps();
  if (kappa == 0.0) {
    return {power_law(r, l), power_law(r, -(l + 1.0))};
  }
  const ScaledBesselPair pair = modified_spherical_bessel(l, kappa * r);
  return {{pair.i_scaled, kappa * pair.di_scaled, pair.i_log_scale()},
          {pair.k_scaled, kappa * pair.dk_scaled, pair.k_log_scale()}};
}

}  // namespace casimir
