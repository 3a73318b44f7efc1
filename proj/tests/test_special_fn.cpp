#include <cmath>
#include <random>

#include "casimir/special_fn.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace casimir;
using oracle::Big;

namespace {

// log of |i_l(x)| and |k_l(x)| from the scaled representation.
double log_i(const ScaledBesselPair& p) {
  return std::log(p.i_scaled) + p.i_log_scale();
}
double log_k(const ScaledBesselPair& p) {
  return std::log(p.k_scaled) + p.k_log_scale();
}

double wronskian(const ScaledBesselPair& p) {
  return std::ldexp(p.i_scaled * p.dk_scaled - p.di_scaled * p.k_scaled,
                    p.i_exponent + p.k_exponent) *
         p.x * p.x;
}

}  // namespace

TEST_CASE("order zero closed forms") {
  const ScaledBesselPair p = modified_spherical_bessel(0, 1.0);
  CHECK(p.i() == doctest::Approx(std::sinh(1.0)).epsilon(1e-15));
  CHECK(p.k() == doctest::Approx(kPi / 2.0 * std::exp(-1.0)).epsilon(1e-15));
  CHECK(p.i() == doctest::Approx(1.1752012).epsilon(1e-7));
  CHECK(p.k() == doctest::Approx(0.5778637).epsilon(1e-7));
}

TEST_CASE("small-argument asymptotics") {
  const double x = 1e-6;
  const ScaledBesselPair p = modified_spherical_bessel(5, x);
  const double i_lead = std::pow(x, 5) / 10395.0;          // x^l / (2l+1)!!
  const double k_lead = kPi / 2.0 * 945.0 / std::pow(x, 6);  // (2l-1)!! / x^(l+1)
  CHECK(std::abs(p.i() / i_lead - 1.0) < 1e-10);
  CHECK(std::abs(p.k() / k_lead - 1.0) < 1e-10);
}

TEST_CASE("agreement with half-integer cylinder functions") {
  for (int l : {0, 1, 2, 5, 10, 20, 50, 200}) {
    for (double x : {1e-8, 1e-4, 9.99e-4, 1e-3, 0.5, 1.0, 7.5, 40.0, 300.0,
                     1e4}) {
      CAPTURE(l);
      CAPTURE(x);
      const ScaledBesselPair p = modified_spherical_bessel(l, x);
      const Big bx = x;
      const Big i_ref = oracle::sph_i(l, bx);
      const Big k_ref = oracle::sph_k(l, bx);
      if (i_ref > 0) {
        const double log_ref = static_cast<double>(log(i_ref));
        CHECK(std::abs(log_i(p) - log_ref) < 1e-12 * std::max(1.0, std::abs(log_ref)));
      }
      if (k_ref > 0) {
        const double log_ref = static_cast<double>(log(k_ref));
        CHECK(std::abs(log_k(p) - log_ref) < 1e-12 * std::max(1.0, std::abs(log_ref)));
      }
      // Derivatives through i_l' = i_{l+1} + (l/x) i_l and the k analogue.
      const Big di_ref = oracle::sph_i(l + 1, bx) + Big(l) / bx * i_ref;
      const Big dk_ref = Big(l) / bx * k_ref - oracle::sph_k(l + 1, bx);
      if (i_ref > 0 && di_ref > 0) {
        CHECK(std::abs(p.di_scaled / p.i_scaled -
                       static_cast<double>(di_ref / i_ref)) <
              1e-12 * std::abs(static_cast<double>(di_ref / i_ref)));
      }
      if (k_ref > 0) {
        CHECK(std::abs(p.dk_scaled / p.k_scaled -
                       static_cast<double>(dk_ref / k_ref)) <
              1e-12 * std::abs(static_cast<double>(dk_ref / k_ref)));
      }
    }
  }
}

TEST_CASE("Wronskian identity") {
  for (int l = 0; l <= 20; ++l) {
    for (double x : {0.1, 1.0, 10.0, 50.0}) {
      CAPTURE(l);
      CAPTURE(x);
      CHECK(std::abs(wronskian(modified_spherical_bessel(l, x)) + kPi / 2.0) <=
            1e-10);
    }
  }
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(0.1, 50.0);
  std::uniform_int_distribution<int> ul(0, 20);
  for (int n = 0; n < 500; ++n) {
    const ScaledBesselPair p = modified_spherical_bessel(ul(rng), ux(rng));
    CHECK(std::abs(wronskian(p) + kPi / 2.0) <= 1e-10);
  }
}

TEST_CASE("three-term recurrences") {
  for (double x : {0.05, 0.9, 6.0, 33.0}) {
    for (int l = 1; l <= 30; ++l) {
      CAPTURE(l);
      CAPTURE(x);
      const auto lo = modified_spherical_bessel(l - 1, x);
      const auto mid = modified_spherical_bessel(l, x);
      const auto hi = modified_spherical_bessel(l + 1, x);
      // i_{l-1} - i_{l+1} = (2l+1)/x i_l, in units of i_l
      const double i_lhs = std::exp(log_i(lo) - log_i(mid)) -
                           std::exp(log_i(hi) - log_i(mid));
      CHECK(std::abs(i_lhs / ((2.0 * l + 1.0) / x) - 1.0) < 1e-11);
      // k_{l+1} - k_{l-1} = (2l+1)/x k_l
      const double k_lhs = std::exp(log_k(hi) - log_k(mid)) -
                           std::exp(log_k(lo) - log_k(mid));
      CHECK(std::abs(k_lhs / ((2.0 * l + 1.0) / x) - 1.0) < 1e-11);
    }
  }
}

TEST_CASE("scaled values stay finite at extreme orders and arguments") {
  for (int l : {0, 100, 1000, kMaxBesselOrder}) {
    for (double x : {1e-8, 1e-3, 1.0, 1e3, 1e4}) {
      const ScaledBesselPair p = modified_spherical_bessel(l, x);
      CHECK(std::isfinite(p.i_scaled));
      CHECK(std::isfinite(p.k_scaled));
      CHECK(p.i_scaled > 0.0);
      CHECK(p.k_scaled > 0.0);
      CHECK(std::isfinite(p.di_scaled));
      CHECK(std::isfinite(p.dk_scaled));
    }
  }
}

TEST_CASE("invalid Bessel arguments") {
  CHECK_THROWS_AS(modified_spherical_bessel(1, 0.0), InvalidArgument);
  CHECK_THROWS_AS(modified_spherical_bessel(1, -2.0), InvalidArgument);
  CHECK_THROWS_AS(modified_spherical_bessel(-1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(modified_spherical_bessel(kMaxBesselOrder + 1, 1.0),
                  InvalidArgument);
}

TEST_CASE("vacuum radial basis is the power-law pair") {
  const RadialBasis b = radial_basis(Medium(3.0, 0.0), 1, 2.0);
  CHECK(b.regular.actual() == 2.0);
  CHECK(b.regular.actual_derivative() == 1.0);
  CHECK(b.irregular.actual() == 0.25);
  CHECK(b.irregular.actual_derivative() == -0.25);

  for (int l : {1, 3, 12}) {
    for (double r : {0.3, 1.0, 4.0}) {
      const RadialBasis p = radial_basis(Medium(1.0, 0.0), l, r);
      CHECK(p.regular.actual() == doctest::Approx(std::pow(r, l)).epsilon(1e-15));
      CHECK(p.irregular.actual() ==
            doctest::Approx(std::pow(r, -(l + 1))).epsilon(1e-15));
      CHECK(p.regular.actual_derivative() ==
            doctest::Approx(l * std::pow(r, l - 1)).epsilon(1e-15));
      CHECK(p.irregular.actual_derivative() ==
            doctest::Approx(-(l + 1) * std::pow(r, -(l + 2))).epsilon(1e-15));
    }
  }
  CHECK_THROWS_AS(radial_basis(Medium(1.0, 0.0), 1, 0.0), InvalidArgument);
  CHECK_THROWS_AS(radial_basis(Medium(1.0, 1.0), 1, -1.0), InvalidArgument);
}

TEST_CASE("screened radial basis") {
  const RadialBasis zero = radial_basis(Medium(2.0, 1.0), 0, 1.0);
  CHECK(zero.regular.actual() == doctest::Approx(std::sinh(1.0)).epsilon(1e-14));
  CHECK(zero.irregular.actual() ==
        doctest::Approx(kPi / 2.0 * std::exp(-1.0)).epsilon(1e-14));

  // d/dr f(kappa r) = kappa f'(kappa r)
  const double kappa = 2.5, r = 0.7;
  const RadialBasis b = radial_basis(Medium(2.0, kappa), 3, r);
  const ScaledBesselPair p = modified_spherical_bessel(3, kappa * r);
  CHECK(b.regular.actual() == doctest::Approx(p.i()).epsilon(1e-14));
  CHECK(b.regular.actual_derivative() ==
        doctest::Approx(kappa * p.di()).epsilon(1e-14));
  CHECK(b.irregular.actual_derivative() ==
        doctest::Approx(kappa * p.dk()).epsilon(1e-14));

  // Weak screening: s/e grows like r^(2l+1).
  const Medium weak(2.0, 1e-6);
  const auto ratio = [&](double rr) {
    const RadialBasis q = radial_basis(weak, 2, rr);
    return q.regular.actual() / q.irregular.actual();
  };
  CHECK(std::abs(ratio(2.0) / ratio(1.0) / 32.0 - 1.0) < 1e-9);
}
