#include <cmath>
#include <random>

#include "casimir/detail/small_linear.hpp"
#include "casimir/planar.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace casimir;

namespace {

PlanarOptions quad_only() {
  PlanarOptions o;
  o.series_check = false;
  return o;
}

double D_value(const ExpScaled& d) { return d.value(); }

}  // namespace

TEST_CASE("reflection factor") {
  for (double q : {0.01, 1.0, 100.0}) {
    CHECK(reflection_A(Medium(1.0, 0.0), q).value == 0.0);
    CHECK(reflection_A(Medium(2.0, 0.0), q).value ==
          doctest::Approx(1.0 / 9.0).epsilon(1e-15));
  }
  CHECK(reflection_A(Medium(1.0, 1e8), 1.0).value > 1.0 - 1e-7);
  CHECK(reflection_A(Medium(2.0, 0.0), 1.0).log_value ==
        doctest::Approx(std::log(1.0 / 9.0)).epsilon(1e-15));
  CHECK_THROWS_AS(reflection_A(Medium(2.0, 0.0), 0.0), InvalidArgument);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const Medium m(1.0 + std::pow(10.0, u(rng)), std::pow(10.0, u(rng)));
    const double q = std::pow(10.0, u(rng));
    const double a = reflection_A(m, q).value;
    CHECK(a >= 0.0);
    CHECK(a < 1.0);
    // A rises with eps q_k / q: larger screening, larger permittivity.
    CHECK(reflection_A(Medium(m.epsilon() * 1.5, m.kappa_eps()), q).value >= a);
    CHECK(reflection_A(Medium(m.epsilon(), m.kappa_eps() * 1.5), q).value >= a);
  }
}

TEST_CASE("plate coefficient D") {
  for (double q : {0.2, 1.0, 5.0}) {
    CHECK(D_value(coefficient_D_plates(Medium(1.0, 0.0), q, 1.3)) ==
          doctest::Approx(1.0 / q).epsilon(1e-15));
  }
  // Hand-evaluated closed form at eps=2, kappa a=1, q a=1.
  const double q = 1.0, qk = std::sqrt(2.0), eps = 2.0;
  const double amp = (eps * qk - q) / (eps * qk + q);
  const double expected = 4.0 * q * std::exp(qk - q) /
                          ((eps * qk + q) * (eps * qk + q) *
                           (1.0 - amp * amp * std::exp(-2.0)));
  CHECK(oracle::rel(D_value(coefficient_D_plates(Medium(2.0, 1.0), 1.0, 1.0)),
                    expected) < 1e-14);
  // Huge kappa a: D itself overflows but the tagged form does not.
  const ExpScaled big = coefficient_D_plates(Medium(1.0, 1e4), 1.0, 1.0);
  CHECK(std::isfinite(big.mantissa));
  CHECK(big.mantissa > 0.0);
  CHECK(std::isfinite(big.times_exp(-(q_kappa(Medium(1.0, 1e4), 1.0) + 1.0))));
}

TEST_CASE("continuity solve") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const Medium m(1.0 + std::pow(10.0, u(rng)), std::pow(10.0, u(rng)));
    const double q = std::pow(10.0, u(rng));
    const double a = std::pow(10.0, u(rng) / 2);
    const PlanarCoefficients c = solve_planar_coefficients(m, q, a, -0.3);
    const ExpScaled d = coefficient_D_plates(m, q, a);
    CHECK(c.D.mantissa > 0.0);
    CHECK(c.D.log_factor == d.log_factor);
    CHECK(oracle::rel(c.D.mantissa, d.mantissa) < 1e-12);
    for (double r : continuity_residuals(c)) CHECK(r < 1e-12);
  }
  CHECK_THROWS_AS(solve_planar_coefficients(Medium(2.0, 1.0), 1.0, 1.0, 0.0),
                  InvalidArgument);
}

TEST_CASE("uniform vacuum reduces to the free screened response") {
  const double q = 0.8, z0 = -0.6;
  const PlanarCoefficients c = solve_planar_coefficients(Medium(1.0, 0.0), q, 1.0, z0);
  CHECK(std::abs(c.B) < 1e-15);
  CHECK(std::abs(c.C1) < 1e-15);
  for (double z : {-0.5, -0.1, 0.3, 0.99, 1.5, 4.0}) {
    CHECK(oracle::rel(c.potential(z), 2.0 * kPi / q * std::exp(-q * (z - z0))) <
          1e-14);
  }
  CHECK_THROWS_AS(c.potential(-1.0), InvalidArgument);
}

TEST_CASE("potential is continuous with continuous flux") {
  const Medium m(3.0, 1.2);
  const PlanarCoefficients c = solve_planar_coefficients(m, 0.7, 1.0, -0.4);
  const double h = 1e-7;
  for (double z : {0.0, 1.0}) {
    const double left = c.potential(z - h), right = c.potential(z + h);
    CHECK(oracle::rel(left, right) < 1e-6);
    const double eps_left = z == 0.0 ? 3.0 : 1.0;
    const double eps_right = z == 0.0 ? 1.0 : 3.0;
    const double dl = (c.potential(z - h) - c.potential(z - 3 * h)) / (2 * h);
    const double dr = (c.potential(z + 3 * h) - c.potential(z + h)) / (2 * h);
    CHECK(oracle::rel(eps_left * dl, eps_right * dr) < 1e-5);
  }
}

TEST_CASE("half-space coefficient") {
  CHECK(D_value(coefficient_D_halfspace(Medium(1.0, 0.0), 2.0, 1.0)) ==
        doctest::Approx(0.5).epsilon(1e-15));
  CHECK(D_value(coefficient_D_halfspace(Medium(1e12, 0.0), 2.0, 1.0)) < 1e-11);
  // Independent 2x2 solve: vacuum e^{-qz}/q + C1 e^{qz} meets D e^{-q_k z}.
  for (double eps : {1.0, 2.0, 9.0}) {
    for (double k : {0.0, 0.5, 3.0}) {
      const Medium m(eps, k);
      const double q = 0.9, a = 1.1, qk = q_kappa(m, q);
      // unknowns: C1 e^{qa}, D e^{-q_k a}
      const std::array<std::array<double, 2>, 2> mat = {{{1.0, -1.0},
                                                         {q, eps * qk}}};
      const std::array<double, 2> rhs = {-std::exp(-q * a) / q, std::exp(-q * a)};
      const auto x = detail::solve_dense(mat, rhs);
      const double d = x[1] * std::exp(qk * a);
      CHECK(oracle::rel(D_value(coefficient_D_halfspace(m, q, a)), d) < 1e-12);
    }
  }
}

TEST_CASE("pair correlation") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.05, 3.0);
  for (int i = 0; i < 100; ++i) {
    const Medium m(1.0 + u(rng), u(rng));
    const double q = u(rng), a = u(rng), z0 = -u(rng), z = a + u(rng);
    const double h1 = correlation_hat(m, q, z, z0, a);
    CHECK(h1 < 0.0);
    const double dz = 0.37;
    const double h2 = correlation_hat(m, q, z + dz, z0, a);
    CHECK(oracle::rel(h2 / h1, std::exp(-q_kappa(m, q) * dz)) < 1e-12);
  }
  // Equals minus the potential beyond the second slab.
  const Medium m(2.0, 1.0);
  const PlanarCoefficients c = solve_planar_coefficients(m, 1.0, 1.0, -0.5);
  CHECK(oracle::rel(correlation_hat(m, 1.0, 1.8, -0.5, 1.0), -c.potential(1.8)) <
        1e-12);
  CHECK_THROWS_AS(correlation_hat(m, 1.0, 0.5, -0.5, 1.0), InvalidArgument);
  CHECK_THROWS_AS(correlation_hat(m, 1.0, 2.0, 0.5, 1.0), InvalidArgument);
}

TEST_CASE("ionic force") {
  CHECK(force_ionic_raw(Medium(3.0, 0.0), 1.0).value == 0.0);
  for (double ka : {0.1, 1.0, 10.0}) {
    const Medium m(1.0, ka);
    const Estimate ionic = force_ionic_raw(m, 1.0);
    CHECK(ionic.value < 0.0);
    CHECK(oracle::rel(force_per_area(m, 1.0, quad_only()).value, ionic.value) <
          1e-10);
  }
  const Medium m(2.0, 1.0);
  CHECK(std::abs(force_ionic_raw(m, 1.0).value) <
        std::abs(force_per_area(m, 1.0, quad_only()).value));
}

TEST_CASE("plate force limits") {
  CHECK(force_per_area(Medium(1.0, 0.0), 1.0).value == 0.0);

  const double conductor = -oracle::zeta3() / (8.0 * kPi);
  CHECK(conductor == doctest::Approx(-4.78266e-2).epsilon(1e-5));
  CHECK(oracle::rel(force_per_area(Medium(1.0, 1e4), 1.0, quad_only()).value,
                    conductor) < 1e-3);

  for (double eps : {1.5, 2.0, 5.0, 20.0}) {
    const double r = (eps - 1.0) / (eps + 1.0);
    const double expected = -oracle::li3(r * r) / (8.0 * kPi);
    const PlanarForce f = force_per_area(Medium(eps, 0.0), 1.0);
    CHECK(oracle::rel(f.value, expected) < 1e-9);
    REQUIRE(f.series_evaluated);
    CHECK(oracle::rel(f.series.value, f.value) < 1e-9);
  }
  CHECK(force_per_area(Medium(2.0, 0.0), 1.0).value * 8.0 * kPi ==
        doctest::Approx(-0.1127076526).epsilon(1e-8));
}

TEST_CASE("plate force against an independent quadrature") {
  for (double eps : {1.0, 2.0, 10.0}) {
    for (double ka : {0.1, 1.0, 10.0}) {
      const Medium m(eps, ka);
      const double ref = -oracle::integrate([&](double q) {
        if (q == 0.0) return 0.0;
        const double qk = std::sqrt(q * q + ka * ka);
        const double log_x =
            2.0 * std::log1p(-2.0 * q / (eps * qk + q)) - 2.0 * q;
        return -std::exp(log_x) / std::expm1(log_x) * q * q;
      }) / (2.0 * kPi);
      CHECK(oracle::rel(force_per_area(m, 1.0, quad_only()).value, ref) < 1e-10);
    }
  }
}

TEST_CASE("series path with screening") {
  // With screening A -> 1 as q -> 0, so the series terms decay only as n^-3.
  const PlanarForce f = force_per_area(Medium(2.0, 1.0), 1.0);
  REQUIRE(f.series_evaluated);
  CHECK(f.series.converged);
  CHECK(oracle::rel(f.series.value, f.value) < 1e-6);
}

TEST_CASE("free energy") {
  CHECK(free_energy_per_area(Medium(1.0, 0.0), 1.0).value == 0.0);
  for (double eps : {2.0, 6.0}) {
    const double r = (eps - 1.0) / (eps + 1.0);
    CHECK(oracle::rel(free_energy_per_area(Medium(eps, 0.0), 2.0).value * 4.0,
                      -oracle::li3(r * r) / (16.0 * kPi)) < 1e-9);
  }
  for (double eps : {1.5, 3.0, 10.0}) {
    for (double ka : {0.1, 1.0, 10.0}) {
      const Medium m(eps, ka);
      const double h = 1e-4;
      const double fd = -(free_energy_per_area(m, 1.0 + h).value -
                          free_energy_per_area(m, 1.0 - h).value) /
                        (2.0 * h);
      CHECK(oracle::rel(fd, force_per_area(m, 1.0, quad_only()).value) < 1e-5);
      CHECK(free_energy_per_area(m, 1.0).value < 0.0);
    }
  }
}

TEST_CASE("particle near a half-space") {
  CHECK(particle_potential(Medium(3.0, 1.0), 0.0, 1.0).value == 0.0);
  CHECK(particle_force(Medium(3.0, 1.0), 0.0, 1.0).value == 0.0);
  CHECK(oracle::rel(particle_potential(Medium(1.0, 1e4), 1.0, 1.0).value, -0.25) <
        1e-3);
  CHECK(oracle::rel(particle_potential(Medium(3.0, 0.0), 1.0, 1.0).value, -0.125) <
        1e-10);
  for (double eps : {1.0, 1.5, 4.0}) {
    for (double ka : {0.0, 0.7, 5.0}) {
      if (eps == 1.0 && ka == 0.0) continue;
      const Medium m(eps, ka);
      const double h = 1e-4;
      const double fd = -(particle_potential(m, 2.0, 1.0 + h).value -
                          particle_potential(m, 2.0, 1.0 - h).value) /
                        (2.0 * h);
      const double f = particle_force(m, 2.0, 1.0).value;
      CHECK(f < 0.0);
      CHECK(particle_potential(m, 2.0, 1.0).value < 0.0);
      CHECK(oracle::rel(fd, f) < 1e-5);
    }
  }
  CHECK_THROWS_AS(particle_potential(Medium(2.0, 1.0), -1.0, 1.0), InvalidArgument);
}

TEST_CASE("reflection hook perturbs the force") {
  PlanarOptions o = quad_only();
  o.reflection_scale = 1.01;
  const double base = force_per_area(Medium(2.0, 0.0), 1.0, quad_only()).value;
  const double bumped = force_per_area(Medium(2.0, 0.0), 1.0, o).value;
  CHECK(oracle::rel(bumped, base) > 5e-3);
}

TEST_CASE("invalid planar inputs") {
  const Medium m(2.0, 1.0);
  CHECK_THROWS_AS(force_per_area(m, 0.0), InvalidArgument);
  CHECK_THROWS_AS(free_energy_per_area(m, -1.0), InvalidArgument);
  CHECK_THROWS_AS(coefficient_D_plates(m, 0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(coefficient_D_halfspace(m, 1.0, 0.0), InvalidArgument);
  PlanarOptions bad;
  bad.tol = 0.0;
  CHECK_THROWS_AS(force_per_area(m, 1.0, bad), InvalidArgument);
}
