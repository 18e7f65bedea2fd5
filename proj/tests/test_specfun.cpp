#include <doctest.h>

#include <cmath>

#include "errors.hpp"
#include "oracles.hpp"
#include "rng.hpp"
#include "specfun.hpp"

using namespace kummerlab;

namespace {
double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }
}  // namespace

TEST_CASE("kummer_u closed form U(a,a+1,z) = z^-a") {
  CHECK(rel_err(kummer_u({1.0, 2.0, 2.0}), 0.5) < 1e-9);
  CHECK(rel_err(kummer_u({2.0, 3.0, 4.0}), 0.0625) < 1e-9);

  Rng rng({2024, 1});
  for (int i = 0; i < 50; ++i) {
    const double a = 0.2 + 9.8 * rng.uniform();
    const double z = 0.2 + 9.8 * rng.uniform();
    const double want = std::exp(-a * std::log(z));
    CHECK(rel_err(kummer_u({a, a + 1.0, z}), want) < 1e-9);
  }
}

TEST_CASE("kummer_u agrees with the trapezoid oracle") {
  // U(1,1,1) has no elementary closed form
  const double want = std::exp(oracles::log_gamma_u_oracle(1.0, 1.0, 1.0));
  CHECK(rel_err(kummer_u({1.0, 1.0, 1.0}), want) < 3e-9);

  // fractional a (endpoint singularity path)
  const double want2 =
      std::exp(oracles::log_gamma_u_oracle(0.3, -0.7, 2.5) - std::lgamma(0.3));
  CHECK(rel_err(kummer_u({0.3, -0.7, 2.5}), want2) < 3e-9);
}

TEST_CASE("log_kummer_u") {
  CHECK(std::abs(log_kummer_u({1.0, 2.0, 2.0}) - std::log(0.5)) < 1e-9);
  CHECK(std::abs(log_kummer_u({1.0, 2.0, 1.0})) < 1e-9);  // U(1,2,1) = 1

  // large-argument case only representable in log space
  const double want = oracles::log_gamma_u_oracle(50.0, 10.0, 200.0) - std::lgamma(50.0);
  CHECK(std::abs(log_kummer_u({50.0, 10.0, 200.0}) - want) < 1e-7 * std::abs(want));

  // exp(log_kummer_u) == kummer_u within 2 rel_tol where representable
  for (auto [a, b, z] : {std::array{1.5, 0.5, 2.0}, {3.0, 2.0, 0.7}, {0.4, 1.2, 5.0}}) {
    CHECK(rel_err(std::exp(log_kummer_u({a, b, z})), kummer_u({a, b, z})) < 2e-10);
  }
}

TEST_CASE("log_kummer_u handles very large first parameters") {
  // normalizer regime of the finite-n limit laws: a ~ 1000, small z
  const double got = log_kummer_u({1000.0, 1.0, 0.001});
  const double want = oracles::log_gamma_u_oracle(1000.0, 1.0, 0.001) - std::lgamma(1000.0);
  CHECK(std::abs(got - want) < 1e-6 * std::abs(want));
}

TEST_CASE("log_gamma_fn") {
  CHECK(std::abs(log_gamma_fn(1.0)) < 1e-14);
  CHECK(std::abs(log_gamma_fn(5.0) - std::log(24.0)) < 1e-13);
  CHECK(std::abs(log_gamma_fn(0.5) - 0.5 * std::log(M_PI)) < 1e-13);
  CHECK_THROWS_AS(log_gamma_fn(0.0), DomainError);
  CHECK_THROWS_AS(log_gamma_fn(-2.0), DomainError);
}

TEST_CASE("reflection identity U(a,b,z) = z^{1-b} U(1+a-b,2-b,z)") {
  Rng rng({7, 2});
  for (int i = 0; i < 100; ++i) {
    const double a = 0.2 + 9.8 * rng.uniform();
    const double z = 0.2 + 9.8 * rng.uniform();
    const double b = -4.0 + (a + 4.99) * rng.uniform();  // keeps 1+a-b > 0
    const double lhs = log_kummer_u({a, b, z});
    const double rhs = (1.0 - b) * std::log(z) + log_kummer_u({1.0 + a - b, 2.0 - b, z});
    CHECK(std::abs(lhs - rhs) < 1e-9);
  }
}

TEST_CASE("log_kummer_u_any reflects nonpositive first parameters") {
  // U(-0.5, 0.2, 1.3) = z^{0.8} U(0.3, 1.8, z)
  const double got = log_kummer_u_any(-0.5, 0.2, 1.3);
  const double want = 0.8 * std::log(1.3) + log_kummer_u({0.3, 1.8, 1.3});
  CHECK(std::abs(got - want) < 1e-12);
  CHECK_THROWS_AS(log_kummer_u_any(-2.0, 0.0, 1.0), DomainError);  // 1+a-b < 0 too
}

TEST_CASE("U is strictly decreasing in z") {
  for (double a : {0.5, 1.0, 3.0}) {
    for (double b : {-1.0, 0.5, 2.5}) {
      double prev = kummer_u({a, b, 0.1});
      for (double z = 0.2; z < 8.0; z += 0.35) {
        const double cur = kummer_u({a, b, z});
        CHECK(cur < prev);
        prev = cur;
      }
    }
  }
}

TEST_CASE("kummer_ode_residual") {
  CHECK(std::abs(kummer_ode_residual(1.0, 2.0, 3.0, 1e-3)) <= 1e-5);
  CHECK(std::abs(kummer_ode_residual(2.0, 0.5, 1.5, 1e-3)) <= 1e-5);

  // O(h^2): shrinking h by 10 shrinks the residual by ~100
  const double r_coarse = std::abs(kummer_ode_residual(1.0, 2.0, 3.0, 1e-2));
  const double r_fine = std::abs(kummer_ode_residual(1.0, 2.0, 3.0, 1e-3));
  CHECK(r_coarse / r_fine > 50.0);
  CHECK(r_coarse / r_fine < 200.0);

  CHECK_THROWS_AS(kummer_ode_residual(1.0, 2.0, 0.001, 1e-3), DomainError);  // z-2h <= 0
}

TEST_CASE("quadrature error paths") {
  CHECK_THROWS_AS(kummer_u({-1.0, 0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(kummer_u({1.0, 0.0, 0.0}), DomainError);  // z=0 outside the domain
  CHECK_THROWS_AS(kummer_u({1.0, 0.0, -2.0}), DomainError);

  QuadratureConfig bad;
  bad.rel_tol = 1e-3;
  CHECK_THROWS_AS(kummer_u({1.0, 1.0, 1.0}, bad), DomainError);  // rel_tol > 1e-4

  QuadratureConfig tiny;
  tiny.max_subdivisions = 16;
  tiny.rel_tol = 1e-10;
  // an interior algebraic singularity cannot be resolved in 16 panels; the
  // error must carry the best estimate and the achieved bound
  const double s0 = 0.3141592653589793;
  auto nasty = [s0](double w) { return -0.9 * std::log(std::abs(w - s0) + 1e-300); };
  bool threw = false;
  try {
    log_integrate_segments(nasty, {0.0, 1.0}, 0.0, tiny);
  } catch (const NoConvergenceError& e) {
    threw = true;
    CHECK(std::isfinite(e.best_log_value));
    CHECK(e.achieved_rel_error > tiny.rel_tol);
  }
  CHECK(threw);
}
