#include <doctest.h>

#include <cmath>

#include "errors.hpp"
#include "maps.hpp"
#include "oracles.hpp"
#include "rng.hpp"

using namespace kummerlab;

namespace {

double rel(double got, double want) {
  return std::abs(got - want) / std::max({std::abs(want), std::abs(got), 1e-300});
}

double log_uniform(Rng& rng, double lo, double hi) {
  return lo * std::exp(std::log(hi / lo) * rng.uniform());
}

}  // namespace

TEST_CASE("psi hand values and involution") {
  const MapSpec psi10{PsiMap{1.0, 0.0}};
  const PlanePoint uv = apply_map(psi10, {1.0, 1.0});
  CHECK(uv.x == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(uv.y == doctest::Approx(1.5).epsilon(1e-15));
  const PlanePoint back = apply_map(psi10, uv);
  CHECK(rel(back.x, 1.0) < 1e-14);
  CHECK(rel(back.y, 1.0) < 1e-14);
}

TEST_CASE("psi involution over log-uniform grids") {
  Rng rng({11, 3});
  for (int i = 0; i < 2000; ++i) {
    double al = 4.0 * rng.uniform();
    double be = 4.0 * rng.uniform();
    if (i % 7 == 0) al = 0.0;
    if (std::abs(al - be) < 1e-6) be += 0.5;
    const PlanePoint p{log_uniform(rng, 1e-6, 1e6), log_uniform(rng, 1e-6, 1e6)};
    const MapSpec psi{PsiMap{al, be}};
    const PlanePoint q = apply_map(psi, p);
    const PlanePoint back = apply_map(psi, q);
    CHECK(rel(back.x, p.x) < 1e-12);
    CHECK(rel(back.y, p.y) < 1e-12);
  }
}

TEST_CASE("dkdv involution conserves xy") {
  Rng rng({12, 3});
  for (int i = 0; i < 2000; ++i) {
    const DKdVMap m{0.2 + 4.0 * rng.uniform(), 0.2 + 4.0 * rng.uniform()};
    const PlanePoint p{log_uniform(rng, 1e-4, 1e4), log_uniform(rng, 1e-4, 1e4)};
    const PlanePoint q = apply_map(MapSpec{m}, p);
    CHECK(rel(q.x * q.y, p.x * p.y) < 1e-12);
    const PlanePoint back = apply_map(MapSpec{m}, q);
    CHECK(rel(back.x, p.x) < 1e-12);
    CHECK(rel(back.y, p.y) < 1e-12);
  }
}

TEST_CASE("udkdv involution on its positivity region") {
  Rng rng({13, 3});
  for (int i = 0; i < 2000; ++i) {
    const double J = 0.5 + 3.0 * rng.uniform();
    const double K = J + 2.0 * rng.uniform();  // J <= K
    double x, y;
    switch (i % 3) {
      case 0:  // s <= J: pure swap
        x = J * 0.4 * rng.uniform() + 1e-3;
        y = std::min(J - x, J * 0.4) * rng.uniform() + 1e-3;
        break;
      case 1:  // J < s <= K requires x < J
        x = (J - 2e-3) * rng.uniform() + 1e-3;
        y = (J - x) + (K - J) * rng.uniform() * 0.9;
        break;
      default:  // s > K requires y > K - J
        y = (K - J) + 1.0 + rng.uniform();
        x = K + rng.uniform();
        break;
    }
    const MapSpec m{UdKdVMap{J, K}};
    const PlanePoint p{x, y};
    const PlanePoint q = apply_map(m, p);
    CHECK(rel(q.x + q.y, x + y) < 1e-12);  // sum conserved
    const PlanePoint back = apply_map(m, q);
    CHECK(rel(back.x, x) < 1e-12);
    CHECK(rel(back.y, y) < 1e-12);
  }
  // swap regime explicitly
  const PlanePoint sw = apply_map(MapSpec{UdKdVMap{5.0, 7.0}}, {1.0, 2.0});
  CHECK(sw.x == 2.0);
  CHECK(sw.y == 1.0);
}

TEST_CASE("dtoda and classical maps") {
  const PlanePoint t = apply_map(MapSpec{DTodaMap{}}, {2.0, 2.0});
  CHECK(t.x == 4.0);
  CHECK(t.y == 0.5);
  const PlanePoint l = apply_map(MapSpec{LukacsMap{}}, {1.0, 1.0});
  CHECK(l.x == 1.0);
  CHECK(l.y == 2.0);
  const PlanePoint m = apply_map(MapSpec{MatsumotoYorMap{}}, {0.5, 0.5});
  CHECK(m.x == 1.0);
  CHECK(rel(m.y, 1.0) < 1e-15);
}

TEST_CASE("structural residuals vanish") {
  const auto r1 = structural_residuals(2.0, 3.0, {1.0, 2.0});
  for (double r : r1) CHECK(std::abs(r) <= 1e-14);
  const auto r2 = structural_residuals(1.0, 0.0, {1.0, 1.0});
  for (double r : r2) CHECK(std::abs(r) <= 1e-14);
  const auto r3 = structural_residuals(2.0, 3.0, {1e-12, 1e-12});
  for (double r : r3) CHECK(std::abs(r) <= 1e-14);
}

TEST_CASE("psi jacobian equals xy/uv and the finite-difference determinant") {
  // alpha=1, beta=0 at (u,v) = psi(1,1) = (0.5,1.5): back-map gives (1,1)
  const double j = psi_jacobian(1.0, 0.0, {0.5, 1.5});
  CHECK(rel(j, (1.0 * 1.0) / (0.5 * 1.5)) < 1e-14);

  Rng rng({14, 3});
  for (int i = 0; i < 200; ++i) {
    const double al = 3.0 * rng.uniform();
    double be = 3.0 * rng.uniform();
    if (std::abs(al - be) < 1e-6) be += 0.4;
    const PlanePoint q{log_uniform(rng, 1e-2, 1e2), log_uniform(rng, 1e-2, 1e2)};
    const double got = psi_jacobian(al, be, q);
    const double fd = oracles::fd_jacobian(
        [&](double u, double v) {
          const PlanePoint p = apply_map(MapSpec{PsiMap{al, be}}, {u, v});
          return std::pair{p.x, p.y};
        },
        q.x, q.y);
    CHECK(rel(got, std::abs(fd)) < 1e-6);
    // xy/uv closed form
    const PlanePoint xy = apply_map(MapSpec{PsiMap{al, be}}, q);
    CHECK(rel(got, xy.x * xy.y / (q.x * q.y)) < 1e-12);
  }

  CHECK_THROWS_AS(psi_jacobian(2.0, 2.0, {1.0, 1.0}), DomainError);  // alpha == beta
}

TEST_CASE("phi families: limit formulas and O(1/n) convergence") {
  const PlanePoint l = phi_family(PhiKind::lukacs, kPhiLimit, {1.0, 1.0});
  CHECK(l.x == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(l.y == doctest::Approx(2.0).epsilon(1e-15));

  const PlanePoint my = phi_family(PhiKind::matsumoto_yor, kPhiLimit, {1.0, 3.0});
  CHECK(my.x == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(my.y == doctest::Approx(4.0 / 3.0).epsilon(1e-15));

  // lukacs at n = 10^k converges to the limit at rate O(1/n)
  double prev_err = 1e9;
  for (int k = 1; k <= 6; ++k) {
    const double n = std::pow(10.0, k);
    const PlanePoint p = phi_family(PhiKind::lukacs, n, {1.0, 1.0});
    const double err = std::max(std::abs(p.x - 1.0), std::abs(p.y - 2.0));
    CHECK(err < prev_err);
    CHECK(err < 10.0 / n);
    prev_err = err;
  }

  // all kinds at the unit point: error at n=1e6 below 1e-5
  for (PhiKind kind : {PhiKind::lukacs, PhiKind::kummer_gamma, PhiKind::matsumoto_yor,
                       PhiKind::kdv}) {
    const PlanePoint fin = phi_family(kind, 1e6, {1.0, 1.0}, 1.0, 2.0);
    const PlanePoint lim = phi_family(kind, kPhiLimit, {1.0, 1.0}, 1.0, 2.0);
    CHECK(std::abs(fin.x - lim.x) < 1e-5);
    CHECK(std::abs(fin.y - lim.y) < 1e-5);
  }
  // random points: the n-ladder error shrinks
  Rng rng({15, 3});
  for (int i = 0; i < 50; ++i) {
    const PlanePoint p{0.2 + 2.0 * rng.uniform(), 0.2 + 2.0 * rng.uniform()};
    for (PhiKind kind : {PhiKind::lukacs, PhiKind::kummer_gamma, PhiKind::matsumoto_yor,
                         PhiKind::kdv}) {
      const PlanePoint lim = phi_family(kind, kPhiLimit, p, 1.0, 2.0);
      auto err = [&](double n) {
        const PlanePoint q = phi_family(kind, n, p, 1.0, 2.0);
        return std::max(std::abs(q.x - lim.x), std::abs(q.y - lim.y));
      };
      CHECK(err(1e6) < err(1e4));
      CHECK(err(1e6) < 1e-3);
    }
  }
}

TEST_CASE("map domain errors") {
  CHECK_THROWS_AS(apply_map(MapSpec{PsiMap{1.0, 1.0}}, {1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(apply_map(MapSpec{PsiMap{1.0, 0.0}}, {-1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(apply_map(MapSpec{UdKdVMap{1.0, 10.0}}, {2.0, 1.0}), DomainError);  // u<=0
  CHECK_THROWS_AS(phi_family(PhiKind::lukacs, 0.5, {1.0, 1.0}), DomainError);
}
