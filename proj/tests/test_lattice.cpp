#include <doctest.h>

#include <cmath>

#include "errors.hpp"
#include "harness.hpp"
#include "lattice.hpp"

using namespace kummerlab;

TEST_CASE("single-site step is one map application") {
  LatticeState s{{1.0}, 0};
  const double exit_y = step(s, 1.0, MapSpec{PsiMap{1.0, 0.0}});
  CHECK(s.x[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(exit_y == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(s.t == 1);
}

TEST_CASE("a sweep is not an involution even when the map is") {
  Rng rng({31, 1});
  LatticeState s{sample_kummer({1.0, 1.5, 0.7, 1.0}, rng, 64), 0};
  const std::vector<double> orig = s.x;
  const MapSpec psi{PsiMap{1.0, 2.0}};
  step(s, 0.8, psi);
  step(s, 0.8, psi);  // same boundary value twice
  bool same = true;
  for (std::size_t i = 0; i < orig.size(); ++i)
    same = same && std::abs(s.x[i] - orig[i]) < 1e-12 * orig[i];
  CHECK_FALSE(same);
}

TEST_CASE("non-involutive maps are rejected") {
  LatticeConfig cfg;
  cfg.sites = 16;
  cfg.steps = 1;
  cfg.map = DTodaMap{};
  cfg.x_law = {1.0, 1.5, 0.7, 1.0};
  cfg.y_law = {2.0, 0.7, 1.5, 1.0};
  CHECK_THROWS_AS(run_invariance(cfg), ContractError);
  LatticeState s{{1.0}, 0};
  CHECK_THROWS_AS(step(s, 1.0, MapSpec{LukacsMap{}}), ContractError);
}

TEST_CASE("invariance under the balance pairing") {
  LatticeConfig cfg;
  cfg.sites = 4000;
  cfg.steps = 10;
  cfg.map = PsiMap{1.0, 2.0};
  cfg.x_law = {1.0, 1.2, 0.9, 1.0};
  cfg.y_law = {2.0, 0.9, 1.2, 1.0};
  cfg.seed = 5;
  const auto reports = run_invariance(cfg);
  for (const auto& r : reports) {
    INFO(r.name, " stat=", r.statistic, " thr=", r.threshold);
    if (r.name == "lattice.ks_interior" || r.name == "lattice.lag1_correlation" ||
        r.name == "lattice.sum_conservation") {
      CHECK(r.pass);
    }
    if (r.name == "lattice.sum_conservation") CHECK(r.statistic <= 1e-9);
  }
}

TEST_CASE("exit law follows y_law on the diagonal pairing") {
  // a=b is the parameter point where F(mu x nu) = mu x nu holds exactly,
  // so the carry chain is iid y_law and the exits match it.
  LatticeConfig cfg;
  cfg.sites = 2000;
  cfg.steps = 200;
  cfg.map = PsiMap{1.0, 2.0};
  cfg.x_law = {1.0, 1.1, 1.1, 1.0};
  cfg.y_law = {2.0, 1.1, 1.1, 1.0};
  cfg.seed = 6;
  const auto reports = run_invariance(cfg);
  bool saw_exit = false;
  for (const auto& r : reports) {
    INFO(r.name, " stat=", r.statistic, " thr=", r.threshold);
    if (r.name == "lattice.ks_exit") {
      saw_exit = true;
      CHECK(r.pass);
    }
    if (r.name == "lattice.ks_interior") CHECK(r.pass);
  }
  CHECK(saw_exit);
}

TEST_CASE("negative control: wrong x_law fails the interior KS") {
  LatticeConfig cfg;
  cfg.sites = 4000;
  cfg.steps = 10;
  cfg.map = PsiMap{1.0, 2.0};
  cfg.x_law = {0.0, 1.5, 0.0, 1.0};  // Gamma(1.5,1) instead of K_1(1.5,0.7,1)
  cfg.y_law = {2.0, 0.7, 1.5, 1.0};
  cfg.seed = 7;
  const auto reports = run_invariance(cfg);
  for (const auto& r : reports) {
    if (r.name == "lattice.ks_interior") CHECK_FALSE(r.pass);
  }
}

TEST_CASE("zero steps is the trivial evolution") {
  LatticeConfig cfg;
  cfg.sites = 2000;
  cfg.steps = 0;
  cfg.map = PsiMap{1.0, 2.0};
  cfg.x_law = {1.0, 1.5, 0.7, 1.0};
  cfg.y_law = {2.0, 0.7, 1.5, 1.0};
  cfg.seed = 8;
  const auto reports = run_invariance(cfg);
  for (const auto& r : reports) {
    if (r.name == "lattice.ks_interior") CHECK(r.pass);
    CHECK(r.name != "lattice.ks_exit");  // no exits collected
  }
}

TEST_CASE("snapshot callback sees every recorded sweep") {
  LatticeConfig cfg;
  cfg.sites = 128;
  cfg.steps = 3;
  cfg.map = PsiMap{1.0, 0.0};
  cfg.x_law = {1.0, 1.5, 0.7, 1.0};
  cfg.y_law = {0.0, 0.7, 0.0, 1.0};
  cfg.seed = 9;
  std::size_t calls = 0, rows = 0;
  run_invariance(cfg, {}, [&](long, const std::vector<double>& x) {
    ++calls;
    rows += x.size();
  });
  CHECK(calls == 4);  // t = 0..3
  CHECK(rows == 4 * 128);
}

TEST_CASE("conservation telescopes for psi sweeps") {
  LatticeConfig cfg;
  cfg.sites = 10000;
  cfg.steps = 5;
  cfg.map = PsiMap{0.5, 1.5};
  cfg.x_law = {0.5, 2.0, 1.0, 1.0};
  cfg.y_law = {1.5, 1.0, 2.0, 1.0};
  cfg.seed = 10;
  const auto reports = run_invariance(cfg);
  for (const auto& r : reports) {
    if (r.name == "lattice.sum_conservation") {
      CHECK(r.statistic <= 1e-9);
      CHECK(r.pass);
    }
  }
}
