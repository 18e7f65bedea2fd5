#include "lattice.hpp"

#include <cmath>
#include <cstdio>

#include "errors.hpp"
#include "harness.hpp"

namespace kummerlab {

void LatticeConfig::validate() const {
  if (sites == 0) throw ContractError("LatticeConfig: sites must be positive");
  validate_map(map);
  if (!is_involution(map))
    throw ContractError("LatticeConfig: type-I recursion requires an involutive map");
  x_law.validate();
  y_law.validate();
}

double step(LatticeState& state, double boundary_y, const MapSpec& map) {
  if (!is_involution(map))
    throw ContractError("lattice step: type-I recursion requires an involutive map");
  if (!(boundary_y > 0.0)) throw DomainError("lattice step: boundary_y must be positive");
  double carry = boundary_y;
  for (std::size_t i = 0; i < state.x.size(); ++i) {
    PlanePoint uv;
    try {
      uv = apply_map(map, PlanePoint{state.x[i], carry});
    } catch (const Error& e) {
      throw DomainError("lattice step failed at site " + std::to_string(i) + ": " + e.what());
    }
    state.x[i] = uv.x;
    carry = uv.y;
  }
  ++state.t;
  return carry;
}

std::vector<StatReport> run_invariance(const LatticeConfig& cfg, const QuadratureConfig& qcfg,
                                       const SnapshotFn& snapshot) {
  cfg.validate();
  const std::size_t n = cfg.sites;
  Rng rinit({cfg.seed, streams::kLatticeInit});
  Rng rbound({cfg.seed, streams::kLatticeBoundary});
  LatticeState state{sample_kummer(cfg.x_law, rinit, n), 0};
  if (snapshot) snapshot(0, state.x);

  const bool is_psi = std::holds_alternative<PsiMap>(cfg.map);
  double max_cons = 0.0;
  std::vector<double> exits;
  exits.reserve(cfg.steps);
  for (std::size_t t = 0; t < cfg.steps; ++t) {
    const double boundary = sample_kummer1(cfg.y_law, rbound);
    double before = 0.0;
    if (is_psi) {
      for (double v : state.x) before += v;
      before += boundary;
    }
    const double exit_y = step(state, boundary, cfg.map);
    exits.push_back(exit_y);
    if (is_psi) {
      double after = exit_y;
      for (double v : state.x) after += v;
      max_cons = std::max(max_cons, std::abs(after - before) / before);
    }
    if (snapshot) snapshot(state.t, state.x);
  }

  const std::size_t buf = (n + 9) / 10;
  std::vector<double> interior(state.x.begin() + static_cast<long>(std::min(buf, n - 1)),
                               state.x.end());

  std::vector<StatReport> out;
  out.push_back(ks_one_sample(interior, Law{cfg.x_law}, qcfg, "lattice.ks_interior", cfg.seed));

  // lag-1 spatial correlation of the interior sites
  {
    const std::size_t m = interior.size();
    double mean = 0.0;
    for (double v : interior) mean += v;
    mean /= static_cast<double>(m);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = interior[i] - mean;
      den += d * d;
      if (i + 1 < m) num += d * (interior[i + 1] - mean);
    }
    const double corr = (den > 0.0) ? num / den : 0.0;
    out.push_back(make_report("lattice.lag1_correlation", std::abs(corr),
                              3.0 / std::sqrt(0.9 * static_cast<double>(n)), m, cfg.seed));
  }

  // exit-value law (informational for a != b pairings; see diagonal tests)
  if (exits.size() >= 5) {
    std::vector<double> ex = exits;
    std::sort(ex.begin(), ex.end());
    const CdfTable table(Law{cfg.y_law}, ex.front(), std::max(ex.back(), ex.front() * (1 + 1e-12)),
                         qcfg);
    const double d = ks_statistic(ex, table);
    out.push_back(make_report("lattice.ks_exit", d,
                              1.63 / std::sqrt(static_cast<double>(ex.size())), ex.size(),
                              cfg.seed));
  }

  if (is_psi) {
    out.push_back(make_report("lattice.sum_conservation", max_cons, 1e-9,
                              cfg.steps, cfg.seed));
  }
  for (auto& r : out) {
    r.details.emplace_back("sites", std::to_string(n));
    r.details.emplace_back("steps", std::to_string(cfg.steps));
    r.details.emplace_back("buffer", std::to_string(buf));
  }
  return out;
}

}  // namespace kummerlab
