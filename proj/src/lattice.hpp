#pragma once

#include <functional>

#include "maps.hpp"
#include "stats.hpp"

namespace kummerlab {

// Finite-window type-I recursion (x_n^t, y_n^t) = F(x_n^{t-1}, y_{n-1}^t)
// with stochastic left-boundary injection and a discarded boundary buffer.
struct LatticeConfig {
  std::size_t sites = 0;
  std::size_t steps = 0;
  MapSpec map;
  KummerParams x_law{};
  KummerParams y_law{};
  std::uint64_t seed = 0;

  void validate() const;  // map must be involutive (Psi, DKdV, UdKdV)
};

struct LatticeState {
  std::vector<double> x;
  long t = 0;
};

// One left-to-right sweep; mutates the state in place, returns the exiting
// auxiliary value y_{N-1}^t.
double step(LatticeState& state, double boundary_y, const MapSpec& map);

// Runs T sweeps from an iid x_law start with iid y_law boundary injection.
// Reports: interior KS vs x_law (leftmost ceil(N/10) sites discarded), lag-1
// spatial correlation of the interior, exit-value KS vs y_law, and (for Psi
// maps) the telescoped sum-conservation residual.
using SnapshotFn = std::function<void(long t, const std::vector<double>& x)>;
std::vector<StatReport> run_invariance(const LatticeConfig& cfg,
                                       const QuadratureConfig& qcfg = {},
                                       const SnapshotFn& snapshot = nullptr);

}  // namespace kummerlab
