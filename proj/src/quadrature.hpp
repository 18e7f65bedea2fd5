#pragma once

#include <functional>
#include <vector>

namespace kummerlab {

struct QuadratureConfig {
  double rel_tol = 1e-10;
  int max_subdivisions = 4096;

  void validate() const;
};

// Result of a log-space quadrature: the integral is exp(log_value).
struct LogQuad {
  double log_value = 0.0;
  double rel_error = 0.0;  // achieved relative error bound
  int panels = 0;
};

using LogIntegrand = std::function<double(double)>;

// Adaptive 15-point Gauss-Kronrod integration of exp(phi(w) - shift) over the
// union of [breaks[i], breaks[i+1]].  Returns log of the integral (shift added
// back).  `breaks` must be strictly increasing with at least two entries.
// Throws NoConvergenceError if the error target is not met within
// cfg.max_subdivisions panels.  When `final_breaks` is non-null it receives
// the refined panelization (for reuse on nearby integrands).
LogQuad log_integrate_segments(const LogIntegrand& phi, std::vector<double> breaks, double shift,
                               const QuadratureConfig& cfg,
                               std::vector<double>* final_breaks = nullptr);

// Non-adaptive Gauss-Kronrod sum of exp(phi(w) - shift) over a fixed
// panelization (no refinement, no convergence check).
LogQuad log_integrate_fixed(const LogIntegrand& phi, const std::vector<double>& breaks,
                            double shift);

// Walk from `start` in direction `dir` (+1/-1) with growing steps until
// phi(w) <= target and the one-sided tail bound exp(phi(w))/|dphi| is
// negligible against exp(target).  `dphi` may be empty; then only the level
// condition is used.  Returns the cut point.
double find_log_cutoff(const LogIntegrand& phi, double start, double dir, double target,
                       const LogIntegrand& dphi = nullptr);

// Builds mode-centered breakpoints for a peak at w_peak with curvature scale
// |phi''(w_peak)| ~ curv: widths w = 1/sqrt(curv) at multipliers
// {1,3,10,30,100}, clipped to [lo, hi].  Always includes lo and hi.
std::vector<double> peak_breakpoints(double lo, double hi, double w_peak, double curv);

}  // namespace kummerlab
