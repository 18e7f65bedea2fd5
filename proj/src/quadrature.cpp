#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "errors.hpp"

namespace kummerlab {

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0) || rel_tol > 1e-4)
    throw DomainError("QuadratureConfig.rel_tol must lie in (0, 1e-4]");
  if (max_subdivisions < 16) throw DomainError("QuadratureConfig.max_subdivisions must be >= 16");
}

namespace {

// 15-point Kronrod nodes/weights and embedded 7-point Gauss weights (QUADPACK qk15).
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
constexpr double kWgk[8] = {
    0.0229353220105292, 0.0630920926299785, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679, 0.1903505780647854, 0.2044329400752989, 0.2094821410847278};
constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694};

struct Panel {
  double lo, hi;
  double value;  // scaled (relative to shift)
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel eval_panel(const LogIntegrand& phi, double lo, double hi, double shift) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double fc = std::exp(phi(mid) - shift);
  double gk = kWgk[7] * fc;
  double g = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = std::exp(phi(mid - dx) - shift);
    const double f2 = std::exp(phi(mid + dx) - shift);
    gk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) g += kWg[j / 2] * (f1 + f2);
  }
  Panel p;
  p.lo = lo;
  p.hi = hi;
  p.value = gk * half;
  p.error = std::abs(gk - g) * half;
  return p;
}

}  // namespace

LogQuad log_integrate_segments(const LogIntegrand& phi, std::vector<double> breaks, double shift,
                               const QuadratureConfig& cfg, std::vector<double>* final_breaks) {
  cfg.validate();
  if (breaks.size() < 2) throw DomainError("log_integrate_segments: need at least one segment");
  std::priority_queue<Panel> heap;
  double total = 0.0, err = 0.0;
  int panels = 0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i] < breaks[i + 1]))
      throw DomainError("log_integrate_segments: breakpoints must be strictly increasing");
    Panel p = eval_panel(phi, breaks[i], breaks[i + 1], shift);
    total += p.value;
    err += p.error;
    heap.push(p);
    ++panels;
  }
  while (err > cfg.rel_tol * std::max(total, 1e-300) && panels < cfg.max_subdivisions) {
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (mid <= worst.lo || mid >= worst.hi) {
      // interval hit floating-point resolution; accept its estimate
      heap.push(Panel{worst.lo, worst.hi, worst.value, 0.0});
      err -= worst.error;
      continue;
    }
    Panel a = eval_panel(phi, worst.lo, mid, shift);
    Panel b = eval_panel(phi, mid, worst.hi, shift);
    total += a.value + b.value - worst.value;
    err += a.error + b.error - worst.error;
    heap.push(a);
    heap.push(b);
    ++panels;
  }
  if (final_breaks) {
    final_breaks->clear();
    while (!heap.empty()) {
      final_breaks->push_back(heap.top().lo);
      final_breaks->push_back(heap.top().hi);
      heap.pop();
    }
    std::sort(final_breaks->begin(), final_breaks->end());
    final_breaks->erase(std::unique(final_breaks->begin(), final_breaks->end()),
                        final_breaks->end());
  }
  LogQuad out;
  out.panels = panels;
  out.rel_error = (total > 0.0) ? err / total : err;
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw NoConvergenceError("quadrature produced a non-positive or non-finite value",
                             std::log(std::max(total, 0.0)) + shift, out.rel_error);
  }
  out.log_value = std::log(total) + shift;
  if (err > cfg.rel_tol * total) {
    throw NoConvergenceError("quadrature did not converge within max_subdivisions",
                             out.log_value, out.rel_error);
  }
  return out;
}

LogQuad log_integrate_fixed(const LogIntegrand& phi, const std::vector<double>& breaks,
                            double shift) {
  if (breaks.size() < 2) throw DomainError("log_integrate_fixed: need at least one segment");
  double total = 0.0, err = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    Panel p = eval_panel(phi, breaks[i], breaks[i + 1], shift);
    total += p.value;
    err += p.error;
  }
  LogQuad out;
  out.panels = static_cast<int>(breaks.size()) - 1;
  out.rel_error = (total > 0.0) ? err / total : err;
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw NoConvergenceError("fixed-panel quadrature produced a non-positive value",
                             std::log(std::max(total, 0.0)) + shift, out.rel_error);
  }
  out.log_value = std::log(total) + shift;
  return out;
}

double find_log_cutoff(const LogIntegrand& phi, double start, double dir, double target,
                       const LogIntegrand& dphi) {
  double step = std::max(0.5, std::abs(start) * 0.1);
  double w = start;
  for (int it = 0; it < 200; ++it) {
    double cand = start + dir * step;
    double v = phi(cand);
    if (v <= target) {
      w = cand;
      // tail-rate check: integral beyond cand is ~ exp(v)/|phi'|
      if (!dphi) return w;
      double slope = std::abs(dphi(cand));
      if (slope > 1e-12 && v - std::log(slope) <= target) return w;
    }
    step *= 1.7;
  }
  return start + dir * step;
}

std::vector<double> peak_breakpoints(double lo, double hi, double w_peak, double curv) {
  std::vector<double> pts{lo, hi};
  const double w = 1.0 / std::sqrt(std::max(curv, 1e-12));
  for (double m : {1.0, 3.0, 10.0, 30.0, 100.0}) {
    for (double s : {-1.0, 1.0}) {
      double p = w_peak + s * m * w;
      if (p > lo && p < hi) pts.push_back(p);
    }
  }
  if (w_peak > lo && w_peak < hi) pts.push_back(w_peak);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-14 * std::max(std::abs(a), std::abs(b)); }),
            pts.end());
  return pts;
}

}  // namespace kummerlab
