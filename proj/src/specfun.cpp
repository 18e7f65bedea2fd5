#include "specfun.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace kummerlab {

void UArgs::validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("U(a,b,z): a must be positive");
  if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("U(a,b,z): z must be positive");
  if (!std::isfinite(b)) throw DomainError("U(a,b,z): b must be finite");
}

double log_gamma_fn(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("log_gamma_fn: x must be positive");
  return std::lgamma(x);
}

namespace {

// Integrand of Gamma(a) U(a,b,z) after x = e^u - 1 on u in (0, inf):
//   phi(u) = (a-1) log(e^u - 1) + (b-a) u - z (e^u - 1)
struct UIntegrand {
  double a, b, z;

  double phi(double u) const {
    return (a - 1.0) * std::log(std::expm1(u)) + (b - a) * u - z * std::expm1(u);
  }
  double dphi(double u) const {
    // e^u / (e^u - 1) = 1 / (1 - e^{-u})
    const double r = 1.0 / (-std::expm1(-u));
    return (a - 1.0) * r + (b - a) - z * std::exp(u);
  }
  double d2phi(double u) const {
    const double em = std::expm1(u);
    const double eu = std::exp(u);
    return -(a - 1.0) * eu / (em * em) - z * eu;
  }

  // Interior stationary points in x-space solve z x^2 + (z+1-b) x - (a-1) = 0.
  // Returns the peak location in u, or -1 when the maximum sits at the left
  // endpoint (possible only for a <= 1).
  double peak_u() const {
    const double B = z + 1.0 - b;
    const double C = -(a - 1.0);
    const double disc = B * B - 4.0 * z * C;
    if (disc < 0.0) return -1.0;
    const double sq = std::sqrt(disc);
    // numerically stable larger root
    double xp = (B >= 0.0) ? (2.0 * (-C)) / (B + sq) : (-B + sq) / (2.0 * z);
    if (!(xp > 0.0) || !std::isfinite(xp)) return -1.0;
    return std::log1p(xp);
  }
};

struct LogUResult {
  double log_value;
  double rel_error;
};

// Core evaluation of log[ Gamma(a) U(a,b,z) ].  When `record`/`replay` are
// given, the adaptive panelization is captured / reused so that nearby-z
// evaluations share identical quadrature error structure.
LogUResult log_gamma_a_u(double a, double b, double z, const QuadratureConfig& cfg,
                         std::vector<double>* record = nullptr,
                         const std::vector<double>* replay = nullptr,
                         double fixed_u0 = 0.0) {
  const UIntegrand f{a, b, z};
  auto phi = [&f](double u) { return f.phi(u); };
  auto dphi = [&f](double u) { return f.dphi(u); };

  // Head [0, u0]: integrand = u^{a-1} (1 + kappa1 u + O(u^2)),
  // kappa1 = (a-1)/2 + (b-a) - z.
  const double kappa1 = 0.5 * (a - 1.0) + (b - a) - z;
  double u0 = fixed_u0;
  if (u0 <= 0.0) {
    u0 = 1e-6 / std::max({1.0, std::abs(kappa1), std::sqrt(a + std::abs(b) + z)});
  }
  const double corr = kappa1 * u0 * a / (a + 1.0);
  const double log_head =
      a * std::log(u0) - std::log(a) + ((corr > -0.5) ? std::log1p(corr) : 0.0);

  double u_peak = f.peak_u();
  double shift = f.phi(u0);
  if (u_peak > u0) shift = std::max(shift, f.phi(u_peak));

  LogQuad q;
  if (replay) {
    q = log_integrate_fixed(phi, *replay, shift);
  } else {
    const double drop = -std::log(cfg.rel_tol) + 25.0;
    const double start = std::max(u_peak, u0);
    const double u_hi = find_log_cutoff(phi, start + 0.5, +1.0, shift - drop, dphi);

    std::vector<double> breaks;
    if (u_peak > u0) {
      breaks = peak_breakpoints(u0, u_hi, u_peak, std::abs(f.d2phi(u_peak)));
    } else {
      breaks = {u0, u_hi};
    }
    // geometric ladder out of the endpoint region (left tail / a<1 singularity)
    for (double g = u0 * 4.0; g < breaks[1] * 0.5 && g < 0.25; g *= 4.0) breaks.push_back(g);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    q = log_integrate_segments(phi, std::move(breaks), shift, cfg, record);
  }

  // total = exp(q.log_value) + exp(log_head)
  const double m = std::max(q.log_value, log_head);
  const double total = m + std::log(std::exp(q.log_value - m) + std::exp(log_head - m));
  return LogUResult{total, q.rel_error};
}

}  // namespace

double log_kummer_u(const UArgs& args, const QuadratureConfig& cfg) {
  args.validate();
  cfg.validate();
  return log_gamma_a_u(args.a, args.b, args.z, cfg).log_value - std::lgamma(args.a);
}

double kummer_u(const UArgs& args, const QuadratureConfig& cfg) {
  const double lv = log_kummer_u(args, cfg);
  const double v = std::exp(lv);
  if (!(v > 0.0) || !std::isfinite(v))
    throw DomainError("kummer_u: value not representable in double range; use log_kummer_u");
  return v;
}

double log_kummer_u_any(double a, double b, double z, const QuadratureConfig& cfg) {
  if (a > 0.0) return log_kummer_u(UArgs{a, b, z}, cfg);
  const double ar = 1.0 + a - b;  // reflected first parameter
  if (ar > 0.0) {
    return (1.0 - b) * std::log(z) + log_kummer_u(UArgs{ar, 2.0 - b, z}, cfg);
  }
  throw DomainError("log_kummer_u_any: neither a nor 1+a-b is positive");
}

double kummer_ode_residual(double a, double b, double z, double h, const QuadratureConfig& cfg) {
  UArgs{a, b, z}.validate();
  if (!(h > 0.0)) throw DomainError("kummer_ode_residual: h must be positive");
  if (!(z - 2.0 * h > 0.0)) throw DomainError("kummer_ode_residual: stencil leaves z > 0");
  if (h > 0.25 * z) throw DomainError("kummer_ode_residual: h too large relative to z");

  // Shared panelization: adapt at the center, replay at the stencil points.
  QuadratureConfig tight = cfg;
  tight.rel_tol = std::min(cfg.rel_tol, 1e-12);
  const double kappa1 = 0.5 * (a - 1.0) + (b - a) - z;
  const double u0 = 1e-6 / std::max({1.0, std::abs(kappa1), std::sqrt(a + std::abs(b) + z)});

  std::vector<double> panels;
  const LogUResult c0 = log_gamma_a_u(a, b, z, tight, &panels, nullptr, u0);
  const double lgm = std::lgamma(a);
  const double lw0 = c0.log_value - lgm;

  auto rel = [&](double zz) {
    const LogUResult r = log_gamma_a_u(a, b, zz, tight, nullptr, &panels, u0);
    return std::exp(r.log_value - c0.log_value);  // U(a,b,zz)/U(a,b,z)
  };
  const double vm2 = rel(z - 2.0 * h), vm1 = rel(z - h), vp1 = rel(z + h), vp2 = rel(z + 2.0 * h);

  const double d1 = (vp1 - vm1) / (2.0 * h);
  const double d2 = (vp2 - 2.0 + vm2) / (4.0 * h * h);
  const double w0 = std::exp(lw0);
  const double resid = (z * d2 + (b - z) * d1 - a) * w0;
  return resid / std::max(std::abs(w0), 1.0);
}

}  // namespace kummerlab
