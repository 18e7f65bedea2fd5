#include "dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"
#include "specfun.hpp"

namespace kummerlab {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require(bool ok, const char* msg) {
  if (!ok) throw DomainError(msg);
}
}  // namespace

void KummerParams::validate() const {
  require(std::isfinite(alpha) && alpha >= 0.0, "KummerParams: alpha must be >= 0");
  require(std::isfinite(a) && a > 0.0, "KummerParams: a must be > 0");
  require(std::isfinite(b), "KummerParams: b must be finite");
  require(std::isfinite(c) && c > 0.0, "KummerParams: c must be > 0");
}
void GammaLaw::validate() const {
  require(std::isfinite(shape) && shape > 0.0, "GammaLaw: shape must be > 0");
  require(std::isfinite(rate) && rate > 0.0, "GammaLaw: rate must be > 0");
}
void GigLaw::validate() const {
  require(std::isfinite(p), "GigLaw: p must be finite");
  require(std::isfinite(a) && a > 0.0, "GigLaw: a must be > 0");
  require(std::isfinite(b) && b > 0.0, "GigLaw: b must be > 0");
}
void BetaILaw::validate() const {
  require(std::isfinite(p) && p > 0.0 && std::isfinite(q) && q > 0.0,
          "BetaILaw: p,q must be > 0");
}
void BetaIILaw::validate() const {
  require(std::isfinite(p) && p > 0.0 && std::isfinite(q) && q > 0.0,
          "BetaIILaw: p,q must be > 0");
}
void InvGammaLaw::validate() const {
  require(std::isfinite(b) && b > 0.0 && std::isfinite(c) && c > 0.0,
          "InvGammaLaw: b,c must be > 0");
}

void validate_law(const Law& law) {
  std::visit([](const auto& l) { l.validate(); }, law);
}

double support_upper(const Law& law) {
  return std::holds_alternative<BetaILaw>(law) ? 1.0
                                               : std::numeric_limits<double>::infinity();
}

namespace {

// log of the unnormalized kernel
double log_kernel(const Law& law, double x) {
  struct V {
    double x;
    double operator()(const KummerParams& p) const {
      if (p.is_gamma()) return (p.a - 1.0) * std::log(x) - p.c * x;
      return (p.a - 1.0) * std::log(x) - p.c * x - p.b * std::log1p(p.alpha * x);
    }
    double operator()(const GammaLaw& g) const {
      return (g.shape - 1.0) * std::log(x) - g.rate * x;
    }
    double operator()(const GigLaw& g) const {
      return (g.p - 1.0) * std::log(x) - g.a * x - g.b / x;
    }
    double operator()(const BetaILaw& b) const {
      return (b.p - 1.0) * std::log(x) + (b.q - 1.0) * std::log1p(-x);
    }
    double operator()(const BetaIILaw& b) const {
      return (b.p - 1.0) * std::log(x) - (b.p + b.q) * std::log1p(x);
    }
    double operator()(const InvGammaLaw& g) const {
      return -(g.b + 1.0) * std::log(x) - g.c / x;
    }
  };
  return std::visit(V{x}, law);
}

// power k of the kernel x^k(1+o(1)) at x -> 0+, or nullopt-like flag for
// essential decay (GIG, InvGamma)
bool endpoint_power(const Law& law, double* k) {
  struct V {
    double* k;
    bool operator()(const KummerParams& p) const { *k = p.a - 1.0; return true; }
    bool operator()(const GammaLaw& g) const { *k = g.shape - 1.0; return true; }
    bool operator()(const GigLaw&) const { return false; }
    bool operator()(const BetaILaw& b) const { *k = b.p - 1.0; return true; }
    bool operator()(const BetaIILaw& b) const { *k = b.p - 1.0; return true; }
    bool operator()(const InvGammaLaw&) const { return false; }
  };
  return std::visit(V{k}, law);
}

// rough interior point near the density maximum (seed for panelization only)
double mode_seed(const Law& law) {
  struct V {
    double operator()(const KummerParams& p) const {
      if (p.is_gamma() || p.b == 0.0) return std::max((p.a - 1.0) / p.c, 0.25 * p.a / p.c);
      // (log f)' = 0  <=>  c*alpha x^2 + (c + b*alpha - alpha(a-1)) x - (a-1) = 0
      const double A = p.c * p.alpha;
      const double B = p.c + p.b * p.alpha - p.alpha * (p.a - 1.0);
      const double C = -(p.a - 1.0);
      const double disc = B * B - 4.0 * A * C;
      if (disc >= 0.0 && p.a > 1.0) {
        const double sq = std::sqrt(disc);
        const double xp = (B >= 0.0) ? (-2.0 * C) / (B + sq) : (-B + sq) / (2.0 * A);
        if (xp > 0.0 && std::isfinite(xp)) return xp;
      }
      return 0.25 * p.a / p.c;
    }
    double operator()(const GammaLaw& g) const {
      return std::max((g.shape - 1.0) / g.rate, 0.25 * g.shape / g.rate);
    }
    double operator()(const GigLaw& g) const {
      return ((g.p - 1.0) + std::sqrt((g.p - 1.0) * (g.p - 1.0) + 4.0 * g.a * g.b)) /
             (2.0 * g.a);
    }
    double operator()(const BetaILaw& b) const {
      if (b.p > 1.0 && b.q > 1.0) return (b.p - 1.0) / (b.p + b.q - 2.0);
      return 0.5;
    }
    double operator()(const BetaIILaw& b) const {
      return std::max((b.p - 1.0) / (b.q + 1.0), 0.25 * b.p / (b.q + 1.0));
    }
    double operator()(const InvGammaLaw& g) const { return g.c / (g.b + 1.0); }
  };
  return std::visit(V{}, law);
}

// log Int_{x_lo}^{x_hi} exp(log_kernel + log_norm) dx via u = log1p(x).
// x_lo = 0 uses an analytic head (power endpoints) or a left cutoff
// (essential-singularity endpoints).
double log_density_integral(const Law& law, double log_norm, double x_lo, double x_hi,
                            const QuadratureConfig& cfg) {
  const double u_hi = std::log1p(x_hi);
  auto phi = [&](double u) {
    const double t = std::expm1(u);
    return log_kernel(law, t) + log_norm + u;
  };

  double k = 0.0;
  const bool has_power = endpoint_power(law, &k);

  const double um = std::log1p(mode_seed(law));
  // numeric curvature at the seed
  const double hstep = 1e-3 * std::max(1.0, std::abs(um));
  double curv = 1.0;
  if (um - hstep > 0.0 && um + hstep < u_hi) {
    const double c0 = phi(um), cp = phi(um + hstep), cm = phi(um - hstep);
    curv = std::abs((cp - 2.0 * c0 + cm) / (hstep * hstep));
  }

  double shift = (um > 0.0 && um < u_hi) ? phi(um) : phi(0.5 * u_hi);
  shift = std::max(shift, phi(0.9 * u_hi));
  const double drop = -std::log(cfg.rel_tol) + 25.0;

  double log_head = kNegInf;
  double u_start;
  if (x_lo > 0.0) {
    u_start = std::log1p(x_lo);
  } else if (has_power) {
    // e^{phi(u)} ~ e^C u^k (1 + kap1 u) near 0; C and kap1 fitted from two
    // points, u0 shrunk until the linear term is ~1e-4
    double u0 = 1e-4 * std::min(1.0, u_hi);
    double C = 0.0, kap1u0 = 0.0;
    for (int it = 0; it < 4; ++it) {
      const double f1 = phi(u0) - k * std::log(u0);
      const double f2 = phi(0.5 * u0) - k * std::log(0.5 * u0);
      kap1u0 = 2.0 * (f1 - f2);
      C = f1 - kap1u0;
      if (std::abs(kap1u0) <= 1e-4) break;
      u0 *= 1e-4 / std::abs(kap1u0);
    }
    log_head = C + (k + 1.0) * std::log(u0) - std::log(k + 1.0) +
               std::log1p(std::max(-0.5, kap1u0 * (k + 1.0) / (k + 2.0)));
    u_start = u0;
  } else {
    // essential decay at 0: cut where the integrand is negligible
    double ul = std::min(um, u_hi) * 0.5;
    for (int it = 0; it < 400 && phi(ul) > shift - drop; ++it) ul *= 0.5;
    u_start = ul;
  }

  if (!(u_start < u_hi)) {
    // query point sits inside the head region
    return log_head == kNegInf ? kNegInf : log_head;
  }

  std::vector<double> breaks = peak_breakpoints(u_start, u_hi, um, curv);
  for (double g = u_start * 4.0; g < 0.25 * breaks[1] && g < 0.25; g *= 4.0) breaks.push_back(g);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  const LogQuad q = log_integrate_segments(phi, std::move(breaks), shift, cfg);
  const double m = std::max(q.log_value, log_head);
  if (m == kNegInf) return kNegInf;
  return m + std::log(std::exp(q.log_value - m) +
                      (log_head == kNegInf ? 0.0 : std::exp(log_head - m)));
}

}  // namespace

double kummer_log_norm_const(const KummerParams& p, const QuadratureConfig& cfg) {
  p.validate();
  if (p.is_gamma()) return p.a * std::log(p.c) - log_gamma_fn(p.a);
  // alpha^a / (Gamma(a) U(a, a-b+1, c/alpha))
  return p.a * std::log(p.alpha) - log_gamma_fn(p.a) -
         log_kummer_u(UArgs{p.a, p.a - p.b + 1.0, p.c / p.alpha}, cfg);
}

double log_norm_const(const Law& law, const QuadratureConfig& cfg) {
  validate_law(law);
  struct V {
    const QuadratureConfig& cfg;
    double operator()(const KummerParams& p) const { return kummer_log_norm_const(p, cfg); }
    double operator()(const GammaLaw& g) const {
      return g.shape * std::log(g.rate) - log_gamma_fn(g.shape);
    }
    double operator()(const GigLaw& g) const {
      // Int x^{p-1} e^{-ax-b/x} dx over (0,inf), w = log x
      auto psi = [&g](double w) { return g.p * w - g.a * std::exp(w) - g.b * std::exp(-w); };
      const double wpk =
          std::log(((g.p) + std::sqrt(g.p * g.p + 4.0 * g.a * g.b)) / (2.0 * g.a));
      const double curv = g.a * std::exp(wpk) + g.b * std::exp(-wpk);
      const double shift = psi(wpk);
      const double drop = -std::log(cfg.rel_tol) + 25.0;
      const double w_lo = find_log_cutoff(psi, wpk, -1.0, shift - drop);
      const double w_hi = find_log_cutoff(psi, wpk, +1.0, shift - drop);
      const LogQuad q =
          log_integrate_segments(psi, peak_breakpoints(w_lo, w_hi, wpk, curv), shift, cfg);
      return -q.log_value;
    }
    double operator()(const BetaILaw& b) const {
      return log_gamma_fn(b.p + b.q) - log_gamma_fn(b.p) - log_gamma_fn(b.q);
    }
    double operator()(const BetaIILaw& b) const {
      return log_gamma_fn(b.p + b.q) - log_gamma_fn(b.p) - log_gamma_fn(b.q);
    }
    double operator()(const InvGammaLaw& g) const {
      return g.b * std::log(g.c) - log_gamma_fn(g.b);
    }
  };
  return std::visit(V{cfg}, law);
}

double log_density(const Law& law, double x, const QuadratureConfig& cfg) {
  validate_law(law);
  if (!(x > 0.0) || x >= support_upper(law)) return kNegInf;
  return log_norm_const(law, cfg) + log_kernel(law, x);
}

double cdf(const Law& law, double x, const QuadratureConfig& cfg) {
  validate_law(law);
  cfg.validate();
  if (!(x > 0.0)) return 0.0;
  if (x >= support_upper(law)) return 1.0;
  const double ln = log_norm_const(law, cfg);
  const double lf = log_density_integral(law, ln, 0.0, x, cfg);
  return std::clamp(std::exp(lf), 0.0, 1.0);
}

DensityEvaluator::DensityEvaluator(Law law, const QuadratureConfig& cfg)
    : law_(std::move(law)), log_norm_(log_norm_const(law_, cfg)) {}

double DensityEvaluator::log_density(double x) const {
  if (!(x > 0.0) || x >= support_upper(law_)) return kNegInf;
  return log_norm_ + log_kernel(law_, x);
}

CdfTable::CdfTable(Law law, double x_lo, double x_hi, const QuadratureConfig& cfg,
                   std::size_t grid)
    : dens_(law, cfg), unit_support_(std::holds_alternative<BetaILaw>(law)) {
  if (!(x_lo > 0.0) || !(x_hi > x_lo)) throw DomainError("CdfTable: need 0 < x_lo < x_hi");
  if (unit_support_ && x_hi >= 1.0) throw DomainError("CdfTable: x_hi outside BetaI support");
  u_lo_ = std::log1p(x_lo);
  u_hi_ = std::log1p(x_hi);
  du_ = (u_hi_ - u_lo_) / static_cast<double>(grid);
  head_ = cdf(dens_.law(), x_lo, cfg);
  auto phi = [this](double u) { return dens_.log_density(std::expm1(u)) + u; };
  prefix_.resize(grid + 1);
  prefix_[0] = head_;
  for (std::size_t i = 0; i < grid; ++i) {
    const double a = u_lo_ + du_ * static_cast<double>(i);
    const double b = a + du_;
    const LogQuad q = log_integrate_fixed(phi, {a, b}, 0.0);
    prefix_[i + 1] = prefix_[i] + std::exp(q.log_value);
  }
}

double CdfTable::operator()(double x) const {
  if (!(x > 0.0)) return 0.0;
  if (unit_support_ && x >= 1.0) return 1.0;
  const double u = std::log1p(x);
  if (u <= u_lo_) {
    // below the table: fall back on the head value (callers query sample
    // points inside [x_lo, x_hi])
    return head_;
  }
  auto phi = [this](double uu) { return dens_.log_density(std::expm1(uu)) + uu; };
  std::size_t i = static_cast<std::size_t>((u - u_lo_) / du_);
  if (i >= prefix_.size() - 1) i = prefix_.size() - 2;
  const double a = u_lo_ + du_ * static_cast<double>(i);
  double f = prefix_[i];
  if (u > a) {
    const LogQuad q = log_integrate_fixed(phi, {a, u}, 0.0);
    f += std::exp(q.log_value);
  }
  return std::clamp(f, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// samplers

namespace {

struct RejectionGuard {
  std::uint64_t proposals = 0;
  std::uint64_t accepts = 0;
  void tick(bool accepted, const char* what) {
    ++proposals;
    if (accepted) ++accepts;
    if (proposals >= 100000 && proposals % 4096 == 0) {
      const double rate =
          static_cast<double>(accepts) / static_cast<double>(proposals);
      if (rate < 1e-4)
        throw SamplerDegenerateError(std::string(what) + ": acceptance rate below 1e-4",
                                     rate);
    }
  }
};

}  // namespace

double sample_gamma1(double shape, double rate, Rng& rng) {
  if (!(shape > 0.0) || !(rate > 0.0)) throw DomainError("sample_gamma: shape,rate must be > 0");
  if (shape < 1.0) {
    // Gamma(shape) = Gamma(shape+1) * U^{1/shape}
    const double g = sample_gamma1(shape + 1.0, rate, rng);
    return g * std::pow(rng.uniform(), 1.0 / shape);
  }
  // Marsaglia & Tsang (2000)
  const double d = shape - 1.0 / 3.0;
  const double cc = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = rng.normal();
    const double t = 1.0 + cc * x;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    const double u = rng.uniform();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v / rate;
  }
}

std::vector<double> sample_gamma(double shape, double rate, Rng& rng, std::size_t n) {
  std::vector<double> out(n);
  for (auto& v : out) v = sample_gamma1(shape, rate, rng);
  return out;
}

namespace {

// b>0, a>b: envelope choice between
//   E1: Gamma(a,c) proposal,    accept (1+alpha x)^{-b}
//   E2: Gamma(a-b,c) proposal,  accept (alpha x / (1+alpha x))^{b}
// scored by the log-acceptance at the proposal mean.
double kummer_pos_b(const KummerParams& p, Rng& rng, RejectionGuard& guard) {
  const double score1 = -p.b * std::log1p(p.alpha * p.a / p.c);
  double score2 = -std::numeric_limits<double>::infinity();
  if (p.a > p.b) {
    const double m2 = p.alpha * (p.a - p.b) / p.c;
    score2 = p.b * (std::log(m2) - std::log1p(m2));
  }
  if (score2 > score1) {
    for (;;) {
      const double x = sample_gamma1(p.a - p.b, p.c, rng);
      const double ax = p.alpha * x;
      const bool ok = std::log(rng.uniform()) <= p.b * (std::log(ax) - std::log1p(ax));
      guard.tick(ok, "sample_kummer[gamma(a-b) envelope]");
      if (ok) return x;
    }
  }
  for (;;) {
    const double x = sample_gamma1(p.a, p.c, rng);
    const bool ok = std::log(rng.uniform()) <= -p.b * std::log1p(p.alpha * x);
    guard.tick(ok, "sample_kummer[gamma(a) envelope]");
    if (ok) return x;
  }
}

double kummer_neg_b(const KummerParams& p, Rng& rng, RejectionGuard& guard) {
  // proposal Gamma(a, theta c); accept (1+alpha x)^{|b|} e^{-(1-theta)cx} / M
  const double theta = 0.5;
  const double bb = -p.b;
  const double xstar = std::max(0.0, bb / ((1.0 - theta) * p.c) - 1.0 / p.alpha);
  const double logM = bb * std::log1p(p.alpha * xstar) - (1.0 - theta) * p.c * xstar;
  for (;;) {
    const double x = sample_gamma1(p.a, theta * p.c, rng);
    const double t = bb * std::log1p(p.alpha * x) - (1.0 - theta) * p.c * x - logM;
    const bool ok = std::log(rng.uniform()) <= t;
    guard.tick(ok, "sample_kummer[negative-b envelope]");
    if (ok) return x;
  }
}

double kummer_draw(const KummerParams& p, Rng& rng, RejectionGuard& guard) {
  if (p.is_gamma()) return sample_gamma1(p.a, p.c, rng);
  if (p.b < 0.0) return kummer_neg_b(p, rng, guard);
  if (p.a >= p.b) return kummer_pos_b(p, rng, guard);
  // a < b: X' ~ K_alpha(b,a,c) and Y' ~ Gamma(a,c) give Y'/(1+alpha X')
  // ~ K_alpha(a,b,c) (detailed-balance identity with the second scale 0).
  const KummerParams swapped{p.alpha, p.b, p.a, p.c};
  const double xp = kummer_pos_b(swapped, rng, guard);
  const double yp = sample_gamma1(p.a, p.c, rng);
  return yp / (1.0 + p.alpha * xp);
}

}  // namespace

double sample_kummer1(const KummerParams& p, Rng& rng) {
  p.validate();
  RejectionGuard guard;
  return kummer_draw(p, rng, guard);
}

std::vector<double> sample_kummer(const KummerParams& p, Rng& rng, std::size_t n) {
  p.validate();
  RejectionGuard guard;
  std::vector<double> out(n);
  for (auto& v : out) v = kummer_draw(p, rng, guard);
  return out;
}

double sample_lognormal1(double mu, double sigma, Rng& rng) {
  return std::exp(mu + sigma * rng.normal());
}

namespace {

// GIG rejection sampler, Devroye (2014).  Our kernel x^{p-1}e^{-ax-b/x}
// matches the standard two-parameter form h^{lam-1}e^{-omega(h+1/h)/2} under
// h = x/sqrt(b/a) with omega = 2 sqrt(ab); p<0 goes through 1/X.
double sample_gig1(const GigLaw& g, Rng& rng) {
  const double lam = std::abs(g.p);
  const double omega = 2.0 * std::sqrt(g.a * g.b);
  const double alpha = std::sqrt(omega * omega + lam * lam) - lam;
  auto psi = [&](double x) {
    return -alpha * (std::cosh(x) - 1.0) - lam * (std::exp(x) - x - 1.0);
  };
  auto dpsi = [&](double x) { return -alpha * std::sinh(x) - lam * std::expm1(x); };

  double t = 1.0, s = 1.0;
  double v = -psi(1.0);
  if (v > 2.0) {
    t = std::sqrt(2.0 / (alpha + lam));
  } else if (v < 0.5) {
    t = std::log(4.0 / (alpha + 2.0 * lam));
  }
  v = -psi(-1.0);
  if (v > 2.0) {
    s = std::sqrt(4.0 / (alpha * std::cosh(1.0) + lam));
  } else if (v < 0.5) {
    s = std::min(1.0 / lam,
                 std::log(1.0 + 1.0 / alpha + std::sqrt(1.0 / (alpha * alpha) + 2.0 / alpha)));
  }
  const double eta = -psi(t), zeta = -dpsi(t), theta = -psi(-s), xi = dpsi(-s);
  const double pp = 1.0 / xi, r = 1.0 / zeta;
  const double td = t - r * eta, sd = s - pp * theta;
  const double q = td + sd;

  double x;
  for (;;) {
    const double u = rng.uniform();
    const double vv = rng.uniform();
    const double w = rng.uniform();
    if (u < q / (pp + q + r)) {
      x = -sd + q * vv;
    } else if (u < (q + r) / (pp + q + r)) {
      x = td - r * std::log(vv);
    } else {
      x = -sd + pp * std::log(vv);
    }
    double chi;
    if (x >= -sd && x <= td) {
      chi = 1.0;
    } else if (x > td) {
      chi = std::exp(-eta - zeta * (x - t));
    } else {
      chi = std::exp(-theta + xi * (x + s));
    }
    if (w * chi <= std::exp(psi(x))) break;
  }
  const double y =
      (lam / omega + std::sqrt(1.0 + lam * lam / (omega * omega))) * std::exp(x);
  const double s_ab = std::sqrt(g.b / g.a);
  return g.p >= 0.0 ? y * s_ab : s_ab / y;
}

}  // namespace

std::vector<double> sample_law(const Law& law, Rng& rng, std::size_t n) {
  validate_law(law);
  struct V {
    Rng& rng;
    double operator()(const KummerParams& p) const {
      RejectionGuard guard;
      return kummer_draw(p, rng, guard);
    }
    double operator()(const GammaLaw& g) const { return sample_gamma1(g.shape, g.rate, rng); }
    double operator()(const GigLaw& g) const { return sample_gig1(g, rng); }
    double operator()(const BetaILaw& b) const {
      const double g1 = sample_gamma1(b.p, 1.0, rng);
      const double g2 = sample_gamma1(b.q, 1.0, rng);
      return g1 / (g1 + g2);
    }
    double operator()(const BetaIILaw& b) const {
      const double g1 = sample_gamma1(b.p, 1.0, rng);
      const double g2 = sample_gamma1(b.q, 1.0, rng);
      return g1 / g2;
    }
    double operator()(const InvGammaLaw& g) const {
      return 1.0 / sample_gamma1(g.b, g.c, rng);
    }
  };
  std::vector<double> out(n);
  // keep one degenerate-rate guard per call for the Kummer branch
  if (const auto* kp = std::get_if<KummerParams>(&law)) {
    RejectionGuard guard;
    for (auto& v : out) v = kummer_draw(*kp, rng, guard);
    return out;
  }
  V vis{rng};
  for (auto& v : out) v = std::visit(vis, law);
  return out;
}

}  // namespace kummerlab
