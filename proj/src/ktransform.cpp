#include "ktransform.hpp"

#include <cmath>
#include <limits>

#include "errors.hpp"
#include "specfun.hpp"

namespace kummerlab {

void TransformQuery::validate() const {
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw DomainError("TransformQuery: gamma must be >= 0");
  if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("TransformQuery: s must be >= 0");
  if (!std::isfinite(t)) throw DomainError("TransformQuery: t must be finite");
  if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("TransformQuery: z must be > 0");
}

void BalanceQuadruple::validate() const {
  if (!(alpha >= 0.0) || !(beta >= 0.0)) throw DomainError("BalanceQuadruple: alpha,beta >= 0");
  if (alpha == beta) throw DomainError("BalanceQuadruple: alpha != beta required");
  if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0))
    throw DomainError("BalanceQuadruple: a,b,c must be > 0");
}

double log_klt_closed(const KummerParams& p, const TransformQuery& q,
                      const QuadratureConfig& cfg) {
  p.validate();
  q.validate();
  if (q.gamma != p.alpha)
    throw ContractError("klt_closed: transform gamma must match the law's alpha");
  if (p.alpha == 0.0) {
    // Gamma(a,c); t plays no role since (1+0*W)^{-t} = 1
    return log_gamma_fn(p.a + q.s) - log_gamma_fn(p.a) + p.a * std::log(p.c) -
           (p.a + q.s) * std::log(p.c + q.z);
  }
  const double a = p.a, b = p.b;
  return log_gamma_fn(a + q.s) - log_gamma_fn(a) - q.s * std::log(p.alpha) +
         log_kummer_u(UArgs{a + q.s, a + q.s - b - q.t + 1.0, (p.c + q.z) / p.alpha}, cfg) -
         log_kummer_u(UArgs{a, a - b + 1.0, p.c / p.alpha}, cfg);
}

double klt_closed(const KummerParams& p, const TransformQuery& q, const QuadratureConfig& cfg) {
  const double v = std::exp(log_klt_closed(p, q, cfg));
  if (!(v > 0.0) || !std::isfinite(v))
    throw DomainError("klt_closed: value not representable; use log_klt_closed");
  return v;
}

McEstimate klt_mc(std::span<const double> samples, const TransformQuery& q) {
  q.validate();
  if (samples.empty()) throw DomainError("klt_mc: empty sample");
  double sum = 0.0, sumsq = 0.0;
  for (double w : samples) {
    const double g = std::exp(q.s * std::log(w) - q.t * std::log1p(q.gamma * w) - q.z * w);
    sum += g;
    sumsq += g * g;
  }
  const double n = static_cast<double>(samples.size());
  const double mean = sum / n;
  const double var = std::max(0.0, sumsq / n - mean * mean);
  return {mean, std::sqrt(var / n)};
}

namespace {

double rel_gap(double log_lhs, double log_rhs) {
  // |lhs-rhs| / max(|lhs|,|rhs|) for positive quantities, in log space
  return -std::expm1(-std::abs(log_lhs - log_rhs));
}

}  // namespace

double m_function(const KummerParams& p, double s, double t, double z,
                  const QuadratureConfig& cfg) {
  auto L = [&](double ss, double tt) {
    return log_klt_closed(p, TransformQuery{p.alpha, ss, tt, z}, cfg);
  };
  return std::exp(L(s + 1.0, t) + L(s, t + 1.0) - L(s, t) - L(s + 1.0, t + 1.0));
}

IdentityResiduals identity_residuals(const BalanceQuadruple& q, double s, double t, double z,
                                     const QuadratureConfig& cfg) {
  q.validate();
  if (!(s >= 0.0) || !(z > 0.0)) throw DomainError("identity_residuals: need s >= 0, z > 0");
  const KummerParams X = q.x_law(), Y = q.y_law(), U = q.u_law(), V = q.v_law();
  auto L = [&](const KummerParams& w, double ss, double tt, double zz) {
    return log_klt_closed(w, TransformQuery{w.alpha, ss, tt, zz}, cfg);
  };
  auto M = [&](const KummerParams& w, double ss, double tt) {
    return L(w, ss + 1.0, tt, z) + L(w, ss, tt + 1.0, z) - L(w, ss, tt, z) -
           L(w, ss + 1.0, tt + 1.0, z);
  };

  IdentityResiduals r{};

  // (KLeq)  L_X(s,t,z) L_Y(t,s,z) = L_U(t,s,z) L_V(s,t,z)
  r.kleq = rel_gap(L(X, s, t, z) + L(Y, t, s, z), L(U, t, s, z) + L(V, s, t, z));

  // (Uiden) pure-U form of the same identity; defined only for alpha,beta > 0
  // (a zero scale routes through the Gamma closed form instead)
  if (q.alpha == 0.0 || q.beta == 0.0) {
    r.uiden = std::numeric_limits<double>::quiet_NaN();
  } else {
    const double a = q.a, b = q.b, c = q.c, al = q.alpha, be = q.beta;
    auto lu = [&](double aa, double bb, double zz) {
      return log_kummer_u(UArgs{aa, bb, zz}, cfg);
    };
    const double lhs = lu(a + s, a + s - b - t + 1.0, (c + z) / al) +
                       lu(b + t, b + t - a - s + 1.0, (c + z) / be) - s * std::log(al) -
                       t * std::log(be) - lu(a, a - b + 1.0, c / al) -
                       lu(b, b - a + 1.0, c / be);
    const double rhs = lu(b + t, b + t - a - s + 1.0, (c + z) / al) +
                       lu(a + s, a + s - b - t + 1.0, (c + z) / be) - t * std::log(al) -
                       s * std::log(be) - lu(b, b - a + 1.0, c / al) -
                       lu(a, a - b + 1.0, c / be);
    r.uiden = rel_gap(lhs, rhs);
  }

  // (MM)   M_X(s,t) M_Y(t,s) = M_U(t,s) M_V(s,t)
  const double mX = M(X, s, t), mY = M(Y, t, s), mU = M(U, t, s), mV = M(V, s, t);
  r.mm = rel_gap(mX + mY, mU + mV);

  // (4M)   beta M_X(s,t) + alpha M_Y(t,s) = beta M_U(t,s) + alpha M_V(s,t)
  {
    const double lhs = q.beta * std::exp(mX) + q.alpha * std::exp(mY);
    const double rhs = q.beta * std::exp(mU) + q.alpha * std::exp(mV);
    r.fourm = std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  }

  // ratio  L_X(s,t,z)/L_U(t,s,z) = c^{a-b} G(b)G(a+s)/(G(a)G(b+t)) (c+z)^{b-a+t-s}
  {
    const double lhs = L(X, s, t, z) - L(U, t, s, z);
    const double rhs = (q.a - q.b) * std::log(q.c) + log_gamma_fn(q.b) +
                       log_gamma_fn(q.a + s) - log_gamma_fn(q.a) - log_gamma_fn(q.b + t) +
                       (q.b - q.a + t - s) * std::log(q.c + z);
    r.ratio = rel_gap(lhs, rhs);
  }

  // (id1)  L_X(s,t,z) + alpha L_X(s+1,t,z) = L_X(s,t-1,z)
  {
    const double l0 = L(X, s, t, z);
    const double l1 = L(X, s + 1.0, t, z);
    const double m = std::max(l0, l1 + std::log(std::max(q.alpha, 1e-300)));
    const double lhs =
        m + std::log(std::exp(l0 - m) + q.alpha * std::exp(l1 - m));
    r.id1 = rel_gap(lhs, L(X, s, t - 1.0, z));
  }

  // (id2)  dL/dz = -L(s+1,t,z), central difference with step 1e-4 z
  {
    const double h = 1e-4 * z;
    const double lp = L(X, s, t, z + h);
    const double lm = L(X, s, t, z - h);
    const double l1 = L(X, s + 1.0, t, z);
    // fd/(-L(s+1)) = exp(lm - l1) * (-expm1(lp - lm)) / (2h)
    const double ratio_fd = std::exp(lm - l1) * (-std::expm1(lp - lm)) / (2.0 * h);
    r.id2 = std::abs(ratio_fd - 1.0);
  }

  return r;
}

}  // namespace kummerlab
