#include "harness.hpp"

#include <cmath>
#include <cstdio>

#include "errors.hpp"
#include "maps.hpp"
#include "specfun.hpp"

namespace kummerlab {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void add_quad_details(StatReport& r, const BalanceQuadruple& q) {
  r.details.emplace_back("alpha", fmt(q.alpha));
  r.details.emplace_back("beta", fmt(q.beta));
  r.details.emplace_back("a", fmt(q.a));
  r.details.emplace_back("b", fmt(q.b));
  r.details.emplace_back("c", fmt(q.c));
}

}  // namespace

void ExperimentPlan::validate() const {
  quad.validate();
  if (n < 1000) throw ContractError("ExperimentPlan: n >= 1000 required");
}

std::vector<StatReport> verify_balance(const ExperimentPlan& plan, const QuadratureConfig& cfg) {
  plan.validate();
  const auto& q = plan.quad;
  Rng rx({plan.seed, streams::kBalanceX});
  Rng ry({plan.seed, streams::kBalanceY});
  const std::vector<double> xs = sample_kummer(q.x_law(), rx, plan.n);
  const std::vector<double> ys = sample_kummer(q.y_law(), ry, plan.n);

  const PsiMap psi{q.alpha, q.beta};
  std::vector<double> us(plan.n), vs(plan.n);
  for (std::size_t i = 0; i < plan.n; ++i) {
    const PlanePoint uv = apply_map(MapSpec{psi}, PlanePoint{xs[i], ys[i]});
    us[i] = uv.x;
    vs[i] = uv.y;
  }

  std::vector<StatReport> out;
  if (plan.ks_u) {
    out.push_back(ks_one_sample(us, Law{q.u_law()}, cfg, "balance.ks_u", plan.seed));
  }
  if (plan.ks_v) {
    out.push_back(ks_one_sample(vs, Law{q.v_law()}, cfg, "balance.ks_v", plan.seed));
  }
  if (plan.indep_chi2) {
    out.push_back(independence_test(us, vs, IndepMethod::chi2_grid, plan.seed,
                                    "balance.indep_chi2"));
  }
  if (plan.indep_dcov) {
    out.push_back(independence_test(us, vs, IndepMethod::dcov_perm, plan.seed,
                                    "balance.indep_dcov"));
  }
  for (auto& r : out) add_quad_details(r, q);
  return out;
}

std::vector<StatReport> verify_corollary_sk(double a, double b, double c, double gamma_factor,
                                            std::size_t n, std::uint64_t seed,
                                            const QuadratureConfig& cfg) {
  if (!(gamma_factor > 0.0) || gamma_factor == 1.0)
    throw ContractError("verify_corollary_sk: requires gamma > 0, gamma != 1");
  if (n < 1000) throw ContractError("verify_corollary_sk: n >= 1000 required");
  const KummerParams x_law{1.0, a, b, c};
  const KummerParams y_law{1.0, b, a, gamma_factor * c};
  Rng rx({seed, streams::kCorollaryX});
  Rng ry({seed, streams::kCorollaryY});
  const std::vector<double> xs = sample_kummer(x_law, rx, n);
  const std::vector<double> ys = sample_kummer(y_law, ry, n);

  std::vector<double> us(n), vs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = xs[i], y = ys[i];
    const double den = 1.0 + x + y;
    us[i] = y * (x + gamma_factor * (1.0 + y)) / den;
    vs[i] = x * (y + (1.0 + x) / gamma_factor) / den;
  }

  std::vector<StatReport> out;
  out.push_back(
      ks_one_sample(us, Law{KummerParams{1.0, b, a, c}}, cfg, "corollary.ks_u", seed));
  out.push_back(ks_one_sample(vs, Law{KummerParams{1.0, a, b, gamma_factor * c}}, cfg,
                              "corollary.ks_v", seed));
  out.push_back(independence_test(us, vs, IndepMethod::chi2_grid, seed, "corollary.indep_chi2"));
  for (auto& r : out) r.details.emplace_back("gamma", fmt(gamma_factor));
  return out;
}

LimitBaseParams default_limit_params(LimitKind kind) {
  switch (kind) {
    case LimitKind::lukacs:
      return {1.5, 2.0, 1.0, 1.0, 2.0};
    case LimitKind::kummer_gamma:
      // p2 > 1 keeps the Gamma(p2,c) input chain at O(1/n) convergence
      return {1.2, 1.5, 1.0, 1.0, 2.0};
    case LimitKind::matsumoto_yor:
      return {1.0, 1.0, 1.0, 1.0, 2.0};
    case LimitKind::kdv:
      return {1.0, 1.0, 1.0, 1.0, 2.0};
  }
  return {};
}

std::vector<StatReport> verify_limit(LimitKind kind, std::span<const double> n_list,
                                     const LimitBaseParams& base, std::size_t sampleN,
                                     std::uint64_t seed, const QuadratureConfig& cfg) {
  if (sampleN < 1000) throw ContractError("verify_limit: sampleN >= 1000 required");
  for (double n : n_list)
    if (!(n >= 10.0)) throw ContractError("verify_limit: n_list entries must be >= 10");

  std::vector<StatReport> out;
  const char* kname = kind == LimitKind::lukacs          ? "lukacs"
                      : kind == LimitKind::kummer_gamma  ? "kg"
                      : kind == LimitKind::matsumoto_yor ? "my"
                                                         : "kdv";

  auto ks = [&](std::vector<double> samples, const Law& law, const std::string& tag, double n) {
    StatReport r = ks_one_sample(std::move(samples), law, cfg,
                                 std::string(kname) + ".n=" + std::to_string((long)n) + "." + tag,
                                 seed);
    r.details.emplace_back("kind", kname);
    r.details.emplace_back("n", fmt(n));
    out.push_back(std::move(r));
  };

  for (double n : n_list) {
    // fresh streams per n with the same (seed,stream) pair: the n-ladder
    // shares its randomness (common random numbers, best effort)
    Rng rx({seed, streams::kLimitX});
    Rng ry({seed, streams::kLimitY});
    std::vector<double> xs, ys;
    switch (kind) {
      case LimitKind::lukacs: {
        const double a1 = base.p1, b1 = base.p2, c = base.c;
        xs = sample_kummer({n, a1 + b1, b1, c}, rx, sampleN);
        ys = sample_gamma(b1, c, ry, sampleN);
        std::vector<double> us(sampleN), vs(sampleN);
        for (std::size_t i = 0; i < sampleN; ++i) {
          const PlanePoint uv = phi_family(PhiKind::lukacs, n, {xs[i], ys[i]});
          us[i] = uv.x;
          vs[i] = uv.y;
        }
        ks(std::move(us), Law{BetaIILaw{b1, a1}}, "ks_out_u", n);
        ks(std::move(vs), Law{GammaLaw{a1 + b1, c}}, "ks_out_v", n);
        ks(std::move(xs), Law{GammaLaw{a1, c}}, "ks_in_x", n);
        break;
      }
      case LimitKind::kummer_gamma: {
        const double a2 = base.p1, b2 = base.p2, c = base.c;
        xs = sample_kummer({1.0, a2, a2 + b2, c}, rx, sampleN);
        ys = sample_kummer({n, a2 + b2, a2, c}, ry, sampleN);
        std::vector<double> us(sampleN), vs(sampleN);
        for (std::size_t i = 0; i < sampleN; ++i) {
          const PlanePoint uv = phi_family(PhiKind::kummer_gamma, n, {xs[i], ys[i]});
          us[i] = uv.x;
          vs[i] = uv.y / (1.0 + uv.y);  // BetaII -> BetaI closing map
        }
        ks(std::move(us), Law{KummerParams{1.0, a2 + b2, a2, c}}, "ks_out_u", n);
        ks(std::move(vs), Law{BetaILaw{a2, b2}}, "ks_out_v", n);
        ks(std::move(ys), Law{GammaLaw{b2, c}}, "ks_in_y", n);
        break;
      }
      case LimitKind::matsumoto_yor: {
        const double a3 = base.p1, b3 = base.p2, c3 = base.c;
        xs = sample_kummer({n, n * c3, n * c3 + a3, b3}, rx, sampleN);
        ys = sample_kummer({n * n, n * c3 + a3, n * c3, b3}, ry, sampleN);
        std::vector<double> us(sampleN), vs(sampleN), vpre(sampleN);
        for (std::size_t i = 0; i < sampleN; ++i) {
          const PlanePoint uv = phi_family(PhiKind::matsumoto_yor, n, {xs[i], ys[i]});
          vpre[i] = uv.y;
          us[i] = 1.0 / uv.x;  // inversion closing map
          vs[i] = 1.0 / uv.y;
        }
        ks(std::move(us), Law{GigLaw{-a3, c3, b3}}, "ks_out_u", n);
        ks(std::move(vs), Law{GammaLaw{a3, c3}}, "ks_out_v", n);
        ks(std::move(vpre), Law{InvGammaLaw{a3, c3}}, "ks_out_v_invgamma", n);
        ks(std::move(xs), Law{GigLaw{-a3, b3, c3}}, "ks_in_x", n);
        ks(std::move(ys), Law{GammaLaw{a3, b3}}, "ks_in_y", n);
        break;
      }
      case LimitKind::kdv: {
        const double a4 = base.p1, b4 = base.p2, c4 = base.c;
        const double al = base.alpha, be = base.beta;
        xs = sample_kummer({n / al, n * b4 + a4, n * b4, c4}, rx, sampleN);
        ys = sample_kummer({n / be, n * b4, n * b4 + a4, c4}, ry, sampleN);
        std::vector<double> us(sampleN), vs(sampleN);
        for (std::size_t i = 0; i < sampleN; ++i) {
          const PlanePoint uv = phi_family(PhiKind::kdv, n, {xs[i], ys[i]}, al, be);
          us[i] = uv.x / al;  // closing maps of the construction
          vs[i] = 1.0 / uv.y;
        }
        ks(std::move(us), Law{GigLaw{-a4, al * c4, b4}}, "ks_out_u", n);
        ks(std::move(vs), Law{GigLaw{-a4, be * b4, c4}}, "ks_out_v", n);
        ks(std::move(xs), Law{GigLaw{a4, c4, al * b4}}, "ks_in_x", n);
        ks(std::move(ys), Law{GigLaw{-a4, c4, be * b4}}, "ks_in_y", n);
        break;
      }
    }
  }
  return out;
}

StatReport verify_perturbed_independence(const BalanceQuadruple& quad, double delta,
                                         std::size_t n, std::uint64_t seed, IndepMethod method,
                                         const QuadratureConfig&) {
  quad.validate();
  if (!(delta >= 0.0)) throw ContractError("verify_perturbed_independence: delta >= 0");
  Rng ru({seed, streams::kPerturbU});
  Rng rv({seed, streams::kPerturbV});
  KummerParams u_law = quad.u_law();
  u_law.a += delta;  // U-law first parameter b -> b + delta
  const std::vector<double> us = sample_kummer(u_law, ru, n);
  const std::vector<double> vs = sample_kummer(quad.v_law(), rv, n);
  std::vector<double> xs(n), ys(n);
  const MapSpec psi{PsiMap{quad.alpha, quad.beta}};
  for (std::size_t i = 0; i < n; ++i) {
    const PlanePoint xy = apply_map(psi, PlanePoint{us[i], vs[i]});
    xs[i] = xy.x;
    ys[i] = xy.y;
  }
  StatReport r = independence_test(xs, ys, method, seed, "negcontrol.indep");
  add_quad_details(r, quad);
  r.details.emplace_back("delta", fmt(delta));
  return r;
}

double kleq_residual_perturbed_u(const BalanceQuadruple& quad, double delta, double s, double t,
                                 double z, const QuadratureConfig& cfg) {
  quad.validate();
  KummerParams u_law = quad.u_law();
  u_law.a += delta;
  auto L = [&](const KummerParams& w, double ss, double tt) {
    return log_klt_closed(w, TransformQuery{w.alpha, ss, tt, z}, cfg);
  };
  const double lhs = L(quad.x_law(), s, t) + L(quad.y_law(), t, s);
  const double rhs = L(u_law, t, s) + L(quad.v_law(), s, t);
  return -std::expm1(-std::abs(lhs - rhs));
}

std::vector<StatReport> verify_lognormal_control(const BalanceQuadruple& quad, std::size_t n,
                                                 std::uint64_t seed, const QuadratureConfig&,
                                                 bool with_dcov) {
  quad.validate();
  Rng rx({seed, streams::kControlX});
  Rng ry({seed, streams::kControlY});
  std::vector<double> xs(n), ys = sample_kummer(quad.y_law(), ry, n);
  for (auto& x : xs) x = sample_lognormal1(0.0, 1.0, rx);
  std::vector<double> us(n), vs(n);
  const MapSpec psi{PsiMap{quad.alpha, quad.beta}};
  for (std::size_t i = 0; i < n; ++i) {
    const PlanePoint uv = apply_map(psi, PlanePoint{xs[i], ys[i]});
    us[i] = uv.x;
    vs[i] = uv.y;
  }
  std::vector<StatReport> out;
  out.push_back(
      independence_test(us, vs, IndepMethod::chi2_grid, seed, "control.lognormal.indep_chi2"));
  if (with_dcov) {
    const std::size_t m = std::min<std::size_t>(n, 50000);
    out.push_back(independence_test(std::span(us).first(m), std::span(vs).first(m),
                                    IndepMethod::dcov_perm, seed,
                                    "control.lognormal.indep_dcov"));
  }
  return out;
}

}  // namespace kummerlab
