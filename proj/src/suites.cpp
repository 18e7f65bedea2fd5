#include "suites.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "errors.hpp"
#include "harness.hpp"
#include "json_out.hpp"
#include "lattice.hpp"
#include "parallel.hpp"
#include "parse.hpp"

namespace kummerlab {

namespace {

using nlohmann::json;

json parse_config(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: invalid JSON: ") + e.what());
  }
}

double need_num(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw ParseError(std::string("config: missing numeric field '") + key + "'");
  return j[key].get<double>();
}

double opt_num(const json& j, const char* key, double dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number()) throw ParseError(std::string("config: field '") + key + "' not numeric");
  return j[key].get<double>();
}

std::vector<std::uint64_t> seeds_of(const json& j) {
  std::vector<std::uint64_t> seeds;
  if (j.contains("seeds")) {
    for (const auto& s : j["seeds"]) seeds.push_back(s.get<std::uint64_t>());
  } else if (j.contains("seed")) {
    seeds.push_back(j["seed"].get<std::uint64_t>());
  } else {
    seeds.push_back(0);
  }
  if (seeds.empty()) throw ParseError("config: empty seed list");
  return seeds;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// per-seed joint pass rate over groups of reports sharing a seed
StatReport aggregate_rate(const std::vector<std::vector<StatReport>>& per_seed,
                          const std::string& name, double min_rate) {
  std::size_t pass = 0;
  for (const auto& rs : per_seed) {
    bool joint = true;
    for (const auto& r : rs) joint = joint && r.pass;
    if (joint) ++pass;
  }
  const double rate =
      per_seed.empty() ? 0.0 : static_cast<double>(pass) / static_cast<double>(per_seed.size());
  StatReport agg = make_report(name, 1.0 - rate, 1.0 - min_rate, per_seed.size(), 0);
  agg.details.emplace_back("joint_pass_rate", fmt17(rate));
  agg.details.emplace_back("seeds", std::to_string(per_seed.size()));
  return agg;
}

SuiteResult run_balance(const json& cfg, int threads) {
  BalanceQuadruple quad{need_num(cfg, "alpha"), need_num(cfg, "beta"), need_num(cfg, "a"),
                        need_num(cfg, "b"), need_num(cfg, "c")};
  quad.validate();
  const auto n = static_cast<std::size_t>(opt_num(cfg, "n", 100000));
  const auto seeds = seeds_of(cfg);
  const double delta = opt_num(cfg, "perturb_u_delta", 0.0);
  const bool lognormal = cfg.value("lognormal_control", false);
  const double min_rate = opt_num(cfg, "min_joint_pass_rate", seeds.size() > 1 ? 0.9 : 1.0);
  std::string method_s = cfg.value("indep_method", "chi2");
  const IndepMethod method =
      method_s == "dcov" ? IndepMethod::dcov_perm : IndepMethod::chi2_grid;

  std::vector<std::vector<StatReport>> per_seed(seeds.size());
  parallel_for(seeds.size(), threads, [&](std::size_t i) {
    if (lognormal) {
      per_seed[i] = verify_lognormal_control(quad, n, seeds[i]);
    } else if (delta > 0.0) {
      per_seed[i] = {verify_perturbed_independence(quad, delta, n, seeds[i], method)};
    } else {
      ExperimentPlan plan;
      plan.quad = quad;
      plan.n = n;
      plan.seed = seeds[i];
      plan.indep_dcov = (method == IndepMethod::dcov_perm);
      plan.indep_chi2 = (method == IndepMethod::chi2_grid);
      per_seed[i] = verify_balance(plan);
    }
  });

  SuiteResult out;
  for (auto& rs : per_seed)
    for (auto& r : rs) out.reports.push_back(std::move(r));
  const StatReport agg = aggregate_rate(per_seed, "balance.joint_pass_rate", min_rate);
  out.all_pass = agg.pass;
  out.reports.push_back(agg);
  return out;
}

SuiteResult run_corollary(const json& cfg, int threads) {
  const double a = need_num(cfg, "a"), b = need_num(cfg, "b"), c = need_num(cfg, "c");
  const double gamma = need_num(cfg, "gamma");
  const auto n = static_cast<std::size_t>(opt_num(cfg, "n", 100000));
  const auto seeds = seeds_of(cfg);
  const double min_rate = opt_num(cfg, "min_joint_pass_rate", seeds.size() > 1 ? 0.9 : 1.0);

  std::vector<std::vector<StatReport>> per_seed(seeds.size());
  parallel_for(seeds.size(), threads, [&](std::size_t i) {
    per_seed[i] = verify_corollary_sk(a, b, c, gamma, n, seeds[i]);
  });
  SuiteResult out;
  for (auto& rs : per_seed)
    for (auto& r : rs) out.reports.push_back(std::move(r));
  const StatReport agg = aggregate_rate(per_seed, "corollary.joint_pass_rate", min_rate);
  out.all_pass = agg.pass;
  out.reports.push_back(agg);
  return out;
}

SuiteResult run_identities(const json& cfg, int threads) {
  const double thr_default = opt_num(cfg, "threshold", 1e-8);
  const double thr_id2 = opt_num(cfg, "threshold_id2", 1e-6);

  struct Point {
    BalanceQuadruple quad;
    double s, t, z;
  };
  std::vector<Point> points;
  if (cfg.contains("points")) {
    BalanceQuadruple quad{need_num(cfg, "alpha"), need_num(cfg, "beta"), need_num(cfg, "a"),
                          need_num(cfg, "b"), need_num(cfg, "c")};
    quad.validate();
    for (const auto& p : cfg["points"]) {
      points.push_back(Point{quad, need_num(p, "s"), need_num(p, "t"), need_num(p, "z")});
    }
  }
  if (cfg.contains("sweep")) {
    const auto& sw = cfg["sweep"];
    const auto count = static_cast<std::size_t>(opt_num(sw, "count", 100));
    Rng rng({static_cast<std::uint64_t>(opt_num(sw, "seed", 0)), 0x90});
    auto unif = [&rng](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
    for (std::size_t i = 0; i < count; ++i) {
      double al = unif(0.1, 4.0), be = unif(0.1, 4.0);
      while (std::abs(al - be) < 1e-6) be = unif(0.1, 4.0);
      points.push_back(Point{{al, be, unif(0.2, 5.0), unif(0.2, 5.0), unif(0.2, 5.0)},
                             unif(0.0, 2.0), unif(0.0, 2.0), unif(0.1, 3.0)});
    }
  }
  if (points.empty()) throw ParseError("identities config: need 'points' or 'sweep'");

  std::vector<IdentityResiduals> res(points.size());
  parallel_for(points.size(), threads, [&](std::size_t i) {
    res[i] = identity_residuals(points[i].quad, points[i].s, points[i].t, points[i].z);
  });

  const char* names[7] = {"kleq", "uiden", "mm", "fourm", "ratio", "id1", "id2"};
  SuiteResult out;
  bool all = true;
  for (int k = 0; k < 7; ++k) {
    double worst = 0.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const IdentityResiduals& r = res[i];
      const double v = k == 0   ? r.kleq
                       : k == 1 ? r.uiden
                       : k == 2 ? r.mm
                       : k == 3 ? r.fourm
                       : k == 4 ? r.ratio
                       : k == 5 ? r.id1
                                : r.id2;
      if (std::isnan(v)) continue;  // uiden skipped for alpha*beta = 0
      if (v > worst) {
        worst = v;
        arg = i;
      }
    }
    const double thr = (k == 6) ? thr_id2 : thr_default;
    StatReport r = make_report(std::string("identities.max_") + names[k], worst, thr,
                               points.size(), 0);
    const Point& p = points[arg];
    r.details.emplace_back("argmax",
                           "alpha=" + fmt17(p.quad.alpha) + " beta=" + fmt17(p.quad.beta) +
                               " a=" + fmt17(p.quad.a) + " b=" + fmt17(p.quad.b) +
                               " c=" + fmt17(p.quad.c) + " s=" + fmt17(p.s) +
                               " t=" + fmt17(p.t) + " z=" + fmt17(p.z));
    all = all && r.pass;
    out.reports.push_back(std::move(r));
  }
  out.all_pass = all;
  return out;
}

LimitKind parse_kind(const std::string& s) {
  if (s == "lukacs") return LimitKind::lukacs;
  if (s == "kg" || s == "kummer_gamma") return LimitKind::kummer_gamma;
  if (s == "my" || s == "matsumoto_yor") return LimitKind::matsumoto_yor;
  if (s == "kdv") return LimitKind::kdv;
  throw ParseError("limits config: unknown kind '" + s + "'");
}

SuiteResult run_limits(const json& cfg, int threads) {
  std::vector<LimitKind> kinds;
  const std::string kind_s = cfg.value("kind", "all");
  if (kind_s == "all") {
    kinds = {LimitKind::lukacs, LimitKind::kummer_gamma, LimitKind::matsumoto_yor,
             LimitKind::kdv};
  } else {
    kinds = {parse_kind(kind_s)};
  }
  std::vector<double> n_list;
  if (cfg.contains("n_list")) {
    for (const auto& v : cfg["n_list"]) n_list.push_back(v.get<double>());
  } else {
    n_list = {10, 100, 1000};
  }
  if (!std::is_sorted(n_list.begin(), n_list.end()))
    throw ParseError("limits config: n_list must be increasing");
  const auto sampleN = static_cast<std::size_t>(opt_num(cfg, "sampleN", 50000));
  const std::uint64_t seed = static_cast<std::uint64_t>(opt_num(cfg, "seed", 1));
  const double max_final = opt_num(cfg, "max_ks_at_final_n", 0.02);
  // Kolmogorov-statistic null sd is ~0.2603/sqrt(N)
  const double slack =
      opt_num(cfg, "monotone_slack_sd", 2.0) * 0.2603 / std::sqrt(static_cast<double>(sampleN));

  std::vector<std::vector<StatReport>> per_kind(kinds.size());
  parallel_for(kinds.size(), threads, [&](std::size_t i) {
    LimitBaseParams base = default_limit_params(kinds[i]);
    if (cfg.contains("params")) {
      const auto& p = cfg["params"];
      base.p1 = opt_num(p, "p1", base.p1);
      base.p2 = opt_num(p, "p2", base.p2);
      base.c = opt_num(p, "c", base.c);
      base.alpha = opt_num(p, "alpha", base.alpha);
      base.beta = opt_num(p, "beta", base.beta);
    }
    per_kind[i] = verify_limit(kinds[i], n_list, base, sampleN, seed);
  });

  SuiteResult out;
  bool all = true;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    // group chains by tag suffix
    std::vector<std::string> tags;
    for (const auto& r : per_kind[i]) {
      const auto pos = r.name.rfind('.');
      const std::string tag = r.name.substr(pos + 1);
      if (std::find(tags.begin(), tags.end(), tag) == tags.end()) tags.push_back(tag);
    }
    for (const auto& tag : tags) {
      std::vector<std::pair<double, double>> chain;  // (n, ks)
      for (const auto& r : per_kind[i]) {
        if (r.name.size() > tag.size() &&
            r.name.compare(r.name.size() - tag.size() - 1, tag.size() + 1, "." + tag) == 0) {
          double nn = 0.0;
          for (const auto& [k, v] : r.details)
            if (k == "n") nn = std::stod(v);
          chain.emplace_back(nn, r.statistic);
        }
      }
      std::sort(chain.begin(), chain.end());
      const std::string kname = per_kind[i].front().details.front().second;  // kind
      StatReport fin = make_report(kname + "." + tag + ".final_ks", chain.back().second,
                                   max_final, sampleN, seed);
      double worst_rise = 0.0;
      for (std::size_t k = 0; k + 1 < chain.size(); ++k)
        worst_rise = std::max(worst_rise, chain[k + 1].second - chain[k].second);
      StatReport mono =
          make_report(kname + "." + tag + ".monotone_rise", worst_rise, slack, sampleN, seed);
      all = all && fin.pass && mono.pass;
      out.reports.push_back(std::move(fin));
      out.reports.push_back(std::move(mono));
    }
    for (auto& r : per_kind[i]) out.reports.push_back(std::move(r));
  }
  out.all_pass = all;
  return out;
}

SuiteResult run_lattice(const json& cfg, int threads) {
  LatticeConfig base;
  base.sites = static_cast<std::size_t>(opt_num(cfg, "sites", 10000));
  base.steps = static_cast<std::size_t>(opt_num(cfg, "steps", 10));
  if (cfg.contains("map")) {
    base.map = parse_map(cfg["map"].get<std::string>());
  } else {
    base.map = PsiMap{need_num(cfg, "alpha"), need_num(cfg, "beta")};
  }
  if (cfg.contains("x_law")) {
    const Law l = parse_law(cfg["x_law"].get<std::string>());
    if (!std::holds_alternative<KummerParams>(l))
      throw ParseError("lattice config: x_law must be a kummer law (alpha=0 covers Gamma)");
    base.x_law = std::get<KummerParams>(l);
  } else {
    base.x_law = KummerParams{need_num(cfg, "alpha"), need_num(cfg, "a"), need_num(cfg, "b"),
                              need_num(cfg, "c")};
  }
  if (cfg.contains("y_law")) {
    const Law l = parse_law(cfg["y_law"].get<std::string>());
    if (!std::holds_alternative<KummerParams>(l))
      throw ParseError("lattice config: y_law must be a kummer law");
    base.y_law = std::get<KummerParams>(l);
  } else {
    base.y_law = KummerParams{need_num(cfg, "beta"), need_num(cfg, "b"), need_num(cfg, "a"),
                              need_num(cfg, "c")};
  }
  const auto seeds = seeds_of(cfg);
  const double min_rate = opt_num(cfg, "min_joint_pass_rate", seeds.size() > 1 ? 0.9 : 1.0);
  const bool exit_in_joint = cfg.value("include_exit_in_joint", false);
  const std::string dump = cfg.value("dump", "");

  SuiteResult out;
  std::vector<std::vector<StatReport>> per_seed(seeds.size());
  parallel_for(seeds.size(), threads, [&](std::size_t i) {
    LatticeConfig c = base;
    c.seed = seeds[i];
    SnapshotFn snap = nullptr;
    std::shared_ptr<std::ofstream> fout;
    if (!dump.empty() && i == 0) {
      fout = std::make_shared<std::ofstream>(dump);
      if (!*fout) throw ParseError("lattice config: cannot open dump file '" + dump + "'");
      *fout << "t,n,x\n";
      snap = [fout](long t, const std::vector<double>& x) {
        char buf[64];
        for (std::size_t k = 0; k < x.size(); ++k) {
          std::snprintf(buf, sizeof buf, "%ld,%zu,%.17g\n", t, k, x[k]);
          *fout << buf;
        }
      };
    }
    per_seed[i] = run_invariance(c, {}, snap);
  });
  if (!dump.empty()) out.csv_outputs.push_back(dump);

  std::vector<std::vector<StatReport>> joint(per_seed.size());
  for (std::size_t i = 0; i < per_seed.size(); ++i) {
    for (const auto& r : per_seed[i]) {
      const bool is_exit = r.name == "lattice.ks_exit";
      if (!is_exit || exit_in_joint) joint[i].push_back(r);
      out.reports.push_back(r);
    }
  }
  const StatReport agg = aggregate_rate(joint, "lattice.joint_pass_rate", min_rate);
  out.all_pass = agg.pass;
  out.reports.push_back(agg);
  return out;
}

}  // namespace

SuiteResult run_suite(const std::string& suite, const std::string& config_json, int threads) {
  const json cfg = parse_config(config_json);
  if (suite == "balance") return run_balance(cfg, threads);
  if (suite == "corollary") return run_corollary(cfg, threads);
  if (suite == "identities") return run_identities(cfg, threads);
  if (suite == "limits") return run_limits(cfg, threads);
  if (suite == "lattice") return run_lattice(cfg, threads);
  throw ParseError("unknown suite '" + suite +
                   "' (expected balance|corollary|limits|identities|lattice)");
}

std::string suite_result_to_json(const SuiteResult& r) {
  JsonWriter w;
  w.begin_object();
  w.key("all_pass").value(r.all_pass);
  w.key("reports").begin_array();
  for (const auto& rep : r.reports) write_report(w, rep);
  w.end_array();
  w.key("csv_outputs").begin_array();
  for (const auto& p : r.csv_outputs) w.value(p);
  w.end_array();
  w.end_object();
  return w.str();
}

}  // namespace kummerlab
