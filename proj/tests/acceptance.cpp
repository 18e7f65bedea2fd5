// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion.  Exit code 0 iff all pass.
//
// Heavy criteria parallelize across seeds; set KUMMERLAB_THREADS to bound the
// worker count (default: hardware concurrency).  Results are identical for
// any thread count.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "harness.hpp"
#include "ktransform.hpp"
#include "lattice.hpp"
#include "maps.hpp"
#include "oracles.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "specfun.hpp"

using namespace kummerlab;

namespace {

int g_threads = 1;
bool g_all = true;

void report(int num, const char* what, bool pass, const std::string& detail, double secs) {
  std::printf("%s  %2d  %-46s %s  (%.1fs)\n", pass ? "PASS" : "FAIL", num, what,
              detail.c_str(), secs);
  std::fflush(stdout);
  g_all = g_all && pass;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double secs() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// 1. closed form U(a,a+1,z) = z^{-a}, 50 random points in [0.2,10]^2, 1e-8
void criterion1() {
  Timer t;
  Rng rng({101, 1});
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double a = 0.2 + 9.8 * rng.uniform();
    const double z = 0.2 + 9.8 * rng.uniform();
    const double err = std::abs(std::expm1(log_kummer_u({a, a + 1.0, z}) + a * std::log(z)));
    worst = std::max(worst, err);
  }
  report(1, "special-function closed form", worst <= 1e-8, "max_rel=" + fmt(worst), t.secs());
}

// 2. reflection identity, 100 random valid shifts, 1e-7
void criterion2() {
  Timer t;
  Rng rng({102, 1});
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double a = 0.2 + 9.8 * rng.uniform();
    const double z = 0.2 + 9.8 * rng.uniform();
    const double b = -5.0 + (a + 5.99) * rng.uniform();  // 1+a-b > 0
    const double lhs = log_kummer_u({a, b, z});
    const double rhs = (1.0 - b) * std::log(z) + log_kummer_u({1.0 + a - b, 2.0 - b, z});
    worst = std::max(worst, std::abs(std::expm1(lhs - rhs)));
  }
  report(2, "reflection identity", worst <= 1e-7, "max_rel=" + fmt(worst), t.secs());
}

// 3. map structure over 1e4 random (alpha,beta,x,y)
void criterion3() {
  Timer t;
  Rng rng({103, 1});
  double winv = 0.0, wres = 0.0, wjac = 0.0;
  for (int i = 0; i < 10000; ++i) {
    double al = 4.0 * rng.uniform();
    double be = 4.0 * rng.uniform();
    if (i % 10 == 0) al = 0.0;
    if (std::abs(al - be) < 1e-6) be += 0.3;
    const double x = 1e-3 * std::exp(std::log(1e6) * rng.uniform());
    const double y = 1e-3 * std::exp(std::log(1e6) * rng.uniform());
    const MapSpec psi{PsiMap{al, be}};
    const PlanePoint p{x, y};
    const PlanePoint q = apply_map(psi, p);
    const PlanePoint back = apply_map(psi, q);
    winv = std::max({winv, std::abs(back.x - x) / x, std::abs(back.y - y) / y});
    const auto r = structural_residuals(al, be, p);
    wres = std::max(wres, std::abs(r[0]) / std::max(1.0, x + y));
    wres = std::max(wres, std::abs(r[1]) / std::max(1.0, x / (1.0 + be * y)));
    wres = std::max(wres, std::abs(r[2]) / std::max(1.0, y / (1.0 + al * x)));
    const double jac = psi_jacobian(al, be, q);
    const double fd = std::abs(oracles::fd_jacobian(
        [&](double u, double v) {
          const PlanePoint pp = apply_map(psi, {u, v});
          return std::pair{pp.x, pp.y};
        },
        q.x, q.y));
    wjac = std::max(wjac, std::abs(jac - fd) / jac);
  }
  const bool pass = winv <= 1e-12 && wres <= 1e-12 && wjac <= 1e-6;
  report(3, "map involution/identities/jacobian", pass,
         "inv=" + fmt(winv) + " res=" + fmt(wres) + " jac=" + fmt(wjac), t.secs());
}

// 4. detailed balance, 40 seeds, joint pass rate >= 90%
void criterion4() {
  Timer t;
  std::vector<int> joint(40, 0);
  parallel_for(40, g_threads, [&](std::size_t i) {
    ExperimentPlan plan;
    plan.quad = {1.0, 2.0, 1.5, 0.7, 1.0};
    plan.n = 100000;
    plan.seed = i + 1;
    const auto reports = verify_balance(plan);
    bool ok = true;
    for (const auto& r : reports) ok = ok && r.pass;
    joint[i] = ok;
  });
  const int passes = std::accumulate(joint.begin(), joint.end(), 0);
  report(4, "detailed balance (Th. 2.2 quadruple)", passes >= 36,
         "joint=" + std::to_string(passes) + "/40", t.secs());
}

// 5. transform identities over a 100-point sweep
void criterion5() {
  Timer t;
  Rng rng({105, 1});
  struct Pt {
    BalanceQuadruple q;
    double s, tt, z;
  };
  std::vector<Pt> pts;
  auto unif = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  for (int i = 0; i < 100; ++i) {
    double al = unif(0.1, 4.0), be = unif(0.1, 4.0);
    while (std::abs(al - be) < 1e-6) be = unif(0.1, 4.0);
    pts.push_back({{al, be, unif(0.2, 5.0), unif(0.2, 5.0), unif(0.2, 5.0)},
                   unif(0.0, 2.0), unif(0.0, 2.0), unif(0.1, 3.0)});
  }
  std::vector<IdentityResiduals> res(pts.size());
  parallel_for(pts.size(), g_threads, [&](std::size_t i) {
    res[i] = identity_residuals(pts[i].q, pts[i].s, pts[i].tt, pts[i].z);
  });
  double w5 = 0.0, wid2 = 0.0;
  for (const auto& r : res) {
    w5 = std::max({w5, r.kleq, r.uiden, r.mm, r.fourm, r.ratio});
    wid2 = std::max(wid2, r.id2);
  }
  report(5, "transform identities (kleq/uiden/mm/4M/ratio)", w5 <= 1e-8 && wid2 <= 1e-6,
         "max=" + fmt(w5) + " id2=" + fmt(wid2), t.secs());
}

// 6. Kummer ODE residual at h = 1e-3 z, O(h^2) confirmation
void criterion6() {
  Timer t;
  Rng rng({106, 1});
  double worst = 0.0;
  std::vector<double> ratios;
  // window spans the worked examples (z=3,b=2 and z=1.5,b=0.5); the h=1e-3 z
  // truncation constant grows like z^3 (w''''/w)
  for (int i = 0; i < 30; ++i) {
    const double a = 0.5 + 2.0 * rng.uniform();
    const double b = -1.0 + 4.0 * rng.uniform();
    const double z = 1.5 + 2.5 * rng.uniform();
    const double h = 1e-3 * z;
    const double r1 = std::abs(kummer_ode_residual(a, b, z, h));
    const double r2 = std::abs(kummer_ode_residual(a, b, z, h / 10.0));
    worst = std::max(worst, r1);
    ratios.push_back(r1 / r2);
  }
  std::sort(ratios.begin(), ratios.end());
  const double med = ratios[ratios.size() / 2];  // O(h^2) read on the sweep median
  const bool pass = worst <= 1e-5 && med >= 50.0 && med <= 200.0;
  report(6, "Kummer ODE residual, O(h^2)", pass,
         "max=" + fmt(worst) + " median_ratio=" + fmt(med), t.secs());
}

// 7. limit suites: four kinds, final KS <= 0.02, nonincreasing within 2 sd
void criterion7() {
  Timer t;
  const std::vector<double> ns{10.0, 100.0, 1000.0};
  const std::size_t sampleN = 50000;
  const double slack = 2.0 * 0.2603 / std::sqrt(static_cast<double>(sampleN));
  const LimitKind kinds[4] = {LimitKind::lukacs, LimitKind::kummer_gamma,
                              LimitKind::matsumoto_yor, LimitKind::kdv};
  std::vector<std::vector<StatReport>> res(4);
  parallel_for(4, g_threads, [&](std::size_t i) {
    res[i] = verify_limit(kinds[i], ns, default_limit_params(kinds[i]), sampleN, 7);
  });
  bool pass = true;
  double worst_final = 0.0, worst_rise = -1.0;
  for (const auto& reports : res) {
    std::vector<std::string> tags;
    for (const auto& r : reports) {
      const std::string tag = r.name.substr(r.name.rfind('.') + 1);
      if (std::find(tags.begin(), tags.end(), tag) == tags.end()) tags.push_back(tag);
    }
    for (const auto& tag : tags) {
      std::vector<std::pair<double, double>> chain;
      for (const auto& r : reports) {
        if (r.name.substr(r.name.rfind('.') + 1) != tag) continue;
        double nn = 0.0;
        for (const auto& [k, v] : r.details)
          if (k == "n") nn = std::stod(v);
        chain.emplace_back(nn, r.statistic);
      }
      std::sort(chain.begin(), chain.end());
      worst_final = std::max(worst_final, chain.back().second);
      for (std::size_t k = 0; k + 1 < chain.size(); ++k)
        worst_rise = std::max(worst_rise, chain[k + 1].second - chain[k].second);
    }
  }
  pass = worst_final <= 0.02 && worst_rise <= slack;
  report(7, "limit suites (4 kinds, n=10/100/1000)", pass,
         "final=" + fmt(worst_final) + " rise=" + fmt(worst_rise) + " slack=" + fmt(slack),
         t.secs());
}

// 8. lattice invariance, 40 seeds
void criterion8() {
  Timer t;
  std::vector<int> joint(40, 0);
  std::vector<double> cons(40, 0.0);
  parallel_for(40, g_threads, [&](std::size_t i) {
    LatticeConfig cfg;
    cfg.sites = 10000;
    cfg.steps = 10;
    cfg.map = PsiMap{1.0, 2.0};
    cfg.x_law = {1.0, 1.2, 0.9, 1.0};
    cfg.y_law = {2.0, 0.9, 1.2, 1.0};
    cfg.seed = i + 1;
    const auto reports = run_invariance(cfg);
    bool ok = true;
    for (const auto& r : reports) {
      if (r.name == "lattice.ks_interior" || r.name == "lattice.lag1_correlation") {
        ok = ok && r.pass;
      }
      if (r.name == "lattice.sum_conservation") cons[i] = r.statistic;
    }
    joint[i] = ok;
  });
  const int passes = std::accumulate(joint.begin(), joint.end(), 0);
  const double worst_cons = *std::max_element(cons.begin(), cons.end());
  const bool pass = passes >= 36 && worst_cons <= 1e-9;
  report(8, "lattice invariance (N=1e4, T=10)", pass,
         "joint=" + std::to_string(passes) + "/40 cons=" + fmt(worst_cons), t.secs());
}

// 9. negative controls: perturbation ladder with dcov at n=1e5
void criterion9() {
  Timer t;
  const BalanceQuadruple quad{1.0, 2.0, 1.5, 0.7, 1.0};
  const double deltas[3] = {0.1, 0.3, 1.0};
  std::vector<std::vector<int>> reject(3, std::vector<int>(40, 0));
  parallel_for(120, g_threads, [&](std::size_t w) {
    const std::size_t d = w / 40, s = w % 40;
    const StatReport r = verify_perturbed_independence(quad, deltas[d], 100000, s + 1,
                                                       IndepMethod::dcov_perm);
    reject[d][s] = r.pass ? 0 : 1;
  });
  double rate[3];
  for (std::size_t d = 0; d < 3; ++d)
    rate[d] = std::accumulate(reject[d].begin(), reject[d].end(), 0) / 40.0;
  const bool pass = rate[0] <= rate[1] + 1e-12 && rate[1] <= rate[2] + 1e-12 && rate[2] >= 0.9;
  report(9, "negative controls (U-law perturbation ladder)", pass,
         "rates=" + fmt(rate[0]) + "/" + fmt(rate[1]) + "/" + fmt(rate[2]), t.secs());
}

// 10. CLI reproducibility: identical flags and seed give identical bytes
std::string slurp(const std::string& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run_cmd(const std::string& cmd) { return std::system((cmd + " >/dev/null 2>&1").c_str()); }

void criterion10() {
  Timer t;
  const std::string cli = KLB_CLI_PATH;
  const std::string dir = "/tmp/klb_acc";
  run_cmd("rm -rf " + dir + " && mkdir -p " + dir);

  bool pass = true;
  std::string detail;

  // sample: two runs, byte-identical CSV
  for (const char* law : {"kummer:1,2,3,1", "gamma:2,4", "gig:-1,1,1"}) {
    const std::string f1 = dir + "/a.csv", f2 = dir + "/b.csv";
    pass = pass && run_cmd(cli + " sample --law " + law + " --n 5000 --seed 9 --out " + f1) == 0;
    pass = pass && run_cmd(cli + " sample --law " + law + " --n 5000 --seed 9 --out " + f2) == 0;
    if (slurp(f1) != slurp(f2) || slurp(f1).empty()) {
      pass = false;
      detail += std::string(" sample(") + law + ") differs";
    }
  }

  // verify: identities + a small lattice with trajectory dump
  const std::string cfg1 = dir + "/ident.json";
  {
    std::ofstream f(cfg1);
    f << R"({"alpha":1,"beta":2,"a":1.5,"b":0.7,"c":1,"sweep":{"count":5,"seed":3}})";
  }
  const std::string cfg2 = dir + "/lat.json";
  {
    std::ofstream f(cfg2);
    f << R"({"alpha":1,"beta":2,"a":1.2,"b":0.9,"c":1,"sites":2000,"steps":3,"seeds":[4],)"
      << R"("dump":")" << dir << R"(/traj.csv"})";
  }
  for (const auto& [suite, cfg] : {std::pair{std::string("identities"), cfg1},
                                   std::pair{std::string("lattice"), cfg2}}) {
    const std::string r1 = dir + "/r1.json", r2 = dir + "/r2.json";
    pass = pass && run_cmd(cli + " verify " + suite + " --config " + cfg + " --out " + r1) == 0;
    const std::string traj1 = slurp(dir + "/traj.csv");
    pass = pass && run_cmd(cli + " verify " + suite + " --config " + cfg + " --out " + r2) == 0;
    const std::string traj2 = slurp(dir + "/traj.csv");
    std::string a = slurp(r1), b = slurp(r2);
    // reports reference their own manifest path; normalize it away
    auto strip = [](std::string s, const std::string& w) {
      std::size_t p;
      while ((p = s.find(w)) != std::string::npos) s.erase(p, w.size());
      return s;
    };
    a = strip(a, r1);
    b = strip(b, r2);
    if (a != b || a.empty()) {
      pass = false;
      detail += " verify(" + suite + ") differs";
    }
    if (suite == "lattice" && traj1 != traj2) {
      pass = false;
      detail += " trajectory differs";
    }
    // manifests identical except the started/finished timestamps
    auto strip_times = [](std::string s) {
      for (const char* key : {"\"started\":\"", "\"finished\":\""}) {
        const auto p = s.find(key);
        if (p != std::string::npos) s.erase(p, std::strlen(key) + 21);
      }
      return s;
    };
    const std::string m1 = strip_times(strip(slurp(r1 + ".manifest.json"), r1));
    const std::string m2 = strip_times(strip(slurp(r2 + ".manifest.json"), r2));
    if (m1 != m2 || m1.empty()) {
      pass = false;
      detail += " manifest(" + suite + ") differs";
    }
  }

  report(10, "CLI reproducibility (byte-identical reruns)", pass,
         detail.empty() ? "ok" : detail, t.secs());
}

}  // namespace

int main() {
  if (const char* env = std::getenv("KUMMERLAB_THREADS")) {
    g_threads = std::max(1, std::atoi(env));
  } else {
    g_threads = std::max(1u, std::thread::hardware_concurrency());
  }
  std::printf("kummerlab acceptance suite (threads=%d)\n", g_threads);
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  std::printf("%s\n", g_all ? "ALL CRITERIA PASSED" : "CRITERIA FAILED");
  return g_all ? 0 : 1;
}
