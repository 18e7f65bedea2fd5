#include "stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "errors.hpp"
#include "rng.hpp"

namespace kummerlab {

StatReport make_report(std::string name, double statistic, double threshold, std::uint64_t n,
                       std::uint64_t seed) {
  StatReport r;
  r.name = std::move(name);
  r.statistic = statistic;
  r.threshold = threshold;
  r.n = n;
  r.seed = seed;
  r.pass = statistic <= threshold;
  return r;
}

double ks_statistic(std::vector<double>& xs, const CdfTable& table) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = table(xs[i]);
    const double hi = (static_cast<double>(i) + 1.0) / n - f;
    const double lo = f - static_cast<double>(i) / n;
    d = std::max(d, std::max(hi, lo));
  }
  return d;
}

StatReport ks_one_sample(std::vector<double> samples, const Law& law,
                         const QuadratureConfig& cfg, std::string name, std::uint64_t seed) {
  if (samples.size() < 100) throw ContractError("ks_one_sample: requires n >= 100");
  std::sort(samples.begin(), samples.end());
  const double lo = samples.front();
  double hi = samples.back();
  if (std::holds_alternative<BetaILaw>(law)) hi = std::min(hi, 1.0 - 1e-15);
  const CdfTable table(law, lo, std::max(hi, lo * (1.0 + 1e-12)), cfg);
  const double d = ks_statistic(samples, table);
  const double thr = 1.63 / std::sqrt(static_cast<double>(samples.size()));
  return make_report(std::move(name), d, thr, samples.size(), seed);
}

double chi_square_quantile(double prob, double df) {
  if (!(prob > 0.0 && prob < 1.0) || !(df > 0.0))
    throw DomainError("chi_square_quantile: need prob in (0,1), df > 0");
  const GammaLaw g{0.5 * df, 0.5};
  double lo = 0.0, hi = df + 20.0 * std::sqrt(2.0 * df) + 20.0;
  while (cdf(Law{g}, hi) < prob) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(Law{g}, mid) < prob)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-9 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

namespace {

std::vector<std::uint32_t> quantile_bins(std::span<const double> v, std::uint32_t g) {
  const std::size_t n = v.size();
  std::vector<std::uint32_t> idx(n), bins(n);
  std::iota(idx.begin(), idx.end(), 0u);
  std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return v[i] < v[j]; });
  for (std::size_t r = 0; r < n; ++r) {
    bins[idx[r]] = static_cast<std::uint32_t>(
        std::min<std::uint64_t>(g - 1, r * g / n));
  }
  return bins;
}

StatReport chi2_grid(std::span<const double> u, std::span<const double> v, std::uint64_t seed,
                     std::string name) {
  const std::size_t n = u.size();
  if (n < 1000) throw ContractError("independence_test[chi2_grid]: requires n >= 1000");
  const auto g = static_cast<std::uint32_t>(
      std::lround(std::cbrt(static_cast<double>(n))));
  const auto bu = quantile_bins(u, g);
  const auto bv = quantile_bins(v, g);
  std::vector<double> counts(static_cast<std::size_t>(g) * g, 0.0);
  for (std::size_t i = 0; i < n; ++i) counts[bu[i] * g + bv[i]] += 1.0;
  std::vector<double> rows(g, 0.0), cols(g, 0.0);
  for (std::uint32_t i = 0; i < g; ++i)
    for (std::uint32_t j = 0; j < g; ++j) {
      rows[i] += counts[i * g + j];
      cols[j] += counts[i * g + j];
    }
  double x2 = 0.0;
  for (std::uint32_t i = 0; i < g; ++i)
    for (std::uint32_t j = 0; j < g; ++j) {
      const double e = rows[i] * cols[j] / static_cast<double>(n);
      const double d = counts[i * g + j] - e;
      x2 += d * d / e;
    }
  const double df = static_cast<double>(g - 1) * static_cast<double>(g - 1);
  StatReport r = make_report(std::move(name), x2, chi_square_quantile(0.99, df), n, seed);
  r.details.emplace_back("method", "chi2_grid");
  r.details.emplace_back("bins_per_axis", std::to_string(g));
  r.details.emplace_back("dof", std::to_string(static_cast<long>(df)));
  return r;
}

// Fenwick tree with four accumulators (count, sum x, sum y, sum xy)
class Bit4 {
 public:
  explicit Bit4(std::size_t n) : n_(n + 1), t_(4 * (n + 1), 0.0) {}
  void add(std::size_t i, double x, double y, double xy) {
    for (++i; i < n_; i += i & (~i + 1)) {
      double* c = &t_[4 * i];
      c[0] += 1.0;
      c[1] += x;
      c[2] += y;
      c[3] += xy;
    }
  }
  void query(std::size_t i, double out[4]) const {
    out[0] = out[1] = out[2] = out[3] = 0.0;
    for (++i; i > 0; i -= i & (~i + 1)) {
      const double* c = &t_[4 * i];
      out[0] += c[0];
      out[1] += c[1];
      out[2] += c[2];
      out[3] += c[3];
    }
  }

 private:
  std::size_t n_;
  std::vector<double> t_;
};

// row sums of |x_i - x_j| over j, O(n log n)
std::vector<double> abs_row_sums(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::uint32_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0u);
  std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return x[i] < x[j]; });
  std::vector<double> rows(n);
  double prefix = 0.0, total = 0.0;
  for (double v : x) total += v;
  for (std::size_t r = 0; r < n; ++r) {
    const double xi = x[idx[r]];
    const double k = static_cast<double>(r);
    // r values below xi (prefix), n-1-r above
    rows[idx[r]] = k * xi - prefix + (total - prefix - xi) -
                   (static_cast<double>(n) - 1.0 - k) * xi;
    prefix += xi;
  }
  return rows;
}

// sum_{ij} |x_i-x_j||y_i-y_j| via y-rank Fenwick partial sums after sorting by x
double cross_abs_sum(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  std::vector<std::uint32_t> ox(n), ry(n), oy(n);
  std::iota(ox.begin(), ox.end(), 0u);
  std::sort(ox.begin(), ox.end(), [&](auto i, auto j) { return x[i] < x[j]; });
  std::iota(oy.begin(), oy.end(), 0u);
  std::sort(oy.begin(), oy.end(), [&](auto i, auto j) { return y[i] < y[j]; });
  for (std::size_t r = 0; r < n; ++r) ry[oy[r]] = static_cast<std::uint32_t>(r);

  Bit4 bit(n);
  double t1 = 0.0;
  double cnt = 0.0, sx = 0.0, sy = 0.0, sxy = 0.0;
  double q[4];
  for (std::size_t jj = 0; jj < n; ++jj) {
    const std::size_t j = ox[jj];
    const double xj = x[j], yj = y[j];
    bit.query(ry[j], q);  // i<jj in x-order with y_i <= y_j
    const double c2 = cnt - q[0], qx2 = sx - q[1], qy2 = sy - q[2], qxy2 = sxy - q[3];
    // x_i <= x_j throughout; split on the y order
    t1 += xj * yj * q[0] - xj * q[2] - yj * q[1] + q[3];
    t1 += xj * qy2 - xj * yj * c2 - qxy2 + yj * qx2;
    bit.add(ry[j], xj, yj, xj * yj);
    cnt += 1.0;
    sx += xj;
    sy += yj;
    sxy += xj * yj;
  }
  return 2.0 * t1;
}

}  // namespace

double dcov_sq(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 4) throw ContractError("dcov_sq: need paired samples, n >= 4");
  const double nn = static_cast<double>(n);
  const auto rx = abs_row_sums(x);
  const auto ry = abs_row_sums(y);
  const double t1 = cross_abs_sum(x, y);
  double sx = 0.0, sy = 0.0, dot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += rx[i];
    sy += ry[i];
    dot += rx[i] * ry[i];
  }
  return t1 / (nn * nn) + (sx / (nn * nn)) * (sy / (nn * nn)) - 2.0 / (nn * nn * nn) * dot;
}

namespace {

// Permutation runs share all x-side precomputations; a permutation pi only
// relabels the y values, their ranks, and their |.|-row sums.
class DcovPermWorkspace {
 public:
  DcovPermWorkspace(std::span<const double> x, std::span<const double> y)
      : n_(x.size()), x_(x.begin(), x.end()), y_(y.begin(), y.end()) {
    ox_.resize(n_);
    std::iota(ox_.begin(), ox_.end(), 0u);
    std::sort(ox_.begin(), ox_.end(), [&](auto i, auto j) { return x_[i] < x_[j]; });
    ry_.resize(n_);
    std::vector<std::uint32_t> oy(n_);
    std::iota(oy.begin(), oy.end(), 0u);
    std::sort(oy.begin(), oy.end(), [&](auto i, auto j) { return y_[i] < y_[j]; });
    for (std::size_t r = 0; r < n_; ++r) ry_[oy[r]] = static_cast<std::uint32_t>(r);
    rx_ = abs_row_sums(x);
    rowy_ = abs_row_sums(y);
    sum_rx_ = 0.0;
    sum_ry_ = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      sum_rx_ += rx_[i];
      sum_ry_ += rowy_[i];
    }
  }

  // dcov_sq of (x, y o pi); pi = identity for the observed statistic
  double eval(const std::vector<std::uint32_t>& pi) const {
    const double nn = static_cast<double>(n_);
    Bit4 bit(n_);
    double t1 = 0.0, cnt = 0.0, sx = 0.0, sy = 0.0, sxy = 0.0, dot = 0.0;
    double q[4];
    for (std::size_t i = 0; i < n_; ++i) dot += rx_[i] * rowy_[pi[i]];
    for (std::size_t jj = 0; jj < n_; ++jj) {
      const std::size_t j = ox_[jj];
      const double xj = x_[j], yj = y_[pi[j]];
      bit.query(ry_[pi[j]], q);
      const double c2 = cnt - q[0], qx2 = sx - q[1], qy2 = sy - q[2], qxy2 = sxy - q[3];
      t1 += xj * yj * q[0] - xj * q[2] - yj * q[1] + q[3];
      t1 += xj * qy2 - xj * yj * c2 - qxy2 + yj * qx2;
      bit.add(ry_[pi[j]], xj, yj, xj * yj);
      cnt += 1.0;
      sx += xj;
      sy += yj;
      sxy += xj * yj;
    }
    return 2.0 * t1 / (nn * nn) + (sum_rx_ / (nn * nn)) * (sum_ry_ / (nn * nn)) -
           2.0 / (nn * nn * nn) * dot;
  }

  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  std::vector<double> x_, y_;
  std::vector<std::uint32_t> ox_, ry_;
  std::vector<double> rx_, rowy_;
  double sum_rx_ = 0.0, sum_ry_ = 0.0;
};

StatReport dcov_perm(std::span<const double> u, std::span<const double> v, std::uint64_t seed,
                     std::string name) {
  const std::size_t n = u.size();
  if (n < 100) throw ContractError("independence_test[dcov_perm]: requires n >= 100");
  constexpr int kPerms = 200;
  const DcovPermWorkspace ws(u, v);
  std::vector<std::uint32_t> pi(n);
  std::iota(pi.begin(), pi.end(), 0u);
  const double obs = ws.eval(pi);
  Rng rng(RngState{seed, 0x7051});
  int count_ge = 0;
  for (int p = 0; p < kPerms; ++p) {
    // Fisher-Yates with our own uniforms (deterministic under seed)
    for (std::size_t i = n - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i + 1));
      std::swap(pi[i], pi[std::min(j, i)]);
    }
    if (ws.eval(pi) >= obs) ++count_ge;
  }
  const double pval = (1.0 + count_ge) / (1.0 + kPerms);
  StatReport r = make_report(std::move(name), 1.0 - pval, 0.99, n, seed);
  r.details.emplace_back("method", "dcov_perm");
  r.details.emplace_back("permutations", std::to_string(kPerms));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", obs);
  r.details.emplace_back("dcov_sq", buf);
  std::snprintf(buf, sizeof buf, "%.17g", pval);
  r.details.emplace_back("p_value", buf);
  return r;
}

}  // namespace

StatReport independence_test(std::span<const double> u, std::span<const double> v,
                             IndepMethod method, std::uint64_t seed, std::string name) {
  if (u.size() != v.size()) throw ContractError("independence_test: unpaired samples");
  switch (method) {
    case IndepMethod::chi2_grid:
      return chi2_grid(u, v, seed, std::move(name));
    case IndepMethod::dcov_perm:
      return dcov_perm(u, v, seed, std::move(name));
  }
  throw ContractError("independence_test: unknown method");
}

}  // namespace kummerlab
