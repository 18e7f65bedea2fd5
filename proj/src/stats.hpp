#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dist.hpp"

namespace kummerlab {

// Outcome of one statistical or identity check.  pass <=> statistic <= threshold.
struct StatReport {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  std::uint64_t n = 0;
  bool pass = false;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> details;
};

StatReport make_report(std::string name, double statistic, double threshold, std::uint64_t n,
                       std::uint64_t seed);

// sup|F_n - F| against the law's quadrature CDF; threshold 1.63/sqrt(n)
// (asymptotic 1% critical value).  Requires n >= 100.
StatReport ks_one_sample(std::vector<double> samples, const Law& law,
                         const QuadratureConfig& cfg = {}, std::string name = "ks",
                         std::uint64_t seed = 0);

// KS statistic only (no report), against an arbitrary CDF callable.
double ks_statistic(std::vector<double>& samples_sorted_in_place, const CdfTable& table);

enum class IndepMethod { chi2_grid, dcov_perm };

// chi2_grid: Pearson statistic on a GxG empirical-quantile grid with
// G = round(n^{1/3}); threshold = 1% chi-square critical value, (G-1)^2 dof.
// Requires n >= 1000.
// dcov_perm: distance covariance with 200 permutations (O(n log n) pair
// statistic); statistic = 1 - p, threshold = 0.99, i.e. pass <=> p > 0.01.
StatReport independence_test(std::span<const double> u, std::span<const double> v,
                             IndepMethod method, std::uint64_t seed = 0,
                             std::string name = "indep");

// upper quantile of chi-square with df degrees of freedom (via the Gamma CDF)
double chi_square_quantile(double prob, double df);

// squared sample distance covariance, O(n log n)
double dcov_sq(std::span<const double> x, std::span<const double> y);

}  // namespace kummerlab
