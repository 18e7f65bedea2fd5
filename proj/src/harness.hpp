#pragma once

#include "ktransform.hpp"
#include "stats.hpp"

namespace kummerlab {

// Stream ids reserved per experiment family (document once, reuse everywhere).
namespace streams {
inline constexpr std::uint64_t kBalanceX = 0x10, kBalanceY = 0x11;
inline constexpr std::uint64_t kPerturbU = 0x20, kPerturbV = 0x21;
inline constexpr std::uint64_t kCorollaryX = 0x30, kCorollaryY = 0x31;
inline constexpr std::uint64_t kLimitX = 0x40, kLimitY = 0x41;
inline constexpr std::uint64_t kLatticeInit = 0x60, kLatticeBoundary = 0x61;
inline constexpr std::uint64_t kControlX = 0x80, kControlY = 0x81;
}  // namespace streams

struct ExperimentPlan {
  BalanceQuadruple quad;
  std::size_t n = 100000;
  std::uint64_t seed = 0;
  bool ks_u = true;
  bool ks_v = true;
  bool indep_chi2 = true;
  bool indep_dcov = false;
  void validate() const;
};

// Samples (X,Y) from the quadruple, maps through psi_{alpha,beta}, KS-tests
// U against K_alpha(b,a,c) and V against K_beta(a,b,c), and runs the chosen
// independence tests on (U,V).
std::vector<StatReport> verify_balance(const ExperimentPlan& plan,
                                       const QuadratureConfig& cfg = {});

// Pure-Kummer corollary: X~K(a,b,c), Y~K(b,a,gamma c), gamma != 1:
//   U = Y (X + gamma(1+Y)) / (1+X+Y),  V = X (Y + (1+X)/gamma) / (1+X+Y)
// KS of U vs K(b,a,c), V vs K(a,b,gamma c), independence on (U,V).
std::vector<StatReport> verify_corollary_sk(double a, double b, double c, double gamma_factor,
                                            std::size_t n, std::uint64_t seed,
                                            const QuadratureConfig& cfg = {});

enum class LimitKind { lukacs, kummer_gamma, matsumoto_yor, kdv };

// Base parameters of the four limit constructions; fields (p1,p2,c) play the
// roles (a_i, b_i, c_i) of the respective construction, alpha/beta are the
// kdv lattice parameters.
struct LimitBaseParams {
  double p1 = 1.5;
  double p2 = 2.0;
  double c = 1.0;
  double alpha = 1.0;
  double beta = 2.0;
};

LimitBaseParams default_limit_params(LimitKind kind);

// For each n: instantiates the finite-n input quadruple, pushes sampleN draws
// through the finite-n map family plus the construction's closing
// transformation, and KS-tests outputs against the limiting laws and the
// converging input marginals against theirs.  One seed is shared across the
// n-ladder (common-random-numbers, best effort through rejection).
std::vector<StatReport> verify_limit(LimitKind kind, std::span<const double> n_list,
                                     const LimitBaseParams& base, std::size_t sampleN,
                                     std::uint64_t seed, const QuadratureConfig& cfg = {});

// Negative control: (U',V') ~ K_alpha(b+delta,a,c) x K_beta(a,b,c) drawn
// independently and mapped through psi (the involution); for delta=0 the
// output pair is independent by the balance theorem, for delta>0 it is not.
StatReport verify_perturbed_independence(const BalanceQuadruple& quad, double delta,
                                         std::size_t n, std::uint64_t seed, IndepMethod method,
                                         const QuadratureConfig& cfg = {});

// kleq residual with the U-law first parameter perturbed by delta (the
// analytic face of the same control).
double kleq_residual_perturbed_u(const BalanceQuadruple& quad, double delta, double s, double t,
                                 double z, const QuadratureConfig& cfg = {});

// Negative control with X ~ LogNormal(0,1): at least one independence test
// should reject.  with_dcov=false runs the chi-square grid only.
std::vector<StatReport> verify_lognormal_control(const BalanceQuadruple& quad, std::size_t n,
                                                 std::uint64_t seed,
                                                 const QuadratureConfig& cfg = {},
                                                 bool with_dcov = true);

}  // namespace kummerlab
