#pragma once

#include <variant>
#include <vector>

#include "quadrature.hpp"
#include "rng.hpp"

namespace kummerlab {

// Scaled Kummer family K_alpha(a,b,c): density on (0,inf) proportional to
// x^{a-1} e^{-cx} (1+alpha x)^{-b}.  alpha=0 or b=0 reduces to Gamma(a,c).
struct KummerParams {
  double alpha;
  double a;
  double b;
  double c;

  void validate() const;
  bool is_gamma() const { return alpha == 0.0 || b == 0.0; }
};

struct GammaLaw {
  double shape;  // b in Gamma(b,c)
  double rate;   // c
  void validate() const;
};

// density ~ x^{p-1} e^{-a x - b/x}
struct GigLaw {
  double p, a, b;
  void validate() const;
};

// density ~ x^{p-1} (1-x)^{q-1} on (0,1)
struct BetaILaw {
  double p, q;
  void validate() const;
};

// density ~ x^{p-1} (1+x)^{-(p+q)} on (0,inf)
struct BetaIILaw {
  double p, q;
  void validate() const;
};

// density ~ x^{-b-1} e^{-c/x}
struct InvGammaLaw {
  double b, c;
  void validate() const;
};

using Law = std::variant<KummerParams, GammaLaw, GigLaw, BetaILaw, BetaIILaw, InvGammaLaw>;

void validate_law(const Law& law);

// support upper end: 1 for BetaI, +inf otherwise (lower end is always 0)
double support_upper(const Law& law);

// log of the constant k making k * kernel(x) a probability density
double log_norm_const(const Law& law, const QuadratureConfig& cfg = {});
double kummer_log_norm_const(const KummerParams& p, const QuadratureConfig& cfg = {});

// exact log of the normalized density; -inf outside the support
double log_density(const Law& law, double x, const QuadratureConfig& cfg = {});

// numeric CDF by quadrature of the normalized density, clamped to [0,1]
double cdf(const Law& law, double x, const QuadratureConfig& cfg = {});

// Precomputes the normalizer once and evaluates log-density cheaply.
class DensityEvaluator {
 public:
  DensityEvaluator(Law law, const QuadratureConfig& cfg = {});
  double log_density(double x) const;
  const Law& law() const { return law_; }
  double log_norm() const { return log_norm_; }

 private:
  Law law_;
  double log_norm_;
};

// Cumulative table over [x_lo, x_hi] for bulk CDF evaluation (KS tests).
// Grid is uniform in the integration variable; queries combine the stored
// prefix with a local Gauss-Kronrod correction, so accuracy is quadrature-
// grade rather than interpolation-grade.
class CdfTable {
 public:
  CdfTable(Law law, double x_lo, double x_hi, const QuadratureConfig& cfg = {},
           std::size_t grid = 4096);
  double operator()(double x) const;

 private:
  DensityEvaluator dens_;
  double u_lo_, u_hi_, du_;
  double head_;                  // CDF at x_lo
  std::vector<double> prefix_;   // CDF at grid nodes
  bool unit_support_;
};

// --- samplers (exact rejection; deterministic under a fixed Rng) ---

// Gamma(shape, rate) via Marsaglia-Tsang (2000); shape<1 boosted through
// Gamma(shape+1) with a uniform power correction.
double sample_gamma1(double shape, double rate, Rng& rng);
std::vector<double> sample_gamma(double shape, double rate, Rng& rng, std::size_t n);

// K_alpha(a,b,c) rejection sampler.  Envelope by parameter regime:
//   b=0 or alpha=0          : Gamma(a,c) directly
//   b<0                      : Gamma(a, c/2) proposal, analytic bound M
//   b>0, a>b                 : Gamma(a,c) / accept (1+alpha x)^{-b}, or
//                              Gamma(a-b,c) / accept (alpha x/(1+alpha x))^b,
//                              whichever has the better acceptance estimate
//   b>0, a<b                 : X' ~ K_alpha(b,a,c), Y' ~ Gamma(a,c),
//                              return Y'/(1+alpha X')  (detailed-balance
//                              reduction; exact)
//   b>0, a=b                 : Gamma(a,c) envelope with degenerate-rate guard
double sample_kummer1(const KummerParams& p, Rng& rng);
std::vector<double> sample_kummer(const KummerParams& p, Rng& rng, std::size_t n);

std::vector<double> sample_law(const Law& law, Rng& rng, std::size_t n);

double sample_lognormal1(double mu, double sigma, Rng& rng);

}  // namespace kummerlab
