#pragma once

#include <span>

#include "dist.hpp"

namespace kummerlab {

// Arguments of the extended Laplace transform
//   L_W^{(gamma)}(s,t,z) = E[ W^s (1+gamma W)^{-t} e^{-zW} ].
struct TransformQuery {
  double gamma;
  double s;
  double t;
  double z;
  void validate() const;
};

// Theorem configuration: X ~ K_alpha(a,b,c), Y ~ K_beta(b,a,c),
// U ~ K_alpha(b,a,c), V ~ K_beta(a,b,c).
struct BalanceQuadruple {
  double alpha, beta;
  double a, b, c;
  void validate() const;
  KummerParams x_law() const { return {alpha, a, b, c}; }
  KummerParams y_law() const { return {beta, b, a, c}; }
  KummerParams u_law() const { return {alpha, b, a, c}; }
  KummerParams v_law() const { return {beta, a, b, c}; }
};

// Closed form for Kummer laws (q.gamma must equal p.alpha):
//   Gamma(a+s) U(a+s, a+s-b-t+1, (c+z)/alpha)
//   -----------------------------------------
//   alpha^s Gamma(a) U(a, a-b+1, c/alpha)
// For alpha = 0 the law is Gamma(a,c) and the (1+gamma W)^{-t} factor is 1:
//   Gamma(a+s) c^a / (Gamma(a) (c+z)^{a+s}).
double log_klt_closed(const KummerParams& p, const TransformQuery& q,
                      const QuadratureConfig& cfg = {});
double klt_closed(const KummerParams& p, const TransformQuery& q,
                  const QuadratureConfig& cfg = {});

struct McEstimate {
  double estimate;
  double std_error;
};
McEstimate klt_mc(std::span<const double> samples, const TransformQuery& q);

// M_W(s,t,z) = L(s+1,t) L(s,t+1) / (L(s,t) L(s+1,t+1))
double m_function(const KummerParams& p, double s, double t, double z,
                  const QuadratureConfig& cfg = {});

// Relative residuals of the transform identities for the quadruple; id1 is
// evaluated on the X-law, id2 by a k=1 central difference in z (step 1e-4 z).
struct IdentityResiduals {
  double kleq;
  double uiden;
  double mm;
  double fourm;
  double ratio;
  double id1;
  double id2;
};
IdentityResiduals identity_residuals(const BalanceQuadruple& q, double s, double t, double z,
                                     const QuadratureConfig& cfg = {});

}  // namespace kummerlab
