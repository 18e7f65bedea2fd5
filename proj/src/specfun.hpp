#pragma once

#include "quadrature.hpp"

namespace kummerlab {

// Arguments of the confluent hypergeometric function of the second kind
// U(a,b,z), evaluated through its integral representation
//   U(a,b,z) = (1/Gamma(a)) * Int_0^inf x^{a-1} (1+x)^{b-a-1} e^{-zx} dx,
// valid for a>0, z>0 and any real b.
struct UArgs {
  double a;
  double b;
  double z;

  void validate() const;
};

// log Gamma(x) for x>0.  Delegates to std::lgamma (well past 12 significant
// digits for the ranges used here).
double log_gamma_fn(double x);

double kummer_u(const UArgs& args, const QuadratureConfig& cfg = {});
double log_kummer_u(const UArgs& args, const QuadratureConfig& cfg = {});

// log U for a first parameter of either sign.  a<=0 is reached through the
// reflection identity U(a,b,z) = z^{1-b} U(1+a-b, 2-b, z), which requires
// 1+a-b>0; throws a domain error when neither direction is valid.
double log_kummer_u_any(double a, double b, double z, const QuadratureConfig& cfg = {});

// Residual of the Kummer equation z w'' + (b - z) w' - a w = 0 at w = U(a,b,.),
// with O(h^2) central differences on the stencil {z-2h, z-h, z, z+h, z+2h} and
// normalization by max(|w(z)|, 1).  All five stencil values are integrated on
// one shared panelization so the quadrature error varies smoothly across the
// stencil and cancels in the differences.
double kummer_ode_residual(double a, double b, double z, double h, const QuadratureConfig& cfg = {});

}  // namespace kummerlab
