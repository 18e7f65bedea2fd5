#pragma once

#include <array>
#include <limits>
#include <variant>

namespace kummerlab {

struct PlanePoint {
  double x;
  double y;
  void validate() const;
};

// psi_{alpha,beta}(x,y) = ( y (1+beta(x+y))/(1+alpha x+beta y),
//                           x (1+alpha(x+y))/(1+alpha x+beta y) )
struct PsiMap {
  double alpha, beta;  // >= 0, alpha != beta
  void validate() const;
};

// F_dK(x,y) = ( y(1+beta xy)/(1+alpha xy), x(1+alpha xy)/(1+beta xy) )
struct DKdVMap {
  double alpha, beta;  // > 0
  void validate() const;
};

// F_udK(x,y) = ( y-(x+y-J)_+ + (x+y-K)_+, x-(x+y-K)_+ + (x+y-J)_+ )
struct UdKdVMap {
  double J, K;
  void validate() const;
};

// (x+y, x/(x+y))
struct DTodaMap {};

// (1/(x+y), 1/x - 1/(x+y))
struct MatsumotoYorMap {};

// (y/x, x+y)
struct LukacsMap {};

enum class PhiKind { lukacs, kummer_gamma, matsumoto_yor, kdv };

// Finite-n map families of the limit constructions; n = +inf selects the
// hard-coded limit formula.  alpha/beta are used by the kdv kind only.
struct PhiFamilyMap {
  PhiKind kind;
  double n;
  double alpha = 1.0;
  double beta = 1.0;
  void validate() const;
};

using MapSpec = std::variant<PsiMap, DKdVMap, UdKdVMap, DTodaMap, MatsumotoYorMap, LukacsMap,
                             PhiFamilyMap>;

void validate_map(const MapSpec& m);
bool is_involution(const MapSpec& m);

PlanePoint apply_map(const MapSpec& m, PlanePoint p);

// Jacobian |d(x,y)/d(u,v)| of the inverse of psi at q=(u,v); equals
// (1+alpha x+beta y)/(1+alpha u+beta v) = xy/(uv) with (x,y)=psi(q).
double psi_jacobian(double alpha, double beta, PlanePoint q);

// residuals of x+y-(u+v), x/(1+beta y)-v/(1+alpha u), y/(1+alpha x)-u/(1+beta v)
std::array<double, 3> structural_residuals(double alpha, double beta, PlanePoint p);

PlanePoint phi_family(PhiKind kind, double n, PlanePoint p, double alpha = 1.0,
                      double beta = 1.0);

inline constexpr double kPhiLimit = std::numeric_limits<double>::infinity();

}  // namespace kummerlab
