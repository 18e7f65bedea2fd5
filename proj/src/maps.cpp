#include "maps.hpp"

#include <cmath>

#include "errors.hpp"

namespace kummerlab {

void PlanePoint::validate() const {
  if (!(x > 0.0) || !std::isfinite(x) || !(y > 0.0) || !std::isfinite(y))
    throw DomainError("PlanePoint: coordinates must be positive finite");
}

void PsiMap::validate() const {
  if (!(alpha >= 0.0) || !(beta >= 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
    throw DomainError("PsiMap: alpha,beta must be >= 0");
  if (alpha == beta) throw DomainError("PsiMap: requires alpha != beta");
}
void DKdVMap::validate() const {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw DomainError("DKdVMap: alpha,beta must be > 0");
}
void UdKdVMap::validate() const {
  if (!std::isfinite(J) || !std::isfinite(K)) throw DomainError("UdKdVMap: J,K must be finite");
}
void PhiFamilyMap::validate() const {
  if (!(n >= 1.0)) throw DomainError("PhiFamilyMap: n must be >= 1 (or +inf)");
  if (kind == PhiKind::kdv && (!(alpha > 0.0) || !(beta > 0.0)))
    throw DomainError("PhiFamilyMap[kdv]: alpha,beta must be > 0");
}

void validate_map(const MapSpec& m) {
  std::visit(
      [](const auto& v) {
        if constexpr (requires { v.validate(); }) v.validate();
      },
      m);
}

bool is_involution(const MapSpec& m) {
  return std::holds_alternative<PsiMap>(m) || std::holds_alternative<DKdVMap>(m) ||
         std::holds_alternative<UdKdVMap>(m);
}

namespace {

PlanePoint checked(double u, double v, const char* what) {
  if (!std::isfinite(u) || !std::isfinite(v) || !(u > 0.0) || !(v > 0.0))
    throw DomainError(std::string(what) + ": output left (0,inf)^2");
  return PlanePoint{u, v};
}

PlanePoint apply_psi(double alpha, double beta, PlanePoint p) {
  const double s = p.x + p.y;
  const double den = 1.0 + alpha * p.x + beta * p.y;
  return checked(p.y * (1.0 + beta * s) / den, p.x * (1.0 + alpha * s) / den, "psi");
}

}  // namespace

PlanePoint phi_family(PhiKind kind, double n, PlanePoint p, double alpha, double beta) {
  PhiFamilyMap{kind, n, alpha, beta}.validate();
  p.validate();
  const double x = p.x, y = p.y;
  if (std::isinf(n)) {
    switch (kind) {
      case PhiKind::lukacs:
        return checked(y / x, x + y, "phi[lukacs,inf]");
      case PhiKind::kummer_gamma:
        return checked(x + y, (x / y) * (1.0 + x + y), "phi[kg,inf]");
      case PhiKind::matsumoto_yor:
        return checked(x + y, x * (x + y) / y, "phi[my,inf]");
      case PhiKind::kdv: {
        const double den = beta * x + alpha * y;
        return checked(alpha * y * (x + y) / den, beta * x * (x + y) / den, "phi[kdv,inf]");
      }
    }
  }
  switch (kind) {
    case PhiKind::lukacs:
      return checked(n * y / (1.0 + n * x), x * (1.0 + n * (x + y)) / (1.0 + n * x),
                     "phi[lukacs]");
    case PhiKind::kummer_gamma: {
      const double den = 1.0 + x + n * y;
      return checked(y * (1.0 + n * (x + y)) / den, n * x * (1.0 + x + y) / den, "phi[kg]");
    }
    case PhiKind::matsumoto_yor: {
      const double den = 1.0 + n * x + n * n * y;
      return checked(y * (1.0 + n * n * (x + y)) / den, n * x * (1.0 + n * (x + y)) / den,
                     "phi[my]");
    }
    case PhiKind::kdv: {
      const double s = x + y;
      const double den = 1.0 + n * (x / alpha + y / beta);
      return checked(y * (1.0 + (n / beta) * s) / den, x * (1.0 + (n / alpha) * s) / den,
                     "phi[kdv]");
    }
  }
  throw DomainError("phi_family: unknown kind");
}

PlanePoint apply_map(const MapSpec& m, PlanePoint p) {
  validate_map(m);
  p.validate();
  struct V {
    PlanePoint p;
    PlanePoint operator()(const PsiMap& mm) const { return apply_psi(mm.alpha, mm.beta, p); }
    PlanePoint operator()(const DKdVMap& mm) const {
      const double xy = p.x * p.y;
      return checked(p.y * (1.0 + mm.beta * xy) / (1.0 + mm.alpha * xy),
                     p.x * (1.0 + mm.alpha * xy) / (1.0 + mm.beta * xy), "dkdv");
    }
    PlanePoint operator()(const UdKdVMap& mm) const {
      const double s = p.x + p.y;
      const double pj = std::max(s - mm.J, 0.0);
      const double pk = std::max(s - mm.K, 0.0);
      return checked(p.y - pj + pk, p.x - pk + pj, "udkdv");
    }
    PlanePoint operator()(const DTodaMap&) const {
      const double s = p.x + p.y;
      return checked(s, p.x / s, "dtoda");
    }
    PlanePoint operator()(const MatsumotoYorMap&) const {
      const double s = p.x + p.y;
      return checked(1.0 / s, 1.0 / p.x - 1.0 / s, "matsumoto-yor");
    }
    PlanePoint operator()(const LukacsMap&) const {
      return checked(p.y / p.x, p.x + p.y, "lukacs");
    }
    PlanePoint operator()(const PhiFamilyMap& mm) const {
      return phi_family(mm.kind, mm.n, p, mm.alpha, mm.beta);
    }
  };
  return std::visit(V{p}, m);
}

double psi_jacobian(double alpha, double beta, PlanePoint q) {
  PsiMap{alpha, beta}.validate();
  q.validate();
  const PlanePoint xy = apply_psi(alpha, beta, q);  // psi is its own inverse
  return (1.0 + alpha * xy.x + beta * xy.y) / (1.0 + alpha * q.x + beta * q.y);
}

std::array<double, 3> structural_residuals(double alpha, double beta, PlanePoint p) {
  PsiMap{alpha, beta}.validate();
  p.validate();
  const PlanePoint uv = apply_psi(alpha, beta, p);
  return {
      (p.x + p.y) - (uv.x + uv.y),
      p.x / (1.0 + beta * p.y) - uv.y / (1.0 + alpha * uv.x),
      p.y / (1.0 + alpha * p.x) - uv.x / (1.0 + beta * uv.y),
  };
}

}  // namespace kummerlab
