#include "parse.hpp"

#include <cstdio>
#include <sstream>

#include "errors.hpp"

namespace kummerlab {

namespace {

std::vector<double> parse_params(const std::string& s, std::size_t expect, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ParseError(std::string(what) + ": bad number '" + tok + "'");
    }
  }
  if (out.size() != expect)
    throw ParseError(std::string(what) + ": expected " + std::to_string(expect) +
                     " comma-separated parameters, got " + std::to_string(out.size()));
  return out;
}

std::pair<std::string, std::string> split_head(const std::string& spec) {
  const auto pos = spec.find(':');
  if (pos == std::string::npos) return {spec, ""};
  return {spec.substr(0, pos), spec.substr(pos + 1)};
}

}  // namespace

Law parse_law(const std::string& spec) {
  const auto [name, rest] = split_head(spec);
  Law law;
  if (name == "kummer") {
    const auto p = parse_params(rest, 4, "kummer");
    law = KummerParams{p[0], p[1], p[2], p[3]};
  } else if (name == "gamma") {
    const auto p = parse_params(rest, 2, "gamma");
    law = GammaLaw{p[0], p[1]};
  } else if (name == "gig") {
    const auto p = parse_params(rest, 3, "gig");
    law = GigLaw{p[0], p[1], p[2]};
  } else if (name == "beta1") {
    const auto p = parse_params(rest, 2, "beta1");
    law = BetaILaw{p[0], p[1]};
  } else if (name == "beta2") {
    const auto p = parse_params(rest, 2, "beta2");
    law = BetaIILaw{p[0], p[1]};
  } else if (name == "invgamma") {
    const auto p = parse_params(rest, 2, "invgamma");
    law = InvGammaLaw{p[0], p[1]};
  } else {
    throw ParseError("unknown law '" + name +
                     "' (expected kummer|gamma|gig|beta1|beta2|invgamma)");
  }
  try {
    validate_law(law);
  } catch (const DomainError& e) {
    throw ParseError(std::string("invalid law parameters: ") + e.what());
  }
  return law;
}

std::string law_to_string(const Law& law) {
  char buf[160];
  struct V {
    char* buf;
    std::size_t cap;
    void operator()(const KummerParams& p) const {
      std::snprintf(buf, cap, "kummer:%.17g,%.17g,%.17g,%.17g", p.alpha, p.a, p.b, p.c);
    }
    void operator()(const GammaLaw& g) const {
      std::snprintf(buf, cap, "gamma:%.17g,%.17g", g.shape, g.rate);
    }
    void operator()(const GigLaw& g) const {
      std::snprintf(buf, cap, "gig:%.17g,%.17g,%.17g", g.p, g.a, g.b);
    }
    void operator()(const BetaILaw& b) const {
      std::snprintf(buf, cap, "beta1:%.17g,%.17g", b.p, b.q);
    }
    void operator()(const BetaIILaw& b) const {
      std::snprintf(buf, cap, "beta2:%.17g,%.17g", b.p, b.q);
    }
    void operator()(const InvGammaLaw& g) const {
      std::snprintf(buf, cap, "invgamma:%.17g,%.17g", g.b, g.c);
    }
  };
  std::visit(V{buf, sizeof buf}, law);
  return buf;
}

MapSpec parse_map(const std::string& spec) {
  const auto [name, rest] = split_head(spec);
  MapSpec m;
  if (name == "psi") {
    const auto p = parse_params(rest, 2, "psi");
    m = PsiMap{p[0], p[1]};
  } else if (name == "dkdv") {
    const auto p = parse_params(rest, 2, "dkdv");
    m = DKdVMap{p[0], p[1]};
  } else if (name == "udkdv") {
    const auto p = parse_params(rest, 2, "udkdv");
    m = UdKdVMap{p[0], p[1]};
  } else if (name == "dtoda") {
    m = DTodaMap{};
  } else if (name == "my") {
    m = MatsumotoYorMap{};
  } else if (name == "lukacs") {
    m = LukacsMap{};
  } else if (name == "phi") {
    const auto [kind_s, tail] = split_head(rest);
    PhiKind kind;
    if (kind_s == "lukacs")
      kind = PhiKind::lukacs;
    else if (kind_s == "kg")
      kind = PhiKind::kummer_gamma;
    else if (kind_s == "my")
      kind = PhiKind::matsumoto_yor;
    else if (kind_s == "kdv")
      kind = PhiKind::kdv;
    else
      throw ParseError("unknown phi kind '" + kind_s + "' (expected lukacs|kg|my|kdv)");
    std::stringstream ss(tail);
    std::string ntok;
    if (!std::getline(ss, ntok, ',')) throw ParseError("phi: missing n");
    double n;
    if (ntok == "inf") {
      n = kPhiLimit;
    } else {
      try {
        n = std::stod(ntok);
      } catch (const std::exception&) {
        throw ParseError("phi: bad n '" + ntok + "'");
      }
    }
    double alpha = 1.0, beta = 1.0;
    std::string atok, btok;
    if (std::getline(ss, atok, ',')) {
      if (!std::getline(ss, btok, ',')) throw ParseError("phi:kdv needs alpha,beta");
      alpha = std::stod(atok);
      beta = std::stod(btok);
    }
    m = PhiFamilyMap{kind, n, alpha, beta};
  } else {
    throw ParseError("unknown map '" + name +
                     "' (expected psi|dkdv|udkdv|dtoda|my|lukacs|phi)");
  }
  try {
    validate_map(m);
  } catch (const DomainError& e) {
    throw ParseError(std::string("invalid map parameters: ") + e.what());
  }
  return m;
}

}  // namespace kummerlab
