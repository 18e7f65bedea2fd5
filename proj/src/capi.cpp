#include "kummerlab.h"

#include <cstring>
#include <new>
#include <string>

#include "errors.hpp"
#include "ktransform.hpp"
#include "maps.hpp"
#include "parse.hpp"
#include "specfun.hpp"
#include "suites.hpp"

using namespace kummerlab;

struct klb_law {
  Law law;
};
struct klb_map {
  MapSpec map;
};

namespace {

thread_local std::string g_last_error;

klb_status status_of(const Error& e) {
  switch (e.code()) {
    case ErrorCode::domain: return KLB_E_DOMAIN;
    case ErrorCode::no_convergence: return KLB_E_NO_CONVERGENCE;
    case ErrorCode::degenerate: return KLB_E_DEGENERATE;
    case ErrorCode::contract: return KLB_E_CONTRACT;
    case ErrorCode::parse: return KLB_E_PARSE;
    default: return KLB_E_INTERNAL;
  }
}

template <typename Fn>
klb_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return KLB_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return KLB_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return KLB_E_INTERNAL;
  }
}

QuadratureConfig cfg_of(double rel_tol) {
  QuadratureConfig cfg;
  if (rel_tol > 0.0) cfg.rel_tol = rel_tol;
  return cfg;
}

}  // namespace

extern "C" {

const char* klb_version(void) { return "0.1.0"; }

const char* klb_last_error(void) { return g_last_error.c_str(); }

klb_status klb_kummer_u(double a, double b, double z, double rel_tol, double* value,
                        double* err) {
  return guarded([&] {
    if (!value) throw ContractError("klb_kummer_u: value must not be NULL");
    const QuadratureConfig cfg = cfg_of(rel_tol);
    *value = kummer_u(UArgs{a, b, z}, cfg);
    if (err) *err = cfg.rel_tol;
  });
}

klb_status klb_log_kummer_u(double a, double b, double z, double rel_tol, double* value,
                            double* err) {
  return guarded([&] {
    if (!value) throw ContractError("klb_log_kummer_u: value must not be NULL");
    const QuadratureConfig cfg = cfg_of(rel_tol);
    *value = log_kummer_u(UArgs{a, b, z}, cfg);
    if (err) *err = cfg.rel_tol;
  });
}

klb_status klb_log_gamma(double x, double* value) {
  return guarded([&] {
    if (!value) throw ContractError("klb_log_gamma: value must not be NULL");
    *value = log_gamma_fn(x);
  });
}

klb_status klb_kummer_ode_residual(double a, double b, double z, double h, double rel_tol,
                                   double* value) {
  return guarded([&] {
    if (!value) throw ContractError("klb_kummer_ode_residual: value must not be NULL");
    *value = kummer_ode_residual(a, b, z, h, cfg_of(rel_tol));
  });
}

klb_status klb_law_parse(const char* spec, klb_law** out) {
  return guarded([&] {
    if (!spec || !out) throw ContractError("klb_law_parse: NULL argument");
    *out = new klb_law{parse_law(spec)};
  });
}

void klb_law_free(klb_law* law) { delete law; }

klb_status klb_law_log_density(const klb_law* law, double x, double* out) {
  return guarded([&] {
    if (!law || !out) throw ContractError("klb_law_log_density: NULL argument");
    *out = log_density(law->law, x);
  });
}

klb_status klb_law_cdf(const klb_law* law, double x, double rel_tol, double* out) {
  return guarded([&] {
    if (!law || !out) throw ContractError("klb_law_cdf: NULL argument");
    *out = cdf(law->law, x, cfg_of(rel_tol));
  });
}

klb_status klb_law_sample(const klb_law* law, uint64_t seed, uint64_t stream, size_t n,
                          double* out) {
  return guarded([&] {
    if (!law || (!out && n > 0)) throw ContractError("klb_law_sample: NULL argument");
    Rng rng(RngState{seed, stream});
    const std::vector<double> v = sample_law(law->law, rng, n);
    std::memcpy(out, v.data(), n * sizeof(double));
  });
}

klb_status klb_map_parse(const char* spec, klb_map** out) {
  return guarded([&] {
    if (!spec || !out) throw ContractError("klb_map_parse: NULL argument");
    *out = new klb_map{parse_map(spec)};
  });
}

void klb_map_free(klb_map* map) { delete map; }

klb_status klb_map_apply(const klb_map* map, double x, double y, double* u, double* v) {
  return guarded([&] {
    if (!map || !u || !v) throw ContractError("klb_map_apply: NULL argument");
    const PlanePoint p = apply_map(map->map, PlanePoint{x, y});
    *u = p.x;
    *v = p.y;
  });
}

klb_status klb_psi_jacobian(double alpha, double beta, double u, double v, double* out) {
  return guarded([&] {
    if (!out) throw ContractError("klb_psi_jacobian: NULL argument");
    *out = psi_jacobian(alpha, beta, PlanePoint{u, v});
  });
}

klb_status klb_psi_residuals(double alpha, double beta, double x, double y, double res[3]) {
  return guarded([&] {
    if (!res) throw ContractError("klb_psi_residuals: NULL argument");
    const auto r = structural_residuals(alpha, beta, PlanePoint{x, y});
    res[0] = r[0];
    res[1] = r[1];
    res[2] = r[2];
  });
}

klb_status klb_klt_closed(const klb_law* kummer_law, double s, double t, double z,
                          double rel_tol, double* out) {
  return guarded([&] {
    if (!kummer_law || !out) throw ContractError("klb_klt_closed: NULL argument");
    const auto* kp = std::get_if<KummerParams>(&kummer_law->law);
    if (!kp) throw ContractError("klb_klt_closed: law must be a kummer law");
    *out = klt_closed(*kp, TransformQuery{kp->alpha, s, t, z}, cfg_of(rel_tol));
  });
}

klb_status klb_klt_mc(const double* samples, size_t n, double gamma, double s, double t,
                      double z, double* estimate, double* std_error) {
  return guarded([&] {
    if (!samples || !estimate) throw ContractError("klb_klt_mc: NULL argument");
    const McEstimate e = klt_mc(std::span(samples, n), TransformQuery{gamma, s, t, z});
    *estimate = e.estimate;
    if (std_error) *std_error = e.std_error;
  });
}

klb_status klb_verify(const char* suite, const char* config_json, int threads,
                      char** report_json, int* all_pass) {
  return guarded([&] {
    if (!suite || !config_json || !report_json)
      throw ContractError("klb_verify: NULL argument");
    const SuiteResult res = run_suite(suite, config_json, threads);
    const std::string text = suite_result_to_json(res);
    char* buf = static_cast<char*>(::operator new(text.size() + 1));
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *report_json = buf;
    if (all_pass) *all_pass = res.all_pass ? 1 : 0;
  });
}

void klb_string_free(char* s) { ::operator delete(s); }

}  // extern "C"
