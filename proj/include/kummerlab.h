/* kummerlab: scaled Kummer distributions, independence-preserving maps,
 * the Kummer transform, and statistical verification suites.
 *
 * C API over the C++ core: opaque handles, status codes, UTF-8 strings.
 * All functions are thread-safe; handles are immutable after creation and
 * may be shared across threads.  Error details for the last failing call on
 * the current thread are available from klb_last_error().
 */
#ifndef KUMMERLAB_H
#define KUMMERLAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum klb_status {
  KLB_OK = 0,
  KLB_E_DOMAIN = 1,         /* argument outside the mathematical domain */
  KLB_E_NO_CONVERGENCE = 2, /* quadrature missed its tolerance */
  KLB_E_DEGENERATE = 3,     /* sampler acceptance rate below 1e-4 */
  KLB_E_CONTRACT = 4,       /* API contract violation */
  KLB_E_PARSE = 5,          /* spec string / config parse failure */
  KLB_E_INTERNAL = 6
} klb_status;

const char* klb_version(void);

/* message for the last failing call on this thread ("" if none) */
const char* klb_last_error(void);

/* ---- special functions ---- */

/* U(a,b,z) by adaptive log-space quadrature of the integral representation;
 * rel_tol <= 0 selects the default 1e-10.  err may be NULL. */
klb_status klb_kummer_u(double a, double b, double z, double rel_tol, double* value,
                        double* err);
klb_status klb_log_kummer_u(double a, double b, double z, double rel_tol, double* value,
                            double* err);
klb_status klb_log_gamma(double x, double* value);

/* residual of z w'' + (b-z) w' - a w at w = U(a,b,.), O(h^2) stencil */
klb_status klb_kummer_ode_residual(double a, double b, double z, double h, double rel_tol,
                                   double* value);

/* ---- probability laws ---- */

typedef struct klb_law klb_law;

/* spec grammar: kummer:alpha,a,b,c | gamma:shape,rate | gig:p,a,b |
 * beta1:p,q | beta2:p,q | invgamma:b,c */
klb_status klb_law_parse(const char* spec, klb_law** out);
void klb_law_free(klb_law* law);

klb_status klb_law_log_density(const klb_law* law, double x, double* out);
klb_status klb_law_cdf(const klb_law* law, double x, double rel_tol, double* out);

/* n iid draws; identical (seed, stream) reproduce identical output */
klb_status klb_law_sample(const klb_law* law, uint64_t seed, uint64_t stream, size_t n,
                          double* out);

/* ---- deterministic maps ---- */

typedef struct klb_map klb_map;

/* spec grammar: psi:alpha,beta | dkdv:alpha,beta | udkdv:J,K | dtoda | my |
 * lukacs | phi:kind:n[,alpha,beta] with kind in {lukacs,kg,my,kdv}, n or inf */
klb_status klb_map_parse(const char* spec, klb_map** out);
void klb_map_free(klb_map* map);

klb_status klb_map_apply(const klb_map* map, double x, double y, double* u, double* v);

/* Jacobian |d(x,y)/d(u,v)| of the psi involution at (u,v) */
klb_status klb_psi_jacobian(double alpha, double beta, double u, double v, double* out);

/* residuals of the three structural identities of psi at (x,y) */
klb_status klb_psi_residuals(double alpha, double beta, double x, double y, double res[3]);

/* ---- Kummer transform ---- */

/* closed form for a kummer law (the transform gamma is the law's alpha) */
klb_status klb_klt_closed(const klb_law* kummer_law, double s, double t, double z,
                          double rel_tol, double* out);

/* Monte-Carlo estimate of E[w^s (1+gamma w)^{-t} e^{-zw}] over samples */
klb_status klb_klt_mc(const double* samples, size_t n, double gamma, double s, double t,
                      double z, double* estimate, double* std_error);

/* ---- verification suites ---- */

/* suite in {balance, corollary, limits, identities, lattice}; config_json per
 * the documented schemas.  On success *report_json receives a malloc'd JSON
 * document (free with klb_string_free) and *all_pass is 1 iff every suite
 * criterion passed.  threads <= 1 runs serially; results are identical for
 * any thread count. */
klb_status klb_verify(const char* suite, const char* config_json, int threads,
                      char** report_json, int* all_pass);

void klb_string_free(char* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* KUMMERLAB_H */
