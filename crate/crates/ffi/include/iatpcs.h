#ifndef IATPCS_H
#define IATPCS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>
#include <stdbool.h>

#define IATPCS_LOSS_SELF 0

#define IATPCS_LOSS_LINEX 1

#define IATPCS_LOSS_GELF 2

#define IATPCS_A_PAPER 0

#define IATPCS_A_CORRECTED 1

// Result code of every fallible call.
typedef enum IatpcsStatus {
  IATPCS_STATUS_OK = 0,
  // A required pointer argument was null.
  IATPCS_STATUS_NULL_POINTER = 1,
  // An argument lies outside the mathematical domain.
  IATPCS_STATUS_DOMAIN = 2,
  // Inconsistent plan, sample or configuration.
  IATPCS_STATUS_VALIDATION = 3,
  // The requested estimate does not exist for this sample or prior.
  IATPCS_STATUS_NONEXISTENT = 4,
  IATPCS_STATUS_PARSE = 5,
  IATPCS_STATUS_IO = 6,
  // A caller buffer is too small; the required length was written.
  IATPCS_STATUS_BUFFER_TOO_SMALL = 7,
  IATPCS_STATUS_PANIC = 8,
} IatpcsStatus;

// Opaque censoring plan.
typedef struct IatpcsPlan IatpcsPlan;

// Opaque Monte Carlo report.
typedef struct IatpcsReport IatpcsReport;

// Opaque censored competing-risks sample.
typedef struct IatpcsSample IatpcsSample;

// Summary statistics of a sample. `case_tag` is 1, 2 or 3.
typedef struct IatpcsSampleInfo {
  size_t n;
  size_t m;
  size_t d;
  size_t d1;
  size_t d2;
  size_t k1;
  size_t k2;
  size_t r_star;
  double t_star;
  uint8_t case_tag;
} IatpcsSampleInfo;

typedef struct IatpcsMle {
  double tau1_hat;
  double tau2_hat;
  double a_stat;
  double var1;
  double var2;
} IatpcsMle;

typedef struct IatpcsInterval {
  double lower;
  double upper;
  double level;
} IatpcsInterval;

// Independent gamma priors: `tau1 ~ Gamma(a, b)`, `tau2 ~ Gamma(c, d)`.
typedef struct IatpcsPrior {
  double a;
  double b;
  double c;
  double d;
} IatpcsPrior;

// Gamma posteriors (shape, rate) for both rates.
typedef struct IatpcsPosterior {
  double shape1;
  double rate1;
  double shape2;
  double rate2;
} IatpcsPosterior;

// Per-parameter summary of one estimator; index 0 is tau1.
typedef struct IatpcsPointSummary {
  double average[2];
  double bias[2];
  double mse[2];
} IatpcsPointSummary;

typedef struct IatpcsIntervalSummary {
  double lower[2];
  double upper[2];
  double length[2];
  double coverage[2];
} IatpcsIntervalSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null if none.
// The pointer stays valid until the next failing call on the same thread.
const char *iatpcs_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *iatpcs_version(void);

// # Safety
// `s` must come from this library (e.g. [`iatpcs_sample_to_csv`]) and not be freed twice.
void iatpcs_string_free(char *s);

// Inverse standard normal CDF for `p` in (0, 1).
//
// # Safety
// `out_value` must be a valid pointer to a `double`.
enum IatpcsStatus iatpcs_normal_quantile(double p, double *out_value);

// `ln Γ(x)` for `x > 0`.
//
// # Safety
// `out_value` must be a valid pointer to a `double`.
enum IatpcsStatus iatpcs_log_gamma(double x, double *out_value);

// Creates a plan from an explicit removal vector of length `m`.
//
// # Safety
// `removals` must point to `len` readable values; `out_plan` must be valid.
enum IatpcsStatus iatpcs_plan_new(size_t n,
                                  size_t m,
                                  const size_t *removals,
                                  size_t len,
                                  double t1,
                                  double t2,
                                  struct IatpcsPlan **out_plan);

// Creates a plan from a standard scheme: 1 = all removals at the m-th
// failure, 2 = one at each of the first m-1 failures, 3 = equal removals.
//
// # Safety
// `out_plan` must be a valid pointer.
enum IatpcsStatus iatpcs_plan_with_scheme(int32_t scheme,
                                          size_t n,
                                          size_t m,
                                          double t1,
                                          double t2,
                                          struct IatpcsPlan **out_plan);

// # Safety
// `plan` must be null or a handle from this library not yet freed.
void iatpcs_plan_free(struct IatpcsPlan *plan);

// Simulates one sample under `plan` with the given cause rates.
//
// # Safety
// `plan` must be a live plan handle; `out_sample` must be valid.
enum IatpcsStatus iatpcs_generate(const struct IatpcsPlan *plan,
                                  double tau1,
                                  double tau2,
                                  uint64_t seed,
                                  struct IatpcsSample **out_sample);

// Applies `plan` to increasing failure times with causes 1 or 2.
//
// # Safety
// `times` and `causes` must each point to `len` readable values.
enum IatpcsStatus iatpcs_sample_replay(const struct IatpcsPlan *plan,
                                       const double *times,
                                       const uint8_t *causes,
                                       size_t len,
                                       struct IatpcsSample **out_sample);

// # Safety
// `sample` must be null or a handle from this library not yet freed.
void iatpcs_sample_free(struct IatpcsSample *sample);

// # Safety
// `sample` and `info` must be valid pointers.
enum IatpcsStatus iatpcs_sample_info(const struct IatpcsSample *sample,
                                     struct IatpcsSampleInfo *info);

// Copies the observed failure times, causes (1 or 2) and effective removals
// into caller buffers of capacity `cap`. Any buffer may be null to skip it.
// If `cap` is smaller than D, writes D to `needed` and fails.
//
// # Safety
// Non-null buffers must have room for `cap` elements; `needed` may be null.
enum IatpcsStatus iatpcs_sample_data(const struct IatpcsSample *sample,
                                     double *times,
                                     uint8_t *causes,
                                     size_t *removals,
                                     size_t cap,
                                     size_t *needed);

// Serializes the sample in the CLI's CSV format. Free with [`iatpcs_string_free`].
//
// # Safety
// `sample` and `out_csv` must be valid pointers.
enum IatpcsStatus iatpcs_sample_to_csv(const struct IatpcsSample *sample, char **out_csv);

// Parses a sample written by [`iatpcs_sample_to_csv`] or `iatpcs generate`.
//
// # Safety
// `csv` must be a NUL-terminated string; `out_sample` must be valid.
enum IatpcsStatus iatpcs_sample_from_csv(const char *csv, struct IatpcsSample **out_sample);

// Total-time-on-test statistic under `mode` (`IATPCS_A_PAPER` or `IATPCS_A_CORRECTED`).
//
// # Safety
// `sample` and `out_value` must be valid pointers.
enum IatpcsStatus iatpcs_stat_a(const struct IatpcsSample *sample, int32_t mode, double *out_value);

// # Safety
// `sample` and `out_value` must be valid pointers.
enum IatpcsStatus iatpcs_log_likelihood(const struct IatpcsSample *sample,
                                        double tau1,
                                        double tau2,
                                        int32_t mode,
                                        double *out_value);

// Closed-form MLEs; fails with `Nonexistent` when a cause has no failures.
//
// # Safety
// `sample` and `out_mle` must be valid pointers.
enum IatpcsStatus iatpcs_mle(const struct IatpcsSample *sample,
                             int32_t mode,
                             struct IatpcsMle *out_mle);

// Asymptotic `100(1 - gamma)%` intervals with lower bounds clamped at 0.
//
// # Safety
// All pointers must be valid.
enum IatpcsStatus iatpcs_asymptotic_ci(const struct IatpcsMle *mle,
                                       double gamma,
                                       struct IatpcsInterval *out_tau1,
                                       struct IatpcsInterval *out_tau2);

// Conjugate gamma posterior of both rates.
//
// # Safety
// All pointers must be valid.
enum IatpcsStatus iatpcs_posterior(const struct IatpcsSample *sample,
                                   const struct IatpcsPrior *prior,
                                   int32_t mode,
                                   struct IatpcsPosterior *out_post);

// Bayes estimates under `loss` (`IATPCS_LOSS_SELF`, `_LINEX` with `p = param`,
// `_GELF` with `q = param`; `param` is ignored for SELF).
//
// # Safety
// All pointers must be valid.
enum IatpcsStatus iatpcs_bayes_estimate(const struct IatpcsPosterior *post,
                                        int32_t loss,
                                        double param,
                                        double *out_tau1,
                                        double *out_tau2);

// HPD intervals from `n_draws` posterior draws seeded by `seed`.
//
// # Safety
// All pointers must be valid.
enum IatpcsStatus iatpcs_hpd(const struct IatpcsPosterior *post,
                             size_t n_draws,
                             double gamma,
                             uint64_t seed,
                             struct IatpcsInterval *out_tau1,
                             struct IatpcsInterval *out_tau2);

// HPD interval of an arbitrary set of draws (not required to be sorted).
//
// # Safety
// `draws` must point to `len` readable values; `out_interval` must be valid.
enum IatpcsStatus iatpcs_hpd_from_draws(const double *draws,
                                        size_t len,
                                        double gamma,
                                        struct IatpcsInterval *out_interval);

// Runs a Monte Carlo study of `plan`. Priors are labelled `prior0`,
// `prior1`, ... in order; losses are SELF, LINEX(-0.05, 0.5) and
// GELF(-0.05, 0.5). Estimator labels read e.g. `MLE`, `SELF/prior0`,
// `GELF(q=0.5)/prior1`; interval labels `ACI`, `HPD/prior0`.
//
// # Safety
// `priors` must point to `n_priors` values; `plan` and `out_report` must be valid.
enum IatpcsStatus iatpcs_simulate(const struct IatpcsPlan *plan,
                                  double tau1,
                                  double tau2,
                                  size_t reps,
                                  uint64_t seed,
                                  const struct IatpcsPrior *priors,
                                  size_t n_priors,
                                  double level,
                                  size_t hpd_draws,
                                  int32_t mode,
                                  struct IatpcsReport **out_report);

// # Safety
// `report` must be null or a handle from this library not yet freed.
void iatpcs_report_free(struct IatpcsReport *report);

// Number of degenerate samples redrawn during the run.
//
// # Safety
// `report` and `out_value` must be valid pointers.
enum IatpcsStatus iatpcs_report_skipped(const struct IatpcsReport *report, size_t *out_value);

// # Safety
// `report`, `estimator` (NUL-terminated) and `out_summary` must be valid.
enum IatpcsStatus iatpcs_report_point(const struct IatpcsReport *report,
                                      const char *estimator,
                                      struct IatpcsPointSummary *out_summary);

// # Safety
// `report`, `method` (NUL-terminated) and `out_summary` must be valid.
enum IatpcsStatus iatpcs_report_interval(const struct IatpcsReport *report,
                                         const char *method,
                                         struct IatpcsIntervalSummary *out_summary);

// Summary table of the report as CSV. Free with [`iatpcs_string_free`].
//
// # Safety
// `report` and `out_csv` must be valid pointers.
enum IatpcsStatus iatpcs_report_to_csv(const struct IatpcsReport *report, char **out_csv);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IATPCS_H */
