/*
 * C interface to the Birnbaum-Saunders regression library.
 *
 * Every object is an opaque handle created by a bsr_*_create / bsr_*_load /
 * bsr_run_* call and released by the matching bsr_*_free. Fallible calls
 * return a bsr_status; on failure bsr_last_error() describes the problem for
 * the calling thread. Strings produced by the library are released with
 * bsr_string_free. Column and coefficient indices are zero-based; statistics
 * are numbered 1..4 (likelihood ratio, Wald, score, gradient).
 */
#ifndef BSREG_BSREG_H
#define BSREG_BSREG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(BSREG_BUILDING_LIBRARY)
#    define BSREG_API __declspec(dllexport)
#  else
#    define BSREG_API __declspec(dllimport)
#  endif
#else
#  define BSREG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bsr_status {
  BSR_OK = 0,
  BSR_ERR_INVALID_ARGUMENT = 1, /* null handle, bad index, length mismatch */
  BSR_ERR_DOMAIN = 2,           /* value outside a function's domain */
  BSR_ERR_DATA = 3,             /* malformed CSV, rank deficiency, degenerate data */
  BSR_ERR_NUMERICAL = 4,        /* optimizer boundary, too many failed replications */
  BSR_ERR_UNSUPPORTED = 5,      /* hypothesis outside what the model supports */
  BSR_ERR_INTERNAL = 6
} bsr_status;

typedef enum bsr_format { BSR_FORMAT_JSON = 0, BSR_FORMAT_CSV = 1, BSR_FORMAT_TEXT = 2 } bsr_format;

typedef enum bsr_statistic {
  BSR_LIKELIHOOD_RATIO = 1,
  BSR_WALD = 2,
  BSR_SCORE = 3,
  BSR_GRADIENT = 4
} bsr_statistic;

typedef struct bsr_dataset bsr_dataset;
typedef struct bsr_fit bsr_fit;
typedef struct bsr_test_report bsr_test_report;
typedef struct bsr_size_table bsr_size_table;
typedef struct bsr_critical_values bsr_critical_values;
typedef struct bsr_power_curve bsr_power_curve;

BSREG_API const char* bsr_version(void);
BSREG_API const char* bsr_last_error(void);
BSREG_API void bsr_string_free(char* s);

/* ---- special functions ------------------------------------------------ */

BSREG_API bsr_status bsr_psi(double alpha, double* out);
BSREG_API bsr_status bsr_chi2_quantile(double prob, int df, double* out);
BSREG_API bsr_status bsr_nc_chi2_cdf(double x, int df, double noncentrality, double* out);
BSREG_API bsr_status bsr_nc_chi2_pdf(double x, int df, double noncentrality, double* out);

/* ---- datasets --------------------------------------------------------- */

typedef struct bsr_csv_schema {
  const char* response;           /* NULL means "y" */
  const char* const* covariates;  /* NULL/empty: every non-response column */
  size_t n_covariates;
  int intercept;                  /* prepend a column of ones */
  int log_response;               /* response is a raw lifetime; take logs */
} bsr_csv_schema;

/* x is row-major n x p. names may be NULL. */
BSREG_API bsr_status bsr_dataset_create(const double* y, const double* x, size_t n, size_t p,
                                        const char* const* names, bsr_dataset** out);
BSREG_API bsr_status bsr_dataset_load_csv(const char* path, const bsr_csv_schema* schema, bsr_dataset** out);
BSREG_API bsr_status bsr_dataset_parse_csv(const char* text, const bsr_csv_schema* schema, bsr_dataset** out);
BSREG_API void bsr_dataset_free(bsr_dataset* data);
BSREG_API size_t bsr_dataset_rows(const bsr_dataset* data);
BSREG_API size_t bsr_dataset_cols(const bsr_dataset* data);
BSREG_API const char* bsr_dataset_column_name(const bsr_dataset* data, size_t column);
BSREG_API bsr_status bsr_dataset_find_column(const bsr_dataset* data, const char* name, size_t* column);
/* Copies the design matrix row-major into out[rows*cols]. */
BSREG_API bsr_status bsr_dataset_design(const bsr_dataset* data, double* out);

/* Simulation design (ones column + U(0,1) covariates), row-major into out[n*p]. */
BSREG_API bsr_status bsr_simulation_design(size_t n, size_t p, uint64_t covariate_seed, double* out);

/* ---- fitting ---------------------------------------------------------- */

typedef enum bsr_restriction_kind {
  BSR_RESTRICT_NONE = 0,
  BSR_RESTRICT_FIX_BETA = 1,
  BSR_RESTRICT_FIX_ALPHA = 2
} bsr_restriction_kind;

typedef struct bsr_restriction {
  bsr_restriction_kind kind;
  const size_t* indices; /* FIX_BETA: coefficients held fixed */
  const double* values;  /* FIX_BETA: their values */
  size_t count;
  double alpha0;         /* FIX_ALPHA */
} bsr_restriction;

/* restriction may be NULL (unrestricted). */
BSREG_API bsr_status bsr_fit_model(const bsr_dataset* data, const bsr_restriction* restriction, bsr_fit** out);
BSREG_API void bsr_fit_free(bsr_fit* fit);
BSREG_API size_t bsr_fit_num_coefficients(const bsr_fit* fit);
BSREG_API double bsr_fit_beta(const bsr_fit* fit, size_t j);
BSREG_API double bsr_fit_alpha(const bsr_fit* fit);
/* j in [0, p]; j == p is the standard error of alpha. */
BSREG_API double bsr_fit_std_error(const bsr_fit* fit, size_t j);
BSREG_API double bsr_fit_loglik(const bsr_fit* fit);
BSREG_API int bsr_fit_iterations(const bsr_fit* fit);
BSREG_API int bsr_fit_converged(const bsr_fit* fit);
BSREG_API double bsr_fit_gradient_norm(const bsr_fit* fit);
BSREG_API bsr_status bsr_fit_render(const bsr_fit* fit, bsr_format format, char** out);

/* ---- hypothesis tests ------------------------------------------------- */

BSREG_API bsr_status bsr_test_beta(const bsr_dataset* data, const size_t* indices, const double* values, size_t count,
                                   bsr_test_report** out);
BSREG_API bsr_status bsr_test_alpha(const bsr_dataset* data, double alpha0, bsr_test_report** out);
BSREG_API void bsr_report_free(bsr_test_report* report);
BSREG_API double bsr_report_statistic(const bsr_test_report* report, bsr_statistic s);
BSREG_API double bsr_report_p_value(const bsr_test_report* report, bsr_statistic s);
BSREG_API int bsr_report_df(const bsr_test_report* report);
BSREG_API int bsr_report_converged(const bsr_test_report* report);
/* Borrowed views, valid while the report lives. */
BSREG_API const bsr_fit* bsr_report_unrestricted(const bsr_test_report* report);
BSREG_API const bsr_fit* bsr_report_restricted(const bsr_test_report* report);
BSREG_API bsr_status bsr_report_render(const bsr_test_report* report, bsr_format format, char** out);

/* ---- local power ------------------------------------------------------ */

typedef struct bsr_alpha_spec {
  double alpha0;
  double epsilon; /* alpha - alpha0 */
  int n;
  int p;
  double level;
} bsr_alpha_spec;

typedef struct bsr_alpha_power {
  double lambda;
  double critical_value;
  double power[4];
  double coefficients[4][4]; /* [statistic][k] */
  /* Pi_i - Pi_j for (1,2) (1,3) (1,4) (2,3) (2,4) (3,4) at critical_value. */
  double differences[6];
  int outside_local_regime;
} bsr_alpha_power;

BSREG_API bsr_status bsr_alpha_local_power(const bsr_alpha_spec* spec, bsr_alpha_power* out);
BSREG_API bsr_status bsr_alpha_nonnull_cdf(const bsr_alpha_spec* spec, bsr_statistic s, double x, double* out);
BSREG_API bsr_status bsr_alpha_local_power_render(const bsr_alpha_spec* spec, bsr_format format, char** out);

typedef struct bsr_beta_spec {
  const double* design; /* row-major n x p */
  size_t n;
  size_t p;
  const size_t* tested;
  const double* epsilon;
  size_t count;
  double alpha;
  double level;
} bsr_beta_spec;

BSREG_API bsr_status bsr_beta_noncentrality(const bsr_beta_spec* spec, double* out);
BSREG_API bsr_status bsr_beta_local_power(double noncentrality, int df, double level, double* out);
BSREG_API bsr_status bsr_beta_local_power_render(const bsr_beta_spec* spec, bsr_format format, char** out);

/* ---- Monte Carlo studies ---------------------------------------------- */

typedef struct bsr_sim_config {
  size_t n;
  size_t p;
  double alpha_true;
  const double* beta_true;    /* NULL: ones, null values on tested coordinates */
  bsr_restriction hypothesis; /* FIX_BETA or FIX_ALPHA */
  const double* levels;       /* NULL: {0.10, 0.05, 0.01} */
  size_t n_levels;
  int64_t replications;
  uint64_t master_seed;
  uint64_t covariate_seed;
  unsigned threads;           /* 0 or 1: serial; never changes results */
} bsr_sim_config;

BSREG_API bsr_status bsr_run_size_study(const bsr_sim_config* config, bsr_size_table** out);
BSREG_API void bsr_size_table_free(bsr_size_table* table);
BSREG_API size_t bsr_size_table_num_levels(const bsr_size_table* table);
BSREG_API double bsr_size_table_level(const bsr_size_table* table, size_t level_index);
BSREG_API double bsr_size_table_rate(const bsr_size_table* table, bsr_statistic s, size_t level_index);
BSREG_API double bsr_size_table_std_err(const bsr_size_table* table, bsr_statistic s, size_t level_index);
BSREG_API int64_t bsr_size_table_excluded(const bsr_size_table* table);
BSREG_API bsr_status bsr_size_table_render(const bsr_size_table* table, bsr_format format, char** out);

BSREG_API bsr_status bsr_estimate_critical_values(const bsr_sim_config* config, int64_t replications, double level,
                                                  bsr_critical_values** out);
BSREG_API void bsr_critical_values_free(bsr_critical_values* cv);
BSREG_API double bsr_critical_value(const bsr_critical_values* cv, bsr_statistic s);
BSREG_API int64_t bsr_critical_values_excluded(const bsr_critical_values* cv);
BSREG_API bsr_status bsr_critical_values_render(const bsr_critical_values* cv, bsr_format format, char** out);

BSREG_API bsr_status bsr_run_power_study(const bsr_sim_config* config, const double* deltas, size_t n_deltas,
                                         const double critical_values[4], double level, bsr_power_curve** out);
BSREG_API void bsr_power_curve_free(bsr_power_curve* curve);
BSREG_API double bsr_power_curve_power(const bsr_power_curve* curve, bsr_statistic s, size_t delta_index);
BSREG_API bsr_status bsr_power_curve_render(const bsr_power_curve* curve, bsr_format format, char** out);

#ifdef __cplusplus
}
#endif

#endif /* BSREG_BSREG_H */
