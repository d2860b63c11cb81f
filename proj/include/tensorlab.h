/* C interface to the tensorlab shared library.
 *
 * All entry points are thread-safe. Functions returning a pointer yield NULL
 * on failure; functions returning tl_status yield TL_OK on success. In both
 * cases tl_last_error() describes the most recent failure on the calling
 * thread.
 */
#ifndef TENSORLAB_H
#define TENSORLAB_H

#include <stdint.h>

#if defined(_WIN32)
#define TL_API __declspec(dllexport)
#else
#define TL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tl_status {
    TL_OK = 0,
    TL_ERROR_INVALID = 1, /* invalid argument or contract violation */
    TL_ERROR_CONFIG = 2,  /* malformed or inconsistent configuration */
    TL_ERROR_RUNTIME = 3  /* I/O or numerical failure */
} tl_status;

TL_API const char* tl_version(void);

/* Message for the last failure on this thread; empty string if none. */
TL_API const char* tl_last_error(void);

/* ------------------------------------------------------------------ */
/* Closed-form theory                                                  */
/* ------------------------------------------------------------------ */

/* Centering/scaling constants of the mode-`mode` (0-based) Gram spectrum:
 * mu = (1/N) prod_{l != mode} n_l, sigma = (1/N) sqrt(prod_l n_l). */
TL_API tl_status tl_scales(const int64_t* dims, int order, int64_t n_param, int mode,
                           double* mu_out, double* sigma_out);

/* Per-direction spike prediction from a squared signal singular value.
 * rho = s_sq / sigma; xi_out receives rho + 1/rho when rho > 1, NaN
 * otherwise; zeta_plus_out receives max(0, 1 - 1/rho^2). */
TL_API tl_status tl_spike_prediction(double s_sq, double sigma, double* rho_out, double* xi_out,
                                     double* zeta_plus_out);

/* Semicircle density on [-2, 2] and its closed-form CDF. */
TL_API double tl_semicircle_pdf(double x);
TL_API double tl_semicircle_cdf(double x);

/* High-probability bound on the squared norm of a standard Gaussian tensor
 * contracted on arbitrary Stiefel matrices. */
TL_API tl_status tl_noise_contraction_bound(const int64_t* dims, const int64_t* ranks, int order,
                                            double delta, double c_universal, double* bound_out);

/* ------------------------------------------------------------------ */
/* Config-driven experiments                                           */
/* ------------------------------------------------------------------ */

typedef struct tl_config tl_config;
typedef struct tl_table tl_table;

/* Loads a JSON config file. The TENSORLAB_SEED environment variable, when
 * set, overrides the configured base seed; tl_config_set_seed overrides
 * both (precedence: explicit setter > environment > file). */
TL_API tl_config* tl_config_load(const char* path);
TL_API tl_config* tl_config_parse(const char* json_text);
TL_API void tl_config_free(tl_config* cfg);

TL_API tl_status tl_config_set_seed(tl_config* cfg, uint64_t seed);
TL_API tl_status tl_config_set_profile(tl_config* cfg, const char* profile); /* small|paper */
TL_API tl_status tl_config_set_output(tl_config* cfg, const char* path);
TL_API const char* tl_config_output_path(const tl_config* cfg);

/* Runs the configured experiment on `threads` workers (0 = all cores).
 * The result is byte-identical for any worker count. */
TL_API tl_table* tl_run(const tl_config* cfg, int threads);

/* Pure-theory prediction table: per-mode scaling constants, spike
 * predictions for the optional s_sq values, and the noise contraction
 * bound. ranks may be NULL; n_param <= 0 means N = sum of dims. */
TL_API tl_table* tl_predict(const int64_t* dims, int order, const int64_t* ranks, int ranks_len,
                            int64_t n_param, const double* s_sq, int s_sq_len, double delta,
                            double c_universal);

/* ------------------------------------------------------------------ */
/* Result tables                                                       */
/* ------------------------------------------------------------------ */

TL_API void tl_table_free(tl_table* table);
TL_API int64_t tl_table_rows(const tl_table* table);
TL_API int tl_table_cols(const tl_table* table);
TL_API const char* tl_table_column(const tl_table* table, int col);

/* 1 when the cell is n/a, 0 otherwise (including out-of-range). */
TL_API int tl_table_cell_is_na(const tl_table* table, int64_t row, int col);

/* Numeric cell value; NaN for text or n/a cells. */
TL_API double tl_table_value(const tl_table* table, int64_t row, int col);

/* Cell rendered exactly as it appears in the CSV. The pointer stays valid
 * until the next tl_table_text call on the same table. */
TL_API const char* tl_table_text(tl_table* table, int64_t row, int col);

/* Writes the table as CSV: header row, RFC 4180 quoting, '.' decimal
 * separator, 17 significant digits. */
TL_API tl_status tl_table_write_csv(const tl_table* table, const char* path);

/* Theory-versus-simulation gate for a finished run. *passed_out receives
 * 1/0; *report_out receives a human-readable report owned by the table. */
TL_API tl_status tl_table_check(tl_table* table, const tl_config* cfg, int* passed_out,
                                const char** report_out);

#ifdef __cplusplus
}
#endif

#endif /* TENSORLAB_H */
