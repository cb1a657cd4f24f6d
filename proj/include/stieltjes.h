/*
 * C API for the stieltjes library: equalized and optimal partitions for
 * lower Riemann-Stieltjes sums, convergence-rate studies, and the
 * randomized inequality checks.
 *
 * All objects are opaque handles created and destroyed through this
 * interface. Calls that can fail return stj_status; on failure
 * stj_last_error() carries a thread-local human-readable message valid
 * until the next failing call on the same thread. Getters on valid
 * handles do not fail; passing NULL or an out-of-range index yields 0.
 */
#ifndef STIELTJES_H
#define STIELTJES_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define STJ_API __declspec(dllexport)
#else
#define STJ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum stj_status {
    STJ_OK = 0,
    STJ_ERR_PARSE = 1,       /* expression text did not parse */
    STJ_ERR_VALIDATION = 2,  /* an input contract was violated */
    STJ_ERR_DOMAIN = 3,      /* evaluation left a node's domain */
    STJ_ERR_CONVERGENCE = 4, /* an iteration exhausted its budget */
    STJ_ERR_INVALID_ARG = 5, /* NULL handle or malformed argument */
    STJ_ERR_INTERNAL = 6
} stj_status;

STJ_API const char* stj_status_name(stj_status status);
STJ_API const char* stj_last_error(void);

/* -- expressions -------------------------------------------------------- */

typedef struct stj_expr stj_expr;

STJ_API stj_status stj_expr_parse(const char* source, stj_expr** out);
STJ_API stj_status stj_expr_eval(const stj_expr* e, double t, double* out);
STJ_API stj_status stj_expr_derivative(const stj_expr* e, stj_expr** out);
/* Writes the text form (NUL-terminated) into buffer; *needed receives the
 * full length including the terminator. Returns STJ_OK even when
 * truncated, so call with size 0 to query the length. */
STJ_API stj_status stj_expr_to_string(const stj_expr* e, char* buffer, size_t size,
                                      size_t* needed);
STJ_API void stj_expr_free(stj_expr* e);

/* -- validated function pair (f, g) on [a, b] --------------------------- */

typedef struct stj_pair stj_pair;

STJ_API stj_status stj_pair_create(const char* f, const char* g, double a, double b,
                                   stj_pair** out);
STJ_API void stj_pair_free(stj_pair* pair);

STJ_API stj_status stj_reference_integral(const stj_pair* pair, double* out);
STJ_API stj_status stj_asymptotic_constant(const stj_pair* pair, double* out);

/* -- equalized partitions ------------------------------------------------ */

typedef struct stj_equalize_result stj_equalize_result;

STJ_API stj_status stj_equalize(const char* w, const char* h, double a, double b, int n,
                                stj_equalize_result** out);
/* Fixed-point alternative; non-convergence is reported through the
 * converged flag and best residual, not as an error. */
STJ_API stj_status stj_equalize_fixed_point(const char* w, const char* h, double a, double b,
                                            int n, int max_iter, stj_equalize_result** out);

STJ_API size_t stj_equalize_result_points(const stj_equalize_result* r);
STJ_API double stj_equalize_result_point(const stj_equalize_result* r, size_t i);
STJ_API double stj_equalize_result_value(const stj_equalize_result* r);
STJ_API double stj_equalize_result_residual(const stj_equalize_result* r);
STJ_API int stj_equalize_result_iterations(const stj_equalize_result* r);
STJ_API int stj_equalize_result_converged(const stj_equalize_result* r);
STJ_API void stj_equalize_result_free(stj_equalize_result* r);

/* -- optimal partitions --------------------------------------------------- */

typedef struct stj_optimize_result stj_optimize_result;

STJ_API stj_status stj_optimize(const stj_pair* pair, int n, stj_optimize_result** out);
STJ_API stj_status stj_optimize_grid_dp(const stj_pair* pair, int n, int grid,
                                        stj_optimize_result** out);

STJ_API size_t stj_optimize_result_points(const stj_optimize_result* r);
STJ_API double stj_optimize_result_point(const stj_optimize_result* r, size_t i);
STJ_API double stj_optimize_result_lower_sum(const stj_optimize_result* r);
STJ_API double stj_optimize_result_gap(const stj_optimize_result* r);
STJ_API const char* stj_optimize_result_method(const stj_optimize_result* r);
STJ_API int stj_optimize_result_iterations(const stj_optimize_result* r);
STJ_API void stj_optimize_result_free(stj_optimize_result* r);

/* -- convergence-rate study ------------------------------------------------ */

typedef struct stj_rate_report stj_rate_report;

STJ_API stj_status stj_rate_study(const stj_pair* pair, const int* n_list, size_t count,
                                  stj_rate_report** out);

STJ_API size_t stj_rate_report_rows(const stj_rate_report* r);
STJ_API int stj_rate_report_n(const stj_rate_report* r, size_t row);
STJ_API double stj_rate_report_gap(const stj_rate_report* r, size_t row);
STJ_API double stj_rate_report_scaled_gap(const stj_rate_report* r, size_t row);
STJ_API double stj_rate_report_constant(const stj_rate_report* r);
STJ_API double stj_rate_report_extrapolated(const stj_rate_report* r);
STJ_API double stj_rate_report_relative_error(const stj_rate_report* r);
STJ_API void stj_rate_report_free(stj_rate_report* r);

/* -- randomized inequality checks ------------------------------------------ */

typedef struct stj_check_report stj_check_report;

STJ_API stj_status stj_run_checks(const stj_pair* pair, uint64_t seed, int cases,
                                  stj_check_report** out);

STJ_API size_t stj_check_report_suites(const stj_check_report* r);
STJ_API const char* stj_check_report_suite_name(const stj_check_report* r, size_t i);
STJ_API int stj_check_report_passed(const stj_check_report* r, size_t i);
STJ_API int stj_check_report_failed(const stj_check_report* r, size_t i);
STJ_API const char* stj_check_report_detail(const stj_check_report* r, size_t i);
STJ_API void stj_check_report_free(stj_check_report* r);

/* -- builtin presets -------------------------------------------------------- */

STJ_API size_t stj_preset_count(void);
STJ_API const char* stj_preset_name(size_t i);
STJ_API stj_status stj_preset_lookup(const char* name, const char** f, const char** g, double* a,
                                     double* b);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* STIELTJES_H */
