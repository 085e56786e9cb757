#ifndef IRRMOON_H
#define IRRMOON_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stdint.h>

typedef enum IrmStatus {
  IRM_STATUS_OK = 0,
  IRM_STATUS_NULL_ARG = 1,
  IRM_STATUS_INVALID_UTF8 = 2,
  IRM_STATUS_PARSE = 3,
  IRM_STATUS_MATH = 4,
  IRM_STATUS_IO = 5,
  IRM_STATUS_PANIC = 6,
} IrmStatus;

/**
 * A cyclotomic number.
 */
typedef struct IrmCyc IrmCyc;

/**
 * A subgroup of PSL(2,p).
 */
typedef struct IrmGroup IrmGroup;

/**
 * Verification reports.
 */
typedef struct IrmReport IrmReport;

/**
 * A truncated q-series with cyclotomic coefficients.
 */
typedef struct IrmSeries IrmSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Free with `irm_string_free`.
 */
char *irm_last_error(void);

/**
 * # Safety
 * `s` must come from this library (or be NULL).
 */
void irm_string_free(char *s);

/**
 * Library version as a static NUL-terminated string.
 */
const char *irm_version(void);

/**
 * Parse a literal such as `3/2 - 5/2*sqrt5` or `z{7}^{3}`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` a valid pointer.
 */
enum IrmStatus irm_cyc_parse(const char *text_, struct IrmCyc **out);

/**
 * # Safety
 * Handles must be live; `out` valid.
 */
enum IrmStatus irm_cyc_add(const struct IrmCyc *a, const struct IrmCyc *b, struct IrmCyc **out);

/**
 * # Safety
 * Handles must be live; `out` valid.
 */
enum IrmStatus irm_cyc_sub(const struct IrmCyc *a, const struct IrmCyc *b, struct IrmCyc **out);

/**
 * # Safety
 * Handles must be live; `out` valid.
 */
enum IrmStatus irm_cyc_mul(const struct IrmCyc *a, const struct IrmCyc *b, struct IrmCyc **out);

/**
 * a / b; MATH on division by zero.
 *
 * # Safety
 * Handles must be live; `out` valid.
 */
enum IrmStatus irm_cyc_div(const struct IrmCyc *a, const struct IrmCyc *b, struct IrmCyc **out);

/**
 * ζ ↦ ζ^k; MATH when k shares a factor with the conductor.
 *
 * # Safety
 * Handle must be live; `out` valid.
 */
enum IrmStatus irm_cyc_galois(const struct IrmCyc *a, int64_t k, struct IrmCyc **out);

/**
 * # Safety
 * Handles must be live; `out` valid.
 */
enum IrmStatus irm_cyc_equal(const struct IrmCyc *a, const struct IrmCyc *b, bool *out);

/**
 * Human-readable form (`raw` = false) or the z{N}^{e} literal form (`raw` = true).
 *
 * # Safety
 * Handle must be live; `out` valid.
 */
enum IrmStatus irm_cyc_to_string(const struct IrmCyc *a, bool raw, char **out);

/**
 * # Safety
 * Handle must be live; `re` and `im` valid.
 */
enum IrmStatus irm_cyc_to_complex(const struct IrmCyc *a, double *re, double *im);

/**
 * # Safety
 * `a` must come from this library (or be NULL) and not be used afterwards.
 */
void irm_cyc_free(struct IrmCyc *a);

/**
 * Exact expansion of an eta-quotient expression up to O(q^trunc).
 *
 * # Safety
 * `expr` must be a NUL-terminated string; `out` valid.
 */
enum IrmStatus irm_series_expand(const char *expr, int64_t trunc, struct IrmSeries **out);

/**
 * Coefficient of q^(num/den).
 *
 * # Safety
 * Handle must be live; `out` valid.
 */
enum IrmStatus irm_series_coeff(const struct IrmSeries *s,
                                int64_t num,
                                int64_t den,
                                struct IrmCyc **out);

/**
 * # Safety
 * Handle must be live; `out` valid.
 */
enum IrmStatus irm_series_galois(const struct IrmSeries *s, int64_t k, struct IrmSeries **out);

/**
 * Pretty form, or the `EXP n/d COEFF c` line form when `lines` is true.
 *
 * # Safety
 * Handle must be live; `out` valid.
 */
enum IrmStatus irm_series_render(const struct IrmSeries *s, bool lines, char **out);

/**
 * # Safety
 * `s` must come from this library (or be NULL) and not be used afterwards.
 */
void irm_series_free(struct IrmSeries *s);

/**
 * Image in PSL(2,p) of a comma-separated generator list (names or [[a,b],[c,d]]).
 *
 * # Safety
 * `gens` must be a NUL-terminated string; `out` valid.
 */
enum IrmStatus irm_group_generate(uint64_t p, const char *gens, struct IrmGroup **out);

/**
 * # Safety
 * Handle must be live; `out` valid.
 */
enum IrmStatus irm_group_order(const struct IrmGroup *g, uint64_t *out);

/**
 * Short name such as D3, A4, S4, A5, L2(7).
 *
 * # Safety
 * Handle must be live; `out` valid.
 */
enum IrmStatus irm_group_identify(const struct IrmGroup *g, char **out);

/**
 * # Safety
 * Handle must be live; `out` valid.
 */
enum IrmStatus irm_group_genus(const struct IrmGroup *g, int64_t *out);

/**
 * # Safety
 * `g` must come from this library (or be NULL) and not be used afterwards.
 */
void irm_group_free(struct IrmGroup *g);

/**
 * Verify one case (`case_id` non-NULL) or everything (`case_id` NULL).
 * `data_dir` NULL means the default data directory.
 *
 * # Safety
 * Non-NULL strings must be NUL-terminated; `out` valid.
 */
enum IrmStatus irm_verify(const char *case_id,
                          const char *data_dir_,
                          double num_tol,
                          struct IrmReport **out);

/**
 * True when no check failed.
 *
 * # Safety
 * Handle must be live; `out` valid.
 */
enum IrmStatus irm_report_passed(const struct IrmReport *r, bool *out);

/**
 * The `CASE …` / `CHECK …` lines.
 *
 * # Safety
 * Handle must be live; `out` valid.
 */
enum IrmStatus irm_report_render(const struct IrmReport *r, char **out);

/**
 * # Safety
 * `r` must come from this library (or be NULL) and not be used afterwards.
 */
void irm_report_free(struct IrmReport *r);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* IRRMOON_H */
