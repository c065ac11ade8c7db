#ifndef TABLEAUX_H
#define TABLEAUX_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum TableauxStatus {
  TABLEAUX_STATUS_OK = 0,
  TABLEAUX_STATUS_NULL_POINTER = 1,
  TABLEAUX_STATUS_INVALID_UTF8 = 2,
  TABLEAUX_STATUS_INVALID_DOCUMENT = 3,
  TABLEAUX_STATUS_INVALID_ARGUMENT = 4,
  TABLEAUX_STATUS_INCONCLUSIVE = 5,
  TABLEAUX_STATUS_BUFFER_TOO_SMALL = 6,
  TABLEAUX_STATUS_PANIC = 7,
} TableauxStatus;

/**
 * Index range of the quadratic criterion.
 */
typedef enum TableauxVariant {
  TABLEAUX_VARIANT_THEOREM = 0,
  TABLEAUX_VARIANT_PROOF = 1,
} TableauxVariant;

/**
 * Opaque involutivity report handle.
 */
typedef struct TableauxReport TableauxReport;

/**
 * Opaque tableau handle.
 */
typedef struct TableauxTableau TableauxTableau;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Valid until the
 * next call into the library on this thread.
 */
const char *tableaux_last_error(void);

/**
 * Parses a JSON document (basis or coefficient presentation).
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum TableauxStatus tableaux_tableau_from_json(const char *json, struct TableauxTableau **out);

/**
 * # Safety
 * `t` must be null or a handle from this library not yet freed.
 */
void tableaux_tableau_free(struct TableauxTableau *t);

/**
 * Writes `r`, `n` and `dim A`. Any output pointer may be null.
 *
 * # Safety
 * `t` must be a live handle; non-null outputs must be valid.
 */
enum TableauxStatus tableaux_tableau_shape(const struct TableauxTableau *t,
                                           size_t *r,
                                           size_t *n,
                                           size_t *dim);

/**
 * Runs the Cartan test. `trials == 0` uses the library default.
 *
 * # Safety
 * `t` must be a live handle and `out` a valid pointer.
 */
enum TableauxStatus tableaux_cartan_test(const struct TableauxTableau *t,
                                         uint64_t seed,
                                         size_t trials,
                                         enum TableauxVariant variant,
                                         struct TableauxReport **out);

/**
 * # Safety
 * `r` must be null or a handle from this library not yet freed.
 */
void tableaux_report_free(struct TableauxReport *r);

/**
 * Summary numbers of a report. Any output pointer may be null.
 * `criterion` is 1 (holds), 0 (fails) or -1 (not evaluated).
 *
 * # Safety
 * `r` must be a live handle; non-null outputs must be valid.
 */
enum TableauxStatus tableaux_report_summary(const struct TableauxReport *r,
                                            bool *involutive,
                                            size_t *dim_a1,
                                            size_t *cartan_bound,
                                            int32_t *criterion,
                                            size_t *violations);

/**
 * Copies the generic characters into `buf`. `len` holds the capacity on
 * entry and the number of characters on return.
 *
 * # Safety
 * `r` must be a live handle, `len` valid, `buf` valid for `*len` entries.
 */
enum TableauxStatus tableaux_report_characters(const struct TableauxReport *r,
                                               size_t *buf,
                                               size_t *len);

/**
 * Full report as JSON. Free the string with [`tableaux_string_free`].
 *
 * # Safety
 * `r` must be a live handle and `out` a valid pointer.
 */
enum TableauxStatus tableaux_report_to_json(const struct TableauxReport *r, char **out);

/**
 * Exported quadratic ideal for the given characters, in the CLI text format.
 *
 * # Safety
 * `chars` must be valid for `n` entries and `out` a valid pointer.
 */
enum TableauxStatus tableaux_ideal(const size_t *chars,
                                   size_t n,
                                   enum TableauxVariant variant,
                                   char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void tableaux_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TABLEAUX_H */
