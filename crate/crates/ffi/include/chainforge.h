#ifndef CHAINFORGE_H
#define CHAINFORGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CfClaim {
  CF_CLAIM_THEOREM = 0,
  CF_CLAIM_CONJECTURE = 1,
} CfClaim;

typedef enum CfFamily {
  CF_FAMILY_BASIC = 0,
  CF_FAMILY_ANTI_BASIC = 1,
} CfFamily;

typedef enum CfMethod {
  CF_METHOD_GENERIC = 0,
  CF_METHOD_FAST = 1,
  CF_METHOD_SPERNER = 2,
} CfMethod;

typedef enum CfMode {
  CF_MODE_TYPE = 0,
  CF_MODE_POINT = 1,
} CfMode;

typedef enum CfStatus {
  CF_STATUS_OK = 0,
  CF_STATUS_NULL_POINTER = 1,
  CF_STATUS_INVALID_ARGUMENT = 2,
  CF_STATUS_OUT_OF_RANGE = 3,
  CF_STATUS_UNSUPPORTED = 4,
  CF_STATUS_BUDGET_EXCEEDED = 5,
  CF_STATUS_INTERNAL = 6,
} CfStatus;

typedef enum CfVerdictStatus {
  CF_VERDICT_STATUS_PASS = 0,
  CF_VERDICT_STATUS_FAIL = 1,
  CF_VERDICT_STATUS_INCOMPLETE = 2,
} CfVerdictStatus;

/**
 * Opaque weight table.
 */
typedef struct CfWeightTable CfWeightTable;

/**
 * Owner of a chain group: a layer m (d=1) or a type (a, b, c) (d=2).
 */
typedef struct CfOwner {
  /**
   * True for a layer, in which case only `a` is set and holds m.
   */
  bool is_layer;
  uint32_t a;
  uint32_t b;
  uint32_t c;
} CfOwner;

typedef struct CfVerdict {
  enum CfVerdictStatus status;
  /**
   * -1 when the oracle did not finish.
   */
  int64_t mis;
  /**
   * -1 when not enumerated, else 0 or 1.
   */
  int32_t unique;
  /**
   * -1 when not enumerated.
   */
  int64_t maximum_sets;
  bool certified;
} CfVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *cf_version(void);

/**
 * Message of the last failed call on this thread, or NULL. Free with
 * `cf_string_free`.
 */
char *cf_last_error_message(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, freed once.
 */
void cf_string_free(char *s);

/**
 * Builds a weight table. `method` Sperner ignores `d` and `k`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CfStatus cf_weight_table_new(uint32_t n,
                                  uint32_t d,
                                  uint32_t k,
                                  enum CfMethod method,
                                  enum CfFamily family,
                                  struct CfWeightTable **out);

/**
 * # Safety
 * `table` must be NULL or a handle from `cf_weight_table_new`, freed once.
 */
void cf_weight_table_free(struct CfWeightTable *table);

/**
 * Number of chain groups in the table.
 *
 * # Safety
 * `table` must be a live handle and `out` valid for writes.
 */
enum CfStatus cf_weight_table_len(const struct CfWeightTable *table, size_t *out);

/**
 * Owner and weight ("p/q") of entry `index`, in owner order. `weight` may be
 * NULL; otherwise free it with `cf_string_free`.
 *
 * # Safety
 * `table` must be a live handle; `owner` valid for writes; `weight` NULL or
 * valid for writes.
 */
enum CfStatus cf_weight_table_entry(const struct CfWeightTable *table,
                                    size_t index,
                                    struct CfOwner *owner,
                                    char **weight);

/**
 * JSON rendering of the table. Free with `cf_string_free`.
 *
 * # Safety
 * `table` must be a live handle and `out` valid for writes.
 */
enum CfStatus cf_weight_table_to_json(const struct CfWeightTable *table, char **out);

/**
 * Checks that the table induces weight exactly 1 at every type (or point).
 *
 * # Safety
 * `table` must be a live handle and `passed` valid for writes.
 */
enum CfStatus cf_weight_table_verify(const struct CfWeightTable *table,
                                     enum CfMode mode,
                                     bool *passed);

/**
 * Size of layer m of {0..d}^n as a decimal string.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CfStatus cf_layer_size(uint32_t n, uint32_t d, uint32_t m, char **out);

/**
 * Certifies the predicted maximum set against the exact oracle.
 * `max_vertices` 0 keeps the default budget.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CfStatus cf_certify(uint32_t n,
                         uint32_t d,
                         uint32_t k,
                         enum CfClaim claim,
                         uint64_t max_vertices,
                         struct CfVerdict *out);

/**
 * Runs one identity check by name. `failures` may be NULL.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `passed` valid for writes.
 */
enum CfStatus cf_check_lemma(const char *name,
                             uint32_t n,
                             uint32_t k,
                             bool *passed,
                             uint64_t *failures);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHAINFORGE_H */
