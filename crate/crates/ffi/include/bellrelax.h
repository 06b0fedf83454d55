#ifndef BELLRELAX_H
#define BELLRELAX_H

/* Generated by cbindgen from the bellrelax-ffi sources; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every call.
 */
typedef enum BrStatus {
  BR_STATUS_OK = 0,
  BR_STATUS_NULL_POINTER = 1,
  /**
   * A numeric argument is outside its documented range.
   */
  BR_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The requested violation cannot be reached; not an error.
   */
  BR_STATUS_INFEASIBLE = 3,
  /**
   * A model violates a probability or normalisation constraint.
   */
  BR_STATUS_VALIDATION = 4,
  /**
   * Arguments are in range but the operation is undefined for them.
   */
  BR_STATUS_DOMAIN = 5,
  /**
   * Malformed JSON or a non-UTF-8 string.
   */
  BR_STATUS_PARSE = 6,
  BR_STATUS_PANIC = 7,
} BrStatus;

typedef enum BrRegime {
  BR_REGIME_SUB_GAP = 0,
  BR_REGIME_CROSS_GAP = 1,
  BR_REGIME_SATURATED = 2,
} BrRegime;

/**
 * Opaque hidden-variable model.
 */
typedef struct BrModel BrModel;

typedef struct BrProfile {
  double i1;
  double i2;
  double i;
  double s12;
  double s21;
  double s;
  double m1;
  double m2;
  double m;
  double f;
} BrProfile;

typedef struct BrTightness {
  double bound;
  double attainable;
  double searched;
  double gap;
  double attainable_gap;
  bool sound;
  bool tight;
} BrTightness;

typedef struct BrSampleReport {
  double estimate;
  /**
   * Runs per context in the order `xy`, `xy'`, `x'y`, `x'y'`.
   */
  uint64_t counts[4];
  double correlators[4];
} BrSampleReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the next call.
 */
const char *br_last_error_message(void);

/**
 * Closed-form bound on the CHSH value for Bob's degrees `(i2, s12, m2)`.
 *
 * # Safety
 * `value` and `regime` must be valid for writes.
 */
enum BrStatus br_chsh_bound(double i2, double s12, double m2, double *value, enum BrRegime *regime);

/**
 * The bound evaluated at the usable signaling shift.
 *
 * # Safety
 * `value` and `regime` must be valid for writes.
 */
enum BrStatus br_attainable_bound(double i2,
                                  double s12,
                                  double m2,
                                  double *value,
                                  enum BrRegime *regime);

/**
 * `Ok` if violation `v` is reachable under the caps, `Infeasible` otherwise.
 */
enum BrStatus br_feasible(double i2, double s12, double m2, double v);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum BrStatus br_min_signaling_for_violation(double v, double m2, double *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum BrStatus br_min_md_for_violation(double v, double i2, double s12, double *out);

/**
 * # Safety
 * `i2_min` and `s12_min` must be valid for writes.
 */
enum BrStatus br_min_indeterminism_for_violation(double v, double *i2_min, double *s12_min);

/**
 * Parse a model from a nul-terminated UTF-8 JSON string.
 *
 * # Safety
 * `json` must be a valid C string and `out` valid for writes.
 */
enum BrStatus br_model_from_json(const char *json, struct BrModel **out);

/**
 * Serialise a model; free the result with [`br_string_free`].
 *
 * # Safety
 * `model` must come from this library and `out` be valid for writes.
 */
enum BrStatus br_model_to_json(const struct BrModel *model, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void br_string_free(char *s);

/**
 * # Safety
 * `model` must be null or a handle returned by this library, not yet freed.
 */
void br_model_free(struct BrModel *model);

/**
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum BrStatus br_model_chsh(const struct BrModel *model, double *out);

/**
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum BrStatus br_model_lambda_count(const struct BrModel *model, size_t *out);

/**
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum BrStatus br_model_profile(const struct BrModel *model, struct BrProfile *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum BrStatus br_mi_saturating_model(double i2, double s12, struct BrModel **out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum BrStatus br_table1_model(double p, struct BrModel **out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum BrStatus br_combined_saturating_model(double i2, double s12, double m2, struct BrModel **out);

/**
 * Exhaustive search; `argmax` may be null when the model is not wanted.
 *
 * # Safety
 * `best_chsh` must be valid for writes; `argmax` null or valid for writes.
 */
enum BrStatus br_max_chsh_search(double i2,
                                 double s12,
                                 double m2,
                                 size_t resolution,
                                 double *best_chsh,
                                 struct BrModel **argmax);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum BrStatus br_check_tightness(double i2,
                                 double s12,
                                 double m2,
                                 size_t resolution,
                                 struct BrTightness *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum BrStatus br_random_constrained_model(double i2_cap,
                                          double s12_cap,
                                          double m2_cap,
                                          size_t lambda_count,
                                          uint64_t seed,
                                          struct BrModel **out);

/**
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum BrStatus br_sample_experiment(const struct BrModel *model,
                                   uint64_t runs,
                                   uint64_t seed,
                                   struct BrSampleReport *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BELLRELAX_H */
