#ifndef TROPELIM_H
#define TROPELIM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  TROPELIM_PRUNE_NONE = 0,
  TROPELIM_PRUNE_BASIC = 1,
  TROPELIM_PRUNE_DOMINANCE = 2,
} TropelimPrune;

typedef enum {
  TROPELIM_PICK_LOWER = 0,
  TROPELIM_PICK_MIDPOINT = 1,
  TROPELIM_PICK_UPPER = 2,
} TropelimPick;

typedef enum {
  TROPELIM_STATUS_OK = 0,
  /**
   * Malformed input or invalid argument.
   */
  TROPELIM_STATUS_INVALID = 1,
  /**
   * The infimum is the zero element; a solution handle is still produced.
   */
  TROPELIM_STATUS_NOT_ATTAINED = 2,
  TROPELIM_STATUS_CAPACITY = 3,
  TROPELIM_STATUS_NULL_ARGUMENT = 4,
  TROPELIM_STATUS_INTERNAL = 5,
  TROPELIM_STATUS_PANIC = 6,
} TropelimStatus;

/**
 * A validated problem instance.
 */
typedef struct TropelimProblem TropelimProblem;

/**
 * A solved instance with its values rendered as strings.
 */
typedef struct TropelimSolution TropelimSolution;

typedef struct {
  TropelimPrune prune;
  TropelimPick pick;
  /**
   * Cap on nonzero rows per elimination stage.
   */
  size_t max_monomials;
  /**
   * Solve exact problems in floating point.
   */
  bool float_mode;
} TropelimOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty if none.
 */
const char *tropelim_last_error(void);

/**
 * Library version as a static string.
 */
const char *tropelim_version(void);

TropelimOptions tropelim_options_default(void);

/**
 * Parses a problem document (UTF-8 JSON, nul-terminated).
 *
 * # Safety
 * `json` must be a valid nul-terminated string and `out` a valid pointer.
 */
TropelimStatus tropelim_problem_from_json(const char *json, TropelimProblem **out);

/**
 * Number of variables; 0 for a null handle.
 *
 * # Safety
 * `problem` must be null or a handle from [`tropelim_problem_from_json`].
 */
size_t tropelim_problem_arity(const TropelimProblem *problem);

/**
 * # Safety
 * `problem` must be null or a handle not yet freed.
 */
void tropelim_problem_free(TropelimProblem *problem);

/**
 * Minimizes `problem`. `options` may be null for defaults.
 *
 * Returns `Ok` or `NotAttained` with `*out` set; on any other status
 * `*out` is null.
 *
 * # Safety
 * `problem` must be a live handle, `options` null or valid, `out` valid.
 */
TropelimStatus tropelim_solve(const TropelimProblem *problem,
                              const TropelimOptions *options,
                              TropelimSolution **out);

/**
 * The minimum μ as text; null for a null handle.
 *
 * # Safety
 * `solution` must be null or a live handle.
 */
const char *tropelim_solution_mu(const TropelimSolution *solution);

/**
 * Number of coordinates in the minimizer; 0 when not attained.
 *
 * # Safety
 * `solution` must be null or a live handle.
 */
size_t tropelim_solution_point_len(const TropelimSolution *solution);

/**
 * Coordinate `index` of the minimizer as text; null if out of range.
 *
 * # Safety
 * `solution` must be null or a live handle.
 */
const char *tropelim_solution_point(const TropelimSolution *solution, size_t index);

/**
 * The full solution document as compact JSON.
 *
 * # Safety
 * `solution` must be null or a live handle.
 */
const char *tropelim_solution_json(const TropelimSolution *solution);

/**
 * # Safety
 * `solution` must be null or a handle not yet freed.
 */
void tropelim_solution_free(TropelimSolution *solution);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TROPELIM_H */
