#ifndef TROPSING_H
#define TROPSING_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which sequence to read from a [`TropsingSequences`].
 */
typedef enum TropsingSequence {
  TROPSING_SEQUENCE_ALPHA = 0,
  TROPSING_SEQUENCE_BETA = 1,
  TROPSING_SEQUENCE_GAMMA = 2,
} TropsingSequence;

/**
 * Status codes.
 */
typedef enum TropsingStatus {
  TROPSING_STATUS_OK = 0,
  TROPSING_STATUS_NULL_POINTER = 1,
  TROPSING_STATUS_INVALID_ARGUMENT = 2,
  TROPSING_STATUS_OUT_OF_RANGE = 3,
  TROPSING_STATUS_PARSE_ERROR = 4,
  TROPSING_STATUS_DOMAIN_ERROR = 5,
  TROPSING_STATUS_PANIC = 6,
} TropsingStatus;

/**
 * Lattice points of a simplex.
 */
typedef struct TropsingContext TropsingContext;

/**
 * Result of an enumeration.
 */
typedef struct TropsingMgcList TropsingMgcList;

/**
 * α, β, γ up to some index.
 */
typedef struct TropsingSequences TropsingSequences;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message on this thread, or an empty string. Valid until the next call on this thread.
 */
const char *tropsing_last_error(void);

/**
 * Library version as a static string.
 */
const char *tropsing_version(void);

/**
 * # Safety
 * `s` must be null or come from this library.
 */
void tropsing_string_free(char *s);

/**
 * Sizes the worker pool from `TROPSING_THREADS`. Optional; enumeration works without it.
 */
void tropsing_configure_threads(void);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum TropsingStatus tropsing_context_new(size_t n, int64_t d, struct TropsingContext **out);

/**
 * # Safety
 * `ctx` must be null or come from [`tropsing_context_new`].
 */
void tropsing_context_free(struct TropsingContext *ctx);

/**
 * # Safety
 * Pointers must be valid.
 */
enum TropsingStatus tropsing_context_len(const struct TropsingContext *ctx, size_t *out);

/**
 * Copies the `i`-th point in ≺ order into `coords`, which must hold `n + 1` values.
 *
 * # Safety
 * `coords` must have room for `n + 1` values.
 */
enum TropsingStatus tropsing_context_point(const struct TropsingContext *ctx,
                                           size_t i,
                                           int64_t *coords);

/**
 * # Safety
 * Pointers must be valid.
 */
enum TropsingStatus tropsing_enumerate(const struct TropsingContext *ctx,
                                       struct TropsingMgcList **out);

/**
 * # Safety
 * `list` must be null or come from [`tropsing_enumerate`].
 */
void tropsing_mgc_list_free(struct TropsingMgcList *list);

/**
 * # Safety
 * Pointers must be valid.
 */
enum TropsingStatus tropsing_mgc_list_len(const struct TropsingMgcList *list, size_t *out);

/**
 * Multiplicity `m(C)` and first-level multiplicity `m(C₁)` of the `i`-th circuit.
 *
 * # Safety
 * Pointers must be valid.
 */
enum TropsingStatus tropsing_mgc_multiplicity(const struct TropsingMgcList *list,
                                              size_t i,
                                              uint64_t *m,
                                              uint64_t *m1);

/**
 * Descriptor of the `i`-th circuit, e.g. `IV_2||I`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum TropsingStatus tropsing_mgc_descriptor(const struct TropsingMgcList *list,
                                            size_t i,
                                            char **out);

/**
 * The `i`-th circuit as JSON `{n,d,center,levels}`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum TropsingStatus tropsing_mgc_circuit_json(const struct TropsingMgcList *list,
                                              size_t i,
                                              char **out);

/**
 * # Safety
 * `out` must be valid.
 */
enum TropsingStatus tropsing_sequences_new(size_t max_n, struct TropsingSequences **out);

/**
 * # Safety
 * `seq` must be null or come from [`tropsing_sequences_new`].
 */
void tropsing_sequences_free(struct TropsingSequences *seq);

/**
 * Nearest double to the exact value.
 *
 * # Safety
 * Pointers must be valid.
 */
enum TropsingStatus tropsing_sequences_get(const struct TropsingSequences *seq,
                                           enum TropsingSequence which,
                                           size_t i,
                                           double *out);

/**
 * Exact value as `p/q`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum TropsingStatus tropsing_sequences_get_exact(const struct TropsingSequences *seq,
                                                 enum TropsingSequence which,
                                                 size_t i,
                                                 char **out);

/**
 * δ-nodal count of `Δ_d^(n)` as a decimal integer string.
 *
 * # Safety
 * `out` must be valid.
 */
enum TropsingStatus tropsing_delta_nodal(size_t n, int64_t d, size_t delta, bool real, char **out);

/**
 * Singularity at the origin for a weight function given as JSON `{n,d,entries}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` valid.
 */
enum TropsingStatus tropsing_is_singular(const char *json, bool *out);

/**
 * Mikhalkin condition for a graded circuit given as JSON `{n,d,center,levels}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` valid.
 */
enum TropsingStatus tropsing_admits_mikhalkin(const char *json, bool *out);

/**
 * Exact average of the real count over Ω, as `p/q`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` valid.
 */
enum TropsingStatus tropsing_real_average(const char *json, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TROPSING_H */
