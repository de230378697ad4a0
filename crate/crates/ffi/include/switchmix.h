#ifndef SWITCHMIX_H
#define SWITCHMIX_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum SwitchmixStatus {
  SWITCHMIX_STATUS_OK = 0,
  SWITCHMIX_STATUS_NULL_POINTER = 1,
  SWITCHMIX_STATUS_INVALID_ARGUMENT = 2,
  SWITCHMIX_STATUS_NOT_GRAPHICAL = 3,
  SWITCHMIX_STATUS_FROZEN = 4,
  SWITCHMIX_STATUS_CAP_EXCEEDED = 5,
  SWITCHMIX_STATUS_REDUCIBLE = 6,
  SWITCHMIX_STATUS_INTERNAL = 7,
} SwitchmixStatus;

typedef enum SwitchmixVariant {
  SWITCHMIX_VARIANT_EXACT = 0,
  SWITCHMIX_VARIANT_ALL_PAIRS = 1,
} SwitchmixVariant;

/**
 * A running switch chain.
 */
typedef struct SwitchmixChain SwitchmixChain;

/**
 * A degree sequence, undirected or directed.
 */
typedef struct SwitchmixSequence SwitchmixSequence;

/**
 * Creates an undirected sequence from `n` degrees.
 */
enum SwitchmixStatus switchmix_sequence_new_undirected(const uint32_t *degrees,
                                                       size_t n,
                                                       struct SwitchmixSequence **out);

/**
 * Creates a directed sequence from `n` in-degrees and `n` out-degrees.
 */
enum SwitchmixStatus switchmix_sequence_new_directed(const uint32_t *in_degrees,
                                                     const uint32_t *out_degrees,
                                                     size_t n,
                                                     struct SwitchmixSequence **out);

void switchmix_sequence_free(struct SwitchmixSequence *seq);

/**
 * Writes whether the sequence is realizable by a simple (di)graph.
 */
enum SwitchmixStatus switchmix_sequence_is_graphical(const struct SwitchmixSequence *seq,
                                                     bool *out);

/**
 * Starts a chain at the deterministic realization of `seq`. `variant` is
 * ignored for directed sequences.
 */
enum SwitchmixStatus switchmix_chain_new(const struct SwitchmixSequence *seq,
                                         uint64_t seed,
                                         uint64_t replica,
                                         enum SwitchmixVariant variant,
                                         struct SwitchmixChain **out);

/**
 * Runs `steps` transitions.
 */
enum SwitchmixStatus switchmix_chain_step(struct SwitchmixChain *chain, uint64_t steps);

/**
 * Number of edges (arcs) of the current state.
 */
enum SwitchmixStatus switchmix_chain_edge_count(const struct SwitchmixChain *chain, size_t *out);

/**
 * Writes the current state's sorted edges as `u0, v0, u1, v1, ...` into
 * `buf`, which holds `capacity` pairs. `written` receives the number of
 * pairs; if the buffer is too small nothing is copied, `written` receives
 * the required size and `InvalidArgument` is returned.
 */
enum SwitchmixStatus switchmix_chain_edges(const struct SwitchmixChain *chain,
                                           size_t *buf,
                                           size_t capacity,
                                           size_t *written);

void switchmix_chain_free(struct SwitchmixChain *chain);

/**
 * Number of realizations, by exhaustive enumeration up to `cap` states.
 */
enum SwitchmixStatus switchmix_count_states(const struct SwitchmixSequence *seq,
                                            size_t cap,
                                            uint64_t *out);

/**
 * Exact worst-start mixing time for `eps`, by enumeration. Returns
 * `Reducible` when the chain does not connect the state space.
 */
enum SwitchmixStatus switchmix_exact_mixing_time(const struct SwitchmixSequence *seq,
                                                 double eps,
                                                 size_t cap,
                                                 enum SwitchmixVariant variant,
                                                 uint64_t *out);

/**
 * Base-10 logarithm of the closed-form mixing bound.
 */
enum SwitchmixStatus switchmix_mixing_bound_log10(const struct SwitchmixSequence *seq,
                                                  double eps,
                                                  double *out);

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call into this library from the same thread.
 */
const char *switchmix_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *switchmix_version(void);

#endif  /* SWITCHMIX_H */
