#ifndef TREELDPC_H
#define TREELDPC_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
enum TldpcStatus
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  TLDPC_STATUS_OK = 0,
  TLDPC_STATUS_NULL_ARGUMENT = 1,
  TLDPC_STATUS_INVALID_ARGUMENT = 2,
  TLDPC_STATUS_UNSUPPORTED = 3,
  TLDPC_STATUS_BUFFER_TOO_SMALL = 4,
  TLDPC_STATUS_DISCONNECTED = 5,
  TLDPC_STATUS_PANIC = 6,
};
#ifndef __cplusplus
typedef int32_t TldpcStatus;
#endif // __cplusplus

/**
 * Opaque handle to a constructed Tanner graph.
 */
typedef struct TldpcGraph TldpcGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent error on this thread. The pointer stays valid
 * until the next failing call on the same thread.
 */
const char *tldpc_last_error(void);

/**
 * Builds a graph. `family` is one of "type1a", "type1b", "type2l3",
 * "type2l4", "eg2"; `ell` applies to type1a (pass 0 otherwise), `p`/`s`
 * to the field-based families (pass 0 when unused).
 *
 * # Safety
 * `family` must be a NUL-terminated string and `out` a valid pointer.
 */
TldpcStatus tldpc_graph_build(const char *family,
                              uint32_t ell,
                              uint32_t p,
                              uint32_t s,
                              TldpcGraph **out);

/**
 * Releases a graph handle. Passing NULL is a no-op.
 *
 * # Safety
 * `graph` must come from `tldpc_graph_build` and not be freed twice.
 */
void tldpc_graph_free(TldpcGraph *graph);

/**
 * Number of variable nodes; 0 for a NULL handle.
 *
 * # Safety
 * `graph` must be a live handle or NULL.
 */
uint32_t tldpc_graph_n_var(const TldpcGraph *graph);

/**
 * Number of check nodes; 0 for a NULL handle.
 *
 * # Safety
 * `graph` must be a live handle or NULL.
 */
uint32_t tldpc_graph_n_chk(const TldpcGraph *graph);

/**
 * Girth of the graph; 0 reports an acyclic graph.
 *
 * # Safety
 * Pointers must be valid.
 */
TldpcStatus tldpc_graph_girth(const TldpcGraph *graph, uint32_t *out);

/**
 * Diameter of the graph; fails with `Disconnected` when not connected.
 *
 * # Safety
 * Pointers must be valid.
 */
TldpcStatus tldpc_graph_diameter(const TldpcGraph *graph, uint32_t *out);

/**
 * Code dimension over GF(modulus), modulus prime.
 *
 * # Safety
 * Pointers must be valid.
 */
TldpcStatus tldpc_graph_dimension(const TldpcGraph *graph, uint32_t modulus, uint32_t *out);

/**
 * Minimum distance over GF(modulus) with the given enumeration cap.
 * `exact` receives 1 when the value is exact; otherwise `out` holds the
 * best lower bound and `upper` the best upper bound (0 when unknown).
 *
 * # Safety
 * Pointers must be valid.
 */
TldpcStatus tldpc_graph_min_distance(const TldpcGraph *graph,
                                     uint32_t modulus,
                                     uint64_t cap,
                                     uint32_t *out,
                                     uint32_t *upper,
                                     int32_t *exact);

/**
 * Tree lower bound T(d, g) for variable degree d and girth g.
 *
 * # Safety
 * `out` must be valid.
 */
TldpcStatus tldpc_tree_bound(uint32_t d, uint32_t g, uint32_t *out);

/**
 * Writes the alist text into `buf`. Call with `cap` = 0 to query the
 * required size via `written` (including the trailing NUL).
 *
 * # Safety
 * `buf` must point to `cap` writable bytes when `cap` > 0.
 */
TldpcStatus tldpc_graph_alist(const TldpcGraph *graph,
                              char *buf,
                              uintptr_t cap,
                              uintptr_t *written);

/**
 * Witness codeword for "type1b" or "type2l3"; `pary` nonzero selects the
 * p-ary proof. `word` must hold the block length (see
 * `tldpc_graph_n_var`); `weight` receives the Hamming weight.
 *
 * # Safety
 * `word` must point to at least `word_len` bytes.
 */
TldpcStatus tldpc_witness(const char *family,
                          uint32_t p,
                          uint32_t s,
                          int32_t pary,
                          uint8_t *word,
                          uintptr_t word_len,
                          uint32_t *weight);

/**
 * Min-sum decoding. `llr` holds one log-likelihood ratio per variable
 * (positive favors bit 0); `word` receives the hard decisions.
 *
 * # Safety
 * `llr` and `word` must match the block length.
 */
TldpcStatus tldpc_decode_min_sum(const TldpcGraph *graph,
                                 const double *llr,
                                 uintptr_t llr_len,
                                 uint32_t max_iter,
                                 uint8_t *word,
                                 int32_t *converged,
                                 uint32_t *iterations);

/**
 * Sum-product decoding with the same contract as `tldpc_decode_min_sum`.
 *
 * # Safety
 * `llr` and `word` must match the block length.
 */
TldpcStatus tldpc_decode_sum_product(const TldpcGraph *graph,
                                     const double *llr,
                                     uintptr_t llr_len,
                                     uint32_t max_iter,
                                     uint8_t *word,
                                     int32_t *converged,
                                     uint32_t *iterations);

/**
 * p-ary sum-product decoding. `likelihoods` is row-major n x p: entry
 * i*p + j is the channel probability of symbol j at position i.
 *
 * # Safety
 * `likelihoods` must hold n*p doubles and `word` n bytes.
 */
TldpcStatus tldpc_decode_sum_product_pary(const TldpcGraph *graph,
                                          uint32_t p,
                                          const double *likelihoods,
                                          uintptr_t likelihoods_len,
                                          uint32_t max_iter,
                                          uint8_t *word,
                                          int32_t *converged,
                                          uint32_t *iterations);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* TREELDPC_H */
