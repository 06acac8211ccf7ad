#ifndef NETSYNC_H
#define NETSYNC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Shape of a scanned synchronized region.
 */
typedef enum NsRegionClass {
  NS_REGION_CLASS_EMPTY = 0,
  NS_REGION_CLASS_SINGLE_BOUNDED = 1,
  NS_REGION_CLASS_UNBOUNDED_TAIL = 2,
  NS_REGION_CLASS_DISCONNECTED_UNION = 3,
} NsRegionClass;

/**
 * Result code of every fallible call.
 */
typedef enum NsStatus {
  NS_STATUS_OK = 0,
  NS_STATUS_NULL_POINTER = 1,
  NS_STATUS_INVALID_ARGUMENT = 2,
  NS_STATUS_INVALID_EDGE = 3,
  NS_STATUS_DUPLICATE_EDGE = 4,
  NS_STATUS_DISCONNECTED = 5,
  NS_STATUS_DIMENSION_MISMATCH = 6,
  NS_STATUS_NON_FINITE = 7,
  NS_STATUS_NO_CONVERGENCE = 8,
  NS_STATUS_SINGULAR = 9,
  NS_STATUS_SCAN_TOO_SHORT = 10,
  NS_STATUS_NOT_STABILIZABLE = 11,
  NS_STATUS_NOT_CONTROLLABLE = 12,
  NS_STATUS_SEARCH_EXHAUSTED = 13,
  NS_STATUS_BUFFER_TOO_SMALL = 14,
  NS_STATUS_BLOW_UP = 15,
  NS_STATUS_PANIC = 16,
} NsStatus;

/**
 * Rank-1 coupling design.
 */
typedef struct NsDesign NsDesign;

/**
 * Undirected simple graph.
 */
typedef struct NsGraph NsGraph;

/**
 * Synchronized region of a pair (F, H).
 */
typedef struct NsRegion NsRegion;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success. The pointer stays
 * valid until the next `ns_*` call on the same thread.
 */
const char *ns_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ns_version(void);

/**
 * Builds a graph on `n` nodes from `edge_count` pairs stored as `edges[2k], edges[2k+1]`.
 *
 * # Safety
 * `edges` must hold `2 * edge_count` values and `out` must be writable.
 */
enum NsStatus ns_graph_new(size_t n, const size_t *edges, size_t edge_count, struct NsGraph **out);

/**
 * # Safety
 * `graph` must come from this library and not be used afterwards. Null is ignored.
 */
void ns_graph_free(struct NsGraph *graph);

/**
 * Adds the edge `{i, j}` in place.
 *
 * # Safety
 * `graph` must be a live handle.
 */
enum NsStatus ns_graph_add_edge(struct NsGraph *graph, size_t i, size_t j);

/**
 * # Safety
 * `graph` must be a live handle and `out` writable.
 */
enum NsStatus ns_graph_node_count(const struct NsGraph *graph, size_t *out);

/**
 * # Safety
 * `graph` must be a live handle and `out` writable.
 */
enum NsStatus ns_graph_complement(const struct NsGraph *graph, struct NsGraph **out);

/**
 * # Safety
 * `graph` must be a live handle and `out` writable.
 */
enum NsStatus ns_graph_component_count(const struct NsGraph *graph, size_t *out);

/**
 * Ascending Laplacian eigenvalues into `values[0..n]`, and optionally the eigenratio
 * λ₂/λ_N into `ratio`.
 *
 * # Safety
 * `values` must hold `len` doubles; `ratio` may be null.
 */
enum NsStatus ns_graph_spectrum(const struct NsGraph *graph,
                                double *values,
                                size_t len,
                                double *ratio);

/**
 * Node betweenness (ordered pairs, unnormalized) into `values[0..n]`.
 *
 * # Safety
 * `values` must hold `len` doubles.
 */
enum NsStatus ns_graph_betweenness(const struct NsGraph *graph, double *values, size_t len);

/**
 * Average shortest-path distance as the reduced fraction `num/den`.
 *
 * # Safety
 * `num` and `den` must be writable.
 */
enum NsStatus ns_graph_average_distance(const struct NsGraph *graph, uint64_t *num, uint64_t *den);

/**
 * Scans σ ∈ [0, sigma_max] for F − σH Hurwitz. Non-positive `grid_step` or `boundary_tol`
 * select the defaults (1e-3·sigma_max and 1e-6).
 *
 * # Safety
 * `f` and `h` must hold `n*n` doubles and `out` must be writable.
 */
enum NsStatus ns_region_scan(const double *f,
                             const double *h,
                             size_t n,
                             double sigma_max,
                             double grid_step,
                             double boundary_tol,
                             struct NsRegion **out);

/**
 * # Safety
 * `region` must come from this library and not be used afterwards. Null is ignored.
 */
void ns_region_free(struct NsRegion *region);

/**
 * # Safety
 * `region` must be a live handle and `out` writable.
 */
enum NsStatus ns_region_interval_count(const struct NsRegion *region, size_t *out);

/**
 * Closed interval `index` (0-based, ascending) of the region.
 *
 * # Safety
 * `region` must be a live handle; `lo` and `hi` writable.
 */
enum NsStatus ns_region_interval(const struct NsRegion *region,
                                 size_t index,
                                 double *lo,
                                 double *hi);

/**
 * # Safety
 * `region` must be a live handle and `out` writable.
 */
enum NsStatus ns_region_classification(const struct NsRegion *region, enum NsRegionClass *out);

/**
 * Whether every c·λ_k (k ≥ 2) of the graph lies in the region.
 *
 * # Safety
 * `graph` and `region` must be live handles and `verdict` writable.
 */
enum NsStatus ns_check_criterion(const struct NsGraph *graph,
                                 double c,
                                 const struct NsRegion *region,
                                 bool *verdict);

/**
 * Designs H = b kᵀ for F. With `b` null an input vector is chosen from `seed`.
 *
 * # Safety
 * `f` must hold `n*n` doubles, `b` null or `n` doubles, and `out` writable.
 */
enum NsStatus ns_design_rank1(const double *f,
                              size_t n,
                              const double *b,
                              double q_scale,
                              uint64_t seed,
                              struct NsDesign **out);

/**
 * # Safety
 * `design` must come from this library and not be used afterwards. Null is ignored.
 */
void ns_design_free(struct NsDesign *design);

/**
 * Row-major H into `out[0..n*n]`.
 *
 * # Safety
 * `out` must hold `len` doubles.
 */
enum NsStatus ns_design_h(const struct NsDesign *design, double *out, size_t len);

/**
 * Gain k into `out[0..n]`.
 *
 * # Safety
 * `out` must hold `len` doubles.
 */
enum NsStatus ns_design_k(const struct NsDesign *design, double *out, size_t len);

/**
 * Input vector b into `out[0..n]`.
 *
 * # Safety
 * `out` must hold `len` doubles.
 */
enum NsStatus ns_design_b(const struct NsDesign *design, double *out, size_t len);

/**
 * Largest eigenvalue of the Lyapunov certificate; negative when the design is certified.
 *
 * # Safety
 * `design` must be a live handle and `out` writable.
 */
enum NsStatus ns_design_certificate(const struct NsDesign *design, double *out);

/**
 * Simulates Chua oscillators coupled through the graph with strength `c` and 3×3 inner
 * coupling `h`, from seeded initial states in [-0.5, 0.5]. Writes the final synchronization
 * error and whether the error stayed below `eps` over the final `window` time units.
 * Divergence is reported through `synchronized = false`, not as an error.
 *
 * # Safety
 * `graph` must be a live handle, `h` must hold 9 doubles, and both outputs be writable.
 */
enum NsStatus ns_simulate_chua(const struct NsGraph *graph,
                               double c,
                               const double *h,
                               uint64_t seed,
                               double step,
                               double horizon,
                               double eps,
                               double window,
                               double *final_error,
                               bool *synchronized);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NETSYNC_H */
