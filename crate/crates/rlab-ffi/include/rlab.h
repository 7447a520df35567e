/* C interface to the rlab library. */

#ifndef RLAB_H
#define RLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Success.
 */
#define RLAB_OK 0

/**
 * A verification or verdict came out negative.
 */
#define RLAB_VERDICT_FAILED 1

/**
 * Malformed arguments or input documents.
 */
#define RLAB_INVALID_INPUT 2

/**
 * A resource cap was exceeded.
 */
#define RLAB_CAP_EXCEEDED 3

/**
 * Internal numerical or algebraic failure.
 */
#define RLAB_INTERNAL 4

/**
 * A required pointer argument was null.
 */
#define RLAB_NULL_POINTER 5

/**
 * Opaque simplicial-complex handle.
 */
typedef struct RlabComplex RlabComplex;

/**
 * Opaque handle for a quotient complex with its Hecke structure.
 */
typedef struct RlabCsComplex RlabCsComplex;

/**
 * Opaque graph handle.
 */
typedef struct RlabGraph RlabGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent error on this thread. Borrowed; valid until
 * the next failing call on the same thread.
 */
const char *rlab_last_error(void);

/**
 * Free a string returned by any rlab function.
 */
void rlab_string_free(char *s);

/**
 * Build the Cayley graph X^{p,q} for distinct primes p, q congruent to
 * 1 mod 4. On success *out owns the new handle.
 */
int32_t rlab_lps_graph(uint64_t p, uint64_t q, struct RlabGraph **out);

/**
 * Parse a graph document (JSON).
 */
int32_t rlab_graph_from_json(const char *json, struct RlabGraph **out);

/**
 * Serialize a graph handle as a JSON document. Caller frees with
 * rlab_string_free.
 */
int32_t rlab_graph_to_json(const struct RlabGraph *g, char **out);

int64_t rlab_graph_vertex_count(const struct RlabGraph *g);

int64_t rlab_graph_edge_count(const struct RlabGraph *g);

void rlab_graph_free(struct RlabGraph *g);

/**
 * Ramanujan verdict for a regular connected graph: a JSON report. Returns
 * RLAB_OK even when the verdict is negative; the report's "ok" field and
 * *ok_out carry the verdict.
 */
int32_t rlab_graph_ramanujan(const struct RlabGraph *g,
                             double tol,
                             int32_t *ok_out,
                             char **report_out);

/**
 * Ball of radius r in the affine building of PGL_d over F_q((y)), as a
 * complex handle.
 */
int32_t rlab_building_ball(uintptr_t d,
                           uint64_t q,
                           uintptr_t r,
                           uintptr_t cap,
                           struct RlabComplex **out);

int32_t rlab_complex_from_json(const char *json, struct RlabComplex **out);

int32_t rlab_complex_to_json(const struct RlabComplex *c, char **out);

/**
 * Number of i-dimensional faces; -1 on a null handle.
 */
int64_t rlab_complex_face_count(const struct RlabComplex *c, uintptr_t dim);

void rlab_complex_free(struct RlabComplex *c);

/**
 * Expansion metrics of a complex as a JSON report. metric: 0 = graph
 * Cheeger (1-skeleton), 1 = coboundary expansion in dimension dim, 2 =
 * filling in dimension dim, 3 = mixing over `trials` seeded trials.
 */
int32_t rlab_complex_expansion(const struct RlabComplex *c,
                               int32_t metric,
                               uintptr_t dim,
                               uintptr_t trials,
                               uint64_t seed,
                               char **report_out);

/**
 * Empirical geometric-overlap upper bound over seeded random planar
 * embeddings.
 */
int32_t rlab_complex_overlap(const struct RlabComplex *c,
                             uintptr_t trials,
                             uint64_t seed,
                             double *out);

/**
 * Quotient Cayley clique complex of the division-algebra lattice modulo the
 * prime ideal generated by the polynomial with the given little-endian
 * coefficients.
 */
int32_t rlab_cs_complex(uintptr_t d,
                        uint64_t q,
                        const uint64_t *ideal_coeffs,
                        uintptr_t ideal_len,
                        uintptr_t cap,
                        struct RlabCsComplex **out);

int64_t rlab_cs_vertex_count(const struct RlabCsComplex *c);

/**
 * Detach the underlying simplicial complex as a fresh handle.
 */
int32_t rlab_cs_get_complex(const struct RlabCsComplex *c, struct RlabComplex **out);

/**
 * Hecke-spectrum Ramanujan verdict. mode: 0 = full spectrum, 1 = extremal
 * (Krylov) mode. Returns RLAB_OK even for a negative verdict; *ok_out and
 * the report carry it.
 */
int32_t rlab_cs_ramanujan(const struct RlabCsComplex *c,
                          int32_t mode,
                          double tol,
                          int32_t *ok_out,
                          char **report_out);

void rlab_cs_free(struct RlabCsComplex *c);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RLAB_H */
