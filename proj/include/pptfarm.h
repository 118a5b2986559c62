/*
 * pptfarm C API
 *
 * Shared-library surface over the pptfarm core: construction of the
 * block-structured multipartite state family, partial transposition,
 * spectral measurements, and the verification / audit / bound reports.
 *
 * Conventions:
 *   - every function returns a pptfarm_status; results come back through
 *     out-parameters,
 *   - handles are opaque and freed with their matching *_free function,
 *   - strings returned through char** are heap-allocated and must be
 *     released with pptfarm_string_free,
 *   - on failure pptfarm_last_error() describes the most recent error of
 *     the calling thread,
 *   - matrix rows, columns and factor positions are 1-based.
 */

#ifndef PPTFARM_H
#define PPTFARM_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pptfarm_status {
  PPTFARM_OK = 0,
  PPTFARM_ERR_DOMAIN = 1,    /* parameter outside its admissible range */
  PPTFARM_ERR_STRUCTURE = 2, /* shapes or spaces do not fit together */
  PPTFARM_ERR_CAPACITY = 3,  /* dense order above the supported limit */
  PPTFARM_ERR_NUMERIC = 4,   /* non-finite data or failed decomposition */
  PPTFARM_ERR_IO = 5,        /* serialization failure */
  PPTFARM_ERR_NULL = 6       /* null handle or output pointer */
} pptfarm_status;

typedef struct pptfarm_matrix pptfarm_matrix;
typedef struct pptfarm_family pptfarm_family;

const char* pptfarm_version(void);
const char* pptfarm_last_error(void);
void pptfarm_string_free(char* text);

/* ---- matrices (pptfarm-matrix/1 JSON interchange) ---------------------- */

pptfarm_status pptfarm_matrix_from_json(const char* text, pptfarm_matrix** out);
pptfarm_status pptfarm_matrix_to_json(const pptfarm_matrix* m, char** out);
pptfarm_status pptfarm_matrix_order(const pptfarm_matrix* m, long long* out);
pptfarm_status pptfarm_matrix_entry(const pptfarm_matrix* m, long long row, long long col,
                                    double* out);
pptfarm_status pptfarm_matrix_trace(const pptfarm_matrix* m, double* out);
pptfarm_status pptfarm_matrix_min_eigenvalue(const pptfarm_matrix* m, double* out);
pptfarm_status pptfarm_matrix_trace_norm(const pptfarm_matrix* m, double* out);
pptfarm_status pptfarm_matrix_trace_distance(const pptfarm_matrix* lhs,
                                             const pptfarm_matrix* rhs, double* out);
/* factors: 1-based factor positions, n_factors of them */
pptfarm_status pptfarm_matrix_partial_transpose(const pptfarm_matrix* m, const int* factors,
                                                size_t n_factors, pptfarm_matrix** out);
void pptfarm_matrix_free(pptfarm_matrix* m);

/* ---- the state family --------------------------------------------------- */

pptfarm_status pptfarm_family_create(int parties, int dim_a, int dim_b, double q,
                                     pptfarm_family** out);
/* Replaces the canonical payloads; both matrices are validated (order dB^n,
 * positive semidefinite, invariant under factor transpositions). */
pptfarm_status pptfarm_family_set_blocks(pptfarm_family* family, const pptfarm_matrix* a,
                                         const pptfarm_matrix* b);
pptfarm_status pptfarm_family_label_count(const pptfarm_family* family, long long* out);
pptfarm_status pptfarm_family_block_count(const pptfarm_family* family, long long* out);
pptfarm_status pptfarm_family_order(const pptfarm_family* family, long long* out);
pptfarm_status pptfarm_family_build(const pptfarm_family* family, pptfarm_matrix** out);
pptfarm_status pptfarm_family_build_core(const pptfarm_family* family, pptfarm_matrix** out);
pptfarm_status pptfarm_family_build_component(const pptfarm_family* family, int label,
                                              pptfarm_matrix** out);
void pptfarm_family_free(pptfarm_family* family);

/* ---- closed-form quantities --------------------------------------------- */

pptfarm_status pptfarm_q_star(int parties, int dim_a, int dim_b, double* out);
pptfarm_status pptfarm_rho0_sep_bound(int parties, int dim_a, double* out);
pptfarm_status pptfarm_sep_lower_bound(int parties, int dim_a, int dim_b, double* out);

/* ---- reports ------------------------------------------------------------ */

/* Density, support-orthogonality and core-distance checks of the family at
 * its stored q. all_pass receives 1 when every check passed. */
pptfarm_status pptfarm_verify_json(const pptfarm_family* family, double tol, int* all_pass,
                                   char** out);

/* Spectral audit across the q grid (NULL grid selects the default 0..1 in
 * steps of 1/32); the family's stored q is ignored. */
pptfarm_status pptfarm_audit_json(const pptfarm_family* family, const double* q_grid,
                                  size_t n_q, double tol, char** out);

/* Formula report; pass dim_a = dim_b = 0 to skip the distance block and
 * epsilon <= 0 to skip the dimension-scaling block (not both). */
pptfarm_status pptfarm_bounds_json(int parties, int dim_a, int dim_b, double epsilon,
                                   char** out);

/* CSV table over the (parties x epsilon) grid:
 * n,epsilon,dA_ideal,dB_ideal,d_ideal,d_bound */
pptfarm_status pptfarm_scan_csv(const int* parties, size_t n_parties, const double* epsilons,
                                size_t n_epsilons, char** out);

/* A-block occupancy grid of the family construction. */
pptfarm_status pptfarm_layout_text(int parties, int dim_a, char** out);
pptfarm_status pptfarm_layout_json(int parties, int dim_a, char** out);

#ifdef __cplusplus
}
#endif

#endif /* PPTFARM_H */
