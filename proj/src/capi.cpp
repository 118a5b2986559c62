#include "pptfarm.h"

#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include "pptfarm/analysis.hpp"
#include "pptfarm/family.hpp"
#include "pptfarm/layout.hpp"
#include "pptfarm/matrix_json.hpp"
#include "pptfarm/spectral.hpp"

struct pptfarm_matrix {
  pptfarm::SymMatrix value;
};

struct pptfarm_family {
  pptfarm::FamilyParams params;
  pptfarm::BlockPair blocks;
};

namespace {

thread_local std::string g_last_error;

pptfarm_status fail(pptfarm_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename Fn>
pptfarm_status guarded(Fn&& fn) {
  try {
    fn();
    return PPTFARM_OK;
  } catch (const pptfarm::DomainError& e) {
    return fail(PPTFARM_ERR_DOMAIN, e.what());
  } catch (const pptfarm::InvalidIndexError& e) {
    return fail(PPTFARM_ERR_DOMAIN, e.what());
  } catch (const pptfarm::CapacityError& e) {
    return fail(PPTFARM_ERR_CAPACITY, e.what());
  } catch (const pptfarm::StructureError& e) {
    return fail(PPTFARM_ERR_STRUCTURE, e.what());
  } catch (const pptfarm::NumericError& e) {
    return fail(PPTFARM_ERR_NUMERIC, e.what());
  } catch (const pptfarm::IoError& e) {
    return fail(PPTFARM_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(PPTFARM_ERR_NUMERIC, e.what());
  }
}

char* copy_string(const std::string& text) {
  char* out = new char[text.size() + 1];
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

bool null_argument(bool any_null, const char* message) {
  if (any_null) fail(PPTFARM_ERR_NULL, message);
  return any_null;
}

}  // namespace

extern "C" {

const char* pptfarm_version(void) { return "1.0.0"; }

const char* pptfarm_last_error(void) { return g_last_error.c_str(); }

void pptfarm_string_free(char* text) { delete[] text; }

pptfarm_status pptfarm_matrix_from_json(const char* text, pptfarm_matrix** out) {
  if (null_argument(!(text && out), "matrix_from_json: null argument")) return PPTFARM_ERR_NULL;
  return guarded([&] { *out = new pptfarm_matrix{pptfarm::matrix_from_json(text)}; });
}

pptfarm_status pptfarm_matrix_to_json(const pptfarm_matrix* m, char** out) {
  if (null_argument(!(m && out), "matrix_to_json: null argument")) return PPTFARM_ERR_NULL;
  return guarded([&] { *out = copy_string(pptfarm::matrix_to_json(m->value)); });
}

pptfarm_status pptfarm_matrix_order(const pptfarm_matrix* m, long long* out) {
  if (null_argument(!(m && out), "matrix_order: null argument")) return PPTFARM_ERR_NULL;
  *out = m->value.order();
  return PPTFARM_OK;
}

pptfarm_status pptfarm_matrix_entry(const pptfarm_matrix* m, long long row, long long col,
                                    double* out) {
  if (null_argument(!(m && out), "matrix_entry: null argument")) return PPTFARM_ERR_NULL;
  return guarded([&] { *out = m->value.entry(row, col); });
}

pptfarm_status pptfarm_matrix_trace(const pptfarm_matrix* m, double* out) {
  if (null_argument(!(m && out), "matrix_trace: null argument")) return PPTFARM_ERR_NULL;
  *out = m->value.trace();
  return PPTFARM_OK;
}

pptfarm_status pptfarm_matrix_min_eigenvalue(const pptfarm_matrix* m, double* out) {
  if (null_argument(!(m && out), "matrix_min_eigenvalue: null argument")) return PPTFARM_ERR_NULL;
  return guarded([&] { *out = pptfarm::min_eigenvalue(m->value); });
}

pptfarm_status pptfarm_matrix_trace_norm(const pptfarm_matrix* m, double* out) {
  if (null_argument(!(m && out), "matrix_trace_norm: null argument")) return PPTFARM_ERR_NULL;
  return guarded([&] { *out = pptfarm::trace_norm(m->value); });
}

pptfarm_status pptfarm_matrix_trace_distance(const pptfarm_matrix* lhs,
                                             const pptfarm_matrix* rhs, double* out) {
  if (null_argument(!(lhs && rhs && out), "matrix_trace_distance: null argument")) return PPTFARM_ERR_NULL;
  return guarded([&] { *out = pptfarm::trace_distance(lhs->value, rhs->value); });
}

pptfarm_status pptfarm_matrix_partial_transpose(const pptfarm_matrix* m, const int* factors,
                                                size_t n_factors, pptfarm_matrix** out) {
  if (null_argument(!(m && out && (factors || n_factors == 0)),
                    "matrix_partial_transpose: null argument"))
    return PPTFARM_ERR_NULL;
  return guarded([&] {
    std::vector<int> fs(factors, factors + n_factors);
    *out = new pptfarm_matrix{pptfarm::partial_transpose(m->value, fs)};
  });
}

void pptfarm_matrix_free(pptfarm_matrix* m) { delete m; }

pptfarm_status pptfarm_family_create(int parties, int dim_a, int dim_b, double q,
                                     pptfarm_family** out) {
  if (null_argument(out == nullptr, "family_create: null output")) return PPTFARM_ERR_NULL;
  return guarded([&] {
    pptfarm::FamilyParams params(parties, dim_a, dim_b, q);
    pptfarm::BlockPair blocks = pptfarm::BlockPair::canonical(params);
    *out = new pptfarm_family{params, std::move(blocks)};
  });
}

pptfarm_status pptfarm_family_set_blocks(pptfarm_family* family, const pptfarm_matrix* a,
                                         const pptfarm_matrix* b) {
  if (null_argument(!(family && a && b), "family_set_blocks: null argument")) return PPTFARM_ERR_NULL;
  return guarded([&] {
    family->blocks = pptfarm::BlockPair::checked(family->params, a->value, b->value);
  });
}

pptfarm_status pptfarm_family_label_count(const pptfarm_family* family, long long* out) {
  if (null_argument(!(family && out), "family_label_count: null argument")) return PPTFARM_ERR_NULL;
  *out = family->params.label_count();
  return PPTFARM_OK;
}

pptfarm_status pptfarm_family_block_count(const pptfarm_family* family, long long* out) {
  if (null_argument(!(family && out), "family_block_count: null argument")) return PPTFARM_ERR_NULL;
  *out = pptfarm::occupied_block_count(family->params);
  return PPTFARM_OK;
}

pptfarm_status pptfarm_family_order(const pptfarm_family* family, long long* out) {
  if (null_argument(!(family && out), "family_order: null argument")) return PPTFARM_ERR_NULL;
  return guarded([&] { *out = family->params.total_order(); });
}

pptfarm_status pptfarm_family_build(const pptfarm_family* family, pptfarm_matrix** out) {
  if (null_argument(!(family && out), "family_build: null argument")) return PPTFARM_ERR_NULL;
  return guarded([&] {
    *out = new pptfarm_matrix{pptfarm::build_mixture(family->params, family->blocks)};
  });
}

pptfarm_status pptfarm_family_build_core(const pptfarm_family* family, pptfarm_matrix** out) {
  if (null_argument(!(family && out), "family_build_core: null argument")) return PPTFARM_ERR_NULL;
  return guarded([&] {
    *out = new pptfarm_matrix{pptfarm::build_rho0(family->params, family->blocks.a)};
  });
}

pptfarm_status pptfarm_family_build_component(const pptfarm_family* family, int label,
                                              pptfarm_matrix** out) {
  if (null_argument(!(family && out), "family_build_component: null argument")) return PPTFARM_ERR_NULL;
  return guarded([&] {
    pptfarm::LabelMap labels(family->params.parties, family->params.dim_a);
    *out = new pptfarm_matrix{
        pptfarm::build_rho_l(family->params, labels.label(label), family->blocks.b)};
  });
}

void pptfarm_family_free(pptfarm_family* family) { delete family; }

pptfarm_status pptfarm_q_star(int parties, int dim_a, int dim_b, double* out) {
  if (null_argument(out == nullptr, "q_star: null output")) return PPTFARM_ERR_NULL;
  return guarded([&] { *out = pptfarm::q_star(parties, dim_a, dim_b); });
}

pptfarm_status pptfarm_rho0_sep_bound(int parties, int dim_a, double* out) {
  if (null_argument(out == nullptr, "rho0_sep_bound: null output")) return PPTFARM_ERR_NULL;
  return guarded([&] { *out = pptfarm::rho0_sep_bound(parties, dim_a); });
}

pptfarm_status pptfarm_sep_lower_bound(int parties, int dim_a, int dim_b, double* out) {
  if (null_argument(out == nullptr, "sep_lower_bound: null output")) return PPTFARM_ERR_NULL;
  return guarded([&] { *out = pptfarm::sep_distance_lower_bound(parties, dim_a, dim_b); });
}

pptfarm_status pptfarm_verify_json(const pptfarm_family* family, double tol, int* all_pass,
                                   char** out) {
  if (null_argument(!(family && all_pass && out), "verify_json: null argument")) return PPTFARM_ERR_NULL;
  return guarded([&] {
    pptfarm::VerifyReport report = pptfarm::run_verify(family->params, family->blocks, tol);
    *all_pass = report.pass ? 1 : 0;
    *out = copy_string(pptfarm::verify_to_json(report));
  });
}

pptfarm_status pptfarm_audit_json(const pptfarm_family* family, const double* q_grid,
                                  size_t n_q, double tol, char** out) {
  if (null_argument(!(family && out && (q_grid || n_q == 0)), "audit_json: null argument")) return PPTFARM_ERR_NULL;
  return guarded([&] {
    pptfarm::AuditOptions options;
    options.q_grid.assign(q_grid, q_grid + n_q);
    options.tol = tol;
    pptfarm::AuditReport report = pptfarm::ppt_audit(family->params, family->blocks, options);
    *out = copy_string(pptfarm::audit_to_json(report));
  });
}

pptfarm_status pptfarm_bounds_json(int parties, int dim_a, int dim_b, double epsilon,
                                   char** out) {
  if (null_argument(out == nullptr, "bounds_json: null output")) return PPTFARM_ERR_NULL;
  return guarded([&] {
    std::optional<int> da, db;
    std::optional<double> eps;
    if (dim_a > 0) da = dim_a;
    if (dim_b > 0) db = dim_b;
    if (epsilon > 0.0) eps = epsilon;
    pptfarm::BoundReport report = pptfarm::bounds_report(parties, da, db, eps);
    *out = copy_string(pptfarm::bounds_to_json(report));
  });
}

pptfarm_status pptfarm_scan_csv(const int* parties, size_t n_parties, const double* epsilons,
                                size_t n_epsilons, char** out) {
  if (null_argument(!(parties && epsilons && out), "scan_csv: null argument")) return PPTFARM_ERR_NULL;
  return guarded([&] {
    *out = copy_string(pptfarm::scan_csv({parties, n_parties}, {epsilons, n_epsilons}));
  });
}

pptfarm_status pptfarm_layout_text(int parties, int dim_a, char** out) {
  if (null_argument(out == nullptr, "layout_text: null output")) return PPTFARM_ERR_NULL;
  return guarded([&] {
    *out = copy_string(pptfarm::layout_text(pptfarm::build_layout(parties, dim_a)));
  });
}

pptfarm_status pptfarm_layout_json(int parties, int dim_a, char** out) {
  if (null_argument(out == nullptr, "layout_json: null output")) return PPTFARM_ERR_NULL;
  return guarded([&] {
    *out = copy_string(pptfarm::layout_json(pptfarm::build_layout(parties, dim_a)));
  });
}

}  // extern "C"
