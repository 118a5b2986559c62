#pragma once

#include <cstdint>
#include <vector>

#include "pptfarm/sym_matrix.hpp"

namespace pptfarm {

// Default relative tolerance for positivity and trace checks.
inline constexpr double kDefaultTol = 1e-9;

// Ascending eigenvalues from a dense self-adjoint decomposition. Accuracy is
// within 1e-10 of the matrix max-absolute-entry for orders up to 1024.
std::vector<double> eigenvalues(const SymMatrix& m);

double min_eigenvalue(const SymMatrix& m);

// Sum of absolute eigenvalues.
double trace_norm(const SymMatrix& m);

// Half the trace norm of the difference; symmetric in its arguments.
double trace_distance(const SymMatrix& rho, const SymMatrix& sigma);

struct DensityReport {
  std::int64_t order = 0;
  double tol = kDefaultTol;
  double trace_dev = 0.0;  // |tr - 1|
  double min_eig = 0.0;
  double max_abs = 0.0;
  bool trace_ok = false;
  bool psd_ok = false;  // min_eig >= -tol * order * max_abs
  bool pass = false;
};

DensityReport validate_density(const SymMatrix& m, double tol = kDefaultTol);

}  // namespace pptfarm
