#include "pptfarm/spectral.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace pptfarm {

namespace {

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void require_finite(const SymMatrix& m, const char* op) {
  if (!m.all_finite()) throw NumericError(std::string(op) + ": matrix has non-finite entries");
}

}  // namespace

std::vector<double> eigenvalues(const SymMatrix& m) {
  require_finite(m, "eigenvalues");
  Eigen::Map<const RowMajorMatrix> map(m.entries().data(), m.order(), m.order());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(map, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericError("eigenvalues: decomposition did not converge");
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double min_eigenvalue(const SymMatrix& m) {
  return eigenvalues(m).front();
}

double trace_norm(const SymMatrix& m) {
  double sum = 0.0;
  for (double ev : eigenvalues(m)) sum += std::fabs(ev);
  return sum;
}

double trace_distance(const SymMatrix& rho, const SymMatrix& sigma) {
  if (!(rho.space() == sigma.space()))
    throw StructureError("trace_distance: factor spaces do not match");
  return 0.5 * trace_norm(SymMatrix::combine(1.0, rho, -1.0, sigma));
}

DensityReport validate_density(const SymMatrix& m, double tol) {
  DensityReport report;
  report.order = m.order();
  report.tol = tol;
  report.trace_dev = std::fabs(m.trace() - 1.0);
  report.min_eig = min_eigenvalue(m);
  report.max_abs = m.max_abs();
  report.trace_ok = report.trace_dev <= tol;
  report.psd_ok = report.min_eig >= -tol * static_cast<double>(report.order) * report.max_abs;
  report.pass = report.trace_ok && report.psd_ok;
  return report;
}

}  // namespace pptfarm
