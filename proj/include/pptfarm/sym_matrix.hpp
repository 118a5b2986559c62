#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pptfarm/factor_space.hpp"

namespace pptfarm {

// Largest dense order any constructor will materialize.
inline constexpr std::int64_t kMaxDenseOrder = 1024;

/*
 * Dense real symmetric matrix tagged with the tensor-factor space it acts on.
 * Symmetry is validated on construction and every operation preserves it, so
 * a SymMatrix is symmetric by invariant, not by convention.
 *
 * All public indices (rows, columns, factor positions) are 1-based.
 */
class SymMatrix {
 public:
  static SymMatrix zero(FactorSpace space);
  // Validates exact (bitwise) symmetry of the row-major entries.
  static SymMatrix from_dense(FactorSpace space, std::vector<double> row_major);
  static SymMatrix diagonal(FactorSpace space, std::span<const double> diag);
  static SymMatrix identity(FactorSpace space, double scale = 1.0);
  static SymMatrix constant(FactorSpace space, double value);  // every entry = value

  std::int64_t order() const { return order_; }
  const FactorSpace& space() const { return space_; }
  std::span<const double> entries() const { return entries_; }

  double entry(std::int64_t row, std::int64_t col) const;
  void set_entry(std::int64_t row, std::int64_t col, double value);  // writes both mirrors

  double trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;

  // x*lhs + y*rhs, entrywise; spaces must match.
  static SymMatrix combine(double x, const SymMatrix& lhs, double y, const SymMatrix& rhs);
  SymMatrix scaled(double s) const;

  bool operator==(const SymMatrix& other) const;

 private:
  SymMatrix(FactorSpace space, std::vector<double> entries);

  FactorSpace space_;
  std::int64_t order_;
  std::vector<double> entries_;
};

/*
 * Transposes the given tensor factors: the output entry at multi-indices
 * (r, c) is the input entry at (r', c') where r' and c' swap components on
 * every listed factor. A permutation of entries, so trace, Frobenius norm
 * and symmetry are preserved exactly; applying it twice restores the input
 * bit for bit.
 */
SymMatrix partial_transpose(const SymMatrix& m, std::span<const int> factors);

/*
 * Accumulates square payload blocks onto the block grid of a larger matrix:
 * placing payload P at block (R, C) adds scale*P(beta, gamma) to the entry
 * at (offset(R)+beta, offset(C)+gamma). Block coordinates are 1-based and
 * the payload order must divide the target order. The finished matrix is
 * validated symmetric, so off-diagonal placements need their mirror.
 */
class BlockAssembler {
 public:
  BlockAssembler(FactorSpace space, std::int64_t block_order);

  std::int64_t block_count() const { return blocks_; }

  void add(std::int64_t row_block, std::int64_t col_block, const SymMatrix& payload,
           double scale = 1.0);
  // Convenience: add at (R, C) and, when off-diagonal, also at (C, R).
  void add_symmetric_pair(std::int64_t row_block, std::int64_t col_block,
                          const SymMatrix& payload, double scale = 1.0);

  SymMatrix take();

 private:
  FactorSpace space_;
  std::int64_t order_;
  std::int64_t block_order_;
  std::int64_t blocks_;
  std::vector<double> entries_;
  bool taken_ = false;
};

}  // namespace pptfarm
