#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pptfarm/sym_matrix.hpp"

namespace pptfarm {

/*
 * The state family lives on (C^dA)^{x n} (x) (C^dB)^{x n} and mixes one
 * "entangled core" component with N*D "mixed support" components:
 *
 *     rho(q) = (1-q) * rho_core  +  q/(N*D) * sum_l rho_l,
 *
 * where N = 2^(n-1) - 1 counts the admissible transposition patterns and
 * D = dA*(dA-1)/2 counts the value pairs i < j. Viewing the matrix as a
 * dA^n x dA^n grid of dB^n-order blocks:
 *
 *   - rho_core carries payload `a` on every block position
 *     ((i,...,i), (j,...,j)) of the diagonal A-family,
 *   - component l carries payload `b` on the four positions (v,v), (v,w),
 *     (w,v), (w,w) of its support pair, where v is an A-side multi-index
 *     holding exactly the two values {i, j} with v_1 = i, and w swaps them.
 *
 * Every support vector v determines its label: l is the 1-based rank of v in
 * ascending lexicographic order over all qualifying vectors, which makes the
 * map l <-> (pattern, i, j) a bijection.
 */

// Binary transposition pattern over parties 2..n; party 1 is never flipped
// and the all-zero pattern is excluded.
struct TranspositionPattern {
  int parties = 0;
  std::vector<std::uint8_t> flips;  // length parties-1, entry k for party k+1

  bool operator==(const TranspositionPattern&) const = default;
};

// N = 2^(n-1) - 1.
long long count_patterns(int parties);

// All admissible patterns, ordered as the label map induces for a fixed value
// pair: binary counting with the party-2 flip most significant.
std::vector<TranspositionPattern> enumerate_patterns(int parties);

struct OperatorLabel {
  int l = 0;  // 1..N*D
  int i = 0, j = 0;  // the two values carried by v, i < j
  TranspositionPattern pattern;
  std::vector<int> v, w;        // A-side multi-indices, 1-based values
  std::int64_t v_flat = 0, w_flat = 0;  // 1-based A-block coordinates
};

// The bijection l <-> (pattern, i, j) with its support vectors, realized by
// lexicographic enumeration of the qualifying v vectors.
class LabelMap {
 public:
  LabelMap(int parties, int dim_a);

  int parties() const { return parties_; }
  int dim_a() const { return dim_a_; }
  int count() const { return static_cast<int>(labels_.size()); }  // N*D

  const OperatorLabel& label(int l) const;  // 1-based
  const std::vector<OperatorLabel>& all() const { return labels_; }

 private:
  int parties_;
  int dim_a_;
  std::vector<OperatorLabel> labels_;
};

struct FamilyParams {
  int parties = 0;
  int dim_a = 0;
  int dim_b = 0;
  double q = 0.0;

  FamilyParams(int parties, int dim_a, int dim_b, double q);

  double p() const { return 1.0 - q; }
  long long pattern_count() const;           // N
  long long pair_count() const;              // D
  long long label_count() const;             // N*D
  double mixing_x() const;                   // q / (N*D)
  std::int64_t block_order() const;          // dB^n
  std::int64_t a_grid() const;               // dA^n
  std::int64_t total_order() const;          // (dA*dB)^n, may exceed capacity
  FactorSpace space() const;                 // A_1..A_n, B_1..B_n
  FactorSpace a_space() const;               // [dA x n], untagged
  FactorSpace b_space() const;               // [dB x n], roles B_1..B_n
  void require_capacity() const;             // total_order() <= kMaxDenseOrder
};

/*
 * The two payloads of the family. Both must be symmetric, positive
 * semidefinite, and invariant (entry for entry) under transposition of any
 * subset of their tensor factors; the invariance is what lets a cut act on
 * the A-side support alone.
 */
struct BlockPair {
  SymMatrix a;  // diagonal-family payload, order dB^n
  SymMatrix b;  // mixed-support payload, order dB^n

  // a = 1/(dA*dB^n) * identity, b = 1/(2*dB^n) * all-ones.
  static BlockPair canonical(const FamilyParams& params);
  // Validates order, PSD (within tol) and exact transposition invariance.
  static BlockPair checked(const FamilyParams& params, SymMatrix a, SymMatrix b,
                           double tol = 1e-9);

  bool is_canonical(const FamilyParams& params) const;
};

// Core component: payload `a` at every diagonal-family block position.
// With the canonical payload the trace is dA * tr(a) = 1.
SymMatrix build_rho0(const FamilyParams& params, const SymMatrix& a);

// Mixed-support component for one label: payload `b` at (v,v), (v,w), (w,v),
// (w,w). With the canonical payload the trace is 2 * tr(b) = 1.
SymMatrix build_rho_l(const FamilyParams& params, const OperatorLabel& label,
                      const SymMatrix& b);

// The full mixture (1-q) * rho_core + q/(N*D) * sum_l rho_l.
SymMatrix build_mixture(const FamilyParams& params, const BlockPair& blocks);

// Number of occupied A-block positions in the mixture: dA^2 + 4*N*D.
long long occupied_block_count(const FamilyParams& params);

struct SupportReport {
  double max_residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

// Measures max |entry| over all pairwise products of the mixture components;
// the family construction makes every product vanish identically.
SupportReport support_orthogonality_check(const FamilyParams& params, const BlockPair& blocks);

// One component described by its block placements. Exposed so orthogonality
// can also be evaluated on hand-built (deliberately overlapping) components.
struct BlockPlacement {
  std::int64_t row_block = 0;
  std::int64_t col_block = 0;
  const SymMatrix* payload = nullptr;
  double scale = 1.0;
};
using BlockComponent = std::vector<BlockPlacement>;

double pairwise_product_residual(std::span<const BlockComponent> components,
                                 std::int64_t block_order);

}  // namespace pptfarm
