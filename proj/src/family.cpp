#include "pptfarm/family.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "pptfarm/spectral.hpp"

namespace pptfarm {

long long count_patterns(int parties) {
  if (parties < 2) throw DomainError("count_patterns: at least two parties required");
  if (parties > 62) throw DomainError("count_patterns: party count too large");
  return (1LL << (parties - 1)) - 1;
}

std::vector<TranspositionPattern> enumerate_patterns(int parties) {
  long long n = count_patterns(parties);
  std::vector<TranspositionPattern> patterns;
  patterns.reserve(static_cast<std::size_t>(n));
  for (long long value = 1; value <= n; ++value) {
    TranspositionPattern p;
    p.parties = parties;
    p.flips.resize(static_cast<std::size_t>(parties - 1));
    for (int k = 0; k < parties - 1; ++k)
      p.flips[static_cast<std::size_t>(k)] =
          static_cast<std::uint8_t>((value >> (parties - 2 - k)) & 1);
    patterns.push_back(std::move(p));
  }
  return patterns;
}

LabelMap::LabelMap(int parties, int dim_a) : parties_(parties), dim_a_(dim_a) {
  if (parties < 2) throw DomainError("LabelMap: at least two parties required");
  if (dim_a < 2) throw DomainError("LabelMap: dim_a must be >= 2 (no value pairs otherwise)");

  FactorSpace a_space = FactorSpace::uniform(parties, dim_a);
  const std::int64_t grid = a_space.total_dim();

  // Lexicographic scan of all A-side vectors; a vector qualifies when it
  // holds exactly two distinct values and starts with the smaller one.
  int next_l = 1;
  for (std::int64_t flat = 1; flat <= grid; ++flat) {
    std::vector<int> v = a_space.multi_index(flat);
    int low = v[0], high = v[0];
    for (int c : v) {
      low = std::min(low, c);
      high = std::max(high, c);
    }
    if (low == high) continue;
    bool two_valued = std::all_of(v.begin(), v.end(),
                                  [&](int c) { return c == low || c == high; });
    if (!two_valued || v[0] != low) continue;

    OperatorLabel label;
    label.l = next_l++;
    label.i = low;
    label.j = high;
    label.v = v;
    label.w.resize(v.size());
    label.pattern.parties = parties;
    label.pattern.flips.resize(static_cast<std::size_t>(parties - 1));
    for (std::size_t k = 0; k < v.size(); ++k) {
      label.w[k] = (v[k] == low) ? high : low;
      if (k >= 1)
        label.pattern.flips[k - 1] = static_cast<std::uint8_t>(v[k] == high);
    }
    label.v_flat = flat;
    label.w_flat = a_space.flat_index(label.w);
    labels_.push_back(std::move(label));
  }
}

const OperatorLabel& LabelMap::label(int l) const {
  if (l < 1 || l > count())
    throw DomainError("LabelMap: label " + std::to_string(l) + " out of range 1.." +
                      std::to_string(count()));
  return labels_[static_cast<std::size_t>(l - 1)];
}

FamilyParams::FamilyParams(int parties_, int dim_a_, int dim_b_, double q_)
    : parties(parties_), dim_a(dim_a_), dim_b(dim_b_), q(q_) {
  if (parties < 2) throw DomainError("FamilyParams: at least two parties required");
  if (dim_a < 2) throw DomainError("FamilyParams: dim_a must be >= 2");
  if (dim_b < 2) throw DomainError("FamilyParams: dim_b must be >= 2");
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("FamilyParams: q must lie in [0, 1]");
}

long long FamilyParams::pattern_count() const { return count_patterns(parties); }

long long FamilyParams::pair_count() const {
  return static_cast<long long>(dim_a) * (dim_a - 1) / 2;
}

long long FamilyParams::label_count() const { return pattern_count() * pair_count(); }

double FamilyParams::mixing_x() const {
  return q / static_cast<double>(label_count());
}

namespace {
std::int64_t int_pow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int k = 0; k < exp; ++k) {
    if (r > (std::int64_t{1} << 40) / base)
      throw CapacityError("dimension overflow computing a tensor power");
    r *= base;
  }
  return r;
}
}  // namespace

std::int64_t FamilyParams::block_order() const { return int_pow(dim_b, parties); }
std::int64_t FamilyParams::a_grid() const { return int_pow(dim_a, parties); }
std::int64_t FamilyParams::total_order() const {
  return int_pow(static_cast<std::int64_t>(dim_a) * dim_b, parties);
}

FactorSpace FamilyParams::space() const { return FactorSpace::family(parties, dim_a, dim_b); }
FactorSpace FamilyParams::a_space() const { return FactorSpace::uniform(parties, dim_a); }

FactorSpace FamilyParams::b_space() const {
  std::vector<int> dims(static_cast<std::size_t>(parties), dim_b);
  std::vector<FactorRole> roles;
  for (int k = 1; k <= parties; ++k) roles.push_back({Side::B, k});
  return {std::move(dims), std::move(roles)};
}

void FamilyParams::require_capacity() const {
  std::int64_t order = total_order();
  if (order > kMaxDenseOrder)
    throw CapacityError("family order " + std::to_string(order) + " exceeds the dense limit " +
                        std::to_string(kMaxDenseOrder));
}

BlockPair BlockPair::canonical(const FamilyParams& params) {
  const double m = static_cast<double>(params.block_order());
  SymMatrix a = SymMatrix::identity(params.b_space(), 1.0 / (params.dim_a * m));
  SymMatrix b = SymMatrix::constant(params.b_space(), 1.0 / (2.0 * m));
  return {std::move(a), std::move(b)};
}

namespace {

void require_pt_invariant(const SymMatrix& m, const char* name) {
  // Invariance under single-factor transposes implies invariance under every
  // subset, since subset transposes compose from them.
  for (int f = 1; f <= m.space().factor_count(); ++f) {
    int factors[1] = {f};
    if (!(partial_transpose(m, factors) == m))
      throw StructureError(std::string("BlockPair: payload ") + name +
                           " is not invariant under factor-" + std::to_string(f) +
                           " transposition");
  }
}

void require_psd(const SymMatrix& m, double tol, const char* name) {
  double bound = -tol * static_cast<double>(m.order()) * m.max_abs();
  if (min_eigenvalue(m) < bound)
    throw StructureError(std::string("BlockPair: payload ") + name +
                         " is not positive semidefinite");
}

}  // namespace

BlockPair BlockPair::checked(const FamilyParams& params, SymMatrix a, SymMatrix b, double tol) {
  if (a.order() != params.block_order() || b.order() != params.block_order())
    throw StructureError("BlockPair: payload order must equal dB^n");
  if (a.space().dims() != std::vector<int>(static_cast<std::size_t>(params.parties), params.dim_b) ||
      b.space().dims() != a.space().dims())
    throw StructureError("BlockPair: payloads must live on n factors of dimension dB");
  require_psd(a, tol, "a");
  require_psd(b, tol, "b");
  require_pt_invariant(a, "a");
  require_pt_invariant(b, "b");
  return {std::move(a), std::move(b)};
}

bool BlockPair::is_canonical(const FamilyParams& params) const {
  BlockPair c = canonical(params);
  return a == c.a && b == c.b;
}

SymMatrix build_rho0(const FamilyParams& params, const SymMatrix& a) {
  params.require_capacity();
  if (a.order() != params.block_order())
    throw StructureError("build_rho0: payload order must equal dB^n");
  FactorSpace a_space = params.a_space();
  BlockAssembler assembler(params.space(), params.block_order());
  std::vector<std::int64_t> diag_flat(static_cast<std::size_t>(params.dim_a));
  for (int i = 1; i <= params.dim_a; ++i) {
    std::vector<int> idx(static_cast<std::size_t>(params.parties), i);
    diag_flat[static_cast<std::size_t>(i - 1)] = a_space.flat_index(idx);
  }
  for (int i = 1; i <= params.dim_a; ++i)
    for (int j = 1; j <= params.dim_a; ++j)
      assembler.add(diag_flat[static_cast<std::size_t>(i - 1)],
                    diag_flat[static_cast<std::size_t>(j - 1)], a);
  return assembler.take();
}

SymMatrix build_rho_l(const FamilyParams& params, const OperatorLabel& label,
                      const SymMatrix& b) {
  params.require_capacity();
  if (b.order() != params.block_order())
    throw StructureError("build_rho_l: payload order must equal dB^n");
  if (static_cast<int>(label.v.size()) != params.parties || label.j > params.dim_a)
    throw StructureError("build_rho_l: label does not match the family parameters");
  BlockAssembler assembler(params.space(), params.block_order());
  assembler.add(label.v_flat, label.v_flat, b);
  assembler.add(label.v_flat, label.w_flat, b);
  assembler.add(label.w_flat, label.v_flat, b);
  assembler.add(label.w_flat, label.w_flat, b);
  return assembler.take();
}

SymMatrix build_mixture(const FamilyParams& params, const BlockPair& blocks) {
  params.require_capacity();
  LabelMap labels(params.parties, params.dim_a);
  FactorSpace a_space = params.a_space();
  BlockAssembler assembler(params.space(), params.block_order());

  const double p = params.p();
  for (int i = 1; i <= params.dim_a; ++i) {
    std::vector<int> ri(static_cast<std::size_t>(params.parties), i);
    for (int j = 1; j <= params.dim_a; ++j) {
      std::vector<int> cj(static_cast<std::size_t>(params.parties), j);
      assembler.add(a_space.flat_index(ri), a_space.flat_index(cj), blocks.a, p);
    }
  }
  const double x = params.mixing_x();
  for (const OperatorLabel& label : labels.all()) {
    assembler.add(label.v_flat, label.v_flat, blocks.b, x);
    assembler.add(label.v_flat, label.w_flat, blocks.b, x);
    assembler.add(label.w_flat, label.v_flat, blocks.b, x);
    assembler.add(label.w_flat, label.w_flat, blocks.b, x);
  }
  return assembler.take();
}

long long occupied_block_count(const FamilyParams& params) {
  return static_cast<long long>(params.dim_a) * params.dim_a + 4 * params.label_count();
}

double pairwise_product_residual(std::span<const BlockComponent> components,
                                 std::int64_t block_order) {
  const std::int64_t m = block_order;
  double residual = 0.0;
  // (P*Q) restricted to block rows/cols: only placements sharing an inner
  // block index contribute; everything else is zero without arithmetic.
  for (std::size_t p = 0; p < components.size(); ++p) {
    for (std::size_t s = p + 1; s < components.size(); ++s) {
      std::map<std::pair<std::int64_t, std::int64_t>, std::vector<double>> out;
      for (const BlockPlacement& lhs : components[p]) {
        for (const BlockPlacement& rhs : components[s]) {
          if (lhs.col_block != rhs.row_block) continue;
          auto key = std::make_pair(lhs.row_block, rhs.col_block);
          auto& acc = out[key];
          if (acc.empty()) acc.assign(static_cast<std::size_t>(m * m), 0.0);
          std::span<const double> le = lhs.payload->entries();
          std::span<const double> re = rhs.payload->entries();
          const double scale = lhs.scale * rhs.scale;
          for (std::int64_t r = 0; r < m; ++r)
            for (std::int64_t k = 0; k < m; ++k) {
              double lv = scale * le[static_cast<std::size_t>(r * m + k)];
              if (lv == 0.0) continue;
              for (std::int64_t c = 0; c < m; ++c)
                acc[static_cast<std::size_t>(r * m + c)] +=
                    lv * re[static_cast<std::size_t>(k * m + c)];
            }
        }
      }
      for (const auto& [key, block] : out)
        for (double v : block) residual = std::max(residual, std::fabs(v));
    }
  }
  return residual;
}

SupportReport support_orthogonality_check(const FamilyParams& params, const BlockPair& blocks) {
  params.require_capacity();
  LabelMap labels(params.parties, params.dim_a);
  FactorSpace a_space = params.a_space();

  std::vector<BlockComponent> components;
  BlockComponent core;
  for (int i = 1; i <= params.dim_a; ++i) {
    std::vector<int> ri(static_cast<std::size_t>(params.parties), i);
    for (int j = 1; j <= params.dim_a; ++j) {
      std::vector<int> cj(static_cast<std::size_t>(params.parties), j);
      core.push_back({a_space.flat_index(ri), a_space.flat_index(cj), &blocks.a, 1.0});
    }
  }
  components.push_back(std::move(core));
  for (const OperatorLabel& label : labels.all()) {
    BlockComponent c;
    c.push_back({label.v_flat, label.v_flat, &blocks.b, 1.0});
    c.push_back({label.v_flat, label.w_flat, &blocks.b, 1.0});
    c.push_back({label.w_flat, label.v_flat, &blocks.b, 1.0});
    c.push_back({label.w_flat, label.w_flat, &blocks.b, 1.0});
    components.push_back(std::move(c));
  }

  SupportReport report;
  report.max_residual = pairwise_product_residual(components, params.block_order());
  double scale = std::max(blocks.a.max_abs(), blocks.b.max_abs());
  report.threshold = 1e-12 * static_cast<double>(params.total_order()) * scale;
  report.pass = report.max_residual <= report.threshold;
  return report;
}

}  // namespace pptfarm
