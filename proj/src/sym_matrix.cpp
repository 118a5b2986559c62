#include "pptfarm/sym_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pptfarm {

namespace {

std::int64_t checked_order(const FactorSpace& space) {
  std::int64_t n = space.total_dim();
  if (n > kMaxDenseOrder)
    throw CapacityError("dense matrix order " + std::to_string(n) + " exceeds the limit " +
                        std::to_string(kMaxDenseOrder));
  return n;
}

}  // namespace

SymMatrix::SymMatrix(FactorSpace space, std::vector<double> entries)
    : space_(std::move(space)), order_(space_.total_dim()), entries_(std::move(entries)) {}

SymMatrix SymMatrix::zero(FactorSpace space) {
  std::int64_t n = checked_order(space);
  return {std::move(space), std::vector<double>(static_cast<std::size_t>(n * n), 0.0)};
}

SymMatrix SymMatrix::from_dense(FactorSpace space, std::vector<double> row_major) {
  std::int64_t n = checked_order(space);
  if (static_cast<std::int64_t>(row_major.size()) != n * n)
    throw StructureError("from_dense: expected " + std::to_string(n * n) + " entries, got " +
                         std::to_string(row_major.size()));
  for (std::int64_t r = 0; r < n; ++r)
    for (std::int64_t c = r + 1; c < n; ++c)
      if (row_major[static_cast<std::size_t>(r * n + c)] !=
          row_major[static_cast<std::size_t>(c * n + r)])
        throw StructureError("from_dense: entries are not symmetric at (" +
                             std::to_string(r + 1) + "," + std::to_string(c + 1) + ")");
  return {std::move(space), std::move(row_major)};
}

SymMatrix SymMatrix::diagonal(FactorSpace space, std::span<const double> diag) {
  std::int64_t n = checked_order(space);
  if (static_cast<std::int64_t>(diag.size()) != n)
    throw StructureError("diagonal: expected " + std::to_string(n) + " values");
  SymMatrix m = zero(std::move(space));
  for (std::int64_t k = 0; k < n; ++k)
    m.entries_[static_cast<std::size_t>(k * n + k)] = diag[static_cast<std::size_t>(k)];
  return m;
}

SymMatrix SymMatrix::identity(FactorSpace space, double scale) {
  std::int64_t n = checked_order(space);
  SymMatrix m = zero(std::move(space));
  for (std::int64_t k = 0; k < n; ++k)
    m.entries_[static_cast<std::size_t>(k * n + k)] = scale;
  return m;
}

SymMatrix SymMatrix::constant(FactorSpace space, double value) {
  std::int64_t n = checked_order(space);
  return {std::move(space),
          std::vector<double>(static_cast<std::size_t>(n * n), value)};
}

double SymMatrix::entry(std::int64_t row, std::int64_t col) const {
  if (row < 1 || row > order_ || col < 1 || col > order_)
    throw InvalidIndexError("entry: index out of range");
  return entries_[static_cast<std::size_t>((row - 1) * order_ + (col - 1))];
}

void SymMatrix::set_entry(std::int64_t row, std::int64_t col, double value) {
  if (row < 1 || row > order_ || col < 1 || col > order_)
    throw InvalidIndexError("set_entry: index out of range");
  entries_[static_cast<std::size_t>((row - 1) * order_ + (col - 1))] = value;
  entries_[static_cast<std::size_t>((col - 1) * order_ + (row - 1))] = value;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (std::int64_t k = 0; k < order_; ++k)
    t += entries_[static_cast<std::size_t>(k * order_ + k)];
  return t;
}

double SymMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double x : entries_) s += x * x;
  return std::sqrt(s);
}

double SymMatrix::max_abs() const {
  double m = 0.0;
  for (double x : entries_) m = std::max(m, std::fabs(x));
  return m;
}

bool SymMatrix::all_finite() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](double x) { return std::isfinite(x); });
}

SymMatrix SymMatrix::combine(double x, const SymMatrix& lhs, double y, const SymMatrix& rhs) {
  if (!(lhs.space_ == rhs.space_))
    throw StructureError("combine: factor spaces do not match");
  std::vector<double> out(lhs.entries_.size());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = x * lhs.entries_[k] + y * rhs.entries_[k];
  return {lhs.space_, std::move(out)};
}

SymMatrix SymMatrix::scaled(double s) const {
  std::vector<double> out(entries_.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = s * entries_[k];
  return {space_, std::move(out)};
}

bool SymMatrix::operator==(const SymMatrix& other) const {
  return space_ == other.space_ && entries_ == other.entries_;
}

SymMatrix partial_transpose(const SymMatrix& m, std::span<const int> factors) {
  const FactorSpace& space = m.space();
  const auto& dims = space.dims();
  const int nf = space.factor_count();
  std::vector<bool> swap_factor(static_cast<std::size_t>(nf), false);
  for (int f : factors) {
    if (f < 1 || f > nf)
      throw StructureError("partial_transpose: factor position " + std::to_string(f) +
                           " out of range 1.." + std::to_string(nf));
    swap_factor[static_cast<std::size_t>(f - 1)] = true;
  }

  const std::int64_t n = m.order();
  // Split every flat index into the contribution of swapped factors and the
  // rest; the transpose then only exchanges the swapped contributions of the
  // row and column.
  std::vector<std::int64_t> swapped_part(static_cast<std::size_t>(n));
  std::vector<std::int64_t> kept_part(static_cast<std::size_t>(n));
  {
    std::vector<std::int64_t> strides(static_cast<std::size_t>(nf), 1);
    for (int k = nf - 2; k >= 0; --k)
      strides[static_cast<std::size_t>(k)] =
          strides[static_cast<std::size_t>(k + 1)] * dims[static_cast<std::size_t>(k + 1)];
    for (std::int64_t flat = 0; flat < n; ++flat) {
      std::int64_t rem = flat, sw = 0, kp = 0;
      for (int k = 0; k < nf; ++k) {
        std::int64_t comp = rem / strides[static_cast<std::size_t>(k)];
        rem %= strides[static_cast<std::size_t>(k)];
        (swap_factor[static_cast<std::size_t>(k)] ? sw : kp) +=
            comp * strides[static_cast<std::size_t>(k)];
      }
      swapped_part[static_cast<std::size_t>(flat)] = sw;
      kept_part[static_cast<std::size_t>(flat)] = kp;
    }
  }

  std::span<const double> in = m.entries();
  std::vector<double> out(in.size());
  for (std::int64_t r = 0; r < n; ++r) {
    for (std::int64_t c = 0; c < n; ++c) {
      std::int64_t rr = kept_part[static_cast<std::size_t>(r)] +
                        swapped_part[static_cast<std::size_t>(c)];
      std::int64_t cc = kept_part[static_cast<std::size_t>(c)] +
                        swapped_part[static_cast<std::size_t>(r)];
      out[static_cast<std::size_t>(rr * n + cc)] = in[static_cast<std::size_t>(r * n + c)];
    }
  }
  return SymMatrix::from_dense(space, std::move(out));
}

BlockAssembler::BlockAssembler(FactorSpace space, std::int64_t block_order)
    : space_(std::move(space)), order_(space_.total_dim()), block_order_(block_order) {
  if (order_ > kMaxDenseOrder)
    throw CapacityError("dense matrix order " + std::to_string(order_) +
                        " exceeds the limit " + std::to_string(kMaxDenseOrder));
  if (block_order_ < 1 || order_ % block_order_ != 0)
    throw StructureError("BlockAssembler: block order must divide the matrix order");
  blocks_ = order_ / block_order_;
  entries_.assign(static_cast<std::size_t>(order_ * order_), 0.0);
}

void BlockAssembler::add(std::int64_t row_block, std::int64_t col_block,
                         const SymMatrix& payload, double scale) {
  if (taken_) throw StructureError("BlockAssembler: already finished");
  if (row_block < 1 || row_block > blocks_ || col_block < 1 || col_block > blocks_)
    throw StructureError("BlockAssembler: block position out of range");
  if (payload.order() != block_order_)
    throw StructureError("BlockAssembler: payload order " + std::to_string(payload.order()) +
                         " does not match block order " + std::to_string(block_order_));
  const std::int64_t r0 = (row_block - 1) * block_order_;
  const std::int64_t c0 = (col_block - 1) * block_order_;
  std::span<const double> p = payload.entries();
  for (std::int64_t b = 0; b < block_order_; ++b)
    for (std::int64_t g = 0; g < block_order_; ++g)
      entries_[static_cast<std::size_t>((r0 + b) * order_ + (c0 + g))] +=
          scale * p[static_cast<std::size_t>(b * block_order_ + g)];
}

void BlockAssembler::add_symmetric_pair(std::int64_t row_block, std::int64_t col_block,
                                        const SymMatrix& payload, double scale) {
  add(row_block, col_block, payload, scale);
  if (row_block != col_block) add(col_block, row_block, payload, scale);
}

SymMatrix BlockAssembler::take() {
  taken_ = true;
  return SymMatrix::from_dense(std::move(space_), std::move(entries_));
}

}  // namespace pptfarm
