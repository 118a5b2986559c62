#include "pptfarm/factor_space.hpp"

#include <algorithm>

namespace pptfarm {

namespace {
// Generic spaces are bookkeeping only, but keep the flat-index arithmetic in
// a range where int64 row*order+col stays exact.
constexpr std::int64_t kMaxTotalDim = std::int64_t{1} << 31;
}  // namespace

FactorSpace::FactorSpace(std::vector<int> dims)
    : dims_(std::move(dims)), roles_(dims_.size()) {
  init();
}

FactorSpace::FactorSpace(std::vector<int> dims, std::vector<FactorRole> roles)
    : dims_(std::move(dims)), roles_(std::move(roles)) {
  if (roles_.size() != dims_.size())
    throw StructureError("FactorSpace: one role per factor required");
  init();
}

void FactorSpace::init() {
  if (dims_.empty()) throw StructureError("FactorSpace: at least one factor required");
  total_ = 1;
  for (int d : dims_) {
    if (d < 1) throw StructureError("FactorSpace: factor dimensions must be positive");
    if (total_ > kMaxTotalDim / d) throw CapacityError("FactorSpace: total dimension too large");
    total_ *= d;
  }
  strides_.assign(dims_.size(), 1);
  for (int k = static_cast<int>(dims_.size()) - 2; k >= 0; --k)
    strides_[k] = strides_[k + 1] * dims_[k + 1];
}

FactorSpace FactorSpace::family(int parties, int dim_a, int dim_b) {
  if (parties < 2) throw DomainError("family space: at least two parties required");
  if (dim_a < 2 || dim_b < 2) throw DomainError("family space: local dimensions must be >= 2");
  std::vector<int> dims;
  std::vector<FactorRole> roles;
  for (int k = 1; k <= parties; ++k) {
    dims.push_back(dim_a);
    roles.push_back({Side::A, k});
  }
  for (int k = 1; k <= parties; ++k) {
    dims.push_back(dim_b);
    roles.push_back({Side::B, k});
  }
  return {std::move(dims), std::move(roles)};
}

FactorSpace FactorSpace::uniform(int factors, int dim) {
  if (factors < 1) throw StructureError("uniform space: at least one factor required");
  return FactorSpace(std::vector<int>(static_cast<std::size_t>(factors), dim));
}

int FactorSpace::dim(int factor) const {
  if (factor < 1 || factor > factor_count())
    throw StructureError("FactorSpace: factor position out of range");
  return dims_[static_cast<std::size_t>(factor - 1)];
}

bool FactorSpace::tagged() const {
  return std::all_of(roles_.begin(), roles_.end(),
                     [](const FactorRole& r) { return r.side != Side::None; });
}

int FactorSpace::parties() const {
  if (!tagged()) throw StructureError("FactorSpace: untagged space has no parties");
  int n = 0;
  for (const auto& r : roles_) n = std::max(n, r.party);
  return n;
}

std::vector<int> FactorSpace::party_factors(int party) const {
  std::vector<int> out;
  for (int k = 0; k < factor_count(); ++k)
    if (roles_[static_cast<std::size_t>(k)].party == party) out.push_back(k + 1);
  if (out.empty()) throw StructureError("FactorSpace: no factors for requested party");
  return out;
}

std::string FactorSpace::role_name(int factor) const {
  const auto& r = roles_[static_cast<std::size_t>(factor - 1)];
  switch (r.side) {
    case Side::A: return "A" + std::to_string(r.party);
    case Side::B: return "B" + std::to_string(r.party);
    default: return "F" + std::to_string(factor);
  }
}

bool FactorSpace::operator==(const FactorSpace& other) const {
  return dims_ == other.dims_ && roles_ == other.roles_;
}

std::int64_t FactorSpace::flat_index(std::span<const int> components) const {
  if (components.size() != dims_.size())
    throw InvalidIndexError("flat_index: component count does not match factor count");
  std::int64_t flat = 1;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    int c = components[k];
    if (c < 1 || c > dims_[k])
      throw InvalidIndexError("flat_index: component " + std::to_string(k + 1) +
                              " out of range 1.." + std::to_string(dims_[k]));
    flat += static_cast<std::int64_t>(c - 1) * strides_[k];
  }
  return flat;
}

std::vector<int> FactorSpace::multi_index(std::int64_t flat) const {
  if (flat < 1 || flat > total_)
    throw InvalidIndexError("multi_index: flat index out of range 1.." + std::to_string(total_));
  std::vector<int> components(dims_.size());
  std::int64_t rem = flat - 1;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    components[k] = static_cast<int>(rem / strides_[k]) + 1;
    rem %= strides_[k];
  }
  return components;
}

}  // namespace pptfarm
