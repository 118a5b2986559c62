#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pptfarm/errors.hpp"

namespace pptfarm {

// Which side of the bipartite family a tensor factor belongs to.
enum class Side : std::uint8_t { None = 0, A = 1, B = 2 };

struct FactorRole {
  Side side = Side::None;
  int party = 0;  // 1..n when tagged, 0 otherwise
  bool operator==(const FactorRole&) const = default;
};

/*
 * Ordered list of tensor-factor dimensions, optionally tagged with A/B side
 * and party index. Flat indices are 1-based and row-major: the leftmost
 * factor is the most significant digit.
 *
 * The family layout used throughout is A_1 ... A_n, B_1 ... B_n, so party k
 * owns factors k and n+k.
 */
class FactorSpace {
 public:
  explicit FactorSpace(std::vector<int> dims);
  FactorSpace(std::vector<int> dims, std::vector<FactorRole> roles);

  // The A_1..A_n, B_1..B_n space of the state family.
  static FactorSpace family(int parties, int dim_a, int dim_b);
  // n untagged factors of equal dimension (the A-side block grid, payload spaces).
  static FactorSpace uniform(int factors, int dim);

  int factor_count() const { return static_cast<int>(dims_.size()); }
  int dim(int factor) const;  // 1-based factor position
  const std::vector<int>& dims() const { return dims_; }
  const std::vector<FactorRole>& roles() const { return roles_; }
  std::int64_t total_dim() const { return total_; }

  bool tagged() const;          // every factor carries an A/B role
  int parties() const;          // requires tagged()
  std::vector<int> party_factors(int party) const;  // {k, n+k}, 1-based

  std::string role_name(int factor) const;  // "A2", "B1", or "F3" when untagged

  bool operator==(const FactorSpace&) const;

  // 1-based row-major flat index of 1-based components; inverse below.
  std::int64_t flat_index(std::span<const int> components) const;
  std::vector<int> multi_index(std::int64_t flat) const;

 private:
  void init();

  std::vector<int> dims_;
  std::vector<FactorRole> roles_;
  std::vector<std::int64_t> strides_;
  std::int64_t total_ = 0;
};

inline std::int64_t flat_index(const FactorSpace& space, std::span<const int> components) {
  return space.flat_index(components);
}

inline std::vector<int> multi_index(const FactorSpace& space, std::int64_t flat) {
  return space.multi_index(flat);
}

}  // namespace pptfarm
