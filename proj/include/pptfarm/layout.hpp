#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pptfarm/family.hpp"

namespace pptfarm {

// One occupied position of the A-block grid. payload 'a' marks the core
// placements (label = 0), payload 'b' marks a labelled component.
struct LayoutCell {
  std::int64_t row = 0;
  std::int64_t col = 0;
  char payload = '.';
  int label = 0;

  auto operator<=>(const LayoutCell&) const = default;
};

struct Layout {
  int parties = 0;
  int dim_a = 0;
  std::int64_t grid = 0;  // dA^n
  std::vector<OperatorLabel> labels;
  std::vector<LayoutCell> cells;  // sorted by (row, col)
};

Layout build_layout(int parties, int dim_a);

// Grid of fixed-width tokens: "." empty, "a" core, "b<l>" labelled payload,
// followed by one comment line per label.
std::string layout_text(const Layout& layout);

std::string layout_json(const Layout& layout);

}  // namespace pptfarm
