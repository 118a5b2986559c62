#include "pptfarm/layout.hpp"

#include <algorithm>
#include <map>

#include "json.hpp"

namespace pptfarm {

Layout build_layout(int parties, int dim_a) {
  LabelMap labels(parties, dim_a);
  FactorSpace a_space = FactorSpace::uniform(parties, dim_a);
  if (a_space.total_dim() > kMaxDenseOrder)
    throw CapacityError("layout grid " + std::to_string(a_space.total_dim()) +
                        " exceeds the dense limit " + std::to_string(kMaxDenseOrder));

  Layout layout;
  layout.parties = parties;
  layout.dim_a = dim_a;
  layout.grid = a_space.total_dim();
  layout.labels = labels.all();

  std::vector<std::int64_t> diag(static_cast<std::size_t>(dim_a));
  for (int i = 1; i <= dim_a; ++i) {
    std::vector<int> idx(static_cast<std::size_t>(parties), i);
    diag[static_cast<std::size_t>(i - 1)] = a_space.flat_index(idx);
  }
  for (std::int64_t r : diag)
    for (std::int64_t c : diag) layout.cells.push_back({r, c, 'a', 0});
  for (const OperatorLabel& label : layout.labels) {
    layout.cells.push_back({label.v_flat, label.v_flat, 'b', label.l});
    layout.cells.push_back({label.v_flat, label.w_flat, 'b', label.l});
    layout.cells.push_back({label.w_flat, label.v_flat, 'b', label.l});
    layout.cells.push_back({label.w_flat, label.w_flat, 'b', label.l});
  }
  std::sort(layout.cells.begin(), layout.cells.end());
  return layout;
}

namespace {

std::string pattern_string(const TranspositionPattern& p) {
  std::string s;
  for (std::uint8_t f : p.flips) s += static_cast<char>('0' + f);
  return s;
}

std::string index_string(const std::vector<int>& idx) {
  std::string s = "(";
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(idx[k]);
  }
  return s + ")";
}

}  // namespace

std::string layout_text(const Layout& layout) {
  std::map<std::pair<std::int64_t, std::int64_t>, std::string> tokens;
  std::size_t width = 1;
  for (const LayoutCell& cell : layout.cells) {
    std::string token =
        cell.payload == 'a' ? std::string("a") : "b" + std::to_string(cell.label);
    width = std::max(width, token.size());
    tokens[{cell.row, cell.col}] = std::move(token);
  }

  std::string out = "# layout n=" + std::to_string(layout.parties) +
                    " dA=" + std::to_string(layout.dim_a) +
                    " grid=" + std::to_string(layout.grid) +
                    " labels=" + std::to_string(layout.labels.size()) + "\n";
  for (std::int64_t r = 1; r <= layout.grid; ++r) {
    for (std::int64_t c = 1; c <= layout.grid; ++c) {
      auto it = tokens.find({r, c});
      std::string token = it == tokens.end() ? "." : it->second;
      token.append(width - token.size(), ' ');
      if (c > 1) out += ' ';
      out += token;
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
  }
  for (const OperatorLabel& label : layout.labels) {
    out += "# l=" + std::to_string(label.l) + " pair=(" + std::to_string(label.i) + "," +
           std::to_string(label.j) + ") alpha=" + pattern_string(label.pattern) +
           " v=" + index_string(label.v) + "->" + std::to_string(label.v_flat) +
           " w=" + index_string(label.w) + "->" + std::to_string(label.w_flat) + "\n";
  }
  return out;
}

std::string layout_json(const Layout& layout) {
  nlohmann::ordered_json doc;
  doc["format"] = "pptfarm-layout/1";
  doc["n"] = layout.parties;
  doc["dA"] = layout.dim_a;
  doc["grid"] = layout.grid;
  nlohmann::ordered_json labels = nlohmann::ordered_json::array();
  for (const OperatorLabel& label : layout.labels) {
    nlohmann::ordered_json entry;
    entry["l"] = label.l;
    entry["i"] = label.i;
    entry["j"] = label.j;
    std::vector<int> alpha(label.pattern.flips.begin(), label.pattern.flips.end());
    entry["alpha"] = alpha;
    entry["v"] = label.v;
    entry["w"] = label.w;
    entry["v_flat"] = label.v_flat;
    entry["w_flat"] = label.w_flat;
    labels.push_back(std::move(entry));
  }
  doc["labels"] = std::move(labels);
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const LayoutCell& cell : layout.cells) {
    nlohmann::ordered_json entry;
    entry["row"] = cell.row;
    entry["col"] = cell.col;
    entry["payload"] = std::string(1, cell.payload);
    entry["l"] = cell.label;
    cells.push_back(std::move(entry));
  }
  doc["blocks"] = std::move(cells);
  return doc.dump(2);
}

}  // namespace pptfarm
