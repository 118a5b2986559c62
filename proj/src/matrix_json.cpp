#include "pptfarm/matrix_json.hpp"

#include <cctype>

#include "json.hpp"

namespace pptfarm {

namespace {

constexpr const char* kFormatTag = "pptfarm-matrix/1";

FactorRole parse_role(const std::string& name) {
  if (name.size() < 2) return {};
  char side = name.front();
  if (side != 'A' && side != 'B') return {};
  for (std::size_t k = 1; k < name.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(name[k]))) return {};
  int party = std::stoi(name.substr(1));
  if (party < 1) return {};
  return {side == 'A' ? Side::A : Side::B, party};
}

}  // namespace

std::string matrix_to_json(const SymMatrix& m) {
  nlohmann::ordered_json doc;
  doc["format"] = kFormatTag;
  doc["dims"] = m.space().dims();
  nlohmann::ordered_json roles = nlohmann::ordered_json::array();
  for (int k = 1; k <= m.space().factor_count(); ++k) roles.push_back(m.space().role_name(k));
  doc["roles"] = std::move(roles);
  doc["order"] = m.order();
  doc["entries"] = std::vector<double>(m.entries().begin(), m.entries().end());
  return doc.dump(2);
}

SymMatrix matrix_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("matrix_from_json: invalid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object() || doc.value("format", std::string{}) != kFormatTag)
      throw IoError("matrix_from_json: missing or unknown format tag");
    std::vector<int> dims = doc.at("dims").get<std::vector<int>>();
    std::vector<FactorRole> roles(dims.size());
    if (doc.contains("roles")) {
      auto names = doc.at("roles").get<std::vector<std::string>>();
      if (names.size() != dims.size())
        throw IoError("matrix_from_json: one role per factor required");
      for (std::size_t k = 0; k < names.size(); ++k) roles[k] = parse_role(names[k]);
    }
    FactorSpace space(std::move(dims), std::move(roles));
    auto entries = doc.at("entries").get<std::vector<double>>();
    std::int64_t order = doc.at("order").get<std::int64_t>();
    if (order != space.total_dim())
      throw IoError("matrix_from_json: order does not match the factor dimensions");
    return SymMatrix::from_dense(std::move(space), std::move(entries));
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("matrix_from_json: malformed document: ") + e.what());
  }
}

}  // namespace pptfarm
