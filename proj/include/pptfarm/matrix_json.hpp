#pragma once

#include <string>
#include <string_view>

#include "pptfarm/sym_matrix.hpp"

namespace pptfarm {

/*
 * pptfarm-matrix/1 interchange format:
 *
 *   {"format": "pptfarm-matrix/1",
 *    "dims":    [2, 2, 2, 2],
 *    "roles":   ["A1", "A2", "B1", "B2"],
 *    "order":   16,
 *    "entries": [ ... order*order row-major doubles ... ]}
 *
 * Entries are written with shortest round-trip precision, so export followed
 * by import reproduces the matrix bit for bit.
 */
std::string matrix_to_json(const SymMatrix& m);

SymMatrix matrix_from_json(std::string_view text);

}  // namespace pptfarm
