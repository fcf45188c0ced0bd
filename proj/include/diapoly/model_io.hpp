#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "diapoly/binary_program.hpp"

namespace diapoly {

/// Model JSON:
///   {"name": str?, "n": int, "variables": [str]?, "objective": [rational],
///    "constraints": [{"name": str?, "coefficients": [rational],
///                     "sense": "<=" | "=" | ">=", "rhs": rational}]}
/// The objective is always maximized.
BinaryProgram model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const BinaryProgram& bp);

struct LpExport {
  std::string text;
  bool exact = true;  ///< false when some coefficient was rounded
};

/// CPLEX-style LP text (Maximize / Subject To / Binary / End). Rows are
/// rewritten as <= rows: equalities become two rows, >= rows are negated.
/// Rationals without a finite decimal expansion are rounded and flagged by a
/// comment; the JSON sidecar from model_to_json keeps the exact values.
LpExport write_lp(const BinaryProgram& bp);

/// Reads the LP subset produced by write_lp (plus Minimize objectives, which
/// are negated). Variable order follows the Binary section.
BinaryProgram read_lp(const std::string& text);

/// Loads a model from a .json or .lp file (decided by extension, then content).
BinaryProgram load_model(const std::string& path);

std::string read_text_file(const std::string& path);

}  // namespace diapoly
