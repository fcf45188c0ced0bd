#pragma once

#include <json.hpp>

#include "diapoly/linalg.hpp"
#include "diapoly/rational.hpp"

namespace diapoly {

/// Reads a rational from an integer, a decimal number, a "p/q" string or an
/// object {"num": .., "den": ..}. Throws ParseError otherwise.
Rational rational_from_json(const nlohmann::json& j);
RatVector rational_vector_from_json(const nlohmann::json& j);

/// "p" or "p/q" string.
nlohmann::json rational_to_json(const Rational& r);
nlohmann::json rational_vector_to_json(const RatVector& v);

/// {"num": .., "den": ..}; integers when they fit in int64, strings otherwise.
nlohmann::json rational_parts_json(const Rational& r);

}  // namespace diapoly
