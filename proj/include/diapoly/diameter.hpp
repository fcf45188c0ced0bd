#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "diapoly/binary_program.hpp"
#include "diapoly/solver.hpp"

namespace diapoly {

/// Full keeps the lower coupling rows -x - y - z <= -e; conjugate drops them.
enum class Variant { Full, Conjugate };

const char* to_string(Variant v);
Variant variant_from_string(const std::string& s);

enum class EpsilonRule { IntegerRule, RationalRule, Theoretical, UserSupplied };

const char* to_string(EpsilonRule r);

/// Penalty weight on e'z together with where it came from. value > 0 always.
class EpsilonChoice {
 public:
  EpsilonChoice(Rational value, EpsilonRule justification);

  const Rational& value() const { return value_; }
  EpsilonRule justification() const { return justification_; }

 private:
  Rational value_;
  EpsilonRule justification_;
};

/// 1/(2n) for integral objectives, 1/(2n*L) otherwise, L being the lcm of the
/// objective denominators.
EpsilonChoice choose_epsilon(const BinaryProgram& bp);

/// Throws std::invalid_argument unless value > 0.
EpsilonChoice user_epsilon(const Rational& value);

/// (opt - best non-optimal value) / n, computed by enumeration. Falls back to
/// the rule value when every feasible point is optimal (any epsilon works then).
EpsilonChoice theoretical_epsilon(const BinaryProgram& bp, std::size_t cap = default_enumeration_cap());

/// Diameter program over x (+) y (+) z. Row layout of `derived`: base rows on
/// x, base rows on y, n rows x + y - z <= 1, then for the full variant n rows
/// -x - y - z <= -1. Objective c (+) c (+) (-eps e).
struct DiameterProgram {
  BinaryProgram base;
  EpsilonChoice epsilon;
  bool include_lower_coupling;
  BinaryProgram derived;

  Variant variant() const { return include_lower_coupling ? Variant::Full : Variant::Conjugate; }
  std::size_t base_size() const { return base.num_variables(); }
};

DiameterProgram build_diameter_program(const BinaryProgram& bp, const EpsilonChoice& eps, Variant variant);

struct DiverseOptimaResult {
  Assignment x_star;
  Assignment y_star;
  Assignment z_star;
  std::int64_t diameter = 0;  ///< squared distance between x_star and y_star
  Variant variant = Variant::Full;
  Rational epsilon;
  EpsilonRule epsilon_rule = EpsilonRule::IntegerRule;
  Rational base_objective;    ///< c'x_star
  std::int64_t upper_bound = 0;  ///< n - e'z_star
  bool certified = false;     ///< diameter equals the optimal diameter of the base
};

struct DiameterSolveOptions {
  /// Caller-certified common value of |x|^2 over the optimal set (conjugate only).
  std::optional<std::int64_t> constant_norm;
  /// Cross-check branch and bound against enumeration when 3n is within this cap.
  std::size_t cross_check_cap = default_enumeration_cap();
};

/// Solves the derived program exactly. Throws InfeasibleError when the base
/// has no feasible point.
DiverseOptimaResult solve_diameter(const DiameterProgram& dp, const DiameterSolveOptions& options = {});

/// Full: z_i = 1 iff x_i = y_i. Conjugate: z_i = 1 iff x_i = y_i = 1.
bool verify_z_semantics(const DiverseOptimaResult& result);

/// Oracle: max squared distance over pairs of enumerated optima.
std::int64_t diameter_by_enumeration(const BinaryProgram& bp, std::size_t cap = default_enumeration_cap());

/// Diameter from the program next to an independent combinatorial value.
struct DiameterCrossCheck {
  std::int64_t via_program = 0;
  std::int64_t via_oracle = 0;

  bool agrees() const { return via_program == via_oracle; }
};

/// {variant, epsilon: {num, den}, epsilon_rule, x, y, z, diameter,
///  base_objective, upper_bound, certified}
nlohmann::json result_to_json(const DiverseOptimaResult& result);

}  // namespace diapoly
