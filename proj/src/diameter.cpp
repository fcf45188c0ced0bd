#include "diapoly/diameter.hpp"

#include <algorithm>
#include <stdexcept>

#include "diapoly/errors.hpp"
#include "diapoly/json_support.hpp"

namespace diapoly {

const char* to_string(Variant v) { return v == Variant::Full ? "full" : "conjugate"; }

Variant variant_from_string(const std::string& s) {
  if (s == "full") return Variant::Full;
  if (s == "conjugate" || s == "bar") return Variant::Conjugate;
  throw ParseError("unknown variant '" + s + "' (expected full or conjugate)");
}

const char* to_string(EpsilonRule r) {
  switch (r) {
    case EpsilonRule::IntegerRule: return "integer-rule";
    case EpsilonRule::RationalRule: return "rational-rule";
    case EpsilonRule::Theoretical: return "theoretical";
    case EpsilonRule::UserSupplied: return "user-supplied";
  }
  return "?";
}

EpsilonChoice::EpsilonChoice(Rational value, EpsilonRule justification)
    : value_(std::move(value)), justification_(justification) {
  if (value_.sign() <= 0) throw std::invalid_argument("epsilon must be positive, got " + value_.to_string());
}

EpsilonChoice choose_epsilon(const BinaryProgram& bp) {
  mpz_class l = 1;
  for (const auto& c : bp.objective()) l = lcm(l, c.denominator());
  const mpz_class two_n = 2 * mpz_class(static_cast<unsigned long>(bp.num_variables()));
  if (l == 1) return EpsilonChoice(Rational(mpz_class(1), two_n), EpsilonRule::IntegerRule);
  return EpsilonChoice(Rational(mpz_class(1), two_n * l), EpsilonRule::RationalRule);
}

EpsilonChoice user_epsilon(const Rational& value) { return EpsilonChoice(value, EpsilonRule::UserSupplied); }

EpsilonChoice theoretical_epsilon(const BinaryProgram& bp, std::size_t cap) {
  const auto feasible = enumerate_feasible(bp, cap);
  if (feasible.empty()) throw InfeasibleError("model has no feasible assignment");
  Rational best = bp.evaluate(feasible.front());
  for (const auto& x : feasible) best = std::max(best, bp.evaluate(x));
  std::optional<Rational> runner_up;
  for (const auto& x : feasible) {
    Rational v = bp.evaluate(x);
    if (v < best && (!runner_up || v > *runner_up)) runner_up = v;
  }
  if (!runner_up) return EpsilonChoice(choose_epsilon(bp).value(), EpsilonRule::Theoretical);
  // 2(opt - runner_up) / (2n)
  return EpsilonChoice((best - *runner_up) / Rational(static_cast<long long>(bp.num_variables())),
                       EpsilonRule::Theoretical);
}

DiameterProgram build_diameter_program(const BinaryProgram& bp, const EpsilonChoice& eps, Variant variant) {
  const std::size_t n = bp.num_variables();
  const std::size_t total = 3 * n;

  RatVector objective(total);
  std::vector<std::string> names(total);
  for (std::size_t i = 0; i < n; ++i) {
    objective[i] = bp.objective()[i];
    objective[n + i] = bp.objective()[i];
    objective[2 * n + i] = -eps.value();
    names[i] = bp.variable_names()[i] + "_x";
    names[n + i] = bp.variable_names()[i] + "_y";
    names[2 * n + i] = bp.variable_names()[i] + "_z";
  }
  BinaryProgram derived(total, std::move(objective), std::move(names));
  derived.set_name((bp.name().empty() ? std::string("bp") : bp.name()) + "_diameter_" + to_string(variant));

  for (std::size_t block = 0; block < 2; ++block) {
    for (const auto& row : bp.constraints()) {
      RatVector a(total);
      std::copy(row.coefficients.begin(), row.coefficients.end(), a.begin() + static_cast<std::ptrdiff_t>(block * n));
      derived.add_constraint(std::move(a), row.sense, row.rhs, row.name + (block == 0 ? "_x" : "_y"));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    RatVector a(total);
    a[i] = 1;
    a[n + i] = 1;
    a[2 * n + i] = -1;
    derived.add_constraint(std::move(a), Sense::LessEqual, Rational(1), "couple_" + std::to_string(i + 1));
  }
  if (variant == Variant::Full) {
    for (std::size_t i = 0; i < n; ++i) {
      RatVector a(total);
      a[i] = -1;
      a[n + i] = -1;
      a[2 * n + i] = -1;
      derived.add_constraint(std::move(a), Sense::LessEqual, Rational(-1), "lower_" + std::to_string(i + 1));
    }
  }
  return DiameterProgram{bp, eps, variant == Variant::Full, std::move(derived)};
}

DiverseOptimaResult solve_diameter(const DiameterProgram& dp, const DiameterSolveOptions& options) {
  const std::size_t n = dp.base_size();
  const SolveReport report = solve_bnb(dp.derived);
  if (report.status != SolveStatus::Optimal) throw InfeasibleError("base program is infeasible");

  if (dp.derived.num_variables() <= std::min(options.cross_check_cap, kMaxEnumerationCap)) {
    const SolveReport check = solve_enumerate(dp.derived, options.cross_check_cap);
    if (check.status != SolveStatus::Optimal || check.best->objective_value != report.best->objective_value)
      throw std::logic_error("branch and bound disagrees with enumeration on the diameter program");
  }

  const Assignment& v = report.best->assignment;
  DiverseOptimaResult r;
  r.x_star.assign(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n));
  r.y_star.assign(v.begin() + static_cast<std::ptrdiff_t>(n), v.begin() + static_cast<std::ptrdiff_t>(2 * n));
  r.z_star.assign(v.begin() + static_cast<std::ptrdiff_t>(2 * n), v.end());
  r.diameter = squared_distance(r.x_star, r.y_star);
  r.variant = dp.variant();
  r.epsilon = dp.epsilon.value();
  r.epsilon_rule = dp.epsilon.justification();
  r.base_objective = dp.base.evaluate(r.x_star);
  const auto ones = static_cast<std::int64_t>(std::count(r.z_star.begin(), r.z_star.end(), 1));
  r.upper_bound = static_cast<std::int64_t>(n) - ones;

  const bool rule_epsilon = dp.epsilon.justification() != EpsilonRule::UserSupplied;
  if (r.variant == Variant::Full) {
    if (r.diameter != r.upper_bound) throw std::logic_error("diameter differs from n - e'z for the full variant");
    r.certified = rule_epsilon;
  } else if (options.constant_norm) {
    const std::int64_t k = *options.constant_norm;
    const auto nx = static_cast<std::int64_t>(std::count(r.x_star.begin(), r.x_star.end(), 1));
    const auto ny = static_cast<std::int64_t>(std::count(r.y_star.begin(), r.y_star.end(), 1));
    if (nx != k || ny != k)
      throw std::invalid_argument("certified constant norm " + std::to_string(k) + " does not match the optima (" +
                                  std::to_string(nx) + ", " + std::to_string(ny) + ")");
    if (r.diameter != 2 * (k - ones)) throw std::logic_error("diameter differs from 2(k - e'z)");
    r.certified = rule_epsilon;
  }
  return r;
}

bool verify_z_semantics(const DiverseOptimaResult& r) {
  if (r.x_star.size() != r.y_star.size() || r.x_star.size() != r.z_star.size()) return false;
  for (std::size_t i = 0; i < r.x_star.size(); ++i) {
    const bool expect = r.variant == Variant::Full ? r.x_star[i] == r.y_star[i] : (r.x_star[i] && r.y_star[i]);
    if ((r.z_star[i] == 1) != expect) return false;
  }
  return true;
}

std::int64_t diameter_by_enumeration(const BinaryProgram& bp, std::size_t cap) {
  const auto optima = enumerate_optimal_set(bp, cap);
  std::int64_t best = 0;
  for (std::size_t a = 0; a < optima.size(); ++a)
    for (std::size_t b = a + 1; b < optima.size(); ++b)
      best = std::max(best, squared_distance(optima[a].assignment, optima[b].assignment));
  return best;
}

nlohmann::json result_to_json(const DiverseOptimaResult& r) {
  return nlohmann::json{{"variant", to_string(r.variant)},
                        {"epsilon", rational_parts_json(r.epsilon)},
                        {"epsilon_rule", to_string(r.epsilon_rule)},
                        {"x", r.x_star},
                        {"y", r.y_star},
                        {"z", r.z_star},
                        {"diameter", r.diameter},
                        {"base_objective", rational_to_json(r.base_objective)},
                        {"upper_bound", r.upper_bound},
                        {"certified", r.certified}};
}

}  // namespace diapoly
