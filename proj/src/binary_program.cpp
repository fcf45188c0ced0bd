#include "diapoly/binary_program.hpp"

#include "diapoly/errors.hpp"

namespace diapoly {

const char* to_string(Sense s) {
  switch (s) {
    case Sense::LessEqual: return "<=";
    case Sense::Equal: return "=";
    case Sense::GreaterEqual: return ">=";
  }
  return "?";
}

const char* to_string(SolveStatus s) { return s == SolveStatus::Optimal ? "optimal" : "infeasible"; }

BinaryProgram::BinaryProgram(std::size_t n, RatVector objective, std::vector<std::string> names)
    : n_(n), objective_(std::move(objective)), names_(std::move(names)) {
  if (n_ == 0) throw DimensionError("a binary program needs at least one variable");
  if (objective_.empty()) objective_.assign(n_, Rational(0));
  if (objective_.size() != n_) throw DimensionError("objective length does not match variable count");
  if (names_.empty()) {
    names_.reserve(n_);
    for (std::size_t j = 0; j < n_; ++j) names_.push_back("x" + std::to_string(j + 1));
  }
  if (names_.size() != n_) throw DimensionError("variable name count does not match variable count");
}

Constraint& BinaryProgram::add_constraint(RatVector coefficients, Sense sense, Rational rhs, std::string name) {
  if (coefficients.size() != n_) throw DimensionError("constraint row length does not match variable count");
  if (name.empty()) name = "c" + std::to_string(rows_.size() + 1);
  rows_.push_back(Constraint{std::move(coefficients), sense, std::move(rhs), std::move(name)});
  return rows_.back();
}

void BinaryProgram::set_objective(RatVector objective) {
  if (objective.size() != n_) throw DimensionError("objective length does not match variable count");
  objective_ = std::move(objective);
}

Rational BinaryProgram::evaluate(std::span<const std::uint8_t> x) const {
  if (x.size() != n_) throw DimensionError("assignment length does not match variable count");
  Rational v;
  for (std::size_t j = 0; j < n_; ++j)
    if (x[j]) v += objective_[j];
  return v;
}

bool row_holds(const Constraint& row, std::span<const std::uint8_t> x) {
  Rational act;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (x[j] && !row.coefficients[j].is_zero()) act += row.coefficients[j];
  switch (row.sense) {
    case Sense::LessEqual: return act <= row.rhs;
    case Sense::Equal: return act == row.rhs;
    case Sense::GreaterEqual: return act >= row.rhs;
  }
  return false;
}

bool is_feasible(const BinaryProgram& bp, std::span<const std::uint8_t> x) {
  if (x.size() != bp.num_variables()) throw DimensionError("assignment length does not match variable count");
  for (const auto& row : bp.constraints())
    if (!row_holds(row, x)) return false;
  return true;
}

std::int64_t squared_distance(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) throw DimensionError("vectors of differing length");
  std::int64_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]) ? 1 : 0;
  return d;
}

}  // namespace diapoly
