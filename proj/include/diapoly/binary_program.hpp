#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "diapoly/linalg.hpp"
#include "diapoly/rational.hpp"

namespace diapoly {

enum class Sense { LessEqual, Equal, GreaterEqual };

const char* to_string(Sense s);

struct Constraint {
  RatVector coefficients;
  Sense sense = Sense::LessEqual;
  Rational rhs;
  std::string name;
};

/// 0/1 assignment, one byte per variable.
using Assignment = std::vector<std::uint8_t>;

/// Maximize c'x subject to linear rows over x in {0,1}^n.
///
/// Equality and >= rows are stored as written; only the LP writer splits them
/// into <= pairs.
class BinaryProgram {
 public:
  explicit BinaryProgram(std::size_t n, RatVector objective = {}, std::vector<std::string> names = {});

  Constraint& add_constraint(RatVector coefficients, Sense sense, Rational rhs, std::string name = {});

  std::size_t num_variables() const { return n_; }
  std::size_t num_constraints() const { return rows_.size(); }
  const RatVector& objective() const { return objective_; }
  const std::vector<Constraint>& constraints() const { return rows_; }
  const std::vector<std::string>& variable_names() const { return names_; }

  void set_objective(RatVector objective);
  void set_name(std::string name) { name_ = std::move(name); }
  const std::string& name() const { return name_; }

  Rational evaluate(std::span<const std::uint8_t> x) const;

 private:
  std::size_t n_;
  RatVector objective_;
  std::vector<std::string> names_;
  std::vector<Constraint> rows_;
  std::string name_;
};

struct Solution {
  Assignment assignment;
  Rational objective_value;

  friend bool operator==(const Solution&, const Solution&) = default;
};

enum class SolveStatus { Optimal, Infeasible };

const char* to_string(SolveStatus s);

struct SolveReport {
  SolveStatus status = SolveStatus::Infeasible;
  std::optional<Solution> best;
  std::uint64_t nodes_explored = 0;
};

bool row_holds(const Constraint& row, std::span<const std::uint8_t> x);

/// True iff every row holds. Throws DimensionError when |x| != n.
bool is_feasible(const BinaryProgram& bp, std::span<const std::uint8_t> x);

/// Squared Euclidean distance between two 0/1 vectors (their Hamming distance).
std::int64_t squared_distance(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

}  // namespace diapoly
