#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "diapoly/binary_program.hpp"
#include "diapoly/diameter.hpp"
#include "diapoly/linalg.hpp"

namespace diapoly {

/// Distinct 0/1 points of one ambient space, stored flat in lexicographic order
/// once normalized.
class PointSet {
 public:
  explicit PointSet(std::size_t ambient, std::string source = {});

  void add(std::span<const std::uint8_t> point);
  /// Sorts lexicographically and drops duplicates.
  void normalize();

  std::size_t ambient() const { return ambient_; }
  std::size_t size() const { return ambient_ == 0 ? 0 : data_.size() / ambient_; }
  bool empty() const { return data_.empty(); }
  std::span<const std::uint8_t> point(std::size_t i) const { return {data_.data() + i * ambient_, ambient_}; }
  const std::string& source() const { return source_; }

 private:
  std::size_t ambient_;
  std::vector<std::uint8_t> data_;
  std::string source_;
};

/// matrix * v = rhs for every point of the associated set.
struct EquationSystem {
  RatMatrix matrix;
  RatVector rhs;

  std::size_t size() const { return matrix.rows(); }
};

/// a'v <= a0 or a'v >= a0.
struct Inequality {
  RatVector a;
  Rational a0;
  Sense sense = Sense::LessEqual;
  std::string label;
};

struct FacetReport {
  bool valid = false;
  std::size_t tight_point_count = 0;
  int face_dimension = -1;  ///< -1 for the empty face
  int polytope_dimension = -1;
  bool is_facet = false;
};

struct AffineHull {
  int dimension = -1;
  std::vector<std::size_t> basis_points;  ///< indices of an affinely independent spanning subset
  EquationSystem equations;               ///< independent equations cutting out the hull
};

/// All pairs (x, y) of base points with every z satisfying x + y - z <= e:
/// z_i is forced to 1 where x_i = y_i = 1 and free elsewhere.
PointSet pair_completions(std::size_t n, const std::vector<Assignment>& base_feasible, std::string source = {});

/// 0/1 points of the conjugate diameter polytope, from a structured list of
/// the base program's feasible points (each one is checked).
PointSet enumerate_points(const DiameterProgram& dp, const std::vector<Assignment>& base_feasible);

/// Same, with the base feasible set found by exhaustive scan (needs base.n <= cap).
PointSet enumerate_points(const DiameterProgram& dp, std::size_t cap = default_enumeration_cap());

int hull_dimension(const PointSet& ps);
AffineHull affine_hull(const PointSet& ps);

/// Coordinates that take the same value on every point.
std::vector<std::size_t> fixed_coordinates(const PointSet& ps);

/// [M (+) M, 0] with rhs d (+) d.
EquationSystem lift_equation_system(const EquationSystem& base, std::size_t n);

/// Every point satisfies the system and hull_dimension = ambient - rank(matrix).
bool verify_minimal_system(const PointSet& ps, const EquationSystem& sys);

FacetReport check_inequality(const PointSet& ps, const Inequality& ineq);
/// Variant reusing a known hull dimension of `ps`.
FacetReport check_inequality(const PointSet& ps, const Inequality& ineq, int polytope_dimension);

enum class FacetFamily { InheritedX, InheritedY, ZLower, ZUpper, Coupling };

const char* to_string(FacetFamily f);

struct TaggedInequality {
  Inequality inequality;
  FacetFamily family;
};

/// Lifted base facets on the x and y blocks, then z_i >= 0 and z_i <= 1 for
/// each i, then x_i + y_i - z_i <= 1 for each i.
std::vector<TaggedInequality> facet_families(std::size_t n, const std::vector<Inequality>& base_facets);

struct DisjointPairReport {
  bool existential = false;  ///< some pair of feasible points with x + y <= e
  bool universal = false;    ///< every feasible point has such a partner
  std::optional<std::pair<Assignment, Assignment>> witness;
  std::optional<Assignment> counterexample;  ///< a point without a partner
  std::size_t feasible_count = 0;
};

DisjointPairReport check_disjoint_pair_condition(const std::vector<Assignment>& feasible);
DisjointPairReport check_disjoint_pair_condition(const BinaryProgram& base, std::size_t cap = default_enumeration_cap());

// ---- exchange formats ----

/// {"n", "ambient", "count", "source"}
nlohmann::json point_set_header(const PointSet& ps);
/// Header JSON on the first line, then one space-separated 0/1 row per point.
void write_point_set_text(std::ostream& os, const PointSet& ps);
/// Header fields plus "points": [[0,1,..], ..].
nlohmann::json point_set_to_json(const PointSet& ps);

nlohmann::json facet_report_to_json(const FacetReport& r);
nlohmann::json inequality_to_json(const Inequality& ineq);
/// Accepts a single object or a list of {a: [rationals], a0, sense, label?}.
std::vector<Inequality> inequalities_from_json(const nlohmann::json& j);

}  // namespace diapoly
