#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "diapoly/binary_program.hpp"
#include "diapoly/diameter.hpp"
#include "diapoly/polytope.hpp"
#include "diapoly/rational.hpp"

namespace diapoly::tsp {

/// Vertex cycle over 1..n, canonical: starts at 1 and tour[1] < tour[n - 1].
using Tour = std::vector<int>;

/// Symmetric costs on the edges of K_n. Cities are 1-based.
class TspInstance {
 public:
  /// Zero costs. Throws std::invalid_argument for n < 3.
  explicit TspInstance(std::size_t n);

  std::size_t size() const { return n_; }
  const Rational& cost(std::size_t i, std::size_t j) const;
  void set_cost(std::size_t i, std::size_t j, Rational c);

 private:
  std::size_t n_;
  std::vector<Rational> costs_;  // by edge index
};

/// n (n - 1) / 2
std::size_t num_edges(std::size_t n);

/// 0-based position of edge {i, j} (0-based, i != j) in lexicographic order.
std::size_t edge_index(std::size_t n, std::size_t i, std::size_t j);

/// 0-based endpoints (i < j) of an edge index.
std::pair<std::size_t, std::size_t> edge_endpoints(std::size_t n, std::size_t e);

/// 10 unless overridden by the DIAPOLY_TSP_CAP environment variable.
std::size_t default_subtour_cap();

/// Variables x_i_j (i < j); n degree equalities; one row
/// x(E(A)) <= |A| - 1 for each A with 2 <= |A| <= n - 1, by size and then
/// lexicographically. The objective holds the negated costs since the model
/// is maximized. Throws CapExceededError when n > cap.
BinaryProgram build(const TspInstance& inst, std::size_t cap = default_subtour_cap());

/// The n degree equalities alone.
EquationSystem degree_system(std::size_t n);

/// Validates a vertex cycle and rotates/reflects it into canonical form.
/// Throws EncodingError unless it visits each of 1..n once, n >= 3.
Tour canonical_tour(std::vector<int> cycle);

Assignment tour_to_incidence(const Tour& t);

/// Inverse of tour_to_incidence. Throws EncodingError when the vector is not
/// a Hamiltonian cycle of K_n.
Tour incidence_to_tour(std::span<const std::uint8_t> x, std::size_t n);

/// Size of the symmetric difference of the edge sets. Throws DimensionError
/// on a size mismatch.
std::size_t discordant_edges(const Tour& t1, const Tour& t2);

/// |E(t1) \ E(t2)|, the count n - e'z for the pair. Half of discordant_edges.
std::size_t edges_missing_from(const Tour& t1, const Tour& t2);

/// Tour cost under the original (minimization) costs.
Rational tour_cost(const TspInstance& inst, const Tour& t);

/// All (n - 1)! / 2 canonical tours, lexicographically.
std::vector<Tour> enumerate_tours(std::size_t n);

/// Incidence vectors of all tours, lexicographically sorted.
std::vector<Assignment> feasible_points(std::size_t n);

/// Conjugate diameter polytope for K_n, from the structured point list.
PointSet diameter_points(std::size_t n);

/// Largest city count accepted by verify_diameter_discordant.
inline constexpr std::size_t kMaxVerifyCities = 8;

/// Diameter from the conjugate program (constant norm n) against
/// 2 max |E(T1) \ E(T2)| over optimal tours, which equals the largest
/// discordant-edge count. Throws
/// CapExceededError for n > kMaxVerifyCities.
DiameterCrossCheck cross_check_diameter(const TspInstance& inst);
bool verify_diameter_discordant(const TspInstance& inst);

/// Backtracking search for a Hamiltonian cycle of a simple graph given by a
/// symmetric adjacency matrix. The result is canonical.
std::optional<Tour> hamiltonian_cycle(const std::vector<std::vector<bool>>& adjacency);

/// A tour sharing no edge with t: the complement cycle for n = 5, a
/// Hamiltonian cycle of the complement graph for n > 5, absent for n < 5.
std::optional<Tour> find_disjoint_tour(const Tour& t);

Tour random_tour(std::mt19937_64& rng, std::size_t n);

/// Integer costs drawn uniformly from [lo, hi].
TspInstance random_instance(std::mt19937_64& rng, std::size_t n, int lo, int hi);

/// {"n": N, "costs": [[i, j, num, den], ...]}; unlisted edges cost 0.
TspInstance instance_from_json(const nlohmann::json& j);
nlohmann::json instance_to_json(const TspInstance& inst);

/// TSPLIB text with EDGE_WEIGHT_TYPE: EXPLICIT, EDGE_WEIGHT_FORMAT:
/// FULL_MATRIX and an EDGE_WEIGHT_SECTION. The matrix must be symmetric.
TspInstance instance_from_tsplib(const std::string& text);

/// Chooses the format from the first non-blank character.
TspInstance load_instance(const std::string& path);

}  // namespace diapoly::tsp
