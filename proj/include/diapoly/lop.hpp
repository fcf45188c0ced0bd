#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "diapoly/binary_program.hpp"
#include "diapoly/polytope.hpp"
#include "diapoly/rational.hpp"

namespace diapoly::lop {

/// Image list of a permutation of 1..n: sigma[i - 1] = sigma(i).
using Permutation = std::vector<int>;

/// Weights a_ij for ordered pairs i != j. Items are 1-based.
class LopInstance {
 public:
  /// Zero weights. Throws std::invalid_argument for n < 2.
  explicit LopInstance(std::size_t n);

  std::size_t size() const { return n_; }
  const Rational& weight(std::size_t i, std::size_t j) const;
  void set_weight(std::size_t i, std::size_t j, Rational w);

 private:
  std::size_t n_;
  std::vector<Rational> weights_;  // n x n, diagonal unused
};

/// n (n - 1)
std::size_t num_pair_variables(std::size_t n);

/// 0-based position of x_ij in row-major order over ordered pairs i != j.
std::size_t pair_index(std::size_t n, std::size_t i, std::size_t j);

/// Variables x_i_j; equalities x_ij + x_ji = 1 for i < j; one row
/// x_ij + x_jk + x_ki <= 2 for every i < j, i < k, j != k; objective sum a_ij x_ij.
BinaryProgram build(const LopInstance& inst);

/// Throws EncodingError unless p is a permutation of 1..n with n >= 2.
void validate(const Permutation& p);

/// x_ij = 1 iff sigma(i) < sigma(j).
Assignment perm_to_incidence(const Permutation& p);

/// Inverse of perm_to_incidence. Throws EncodingError when the vector is not
/// the incidence vector of a permutation.
Permutation incidence_to_perm(std::span<const std::uint8_t> x, std::size_t n);

/// Pairs i < j ordered differently by p1 and p2. Throws DimensionError on a
/// size mismatch.
std::size_t kendall_tau(const Permutation& p1, const Permutation& p2);

/// All n! permutations in lexicographic order.
std::vector<Permutation> enumerate_permutations(std::size_t n);

/// Incidence vectors of all permutations, lexicographically sorted.
std::vector<Assignment> feasible_points(std::size_t n);

/// Conjugate diameter polytope for n items, from the structured point list.
PointSet diameter_points(std::size_t n);

/// Largest item count accepted by verify_diameter_kendall.
inline constexpr std::size_t kMaxVerifyItems = 6;

/// Diameter from the conjugate program (constant norm C(n,2)) against twice
/// the largest Kendall tau between optimal permutations. Throws
/// CapExceededError for n > kMaxVerifyItems.
DiameterCrossCheck cross_check_diameter(const LopInstance& inst);
bool verify_diameter_kendall(const LopInstance& inst);

/// Embeds an inequality over 3 n (n - 1) coordinates into 3 (n + 1) n
/// coordinates, zero on every pair involving item n + 1.
Inequality lift_inequality(const Inequality& ineq, std::size_t n);

/// Integer weights drawn uniformly from [lo, hi].
LopInstance random_instance(std::mt19937_64& rng, std::size_t n, int lo, int hi);

/// {"n": N, "weights": [[i, j, num, den], ...]}; unlisted pairs weigh 0.
LopInstance instance_from_json(const nlohmann::json& j);
nlohmann::json instance_to_json(const LopInstance& inst);

/// n followed by an n x n matrix; the diagonal is ignored.
LopInstance instance_from_lolib(const std::string& text);

/// Chooses the format from the first non-blank character.
LopInstance load_instance(const std::string& path);

}  // namespace diapoly::lop
