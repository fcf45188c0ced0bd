#pragma once

#include <cstddef>
#include <vector>

#include "diapoly/binary_program.hpp"

namespace diapoly {

/// Largest variable count accepted by the exhaustive routines. Hard ceiling
/// for any configured cap.
inline constexpr std::size_t kMaxEnumerationCap = 40;

/// 26 unless overridden by the DIAPOLY_ENUM_CAP environment variable.
std::size_t default_enumeration_cap();

/// Exhaustive scan of all 2^n assignments. Among maximizers the
/// lexicographically smallest assignment wins.
SolveReport solve_enumerate(const BinaryProgram& bp, std::size_t cap = default_enumeration_cap());

/// All maximizers, lexicographically sorted. Throws InfeasibleError when the
/// model has no feasible point.
std::vector<Solution> enumerate_optimal_set(const BinaryProgram& bp, std::size_t cap = default_enumeration_cap());

/// All feasible assignments, lexicographically sorted.
std::vector<Assignment> enumerate_feasible(const BinaryProgram& bp, std::size_t cap = default_enumeration_cap());

/// Depth-first branch and bound. Variables are branched in index order,
/// the 1-branch first. A node is cut when its prefix value plus the positive
/// objective coefficients still free cannot beat the incumbent, or when some
/// row cannot be satisfied by any completion of the prefix.
SolveReport solve_bnb(const BinaryProgram& bp);

}  // namespace diapoly
