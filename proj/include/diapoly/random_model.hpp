#pragma once

#include <cstddef>
#include <random>

#include "diapoly/binary_program.hpp"

namespace diapoly {

struct RandomModelOptions {
  std::size_t min_variables = 1;
  std::size_t max_variables = 10;
  std::size_t max_rows = 6;
  int coefficient_bound = 3;  ///< row entries drawn from [-bound, bound]
  int objective_bound = 4;    ///< objective entries drawn from [-bound, bound]
  bool ensure_feasible = true;  ///< plant a random feasible point
  bool allow_equalities = true;
};

/// Uniform integer in [lo, hi]. std distributions are implementation-defined;
/// this keeps sequences stable across standard libraries.
int uniform_int(std::mt19937_64& rng, int lo, int hi);

/// Seeded generator of small integer binary programs used by the property
/// suites. Deterministic for a given engine state.
BinaryProgram random_model(std::mt19937_64& rng, const RandomModelOptions& options = {});

}  // namespace diapoly
