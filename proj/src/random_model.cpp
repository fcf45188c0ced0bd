#include "diapoly/random_model.hpp"

namespace diapoly {

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(rng() % span);
}

BinaryProgram random_model(std::mt19937_64& rng, const RandomModelOptions& o) {
  const auto n = static_cast<std::size_t>(
      uniform_int(rng, static_cast<int>(o.min_variables), static_cast<int>(o.max_variables)));
  RatVector c(n);
  for (auto& v : c) v = uniform_int(rng, -o.objective_bound, o.objective_bound);
  BinaryProgram bp(n, std::move(c));

  Assignment planted(n);
  for (auto& v : planted) v = static_cast<std::uint8_t>(uniform_int(rng, 0, 1));

  const int rows = uniform_int(rng, 0, static_cast<int>(o.max_rows));
  for (int r = 0; r < rows; ++r) {
    RatVector a(n);
    long long act = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const int v = uniform_int(rng, -o.coefficient_bound, o.coefficient_bound);
      a[j] = v;
      if (planted[j]) act += v;
    }
    const int kind = uniform_int(rng, 0, 9);
    Sense sense = kind < 6 ? Sense::LessEqual : (kind < 8 || !o.allow_equalities ? Sense::GreaterEqual : Sense::Equal);
    long long rhs = 0;
    if (o.ensure_feasible) {
      const int slack = uniform_int(rng, 0, 2);
      rhs = sense == Sense::LessEqual ? act + slack : (sense == Sense::GreaterEqual ? act - slack : act);
    } else {
      rhs = uniform_int(rng, -o.coefficient_bound, o.coefficient_bound);
    }
    bp.add_constraint(std::move(a), sense, Rational(rhs));
  }
  return bp;
}

}  // namespace diapoly
