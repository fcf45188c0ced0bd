#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "diapoly/diameter.hpp"
#include "diapoly/rational.hpp"

namespace diapoly::cli {

enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailure = 1,
  kInfeasible = 2,
  kParseFailure = 3,
  kCapExceeded = 4,
};

enum class Problem { Raw, Lop, Tsp };

struct RunConfig {
  std::string command;
  std::string input;       ///< model or instance path
  Problem problem = Problem::Raw;
  std::optional<Variant> variant;  ///< default: full for raw models, conjugate otherwise
  std::optional<Rational> epsilon;
  std::size_t cap = 0;     ///< 0 selects the library default
  std::uint64_t seed = 20240601;
  std::string format = "json";
  std::string out;
  std::optional<std::size_t> size;  ///< --n for generated LOP/TSP polytopes
  std::string inequality;  ///< check-facet input
  std::string suite;
  std::optional<int> trials;
  bool long_mode = false;
  std::string solver = "bnb";
};

struct CommandOutput {
  int exit_code = kSuccess;
  nlohmann::json report;
  std::string text;  ///< preformatted body; used instead of the report when set
};

CommandOutput cmd_solve(const RunConfig& config);
CommandOutput cmd_diameter(const RunConfig& config);
CommandOutput cmd_points(const RunConfig& config);
CommandOutput cmd_dim(const RunConfig& config);
CommandOutput cmd_check_facet(const RunConfig& config);
CommandOutput cmd_verify(const RunConfig& config);

/// Parses arguments, dispatches, writes the report and maps errors to exit
/// codes. Diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace diapoly::cli
