#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace diapoly::cli {

struct SuiteOptions {
  std::uint64_t seed = 20240601;
  std::optional<int> trials;  ///< overrides each suite's default trial count
  bool long_mode = false;     ///< LOP n = 4 polytope and the n = 3 -> 4 lifting
};

struct ClaimRecord {
  std::string suite;
  std::string claim;
  bool passed = false;
  nlohmann::json detail;
};

/// dimensions, facets, epsilon, lifting, kendall, discordant, disjoint, solver.
const std::vector<std::string>& suite_names();

/// Runs one named suite, or every suite for "all". Throws
/// std::invalid_argument on an unknown name.
std::vector<ClaimRecord> run_suite(const std::string& name, const SuiteOptions& options);

nlohmann::json records_to_json(const std::vector<ClaimRecord>& records);

}  // namespace diapoly::cli
