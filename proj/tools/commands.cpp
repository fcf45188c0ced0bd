#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "cli.hpp"
#include "diapoly/errors.hpp"
#include "diapoly/json_support.hpp"
#include "diapoly/lop.hpp"
#include "diapoly/model_io.hpp"
#include "diapoly/polytope.hpp"
#include "diapoly/solver.hpp"
#include "diapoly/tsp.hpp"
#include "suites.hpp"

namespace diapoly::cli {

namespace {

constexpr std::size_t kLopPointsLimit = 3;
constexpr std::size_t kLopPointsLongLimit = 4;
constexpr std::size_t kTspPointsLimit = 5;

const char* problem_name(Problem p) {
  switch (p) {
    case Problem::Raw: return "raw";
    case Problem::Lop: return "lop";
    case Problem::Tsp: return "tsp";
  }
  return "?";
}

std::size_t enum_cap(const RunConfig& c) { return c.cap == 0 ? default_enumeration_cap() : c.cap; }

void require_input(const RunConfig& c) {
  if (c.input.empty()) throw ParseError("command '" + c.command + "' needs an input file");
}

/// Base program for the configured problem together with its source name.
BinaryProgram load_base(const RunConfig& c) {
  require_input(c);
  switch (c.problem) {
    case Problem::Lop: return lop::build(lop::load_instance(c.input));
    case Problem::Tsp: return tsp::build(tsp::load_instance(c.input), c.cap == 0 ? tsp::default_subtour_cap() : c.cap);
    case Problem::Raw: break;
  }
  return load_model(c.input);
}

/// Diameter-polytope points for check-facet, dim and points.
PointSet load_points(const RunConfig& c) {
  if (c.problem == Problem::Raw) {
    const BinaryProgram bp = load_model(c.input.empty() ? throw ParseError("raw polytopes need a model file") : c.input);
    const auto dp = build_diameter_program(bp, choose_epsilon(bp), Variant::Conjugate);
    return enumerate_points(dp, enum_cap(c));
  }
  if (!c.size) throw ParseError("--n is required for generated LOP/TSP polytopes");
  const std::size_t n = *c.size;
  if (c.problem == Problem::Lop) {
    if (n < 2) throw ParseError("LOP polytopes need n >= 2");
    const std::size_t limit = c.long_mode ? kLopPointsLongLimit : kLopPointsLimit;
    if (n > limit)
      throw CapExceededError("LOP polytope with n = " + std::to_string(n) + " exceeds the limit " + std::to_string(limit) +
                             (c.long_mode ? "" : " (use --long for n = 4)"));
    return lop::diameter_points(n);
  }
  if (n < 3) throw ParseError("TSP polytopes need n >= 3");
  if (n > kTspPointsLimit)
    throw CapExceededError("TSP polytope with n = " + std::to_string(n) + " exceeds the limit " +
                           std::to_string(kTspPointsLimit));
  return tsp::diameter_points(n);
}

std::optional<int> expected_dimension(const RunConfig& c) {
  if (!c.size) return std::nullopt;
  const auto n = static_cast<int>(*c.size);
  if (c.problem == Problem::Lop) return 2 * n * (n - 1);
  if (c.problem == Problem::Tsp) return (3 * n * n - 7 * n) / 2;
  return std::nullopt;
}

nlohmann::json bits(const Assignment& a) { return std::vector<int>(a.begin(), a.end()); }

/// Flat "key: value" lines for text output.
std::string render_text(const nlohmann::json& j) {
  std::ostringstream os;
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) os << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
  } else if (j.is_array()) {
    for (const auto& v : j) os << v.dump() << '\n';
  } else {
    os << j.dump() << '\n';
  }
  return os.str();
}

}  // namespace

CommandOutput cmd_solve(const RunConfig& c) {
  const BinaryProgram bp = load_base(c);
  SolveReport rep;
  if (c.solver == "bnb") {
    rep = solve_bnb(bp);
  } else if (c.solver == "enumerate") {
    rep = solve_enumerate(bp, enum_cap(c));
  } else {
    throw ParseError("unknown solver '" + c.solver + "' (bnb | enumerate)");
  }
  CommandOutput out;
  out.report = {{"command", "solve"},
                {"problem", problem_name(c.problem)},
                {"model", bp.name()},
                {"n", bp.num_variables()},
                {"rows", bp.num_constraints()},
                {"solver", c.solver},
                {"status", to_string(rep.status)},
                {"nodes", rep.nodes_explored}};
  if (rep.status != SolveStatus::Optimal) {
    out.exit_code = kInfeasible;
    return out;
  }
  const Solution& s = *rep.best;
  out.report["objective"] = rational_to_json(s.objective_value);
  out.report["assignment"] = bits(s.assignment);
  if (c.problem == Problem::Lop) {
    const std::size_t n = lop::load_instance(c.input).size();
    out.report["permutation"] = lop::incidence_to_perm(s.assignment, n);
  } else if (c.problem == Problem::Tsp) {
    const auto inst = tsp::load_instance(c.input);
    const auto tour = tsp::incidence_to_tour(s.assignment, inst.size());
    out.report["tour"] = tour;
    out.report["tour_cost"] = rational_to_json(tsp::tour_cost(inst, tour));
  }
  return out;
}

CommandOutput cmd_diameter(const RunConfig& c) {
  const BinaryProgram bp = load_base(c);
  const Variant variant = c.variant.value_or(c.problem == Problem::Raw ? Variant::Full : Variant::Conjugate);
  const EpsilonChoice eps = c.epsilon ? user_epsilon(*c.epsilon) : choose_epsilon(bp);
  const auto dp = build_diameter_program(bp, eps, variant);

  DiameterSolveOptions options;
  if (c.cap != 0) options.cross_check_cap = c.cap;
  std::optional<std::size_t> items;
  if (c.problem == Problem::Lop) {
    items = lop::load_instance(c.input).size();
    if (variant == Variant::Conjugate) options.constant_norm = static_cast<std::int64_t>(*items * (*items - 1) / 2);
  } else if (c.problem == Problem::Tsp) {
    items = tsp::load_instance(c.input).size();
    if (variant == Variant::Conjugate) options.constant_norm = static_cast<std::int64_t>(*items);
  }
  const DiverseOptimaResult r = solve_diameter(dp, options);

  CommandOutput out;
  out.report = result_to_json(r);
  out.report["command"] = "diameter";
  out.report["problem"] = problem_name(c.problem);
  out.report["model"] = bp.name();
  out.report["n"] = bp.num_variables();
  const bool semantics = verify_z_semantics(r);
  out.report["z_semantics"] = semantics;
  if (c.problem == Problem::Lop) {
    out.report["permutation_x"] = lop::incidence_to_perm(r.x_star, *items);
    out.report["permutation_y"] = lop::incidence_to_perm(r.y_star, *items);
  } else if (c.problem == Problem::Tsp) {
    const auto t1 = tsp::incidence_to_tour(r.x_star, *items);
    const auto t2 = tsp::incidence_to_tour(r.y_star, *items);
    out.report["tour_x"] = t1;
    out.report["tour_y"] = t2;
    out.report["discordant_edges"] = tsp::discordant_edges(t1, t2);
  }
  if (!semantics) out.exit_code = kVerificationFailure;
  return out;
}

CommandOutput cmd_points(const RunConfig& c) {
  const PointSet ps = load_points(c);
  CommandOutput out;
  if (c.format == "text") {
    std::ostringstream os;
    write_point_set_text(os, ps);
    out.text = os.str();
  } else {
    out.report = point_set_to_json(ps);
  }
  return out;
}

CommandOutput cmd_dim(const RunConfig& c) {
  const PointSet ps = load_points(c);
  const AffineHull hull = affine_hull(ps);
  CommandOutput out;
  out.report = point_set_header(ps);
  out.report["command"] = "dim";
  out.report["problem"] = problem_name(c.problem);
  out.report["dimension"] = hull.dimension;
  out.report["equations"] = hull.equations.size();
  out.report["fixed_coordinates"] = fixed_coordinates(ps).size();
  if (const auto expected = expected_dimension(c)) {
    out.report["expected"] = *expected;
    if (*expected != hull.dimension) out.exit_code = kVerificationFailure;
  }
  return out;
}

CommandOutput cmd_check_facet(const RunConfig& c) {
  if (c.inequality.empty()) throw ParseError("check-facet needs --inequality FILE");
  std::vector<Inequality> list;
  try {
    list = inequalities_from_json(nlohmann::json::parse(read_text_file(c.inequality)));
  } catch (const nlohmann::json::parse_error& ex) {
    throw ParseError(std::string("invalid inequality JSON: ") + ex.what());
  }
  const PointSet ps = load_points(c);
  const int dim = hull_dimension(ps);
  CommandOutput out;
  nlohmann::json reports = nlohmann::json::array();
  bool all = true;
  for (const auto& q : list) {
    const FacetReport r = check_inequality(ps, q, dim);
    all = all && r.is_facet;
    nlohmann::json entry = facet_report_to_json(r);
    entry["inequality"] = inequality_to_json(q);
    reports.push_back(std::move(entry));
  }
  out.report = point_set_header(ps);
  out.report["command"] = "check-facet";
  out.report["polytope_dimension"] = dim;
  out.report["reports"] = std::move(reports);
  out.report["all_facets"] = all;
  if (!all) out.exit_code = kVerificationFailure;
  return out;
}

CommandOutput cmd_verify(const RunConfig& c) {
  SuiteOptions options;
  options.seed = c.seed;
  options.trials = c.trials;
  options.long_mode = c.long_mode;
  const std::string suite = c.suite.empty() ? "all" : c.suite;
  const auto records = run_suite(suite, options);
  std::size_t failed = 0;
  for (const auto& r : records) failed += !r.passed;
  CommandOutput out;
  out.report = {{"command", "verify"},
                {"suite", suite},
                {"seed", c.seed},
                {"long", c.long_mode},
                {"claims", records_to_json(records)},
                {"failed", failed},
                {"passed", failed == 0}};
  if (c.format == "text") {
    std::ostringstream os;
    for (const auto& r : records) os << (r.passed ? "PASS " : "FAIL ") << r.suite << ": " << r.claim << '\n';
    os << (failed == 0 ? "all claims passed" : std::to_string(failed) + " claim(s) failed") << '\n';
    out.text = os.str();
  }
  if (failed != 0) out.exit_code = kVerificationFailure;
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Diverse optima and diameter polytopes of binary programs"};
  app.require_subcommand(1);
  RunConfig c;
  std::string problem = "raw";
  std::string variant;
  std::string epsilon;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--problem", problem, "Input kind: raw model, LOP or TSP instance")
        ->check(CLI::IsMember({"raw", "lop", "tsp"}));
    sub->add_option("--cap", c.cap, "Enumeration cap (variables)");
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--out", c.out, "Write the report to a file");
  };

  auto* solve = app.add_subcommand("solve", "Solve a binary program exactly");
  solve->add_option("input", c.input, "Model (.json/.lp) or instance file")->required();
  solve->add_option("--solver", c.solver, "bnb or enumerate")->check(CLI::IsMember({"bnb", "enumerate"}));
  add_common(solve);

  auto* dia = app.add_subcommand("diameter", "Two maximally diverse optima");
  dia->add_option("input", c.input, "Model or instance file")->required();
  dia->add_option("--variant", variant, "full or conjugate")->check(CLI::IsMember({"full", "conjugate"}));
  dia->add_option("--epsilon", epsilon, "Penalty weight NUM/DEN");
  add_common(dia);

  auto* points = app.add_subcommand("points", "Enumerate diameter-polytope points");
  auto* dim = app.add_subcommand("dim", "Affine dimension of a diameter polytope");
  auto* facet = app.add_subcommand("check-facet", "Certify inequalities on a diameter polytope");
  for (auto* sub : {points, dim, facet}) {
    sub->add_option("input", c.input, "Model file (raw problems)");
    sub->add_option("--n", c.size, "Item/city count for LOP/TSP polytopes");
    sub->add_flag("--long", c.long_mode, "Allow long-running sizes");
    add_common(sub);
  }
  facet->add_option("--inequality", c.inequality, "JSON inequality or list")->required();

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("suite", c.suite, "dimensions|facets|epsilon|lifting|kendall|discordant|disjoint|solver|all")
      ->check(CLI::IsMember({"dimensions", "facets", "epsilon", "lifting", "kendall", "discordant", "disjoint", "solver", "all"}));
  verify->add_option("--seed", c.seed, "Seed for randomized suites");
  verify->add_option("--trials", c.trials, "Trials per randomized suite")->check(CLI::PositiveNumber);
  verify->add_flag("--long", c.long_mode, "Include long-running scopes");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kParseFailure;
  }

  try {
    c.command = app.get_subcommands().front()->get_name();
    c.problem = problem == "lop" ? Problem::Lop : problem == "tsp" ? Problem::Tsp : Problem::Raw;
    if (!variant.empty()) c.variant = variant_from_string(variant);
    if (!epsilon.empty()) {
      c.epsilon = Rational::parse(epsilon);
      if (c.epsilon->sign() <= 0) throw ParseError("--epsilon must be positive");
    }

    CommandOutput result;
    if (c.command == "solve") result = cmd_solve(c);
    else if (c.command == "diameter") result = cmd_diameter(c);
    else if (c.command == "points") result = cmd_points(c);
    else if (c.command == "dim") result = cmd_dim(c);
    else if (c.command == "check-facet") result = cmd_check_facet(c);
    else result = cmd_verify(c);

    std::string body = result.text;
    if (body.empty()) body = c.format == "text" ? render_text(result.report) : result.report.dump(2) + "\n";
    if (c.out.empty()) {
      out << body;
    } else {
      std::ofstream file(c.out, std::ios::binary);
      if (!file) throw Error("cannot write " + c.out);
      file << body;
    }
    return result.exit_code;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParseFailure;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const CapExceededError& e) {
    err << "cap exceeded: " << e.what() << '\n';
    return kCapExceeded;
  } catch (const DimensionError& e) {
    err << "input error: " << e.what() << '\n';
    return kParseFailure;
  } catch (const EncodingError& e) {
    err << "input error: " << e.what() << '\n';
    return kParseFailure;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << '\n';
    return kParseFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kVerificationFailure;
  }
}

}  // namespace diapoly::cli
