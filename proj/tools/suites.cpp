#include "suites.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "diapoly/diameter.hpp"
#include "diapoly/lop.hpp"
#include "diapoly/polytope.hpp"
#include "diapoly/random_model.hpp"
#include "diapoly/solver.hpp"
#include "diapoly/tsp.hpp"

namespace diapoly::cli {

namespace {

using Records = std::vector<ClaimRecord>;

int trials_or(const SuiteOptions& o, int fallback) { return o.trials ? *o.trials : fallback; }

PointSet base_point_set(std::size_t m, const std::vector<Assignment>& points, const std::string& source) {
  PointSet ps(m, source);
  for (const auto& p : points) ps.add(p);
  ps.normalize();
  return ps;
}

Inequality unit_bound(std::size_t m, std::size_t k, bool upper, const std::vector<std::string>& names) {
  Inequality q{RatVector(m), Rational(upper ? 1 : 0), upper ? Sense::LessEqual : Sense::GreaterEqual,
               names[k] + (upper ? "<=1" : ">=0")};
  q.a[k] = 1;
  return q;
}

/// Candidates that certify as facets of the base polytope.
std::vector<Inequality> certified(const PointSet& base, const std::vector<Inequality>& candidates) {
  const int dim = hull_dimension(base);
  std::vector<Inequality> out;
  for (const auto& c : candidates)
    if (check_inequality(base, c, dim).is_facet) out.push_back(c);
  return out;
}

std::vector<Inequality> lop_base_facets(std::size_t n) {
  const BinaryProgram bp = lop::build(lop::LopInstance(n));
  const std::size_t m = bp.num_variables();
  std::vector<Inequality> candidates;
  for (std::size_t k = 0; k < m; ++k) {
    candidates.push_back(unit_bound(m, k, false, bp.variable_names()));
    candidates.push_back(unit_bound(m, k, true, bp.variable_names()));
  }
  for (const auto& row : bp.constraints())
    if (row.sense == Sense::LessEqual) candidates.push_back({row.coefficients, row.rhs, row.sense, row.name});
  return certified(base_point_set(m, lop::feasible_points(n), "lop-base"), candidates);
}

std::vector<Inequality> tsp_base_facets(std::size_t n) {
  const BinaryProgram bp = tsp::build(tsp::TspInstance(n));
  const std::size_t m = bp.num_variables();
  std::vector<Inequality> candidates;
  for (std::size_t k = 0; k < m; ++k) {
    candidates.push_back(unit_bound(m, k, false, bp.variable_names()));
    candidates.push_back(unit_bound(m, k, true, bp.variable_names()));
  }
  for (const auto& row : bp.constraints())
    if (row.sense == Sense::LessEqual) candidates.push_back({row.coefficients, row.rhs, row.sense, row.name});
  return certified(base_point_set(m, tsp::feasible_points(n), "tsp-base"), candidates);
}

ClaimRecord dimension_claim(const std::string& claim, const PointSet& ps, int expected) {
  const int dim = hull_dimension(ps);
  return {"dimensions", claim, dim == expected,
          {{"points", ps.size()}, {"dimension", dim}, {"expected", expected}}};
}

Records suite_dimensions(const SuiteOptions& o) {
  Records out;
  for (std::size_t n : {2, 3}) {
    const PointSet ps = lop::diameter_points(n);
    out.push_back(dimension_claim("lop n=" + std::to_string(n) + " dim = 2n(n-1)", ps, static_cast<int>(2 * n * (n - 1))));
    EquationSystem sym;
    const BinaryProgram bp = lop::build(lop::LopInstance(n));
    sym.matrix = RatMatrix(0, bp.num_variables());
    for (const auto& row : bp.constraints())
      if (row.sense == Sense::Equal) {
        sym.matrix.append_row(row.coefficients);
        sym.rhs.push_back(row.rhs);
      }
    const EquationSystem lifted = lift_equation_system(sym, bp.num_variables());
    out.push_back({"dimensions", "lop n=" + std::to_string(n) + " lifted system is minimal",
                   verify_minimal_system(ps, lifted), {{"equations", lifted.size()}}});
  }
  if (o.long_mode) {
    const PointSet ps = lop::diameter_points(4);
    auto rec = dimension_claim("lop n=4 dim = 24", ps, 24);
    rec.passed = rec.passed && ps.size() == 483840;
    rec.detail["expected_points"] = 483840;
    out.push_back(std::move(rec));
  }
  for (std::size_t n : {4, 5}) {
    const PointSet ps = tsp::diameter_points(n);
    out.push_back(dimension_claim("tsp n=" + std::to_string(n) + " dim = (3n^2-7n)/2", ps,
                                  static_cast<int>((3 * n * n - 7 * n) / 2)));
    const EquationSystem lifted = lift_equation_system(tsp::degree_system(n), tsp::num_edges(n));
    out.push_back({"dimensions", "tsp n=" + std::to_string(n) + " lifted degree system is minimal",
                   verify_minimal_system(ps, lifted), {{"equations", lifted.size()}}});
  }
  return out;
}

ClaimRecord family_claim(const std::string& claim, const PointSet& ps, std::size_t m,
                         const std::vector<Inequality>& base_facets) {
  const int dim = hull_dimension(ps);
  std::size_t certified_count = 0;
  nlohmann::json failures = nlohmann::json::array();
  const auto family = facet_families(m, base_facets);
  for (const auto& t : family) {
    const FacetReport r = check_inequality(ps, t.inequality, dim);
    if (r.is_facet) {
      ++certified_count;
    } else {
      failures.push_back({{"label", t.inequality.label}, {"family", to_string(t.family)}, {"report", facet_report_to_json(r)}});
    }
  }
  return {"facets", claim, failures.empty(),
          {{"base_facets", base_facets.size()},
           {"inequalities", family.size()},
           {"certified", certified_count},
           {"failures", std::move(failures)}}};
}

Records suite_facets(const SuiteOptions&) {
  Records out;
  out.push_back(family_claim("lop n=3 facet families", lop::diameter_points(3), lop::num_pair_variables(3),
                             lop_base_facets(3)));
  out.push_back(family_claim("tsp n=5 facet families", tsp::diameter_points(5), tsp::num_edges(5), tsp_base_facets(5)));

  const PointSet p4 = tsp::diameter_points(4);
  const int dim = hull_dimension(p4);
  const std::size_t m = tsp::num_edges(4);
  auto e = [](std::size_t i, std::size_t j) { return tsp::edge_index(4, i - 1, j - 1); };
  const std::pair<std::size_t, std::string> last[] = {{e(2, 3), "z23"}, {e(1, 4), "z14"}};
  for (const auto& [z, name] : last) {
    Inequality q{RatVector(3 * m), Rational(3), Sense::GreaterEqual, "x12+x13+y12+y24+" + name + ">=3"};
    q.a[e(1, 2)] = 1;
    q.a[e(1, 3)] = 1;
    q.a[m + e(1, 2)] = 1;
    q.a[m + e(2, 4)] = 1;
    q.a[2 * m + z] = 1;
    const FacetReport r = check_inequality(p4, q, dim);
    out.push_back({"facets", "tsp n=4 " + q.label, r.valid && r.is_facet, facet_report_to_json(r)});
  }
  return out;
}

Records suite_epsilon(const SuiteOptions& o) {
  Records out;
  std::mt19937_64 rng(o.seed);
  RandomModelOptions mo;
  mo.max_variables = 10;
  mo.max_rows = 6;
  const int trials = trials_or(o, 50);
  int failures = 0;
  nlohmann::json failed = nlohmann::json::array();
  for (int t = 0; t < trials; ++t) {
    const BinaryProgram bp = random_model(rng, mo);
    const EpsilonChoice eps = choose_epsilon(bp);
    const auto dp = build_diameter_program(bp, eps, Variant::Full);
    const auto r = solve_diameter(dp);
    const auto optima = enumerate_optimal_set(bp);
    auto in_opt = [&](const Assignment& x) {
      return std::any_of(optima.begin(), optima.end(), [&](const Solution& s) { return s.assignment == x; });
    };
    const std::int64_t oracle = diameter_by_enumeration(bp);
    const bool ok = eps.justification() == EpsilonRule::IntegerRule &&
                    eps.value() == Rational(1) / Rational(static_cast<long long>(2 * bp.num_variables())) && in_opt(r.x_star) &&
                    in_opt(r.y_star) && r.diameter == oracle && verify_z_semantics(r) && r.certified;
    if (!ok) {
      ++failures;
      failed.push_back({{"trial", t}, {"n", bp.num_variables()}, {"diameter", r.diameter}, {"oracle", oracle}});
    }
  }
  out.push_back({"epsilon", "integer rule 1/(2n) recovers the diameter (full variant)", failures == 0,
                 {{"trials", trials}, {"failures", std::move(failed)}}});
  return out;
}

Records suite_lifting(const SuiteOptions& o) {
  Records out;
  const PointSet p2 = lop::diameter_points(2);
  const PointSet p3 = lop::diameter_points(3);
  const int d2 = hull_dimension(p2);
  const int d3 = hull_dimension(p3);

  // every facet with coefficients in {-1, 0, 1}, plus the family output
  std::vector<Inequality> facets;
  const std::size_t amb = p2.ambient();
  std::vector<int> coef(amb, -1);
  for (;;) {
    if (std::any_of(coef.begin(), coef.end(), [](int c) { return c != 0; })) {
      Inequality q{RatVector(amb), Rational(0), Sense::LessEqual, "search"};
      for (std::size_t k = 0; k < amb; ++k) q.a[k] = coef[k];
      std::optional<Rational> best;
      for (std::size_t i = 0; i < p2.size(); ++i) {
        Rational v;
        for (std::size_t k = 0; k < amb; ++k)
          if (p2.point(i)[k]) v += q.a[k];
        if (!best || v > *best) best = v;
      }
      q.a0 = *best;
      if (check_inequality(p2, q, d2).is_facet) facets.push_back(std::move(q));
    }
    std::size_t k = 0;
    while (k < amb && coef[k] == 1) coef[k++] = -1;
    if (k == amb) break;
    ++coef[k];
  }
  for (auto& t : facet_families(lop::num_pair_variables(2), lop_base_facets(2)))
    if (check_inequality(p2, t.inequality, d2).is_facet) facets.push_back(t.inequality);

  std::size_t lifted_ok = 0;
  for (const auto& f : facets)
    if (check_inequality(p3, lop::lift_inequality(f, 2), d3).is_facet) ++lifted_ok;
  out.push_back({"lifting", "every certified facet of P^2 lifts to a facet of P^3", lifted_ok == facets.size() && !facets.empty(),
                 {{"facets", facets.size()}, {"lifted_facets", lifted_ok}}});

  if (o.long_mode) {
    const PointSet p4 = lop::diameter_points(4);
    const int d4 = hull_dimension(p4);
    std::size_t total = 0;
    std::size_t ok = 0;
    for (const auto& t : facet_families(lop::num_pair_variables(3), lop_base_facets(3))) {
      ++total;
      if (check_inequality(p4, lop::lift_inequality(t.inequality, 3), d4).is_facet) ++ok;
    }
    out.push_back({"lifting", "facet families of P^3 lift to facets of P^4", ok == total,
                   {{"facets", total}, {"lifted_facets", ok}}});
  }
  return out;
}

Records suite_kendall(const SuiteOptions& o) {
  Records out;
  {
    const auto c = lop::cross_check_diameter(lop::LopInstance(3));
    out.push_back({"kendall", "lop n=3 zero weights", c.agrees() && c.via_program == 6,
                   {{"program", c.via_program}, {"oracle", c.via_oracle}}});
  }
  std::mt19937_64 rng(o.seed + 1);
  const int trials = trials_or(o, 20);
  int agree = 0;
  nlohmann::json values = nlohmann::json::array();
  for (int t = 0; t < trials; ++t) {
    const auto c = lop::cross_check_diameter(lop::random_instance(rng, 4, -5, 5));
    agree += c.agrees();
    values.push_back({c.via_program, c.via_oracle});
  }
  out.push_back({"kendall", "lop n=4 random weights: dia = 2 max Kendall tau", agree == trials,
                 {{"trials", trials}, {"agreements", agree}, {"values", std::move(values)}}});
  return out;
}

Records suite_discordant(const SuiteOptions& o) {
  Records out;
  {
    const auto c = tsp::cross_check_diameter(tsp::TspInstance(5));
    out.push_back({"discordant", "tsp n=5 zero costs", c.agrees() && c.via_program == 10,
                   {{"program", c.via_program}, {"oracle", c.via_oracle}}});
  }
  std::mt19937_64 rng(o.seed + 2);
  const int trials = trials_or(o, 20);
  int agree = 0;
  nlohmann::json values = nlohmann::json::array();
  for (int t = 0; t < trials; ++t) {
    const std::size_t n = t % 2 == 0 ? 5 : 6;
    const auto c = tsp::cross_check_diameter(tsp::random_instance(rng, n, 1, 9));
    agree += c.agrees();
    values.push_back({n, c.via_program, c.via_oracle});
  }
  out.push_back({"discordant", "tsp n in {5,6} random costs: dia = max discordant edges", agree == trials,
                 {{"trials", trials}, {"agreements", agree}, {"values", std::move(values)}}});
  return out;
}

bool disjoint_ok(const tsp::Tour& t) {
  const auto d = tsp::find_disjoint_tour(t);
  return d && tsp::discordant_edges(t, *d) == 2 * t.size();
}

Records suite_disjoint(const SuiteOptions& o) {
  Records out;
  {
    const auto tours = tsp::enumerate_tours(5);
    const auto ok = std::count_if(tours.begin(), tours.end(), disjoint_ok);
    out.push_back({"disjoint", "n=5 every tour has an edge-disjoint tour", ok == static_cast<long>(tours.size()),
                   {{"tours", tours.size()}, {"succeeded", ok}}});
  }
  std::mt19937_64 rng(o.seed + 3);
  const int trials = trials_or(o, 20);
  for (std::size_t n : {6, 7}) {
    int ok = 0;
    for (int t = 0; t < trials; ++t) ok += disjoint_ok(tsp::random_tour(rng, n));
    out.push_back({"disjoint", "n=" + std::to_string(n) + " random tours have an edge-disjoint tour", ok == trials,
                   {{"tours", trials}, {"succeeded", ok}}});
  }
  {
    const auto tours = tsp::enumerate_tours(4);
    const bool none = std::none_of(tours.begin(), tours.end(), [](const tsp::Tour& t) { return tsp::find_disjoint_tour(t).has_value(); });
    out.push_back({"disjoint", "n=4 reports absence", none, {{"tours", tours.size()}}});
  }
  return out;
}

Records suite_solver(const SuiteOptions& o) {
  std::mt19937_64 rng(o.seed + 4);
  RandomModelOptions mo;
  mo.max_variables = 12;
  const int trials = trials_or(o, 100);
  int agree = 0;
  int infeasible = 0;
  mo.ensure_feasible = false;
  for (int t = 0; t < trials; ++t) {
    const BinaryProgram bp = random_model(rng, mo);
    const SolveReport a = solve_bnb(bp);
    const SolveReport b = solve_enumerate(bp);
    const bool same = a.status == b.status &&
                      (a.status == SolveStatus::Infeasible || a.best->objective_value == b.best->objective_value);
    agree += same;
    infeasible += b.status == SolveStatus::Infeasible;
  }
  return {{"solver", "branch and bound matches enumeration", agree == trials,
           {{"trials", trials}, {"agreements", agree}, {"infeasible_models", infeasible}}}};
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"dimensions", "facets", "epsilon", "lifting",
                                              "kendall", "discordant", "disjoint", "solver"};
  return names;
}

std::vector<ClaimRecord> run_suite(const std::string& name, const SuiteOptions& options) {
  if (name == "all") {
    Records all;
    for (const auto& s : suite_names()) {
      auto part = run_suite(s, options);
      all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return all;
  }
  if (name == "dimensions") return suite_dimensions(options);
  if (name == "facets") return suite_facets(options);
  if (name == "epsilon") return suite_epsilon(options);
  if (name == "lifting") return suite_lifting(options);
  if (name == "kendall") return suite_kendall(options);
  if (name == "discordant") return suite_discordant(options);
  if (name == "disjoint") return suite_disjoint(options);
  if (name == "solver") return suite_solver(options);
  throw std::invalid_argument("unknown verification suite '" + name + "'");
}

nlohmann::json records_to_json(const std::vector<ClaimRecord>& records) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : records)
    out.push_back({{"suite", r.suite}, {"claim", r.claim}, {"passed", r.passed}, {"detail", r.detail}});
  return out;
}

}  // namespace diapoly::cli
