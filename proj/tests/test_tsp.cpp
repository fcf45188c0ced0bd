#include <filesystem>
#include <fstream>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "diapoly/errors.hpp"
#include "diapoly/tsp.hpp"
#include "support/oracles.hpp"

using namespace diapoly;

namespace {

std::size_t subset_rows(int n) {
  std::size_t c = 0;
  for (int mask = 0; mask < (1 << n); ++mask) {
    const int size = __builtin_popcount(static_cast<unsigned>(mask));
    c += size >= 2 && size <= n - 1;
  }
  return c;
}

std::size_t e(std::size_t n, std::size_t i, std::size_t j) { return tsp::edge_index(n, i - 1, j - 1); }

std::set<oracle::Edge> edges_of(const Assignment& x, std::size_t n) {
  std::set<oracle::Edge> out;
  for (std::size_t k = 0; k < x.size(); ++k)
    if (x[k]) {
      const auto [i, j] = tsp::edge_endpoints(n, k);
      out.insert({static_cast<int>(i + 1), static_cast<int>(j + 1)});
    }
  return out;
}

}  // namespace

TEST_CASE("TSP model sizes") {
  for (int n : {3, 4, 5}) {
    const BinaryProgram bp = tsp::build(tsp::TspInstance(static_cast<std::size_t>(n)));
    CHECK(bp.num_variables() == static_cast<std::size_t>(n * (n - 1) / 2));
    CHECK(bp.num_constraints() == static_cast<std::size_t>(n) + subset_rows(n));
  }
  CHECK(subset_rows(4) == 10);
  CHECK(subset_rows(5) == 25);
  CHECK(subset_rows(3) == 3);
  CHECK_THROWS_AS(tsp::TspInstance(2), std::invalid_argument);
}

TEST_CASE("TSP rows and objective") {
  tsp::TspInstance inst(4);
  inst.set_cost(1, 2, 7);
  inst.set_cost(4, 3, Rational(mpz_class(1), mpz_class(2)));
  const BinaryProgram bp = tsp::build(inst);
  CHECK(bp.variable_names() == std::vector<std::string>{"x_1_2", "x_1_3", "x_1_4", "x_2_3", "x_2_4", "x_3_4"});
  CHECK(bp.objective()[0] == -7);
  CHECK(bp.objective()[5] == Rational(mpz_class(-1), mpz_class(2)));
  CHECK(bp.constraints()[0].coefficients == RatVector{1, 1, 1, 0, 0, 0});
  CHECK(bp.constraints()[0].sense == Sense::Equal);
  CHECK(bp.constraints()[0].rhs == 2);
  // first subtour row: A = {1, 2}
  CHECK(bp.constraints()[4].coefficients == RatVector{1, 0, 0, 0, 0, 0});
  CHECK(bp.constraints()[4].rhs == 1);
  // last subtour row: A = {2, 3, 4}
  CHECK(bp.constraints().back().coefficients == RatVector{0, 0, 0, 1, 1, 1});
  CHECK(bp.constraints().back().rhs == 2);
}

TEST_CASE("TSP build refuses sizes above the cap") {
  CHECK_THROWS_AS(tsp::build(tsp::TspInstance(11)), CapExceededError);
  CHECK_THROWS_AS(tsp::build(tsp::TspInstance(6), 5), CapExceededError);
  CHECK_NOTHROW(tsp::build(tsp::TspInstance(6), 6));
}

TEST_CASE("edge indexing") {
  for (std::size_t n : {3, 5, 7}) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        CHECK(tsp::edge_index(n, i, j) == k);
        CHECK(tsp::edge_index(n, j, i) == k);
        CHECK(tsp::edge_endpoints(n, k) == std::make_pair(i, j));
        ++k;
      }
  }
}

TEST_CASE("tour incidence vectors") {
  const Assignment a = tsp::tour_to_incidence({1, 2, 3, 4});
  CHECK(edges_of(a, 4) == std::set<oracle::Edge>{{1, 2}, {2, 3}, {3, 4}, {1, 4}});
  const Assignment b = tsp::tour_to_incidence({1, 3, 2, 4});
  CHECK(edges_of(b, 4) == std::set<oracle::Edge>{{1, 3}, {2, 3}, {2, 4}, {1, 4}});
  CHECK(tsp::tour_to_incidence({2, 1, 3}) == Assignment{1, 1, 1});
  CHECK(a[e(4, 1, 2)] == 1);
}

TEST_CASE("tours are canonicalized") {
  CHECK(tsp::canonical_tour({3, 4, 1, 2}) == tsp::Tour{1, 2, 3, 4});
  CHECK(tsp::canonical_tour({1, 4, 3, 2}) == tsp::Tour{1, 2, 3, 4});
  CHECK(tsp::canonical_tour({2, 1, 5, 3, 4}) == tsp::Tour{1, 2, 4, 3, 5});
  CHECK_THROWS_AS(tsp::canonical_tour({1, 2}), EncodingError);
  CHECK_THROWS_AS(tsp::canonical_tour({1, 2, 2}), EncodingError);
  CHECK_THROWS_AS(tsp::canonical_tour({1, 2, 4}), EncodingError);
}

TEST_CASE("tour enumeration and maps are mutually inverse") {
  for (int n : {3, 4, 5, 6}) {
    const auto tours = tsp::enumerate_tours(static_cast<std::size_t>(n));
    const auto reference = oracle::tour_edge_sets(n);
    CHECK(tours.size() == reference.size());
    const BinaryProgram bp = tsp::build(tsp::TspInstance(static_cast<std::size_t>(n)));
    std::set<std::set<oracle::Edge>> seen;
    for (const auto& t : tours) {
      const Assignment x = tsp::tour_to_incidence(t);
      CHECK(is_feasible(bp, x));
      CHECK(tsp::incidence_to_tour(x, static_cast<std::size_t>(n)) == t);
      seen.insert(edges_of(x, static_cast<std::size_t>(n)));
    }
    CHECK(seen.size() == reference.size());
  }
  for (int n : {4, 5}) CHECK(oracle::feasible_set(tsp::build(tsp::TspInstance(static_cast<std::size_t>(n)))) ==
                              tsp::feasible_points(static_cast<std::size_t>(n)));
}

TEST_CASE("incidence decoding rejects non-tours") {
  // two triangles on 6 vertices
  Assignment x(15);
  for (auto [i, j] : {std::pair{1, 2}, {2, 3}, {1, 3}, {4, 5}, {5, 6}, {4, 6}}) x[e(6, i, j)] = 1;
  CHECK_THROWS_AS(tsp::incidence_to_tour(x, 6), EncodingError);
  CHECK_THROWS_AS(tsp::incidence_to_tour(Assignment(6, 1), 4), EncodingError);
  CHECK_THROWS_AS(tsp::incidence_to_tour(Assignment(5, 0), 4), EncodingError);
}

TEST_CASE("discordant edge examples") {
  const tsp::Tour t{1, 2, 3, 4, 5};
  CHECK(tsp::discordant_edges(t, t) == 0);
  CHECK(tsp::discordant_edges(t, {1, 3, 5, 2, 4}) == 10);
  CHECK(tsp::discordant_edges({1, 2, 3, 4}, {1, 3, 2, 4}) ==
        static_cast<std::size_t>(oracle::symmetric_difference(oracle::cycle_edges({1, 2, 3, 4}), oracle::cycle_edges({1, 3, 2, 4}))));
  CHECK(tsp::discordant_edges({1, 2, 3, 4}, {1, 3, 2, 4}) == 4);
  CHECK(tsp::edges_missing_from({1, 2, 3, 4}, {1, 3, 2, 4}) == 2);
  CHECK_THROWS_AS(tsp::discordant_edges({1, 2, 3}, {1, 2, 3, 4}), DimensionError);
}

TEST_CASE("squared distance equals the discordant edge count") {
  for (int n : {4, 5, 6}) {
    const auto tours = tsp::enumerate_tours(static_cast<std::size_t>(n));
    for (const auto& a : tours)
      for (const auto& b : tours) {
        const auto d = tsp::discordant_edges(a, b);
        REQUIRE(static_cast<int>(d) == oracle::symmetric_difference(oracle::cycle_edges(a), oracle::cycle_edges(b)));
        REQUIRE(oracle::hamming(tsp::tour_to_incidence(a), tsp::tour_to_incidence(b)) == static_cast<int>(d));
        REQUIRE(2 * tsp::edges_missing_from(a, b) == d);
      }
  }
}

TEST_CASE("diameter equals the largest discordant edge count") {
  const auto zero = tsp::cross_check_diameter(tsp::TspInstance(5));
  CHECK(zero.via_program == 10);
  CHECK(zero.via_oracle == 10);

  tsp::TspInstance unique(4);
  unique.set_cost(1, 3, 5);
  unique.set_cost(2, 4, 5);
  unique.set_cost(1, 2, 1);
  const auto u = tsp::cross_check_diameter(unique);
  CHECK(u.via_program == 0);
  CHECK(u.agrees());

  std::mt19937_64 rng(66);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = t % 2 == 0 ? 5 : 6;
    const tsp::TspInstance inst = tsp::random_instance(rng, n, 1, 9);
    const auto c = tsp::cross_check_diameter(inst);
    CHECK(c.agrees());
    // oracle: max symmetric difference over optimal tours
    const auto tours = tsp::enumerate_tours(n);
    std::optional<Rational> best;
    for (const auto& tour : tours) {
      const Rational cost = tsp::tour_cost(inst, tour);
      if (!best || cost < *best) best = cost;
    }
    int max_d = 0;
    for (const auto& a : tours)
      for (const auto& b : tours)
        if (tsp::tour_cost(inst, a) == *best && tsp::tour_cost(inst, b) == *best)
          max_d = std::max(max_d, oracle::symmetric_difference(oracle::cycle_edges(a), oracle::cycle_edges(b)));
    CHECK(c.via_program == max_d);
  }
  CHECK(tsp::verify_diameter_discordant(tsp::TspInstance(6)));
  CHECK_THROWS_AS(tsp::cross_check_diameter(tsp::TspInstance(9)), CapExceededError);
}

TEST_CASE("disjoint tours") {
  const auto c5 = tsp::find_disjoint_tour({1, 2, 3, 4, 5});
  REQUIRE(c5.has_value());
  CHECK(*c5 == tsp::Tour{1, 3, 5, 2, 4});
  for (const auto& t : tsp::enumerate_tours(5)) {
    const auto d = tsp::find_disjoint_tour(t);
    REQUIRE(d.has_value());
    CHECK(tsp::discordant_edges(t, *d) == 10);
  }
  for (const auto& t : tsp::enumerate_tours(4)) CHECK_FALSE(tsp::find_disjoint_tour(t).has_value());
  CHECK_FALSE(tsp::find_disjoint_tour({1, 2, 3}).has_value());

  std::mt19937_64 rng(7);
  for (std::size_t n : {6, 7, 8}) {
    for (int t = 0; t < 20; ++t) {
      const tsp::Tour tour = tsp::random_tour(rng, n);
      const auto d = tsp::find_disjoint_tour(tour);
      REQUIRE(d.has_value());
      CHECK(tsp::discordant_edges(tour, *d) == 2 * n);
      const auto a = oracle::cycle_edges(tour);
      for (const auto& edge : oracle::cycle_edges(*d)) CHECK_FALSE(a.count(edge));
    }
  }
}

TEST_CASE("Hamiltonian cycle search") {
  std::vector<std::vector<bool>> k4(4, std::vector<bool>(4, true));
  for (std::size_t i = 0; i < 4; ++i) k4[i][i] = false;
  CHECK(tsp::hamiltonian_cycle(k4) == tsp::Tour{1, 2, 3, 4});
  // a star has no Hamiltonian cycle
  std::vector<std::vector<bool>> star(4, std::vector<bool>(4, false));
  for (std::size_t i = 1; i < 4; ++i) star[0][i] = star[i][0] = true;
  CHECK_FALSE(tsp::hamiltonian_cycle(star).has_value());
  std::vector<std::vector<bool>> asym(3, std::vector<bool>(3, false));
  asym[0][1] = true;
  CHECK_THROWS_AS(tsp::hamiltonian_cycle(asym), std::invalid_argument);
}

TEST_CASE("TSP dimensions") {
  CHECK(hull_dimension(tsp::diameter_points(4)) == 10);
  CHECK(hull_dimension(tsp::diameter_points(5)) == 20);
}

TEST_CASE("TSP instance JSON") {
  const auto inst = tsp::instance_from_json(nlohmann::json::parse(R"({"n": 4, "costs": [[1, 2, 3, 1], [4, 2, 1, 2]]})"));
  CHECK(inst.cost(1, 2) == 3);
  CHECK(inst.cost(2, 4) == Rational(mpz_class(1), mpz_class(2)));
  CHECK(inst.cost(2, 1) == 3);
  const auto back = tsp::instance_from_json(tsp::instance_to_json(inst));
  CHECK(back.cost(4, 2) == inst.cost(4, 2));
  CHECK_THROWS_AS(tsp::instance_from_json(nlohmann::json::parse(R"({"n": 2})")), ParseError);
  CHECK_THROWS_AS(tsp::instance_from_json(nlohmann::json::parse(R"({"n": 4, "costs": [[2, 2, 1, 1]]})")), ParseError);
  CHECK_THROWS_AS(tsp::instance_from_json(nlohmann::json::parse(R"({"n": 4, "costs": [[1, 2]]})")), ParseError);
}

TEST_CASE("TSPLIB full matrices") {
  const std::string text =
      "NAME: t\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: FULL_MATRIX\n"
      "EDGE_WEIGHT_SECTION\n0 1 2\n1 0 3\n2 3 0\nEOF\n";
  const auto inst = tsp::instance_from_tsplib(text);
  CHECK(inst.size() == 3);
  CHECK(inst.cost(2, 3) == 3);
  CHECK(tsp::tour_cost(inst, {1, 2, 3}) == 6);

  CHECK_THROWS_AS(tsp::instance_from_tsplib("DIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\n"), ParseError);
  CHECK_THROWS_AS(tsp::instance_from_tsplib("DIMENSION: 3\nEDGE_WEIGHT_FORMAT: UPPER_ROW\n"), ParseError);
  CHECK_THROWS_AS(tsp::instance_from_tsplib("DIMENSION: 3\nEDGE_WEIGHT_SECTION\n0 1 2\n1 0 3\n"), ParseError);
  CHECK_THROWS_AS(tsp::instance_from_tsplib("DIMENSION: 3\nEDGE_WEIGHT_SECTION\n0 1 2\n5 0 3\n2 3 0\n"), ParseError);

  const auto path = std::filesystem::temp_directory_path() / "diapoly_tsp_test.tsp";
  std::ofstream(path) << text;
  CHECK(tsp::load_instance(path.string()).cost(1, 3) == 2);
  std::filesystem::remove(path);
}
