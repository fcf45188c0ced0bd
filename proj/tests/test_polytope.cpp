#include <random>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "diapoly/errors.hpp"
#include "diapoly/lop.hpp"
#include "diapoly/polytope.hpp"
#include "diapoly/random_model.hpp"
#include "diapoly/tsp.hpp"
#include "support/oracles.hpp"

using namespace diapoly;

namespace {

std::vector<oracle::Bits> as_bits(const PointSet& ps) {
  std::vector<oracle::Bits> out;
  for (std::size_t i = 0; i < ps.size(); ++i) out.emplace_back(ps.point(i).begin(), ps.point(i).end());
  return out;
}

EquationSystem lop_symmetry(std::size_t n) {
  const BinaryProgram bp = lop::build(lop::LopInstance(n));
  EquationSystem sys{RatMatrix(0, bp.num_variables()), {}};
  for (const auto& row : bp.constraints())
    if (row.sense == Sense::Equal) {
      sys.matrix.append_row(row.coefficients);
      sys.rhs.push_back(row.rhs);
    }
  return sys;
}

Inequality unit(std::size_t ambient, std::size_t k, Rational a0, Sense s) {
  Inequality q{RatVector(ambient), std::move(a0), s, {}};
  q.a[k] = 1;
  return q;
}

Inequality tsp4_extra(std::size_t z_i, std::size_t z_j) {
  const std::size_t m = 6;
  auto e = [](std::size_t i, std::size_t j) { return tsp::edge_index(4, i - 1, j - 1); };
  Inequality q{RatVector(3 * m), 3, Sense::GreaterEqual, {}};
  q.a[e(1, 2)] = 1;
  q.a[e(1, 3)] = 1;
  q.a[m + e(1, 2)] = 1;
  q.a[m + e(2, 4)] = 1;
  q.a[2 * m + e(z_i, z_j)] = 1;
  return q;
}

}  // namespace

TEST_CASE("LOP n=2 diameter polytope points match a raw scan") {
  const BinaryProgram bp = lop::build(lop::LopInstance(2));
  const auto raw = oracle::raw_diameter_points(bp);
  const PointSet ps = lop::diameter_points(2);
  CHECK(raw.size() == 12);
  CHECK(as_bits(ps) == raw);
}

TEST_CASE("TSP n=4 diameter polytope points match a raw scan") {
  const BinaryProgram bp = tsp::build(tsp::TspInstance(4));
  const auto raw = oracle::raw_diameter_points(bp);
  const PointSet ps = tsp::diameter_points(4);
  CHECK(as_bits(ps) == raw);
  CHECK(ps.size() == 108);
}

TEST_CASE("point enumeration from a diameter program") {
  const BinaryProgram bp = lop::build(lop::LopInstance(3));
  const auto dp = build_diameter_program(bp, choose_epsilon(bp), Variant::Conjugate);
  const PointSet generic = enumerate_points(dp);
  const PointSet structured = enumerate_points(dp, lop::feasible_points(3));
  CHECK(as_bits(generic) == as_bits(structured));
  CHECK(as_bits(generic) == as_bits(lop::diameter_points(3)));

  const auto full = build_diameter_program(bp, choose_epsilon(bp), Variant::Full);
  CHECK_THROWS_AS(enumerate_points(full), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_points(dp, std::vector<Assignment>{Assignment(6, 1)}), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_points(dp, std::size_t{4}), CapExceededError);
}

TEST_CASE("point enumeration matches a raw scan on random models") {
  std::mt19937_64 rng(17);
  RandomModelOptions o;
  o.max_variables = 5;
  for (int t = 0; t < 15; ++t) {
    const BinaryProgram bp = random_model(rng, o);
    const auto dp = build_diameter_program(bp, choose_epsilon(bp), Variant::Conjugate);
    CHECK(as_bits(enumerate_points(dp)) == oracle::raw_diameter_points(bp));
  }
}

TEST_CASE("point sets are sorted and deduplicated") {
  PointSet ps(2);
  ps.add(Assignment{1, 0});
  ps.add(Assignment{0, 1});
  ps.add(Assignment{1, 0});
  ps.normalize();
  REQUIRE(ps.size() == 2);
  CHECK(ps.point(0)[1] == 1);
  CHECK_THROWS_AS(ps.add(Assignment{1}), DimensionError);
  CHECK_THROWS_AS(PointSet(0), DimensionError);
}

TEST_CASE("hull dimensions of LOP and TSP diameter polytopes") {
  const PointSet l2 = lop::diameter_points(2);
  const PointSet l3 = lop::diameter_points(3);
  const PointSet t4 = tsp::diameter_points(4);
  const PointSet t5 = tsp::diameter_points(5);
  CHECK(hull_dimension(l2) == static_cast<int>(oracle::affine_rank(as_bits(l2))));
  CHECK(hull_dimension(l2) == 4);
  CHECK(hull_dimension(l3) == 12);
  CHECK(hull_dimension(t4) == static_cast<int>(oracle::affine_rank(as_bits(t4))));
  CHECK(hull_dimension(t4) == 10);
  CHECK(hull_dimension(t5) == 20);
  CHECK_THROWS_AS(hull_dimension(PointSet(3)), std::invalid_argument);
}

TEST_CASE("dimension equals 3n minus twice the base rank") {
  const EquationSystem s3 = lop_symmetry(3);
  CHECK(hull_dimension(lop::diameter_points(3)) == static_cast<int>(18 - 2 * rank(s3.matrix)));
  const EquationSystem d5 = tsp::degree_system(5);
  CHECK(hull_dimension(tsp::diameter_points(5)) == static_cast<int>(30 - 2 * rank(d5.matrix)));
}

TEST_CASE("lifted equation systems") {
  const EquationSystem lifted = lift_equation_system(lop_symmetry(3), 6);
  CHECK(lifted.matrix.rows() == 6);
  CHECK(lifted.matrix.cols() == 18);
  CHECK(rank(lifted.matrix) == 6);
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t c = 12; c < 18; ++c) CHECK(lifted.matrix(r, c).is_zero());

  const EquationSystem empty = lift_equation_system(EquationSystem{RatMatrix(0, 4), {}}, 4);
  CHECK(empty.size() == 0);

  const EquationSystem deg = lift_equation_system(tsp::degree_system(5), 10);
  CHECK(deg.matrix.rows() == 10);
  CHECK(deg.matrix.cols() == 30);
  CHECK(rank(deg.matrix) == 10);
  CHECK(deg.rhs == RatVector(10, 2));

  CHECK_THROWS_AS(lift_equation_system(lop_symmetry(3), 5), DimensionError);
}

TEST_CASE("minimal equation systems") {
  const PointSet l3 = lop::diameter_points(3);
  const EquationSystem lifted = lift_equation_system(lop_symmetry(3), 6);
  CHECK(verify_minimal_system(l3, lifted));

  EquationSystem short_sys{RatMatrix(0, 18), {}};
  for (std::size_t r = 1; r < lifted.size(); ++r) {
    short_sys.matrix.append_row(lifted.matrix.row(r));
    short_sys.rhs.push_back(lifted.rhs[r]);
  }
  CHECK_FALSE(verify_minimal_system(l3, short_sys));

  EquationSystem wrong = lifted;
  wrong.rhs[0] = 2;
  CHECK_FALSE(verify_minimal_system(l3, wrong));

  CHECK(verify_minimal_system(tsp::diameter_points(5), lift_equation_system(tsp::degree_system(5), 10)));
  CHECK(verify_minimal_system(lop::diameter_points(2), lift_equation_system(lop_symmetry(2), 2)));
}

TEST_CASE("equation rows are tight from both sides") {
  const PointSet t4 = tsp::diameter_points(4);
  const EquationSystem lifted = lift_equation_system(tsp::degree_system(4), 6);
  for (std::size_t r = 0; r < lifted.size(); ++r) {
    const RatVector a(lifted.matrix.row(r).begin(), lifted.matrix.row(r).end());
    const FacetReport le = check_inequality(t4, Inequality{a, lifted.rhs[r], Sense::LessEqual, {}});
    const FacetReport ge = check_inequality(t4, Inequality{a, lifted.rhs[r], Sense::GreaterEqual, {}});
    CHECK(le.valid);
    CHECK(ge.valid);
    CHECK(le.tight_point_count == t4.size());
    CHECK(ge.tight_point_count == t4.size());
    CHECK_FALSE(le.is_facet);
  }
}

TEST_CASE("affine hull equations cut out the hull") {
  const PointSet t4 = tsp::diameter_points(4);
  const AffineHull hull = affine_hull(t4);
  CHECK(hull.dimension == 10);
  CHECK(hull.equations.size() == 8);
  CHECK(hull.basis_points.size() == 11);
  CHECK(verify_minimal_system(t4, hull.equations));
  CHECK(fixed_coordinates(t4).empty());
  CHECK(fixed_coordinates(lop::diameter_points(3)).empty());
}

TEST_CASE("facet checks on known inequalities") {
  const PointSet l3 = lop::diameter_points(3);
  const std::size_t z12 = 12 + lop::pair_index(3, 0, 1);
  const FacetReport r = check_inequality(l3, unit(18, z12, 1, Sense::LessEqual));
  CHECK(r.valid);
  CHECK(r.face_dimension == 11);
  CHECK(r.polytope_dimension == 12);
  CHECK(r.is_facet);

  const FacetReport trivial = check_inequality(l3, Inequality{RatVector(18), 1, Sense::LessEqual, {}});
  CHECK(trivial.valid);
  CHECK(trivial.tight_point_count == 0);
  CHECK(trivial.face_dimension == -1);
  CHECK_FALSE(trivial.is_facet);

  const FacetReport invalid = check_inequality(l3, unit(18, z12, 0, Sense::LessEqual));
  CHECK_FALSE(invalid.valid);
  CHECK_FALSE(invalid.is_facet);

  const PointSet t4 = tsp::diameter_points(4);
  for (const auto& q : {tsp4_extra(2, 3), tsp4_extra(1, 4)}) {
    const FacetReport e = check_inequality(t4, q);
    CHECK(e.valid);
    CHECK(e.is_facet);
    CHECK(e.face_dimension == 9);
  }
  CHECK_THROWS_AS(check_inequality(t4, unit(17, 0, 1, Sense::LessEqual)), DimensionError);
  CHECK_THROWS_AS(check_inequality(t4, unit(18, 0, 1, Sense::Equal)), std::invalid_argument);
}

TEST_CASE("facet verdict survives scaling and equation combinations") {
  const PointSet l3 = lop::diameter_points(3);
  const EquationSystem lifted = lift_equation_system(lop_symmetry(3), 6);
  std::mt19937_64 rng(6);
  const auto family = facet_families(6, {});
  std::vector<Inequality> probes;
  for (const auto& t : family) probes.push_back(t.inequality);
  probes.push_back(unit(18, 0, 1, Sense::LessEqual));  // x_12 <= 1 on P^3
  probes.push_back(Inequality{RatVector(18, 1), 18, Sense::LessEqual, {}});
  for (const auto& q : probes) {
    const FacetReport base = check_inequality(l3, q);
    Inequality moved = q;
    const Rational scale(mpz_class(static_cast<long>(1 + rng() % 5)), mpz_class(static_cast<long>(1 + rng() % 3)));
    for (auto& v : moved.a) v *= scale;
    moved.a0 *= scale;
    for (std::size_t r = 0; r < lifted.size(); ++r) {
      const Rational lambda(mpz_class(static_cast<long>(rng() % 7) - 3), mpz_class(2));
      for (std::size_t k = 0; k < 18; ++k) moved.a[k] += lambda * lifted.matrix(r, k);
      moved.a0 += lambda * lifted.rhs[r];
    }
    const FacetReport after = check_inequality(l3, moved);
    CHECK(after.valid == base.valid);
    CHECK(after.is_facet == base.is_facet);
    CHECK(after.face_dimension == base.face_dimension);
  }
}

TEST_CASE("facet families layout") {
  const auto f = facet_families(1, {});
  REQUIRE(f.size() == 3);
  CHECK(f[0].family == FacetFamily::ZLower);
  CHECK(f[0].inequality.a == RatVector{0, 0, 1});
  CHECK(f[0].inequality.sense == Sense::GreaterEqual);
  CHECK(f[1].family == FacetFamily::ZUpper);
  CHECK(f[1].inequality.a0 == 1);
  CHECK(f[2].family == FacetFamily::Coupling);
  CHECK(f[2].inequality.a == RatVector{1, 1, -1});

  const Inequality base{RatVector{1, 1}, 1, Sense::LessEqual, "b"};
  const auto g = facet_families(2, {base});
  CHECK(g.size() == 2 + 2 * 2 + 2);
  CHECK(g[0].family == FacetFamily::InheritedX);
  CHECK(g[0].inequality.a == RatVector{1, 1, 0, 0, 0, 0});
  CHECK(g[1].family == FacetFamily::InheritedY);
  CHECK(g[1].inequality.a == RatVector{0, 0, 1, 1, 0, 0});
  CHECK_THROWS_AS(facet_families(3, {base}), DimensionError);
}

TEST_CASE("LOP n=3 dicycle copies are facets") {
  const BinaryProgram bp = lop::build(lop::LopInstance(3));
  std::vector<Inequality> dicycles;
  for (const auto& row : bp.constraints())
    if (row.sense == Sense::LessEqual) dicycles.push_back({row.coefficients, row.rhs, row.sense, row.name});
  REQUIRE(dicycles.size() == 2);
  const PointSet l3 = lop::diameter_points(3);
  const int dim = hull_dimension(l3);
  for (const auto& t : facet_families(6, dicycles)) CHECK(check_inequality(l3, t.inequality, dim).is_facet);
}

TEST_CASE("TSP n=5 subtour copies are facets") {
  const BinaryProgram bp = tsp::build(tsp::TspInstance(5));
  PointSet base(10);
  for (const auto& x : tsp::feasible_points(5)) base.add(x);
  const int base_dim = hull_dimension(base);
  CHECK(base_dim == 5);
  std::vector<Inequality> subtours;
  for (const auto& row : bp.constraints()) {
    if (row.sense != Sense::LessEqual) continue;
    const Inequality q{row.coefficients, row.rhs, row.sense, row.name};
    if (check_inequality(base, q, base_dim).is_facet) subtours.push_back(q);
  }
  CHECK(subtours.size() == 20);
  const PointSet t5 = tsp::diameter_points(5);
  const int dim = hull_dimension(t5);
  for (const auto& t : facet_families(10, subtours)) CHECK(check_inequality(t5, t.inequality, dim).is_facet);
}

TEST_CASE("disjoint pair condition") {
  for (std::size_t n : {2, 3, 4}) {
    const auto r = check_disjoint_pair_condition(lop::feasible_points(n));
    CHECK(r.existential);
    CHECK(r.universal);
  }
  const auto t5 = check_disjoint_pair_condition(tsp::feasible_points(5));
  CHECK(t5.universal);
  CHECK(t5.feasible_count == 12);

  const auto t4 = check_disjoint_pair_condition(tsp::build(tsp::TspInstance(4)));
  CHECK_FALSE(t4.universal);
  CHECK_FALSE(t4.existential);
  REQUIRE(t4.counterexample.has_value());
  CHECK(std::count(t4.counterexample->begin(), t4.counterexample->end(), 1) == 4);

  const auto none = check_disjoint_pair_condition(std::vector<Assignment>{{0, 1}, {1, 1}});
  CHECK_FALSE(none.existential);
  CHECK_FALSE(none.universal);

  const auto p = check_disjoint_pair_condition(std::vector<Assignment>{{1, 0}, {0, 1}, {1, 1}});
  CHECK(p.existential);
  CHECK_FALSE(p.universal);
  CHECK(*p.counterexample == Assignment{1, 1});
}

TEST_CASE("point set exchange formats") {
  const PointSet l2 = lop::diameter_points(2);
  std::ostringstream os;
  write_point_set_text(os, l2);
  std::istringstream in(os.str());
  std::string header;
  std::getline(in, header);
  const auto h = nlohmann::json::parse(header);
  CHECK(h.at("n") == 2);
  CHECK(h.at("ambient") == 6);
  CHECK(h.at("count") == 12);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    CHECK(line.size() == 11);
    ++rows;
  }
  CHECK(rows == 12);

  const auto j = point_set_to_json(l2);
  CHECK(j.at("points").size() == 12);
  CHECK(j.at("points")[0].size() == 6);
}

TEST_CASE("inequality JSON") {
  Inequality q{RatVector{1, Rational(mpz_class(-1), mpz_class(2)), 0}, 3, Sense::GreaterEqual, "q"};
  const auto back = inequalities_from_json(inequality_to_json(q));
  REQUIRE(back.size() == 1);
  CHECK(back[0].a == q.a);
  CHECK(back[0].a0 == q.a0);
  CHECK(back[0].sense == q.sense);
  CHECK(back[0].label == "q");

  const auto list = inequalities_from_json(nlohmann::json::parse(R"([{"a": [1, "1/3"], "a0": 1}, {"a": [0, 1], "a0": "2", "sense": ">="}])"));
  REQUIRE(list.size() == 2);
  CHECK(list[0].sense == Sense::LessEqual);
  CHECK(list[0].a[1] == Rational(mpz_class(1), mpz_class(3)));
  CHECK(list[1].sense == Sense::GreaterEqual);

  CHECK_THROWS_AS(inequalities_from_json(nlohmann::json::parse(R"({"a": [1]})")), ParseError);
  CHECK_THROWS_AS(inequalities_from_json(nlohmann::json::parse(R"({"a": [1], "a0": 1, "sense": "="})")), ParseError);

  const FacetReport r{true, 3, 2, 3, true};
  const auto fj = facet_report_to_json(r);
  CHECK(fj.at("is_facet") == true);
  CHECK(fj.at("face_dimension") == 2);
}
