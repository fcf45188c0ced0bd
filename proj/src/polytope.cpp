#include "diapoly/polytope.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "diapoly/errors.hpp"
#include "diapoly/json_support.hpp"

namespace diapoly {

PointSet::PointSet(std::size_t ambient, std::string source) : ambient_(ambient), source_(std::move(source)) {
  if (ambient_ == 0) throw DimensionError("point set needs a positive ambient dimension");
}

void PointSet::add(std::span<const std::uint8_t> point) {
  if (point.size() != ambient_) throw DimensionError("point length does not match ambient dimension");
  data_.insert(data_.end(), point.begin(), point.end());
}

void PointSet::normalize() {
  const std::size_t count = size();
  auto less = [&](std::size_t a, std::size_t b) {
    return std::memcmp(data_.data() + a * ambient_, data_.data() + b * ambient_, ambient_) < 0;
  };
  bool sorted_unique = true;
  for (std::size_t i = 1; i < count && sorted_unique; ++i) sorted_unique = less(i - 1, i);
  if (sorted_unique) return;

  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), less);
  std::vector<std::uint8_t> out;
  out.reserve(data_.size());
  for (std::size_t k = 0; k < count; ++k) {
    const std::uint8_t* p = data_.data() + order[k] * ambient_;
    if (k > 0 && std::memcmp(p, data_.data() + order[k - 1] * ambient_, ambient_) == 0) continue;
    out.insert(out.end(), p, p + ambient_);
  }
  data_ = std::move(out);
}

PointSet pair_completions(std::size_t n, const std::vector<Assignment>& base_feasible, std::string source) {
  std::vector<Assignment> base = base_feasible;
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());

  PointSet ps(3 * n, std::move(source));
  Assignment point(3 * n);
  std::vector<std::size_t> free;
  for (const auto& x : base) {
    if (x.size() != n) throw DimensionError("base point length does not match n");
    for (const auto& y : base) {
      free.clear();
      for (std::size_t i = 0; i < n; ++i) {
        point[i] = x[i];
        point[n + i] = y[i];
        point[2 * n + i] = (x[i] && y[i]) ? 1 : 0;
        if (!(x[i] && y[i])) free.push_back(i);
      }
      if (free.size() >= 63) throw CapExceededError("too many free z coordinates to enumerate");
      const std::uint64_t total = std::uint64_t{1} << free.size();
      // first free coordinate is the most significant bit: lexicographic order
      for (std::uint64_t mask = 0; mask < total; ++mask) {
        for (std::size_t k = 0; k < free.size(); ++k)
          point[2 * n + free[k]] = static_cast<std::uint8_t>((mask >> (free.size() - 1 - k)) & 1U);
        ps.add(point);
      }
    }
  }
  ps.normalize();
  return ps;
}

PointSet enumerate_points(const DiameterProgram& dp, const std::vector<Assignment>& base_feasible) {
  if (dp.include_lower_coupling)
    throw std::invalid_argument("point enumeration is defined for the conjugate variant only");
  for (const auto& x : base_feasible)
    if (!is_feasible(dp.base, x)) throw std::invalid_argument("supplied base point is infeasible");
  return pair_completions(dp.base_size(), base_feasible, dp.derived.name());
}

PointSet enumerate_points(const DiameterProgram& dp, std::size_t cap) {
  if (dp.include_lower_coupling)
    throw std::invalid_argument("point enumeration is defined for the conjugate variant only");
  return pair_completions(dp.base_size(), enumerate_feasible(dp.base, cap), dp.derived.name());
}

namespace {

std::vector<std::int64_t> difference(const PointSet& ps, std::size_t i) {
  auto p = ps.point(i);
  auto p0 = ps.point(0);
  std::vector<std::int64_t> d(ps.ambient());
  for (std::size_t j = 0; j < d.size(); ++j) d[j] = static_cast<std::int64_t>(p[j]) - p0[j];
  return d;
}

// Inequality rewritten as a'v <= a0 with a, a0 integral when they fit.
struct ScaledInequality {
  std::vector<std::int64_t> a;
  std::int64_t a0 = 0;
  bool small = false;
  RatVector ra;
  Rational ra0;

  explicit ScaledInequality(const Inequality& ineq) {
    const bool flip = ineq.sense == Sense::GreaterEqual;
    ra = ineq.a;
    ra0 = ineq.a0;
    if (flip) {
      for (auto& v : ra) v = -v;
      ra0 = -ra0;
    }
    mpz_class den = ra0.denominator();
    for (const auto& v : ra) den = lcm(den, v.denominator());
    small = true;
    const Rational scale(den);
    constexpr std::int64_t limit = std::int64_t{1} << 52;
    auto fit = [&](const Rational& r, std::int64_t& out) {
      auto v = (r * scale).to_int64();
      if (!v || *v <= -limit || *v >= limit) return false;
      out = *v;
      return true;
    };
    a.resize(ra.size());
    for (std::size_t j = 0; j < ra.size() && small; ++j) small = fit(ra[j], a[j]);
    if (small) small = fit(ra0, a0);
  }

  // sign of a'p - a0
  int slack_sign(std::span<const std::uint8_t> p) const {
    if (small) {
      __int128 s = -static_cast<__int128>(a0);
      for (std::size_t j = 0; j < p.size(); ++j)
        if (p[j]) s += a[j];
      return s < 0 ? -1 : (s > 0 ? 1 : 0);
    }
    Rational s = -ra0;
    for (std::size_t j = 0; j < p.size(); ++j)
      if (p[j]) s += ra[j];
    return s.sign();
  }
};

}  // namespace

int hull_dimension(const PointSet& ps) {
  if (ps.empty()) throw std::invalid_argument("hull_dimension of an empty point set");
  IncrementalRankBuilder builder(ps.ambient());
  for (std::size_t i = 1; i < ps.size() && !builder.saturated(); ++i) {
    auto d = difference(ps, i);
    builder.add(std::span<const std::int64_t>(d));
  }
  return static_cast<int>(builder.rank());
}

AffineHull affine_hull(const PointSet& ps) {
  if (ps.empty()) throw std::invalid_argument("affine_hull of an empty point set");
  IncrementalRankBuilder builder(ps.ambient());
  AffineHull hull;
  hull.basis_points.push_back(0);
  for (std::size_t i = 1; i < ps.size() && !builder.saturated(); ++i) {
    auto d = difference(ps, i);
    if (builder.add(std::span<const std::int64_t>(d))) hull.basis_points.push_back(i);
  }
  hull.dimension = static_cast<int>(builder.rank());
  const auto rows = builder.annihilator();
  hull.equations.matrix = RatMatrix(0, ps.ambient());
  auto p0 = ps.point(0);
  for (const auto& a : rows) {
    hull.equations.matrix.append_row(a);
    Rational rhs;
    for (std::size_t j = 0; j < a.size(); ++j)
      if (p0[j]) rhs += a[j];
    hull.equations.rhs.push_back(rhs);
  }
  return hull;
}

std::vector<std::size_t> fixed_coordinates(const PointSet& ps) {
  std::vector<std::size_t> out;
  if (ps.empty()) return out;
  auto p0 = ps.point(0);
  for (std::size_t j = 0; j < ps.ambient(); ++j) {
    bool fixed = true;
    for (std::size_t i = 1; i < ps.size() && fixed; ++i) fixed = ps.point(i)[j] == p0[j];
    if (fixed) out.push_back(j);
  }
  return out;
}

EquationSystem lift_equation_system(const EquationSystem& base, std::size_t n) {
  if (!base.matrix.empty() && base.matrix.cols() != n)
    throw DimensionError("equation system width does not match n");
  if (base.rhs.size() != base.matrix.rows()) throw DimensionError("equation system rhs length mismatch");
  const std::size_t m = base.matrix.rows();
  EquationSystem out{RatMatrix(2 * m, 3 * n), RatVector(2 * m)};
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      out.matrix(r, c) = base.matrix(r, c);
      out.matrix(m + r, n + c) = base.matrix(r, c);
    }
    out.rhs[r] = base.rhs[r];
    out.rhs[m + r] = base.rhs[r];
  }
  return out;
}

bool verify_minimal_system(const PointSet& ps, const EquationSystem& sys) {
  if (ps.empty()) throw std::invalid_argument("verify_minimal_system on an empty point set");
  if (sys.matrix.rows() > 0 && sys.matrix.cols() != ps.ambient())
    throw DimensionError("equation system width does not match ambient dimension");
  for (std::size_t r = 0; r < sys.matrix.rows(); ++r) {
    Inequality row{RatVector(sys.matrix.row(r).begin(), sys.matrix.row(r).end()), sys.rhs[r], Sense::LessEqual, {}};
    ScaledInequality eq(row);
    for (std::size_t i = 0; i < ps.size(); ++i)
      if (eq.slack_sign(ps.point(i)) != 0) return false;
  }
  const std::size_t r = sys.matrix.rows() == 0 ? 0 : rank(sys.matrix);
  return hull_dimension(ps) == static_cast<int>(ps.ambient() - r);
}

FacetReport check_inequality(const PointSet& ps, const Inequality& ineq) {
  if (ps.empty()) throw std::invalid_argument("check_inequality on an empty point set");
  return check_inequality(ps, ineq, hull_dimension(ps));
}

FacetReport check_inequality(const PointSet& ps, const Inequality& ineq, int polytope_dimension) {
  if (ineq.a.size() != ps.ambient()) throw DimensionError("inequality length does not match ambient dimension");
  if (ineq.sense == Sense::Equal) throw std::invalid_argument("check_inequality expects <= or >=");
  const ScaledInequality s(ineq);

  FacetReport report;
  report.polytope_dimension = polytope_dimension;
  report.valid = true;
  std::vector<std::size_t> tight;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const int sign = s.slack_sign(ps.point(i));
    if (sign > 0) report.valid = false;
    if (sign == 0) tight.push_back(i);
  }
  report.tight_point_count = tight.size();
  if (tight.empty()) {
    report.face_dimension = -1;
  } else {
    // Any point off the hyperplane bounds the face by dim P - 1.
    std::optional<std::size_t> cap;
    if (tight.size() < ps.size() && polytope_dimension >= 1) cap = static_cast<std::size_t>(polytope_dimension - 1);
    IncrementalRankBuilder builder(ps.ambient(), cap);
    auto base = ps.point(tight.front());
    std::vector<std::int64_t> d(ps.ambient());
    for (std::size_t k = 1; k < tight.size() && !builder.saturated(); ++k) {
      auto p = ps.point(tight[k]);
      for (std::size_t j = 0; j < d.size(); ++j) d[j] = static_cast<std::int64_t>(p[j]) - base[j];
      builder.add(std::span<const std::int64_t>(d));
    }
    report.face_dimension = static_cast<int>(builder.rank());
  }
  report.is_facet = report.valid && report.face_dimension == polytope_dimension - 1;
  return report;
}

const char* to_string(FacetFamily f) {
  switch (f) {
    case FacetFamily::InheritedX: return "inherited-x";
    case FacetFamily::InheritedY: return "inherited-y";
    case FacetFamily::ZLower: return "z-lower";
    case FacetFamily::ZUpper: return "z-upper";
    case FacetFamily::Coupling: return "coupling";
  }
  return "?";
}

std::vector<TaggedInequality> facet_families(std::size_t n, const std::vector<Inequality>& base_facets) {
  std::vector<TaggedInequality> out;
  out.reserve(2 * base_facets.size() + 3 * n);
  for (std::size_t f = 0; f < base_facets.size(); ++f) {
    const auto& b = base_facets[f];
    if (b.a.size() != n) throw DimensionError("base facet length does not match n");
    const std::string tag = b.label.empty() ? std::to_string(f + 1) : b.label;
    for (std::size_t block = 0; block < 2; ++block) {
      Inequality lifted{RatVector(3 * n), b.a0, b.sense, (block == 0 ? "x:" : "y:") + tag};
      std::copy(b.a.begin(), b.a.end(), lifted.a.begin() + static_cast<std::ptrdiff_t>(block * n));
      out.push_back({std::move(lifted), block == 0 ? FacetFamily::InheritedX : FacetFamily::InheritedY});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    Inequality lower{RatVector(3 * n), Rational(0), Sense::GreaterEqual, "z" + std::to_string(i + 1) + ">=0"};
    lower.a[2 * n + i] = 1;
    Inequality upper{RatVector(3 * n), Rational(1), Sense::LessEqual, "z" + std::to_string(i + 1) + "<=1"};
    upper.a[2 * n + i] = 1;
    out.push_back({std::move(lower), FacetFamily::ZLower});
    out.push_back({std::move(upper), FacetFamily::ZUpper});
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::string k = std::to_string(i + 1);
    Inequality c{RatVector(3 * n), Rational(1), Sense::LessEqual, "x" + k + "+y" + k + "-z" + k + "<=1"};
    c.a[i] = 1;
    c.a[n + i] = 1;
    c.a[2 * n + i] = -1;
    out.push_back({std::move(c), FacetFamily::Coupling});
  }
  return out;
}

DisjointPairReport check_disjoint_pair_condition(const std::vector<Assignment>& feasible) {
  DisjointPairReport report;
  report.feasible_count = feasible.size();
  report.universal = !feasible.empty();
  auto disjoint = [](const Assignment& a, const Assignment& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] && b[i]) return false;
    return true;
  };
  for (const auto& x : feasible) {
    bool partner = false;
    for (const auto& y : feasible) {
      if (!disjoint(x, y)) continue;
      partner = true;
      if (!report.witness) report.witness = std::make_pair(x, y);
      break;
    }
    if (!partner && report.universal) {
      report.universal = false;
      report.counterexample = x;
    }
  }
  report.existential = report.witness.has_value();
  return report;
}

DisjointPairReport check_disjoint_pair_condition(const BinaryProgram& base, std::size_t cap) {
  return check_disjoint_pair_condition(enumerate_feasible(base, cap));
}

nlohmann::json point_set_header(const PointSet& ps) {
  return nlohmann::json{
      {"n", ps.ambient() / 3}, {"ambient", ps.ambient()}, {"count", ps.size()}, {"source", ps.source()}};
}

void write_point_set_text(std::ostream& os, const PointSet& ps) {
  os << point_set_header(ps).dump() << '\n';
  std::string line;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    line.clear();
    for (auto v : ps.point(i)) {
      if (!line.empty()) line += ' ';
      line += v ? '1' : '0';
    }
    os << line << '\n';
  }
}

nlohmann::json point_set_to_json(const PointSet& ps) {
  nlohmann::json j = point_set_header(ps);
  nlohmann::json points = nlohmann::json::array();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    auto p = ps.point(i);
    points.push_back(std::vector<int>(p.begin(), p.end()));
  }
  j["points"] = std::move(points);
  return j;
}

nlohmann::json facet_report_to_json(const FacetReport& r) {
  return nlohmann::json{{"valid", r.valid},
                        {"tight_point_count", r.tight_point_count},
                        {"face_dimension", r.face_dimension},
                        {"polytope_dimension", r.polytope_dimension},
                        {"is_facet", r.is_facet}};
}

nlohmann::json inequality_to_json(const Inequality& ineq) {
  nlohmann::json j{{"a", rational_vector_to_json(ineq.a)}, {"a0", rational_to_json(ineq.a0)}, {"sense", to_string(ineq.sense)}};
  if (!ineq.label.empty()) j["label"] = ineq.label;
  return j;
}

std::vector<Inequality> inequalities_from_json(const nlohmann::json& j) {
  auto one = [](const nlohmann::json& e) {
    try {
      Inequality ineq;
      ineq.a = rational_vector_from_json(e.at("a"));
      ineq.a0 = rational_from_json(e.at("a0"));
      const std::string s = e.value("sense", std::string("<="));
      if (s == "<=" || s == "=<") ineq.sense = Sense::LessEqual;
      else if (s == ">=" || s == "=>") ineq.sense = Sense::GreaterEqual;
      else throw ParseError("inequality sense must be <= or >=, got '" + s + "'");
      ineq.label = e.value("label", std::string{});
      return ineq;
    } catch (const nlohmann::json::exception& ex) {
      throw ParseError(std::string("malformed inequality JSON: ") + ex.what());
    }
  };
  std::vector<Inequality> out;
  if (j.is_array()) {
    for (const auto& e : j) out.push_back(one(e));
  } else {
    out.push_back(one(j));
  }
  return out;
}

}  // namespace diapoly
