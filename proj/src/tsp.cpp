#include "diapoly/tsp.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "diapoly/errors.hpp"
#include "diapoly/json_support.hpp"
#include "diapoly/model_io.hpp"
#include "diapoly/random_model.hpp"

namespace diapoly::tsp {

namespace {

constexpr std::size_t kMaxSubtourCap = 16;

void check_city(std::size_t i, std::size_t j, std::size_t n) {
  if (i < 1 || j < 1 || i > n || j > n || i == j) throw std::out_of_range("TSP edge index out of range");
}

}  // namespace

TspInstance::TspInstance(std::size_t n) : n_(n) {
  if (n < 3) throw std::invalid_argument("a TSP instance needs at least 3 cities");
  costs_.resize(num_edges(n));
}

const Rational& TspInstance::cost(std::size_t i, std::size_t j) const {
  check_city(i, j, n_);
  return costs_[edge_index(n_, i - 1, j - 1)];
}

void TspInstance::set_cost(std::size_t i, std::size_t j, Rational c) {
  check_city(i, j, n_);
  costs_[edge_index(n_, i - 1, j - 1)] = std::move(c);
}

std::size_t num_edges(std::size_t n) { return n * (n - 1) / 2; }

std::size_t edge_index(std::size_t n, std::size_t i, std::size_t j) {
  if (i == j || i >= n || j >= n) throw std::out_of_range("edge_index needs distinct vertices below n");
  if (i > j) std::swap(i, j);
  // edges before row i: sum_{r < i} (n - 1 - r)
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

std::pair<std::size_t, std::size_t> edge_endpoints(std::size_t n, std::size_t e) {
  if (e >= num_edges(n)) throw std::out_of_range("edge index out of range");
  std::size_t i = 0;
  while (e >= n - 1 - i) {
    e -= n - 1 - i;
    ++i;
  }
  return {i, i + 1 + e};
}

std::size_t default_subtour_cap() {
  if (const char* env = std::getenv("DIAPOLY_TSP_CAP")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v >= 3) return std::min<std::size_t>(v, kMaxSubtourCap);
  }
  return 10;
}

BinaryProgram build(const TspInstance& inst, std::size_t cap) {
  const std::size_t n = inst.size();
  if (n > cap)
    throw CapExceededError("subtour rows for n = " + std::to_string(n) + " exceed the cap n <= " + std::to_string(cap));
  const std::size_t m = num_edges(n);
  RatVector objective(m);
  std::vector<std::string> names(m);
  for (std::size_t e = 0; e < m; ++e) {
    const auto [i, j] = edge_endpoints(n, e);
    objective[e] = -inst.cost(i + 1, j + 1);
    names[e] = "x_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
  }
  BinaryProgram bp(m, std::move(objective), std::move(names));
  bp.set_name("tsp" + std::to_string(n));

  const EquationSystem degrees = degree_system(n);
  for (std::size_t v = 0; v < n; ++v) {
    auto row = degrees.matrix.row(v);
    bp.add_constraint(RatVector(row.begin(), row.end()), Sense::Equal, degrees.rhs[v], "deg_" + std::to_string(v + 1));
  }

  std::vector<std::size_t> subset;
  for (std::size_t size = 2; size + 1 <= n; ++size) {
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(size), true);
    // prev_permutation over a leading block of trues walks subsets lexicographically
    do {
      subset.clear();
      for (std::size_t v = 0; v < n; ++v)
        if (pick[v]) subset.push_back(v);
      RatVector row(m);
      std::string name = "sub";
      for (std::size_t a = 0; a < subset.size(); ++a) {
        name += "_" + std::to_string(subset[a] + 1);
        for (std::size_t b = a + 1; b < subset.size(); ++b) row[edge_index(n, subset[a], subset[b])] = 1;
      }
      bp.add_constraint(std::move(row), Sense::LessEqual, Rational(static_cast<long long>(size) - 1), std::move(name));
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return bp;
}

EquationSystem degree_system(std::size_t n) {
  if (n < 3) throw std::invalid_argument("degree system needs n >= 3");
  EquationSystem sys{RatMatrix(n, num_edges(n)), RatVector(n, Rational(2))};
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t u = 0; u < n; ++u)
      if (u != v) sys.matrix(v, edge_index(n, u, v)) = 1;
  return sys;
}

Tour canonical_tour(std::vector<int> cycle) {
  const std::size_t n = cycle.size();
  if (n < 3) throw EncodingError("a tour needs at least 3 cities");
  std::vector<bool> seen(n + 1, false);
  for (int v : cycle) {
    if (v < 1 || static_cast<std::size_t>(v) > n || seen[static_cast<std::size_t>(v)])
      throw EncodingError("cycle does not visit each of 1..n exactly once");
    seen[static_cast<std::size_t>(v)] = true;
  }
  const auto one = std::find(cycle.begin(), cycle.end(), 1);
  std::rotate(cycle.begin(), one, cycle.end());
  if (cycle[1] > cycle[n - 1]) std::reverse(cycle.begin() + 1, cycle.end());
  return cycle;
}

Assignment tour_to_incidence(const Tour& t) {
  const Tour c = canonical_tour(t);
  const std::size_t n = c.size();
  Assignment x(num_edges(n));
  for (std::size_t k = 0; k < n; ++k)
    x[edge_index(n, static_cast<std::size_t>(c[k] - 1), static_cast<std::size_t>(c[(k + 1) % n] - 1))] = 1;
  return x;
}

Tour incidence_to_tour(std::span<const std::uint8_t> x, std::size_t n) {
  if (n < 3 || x.size() != num_edges(n)) throw EncodingError("incidence vector length does not match C(n, 2)");
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t e = 0; e < x.size(); ++e) {
    if (x[e] > 1) throw EncodingError("incidence vector is not 0/1");
    if (!x[e]) continue;
    const auto [i, j] = edge_endpoints(n, e);
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  for (const auto& a : adj)
    if (a.size() != 2) throw EncodingError("every city needs degree 2 in a tour");
  std::vector<int> cycle{1};
  std::size_t prev = 0;
  std::size_t cur = adj[0][0];
  while (cur != 0) {
    if (cycle.size() == n) throw EncodingError("incidence vector is not a single cycle");
    cycle.push_back(static_cast<int>(cur + 1));
    const std::size_t next = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
    prev = cur;
    cur = next;
  }
  if (cycle.size() != n) throw EncodingError("incidence vector contains a subtour");
  return canonical_tour(std::move(cycle));
}

std::size_t discordant_edges(const Tour& t1, const Tour& t2) {
  if (t1.size() != t2.size()) throw DimensionError("discordant_edges needs tours of equal size");
  const auto a = tour_to_incidence(t1);
  const auto b = tour_to_incidence(t2);
  std::size_t count = 0;
  for (std::size_t e = 0; e < a.size(); ++e) count += a[e] != b[e];
  return count;
}

std::size_t edges_missing_from(const Tour& t1, const Tour& t2) {
  if (t1.size() != t2.size()) throw DimensionError("edges_missing_from needs tours of equal size");
  const auto a = tour_to_incidence(t1);
  const auto b = tour_to_incidence(t2);
  std::size_t count = 0;
  for (std::size_t e = 0; e < a.size(); ++e) count += a[e] && !b[e];
  return count;
}

Rational tour_cost(const TspInstance& inst, const Tour& t) {
  if (t.size() != inst.size()) throw DimensionError("tour size does not match the instance");
  const Tour c = canonical_tour(t);
  Rational total;
  for (std::size_t k = 0; k < c.size(); ++k)
    total += inst.cost(static_cast<std::size_t>(c[k]), static_cast<std::size_t>(c[(k + 1) % c.size()]));
  return total;
}

std::vector<Tour> enumerate_tours(std::size_t n) {
  if (n < 3) throw std::invalid_argument("tours need n >= 3");
  Tour t(n);
  std::iota(t.begin(), t.end(), 1);
  std::vector<Tour> out;
  do {
    if (t[1] < t[n - 1]) out.push_back(t);
  } while (std::next_permutation(t.begin() + 1, t.end()));
  return out;
}

std::vector<Assignment> feasible_points(std::size_t n) {
  std::vector<Assignment> out;
  for (const auto& t : enumerate_tours(n)) out.push_back(tour_to_incidence(t));
  std::sort(out.begin(), out.end());
  return out;
}

PointSet diameter_points(std::size_t n) {
  return pair_completions(num_edges(n), feasible_points(n), "tsp" + std::to_string(n));
}

DiameterCrossCheck cross_check_diameter(const TspInstance& inst) {
  const std::size_t n = inst.size();
  if (n > kMaxVerifyCities)
    throw CapExceededError("discordant-edge verification enumerates tours; n = " + std::to_string(n) + " exceeds " +
                           std::to_string(kMaxVerifyCities));
  const BinaryProgram bp = build(inst);
  const auto dp = build_diameter_program(bp, choose_epsilon(bp), Variant::Conjugate);
  DiameterSolveOptions options;
  options.constant_norm = static_cast<std::int64_t>(n);

  DiameterCrossCheck check;
  check.via_program = solve_diameter(dp, options).diameter;

  const auto tours = enumerate_tours(n);
  std::vector<Rational> costs;
  costs.reserve(tours.size());
  for (const auto& t : tours) costs.push_back(tour_cost(inst, t));
  const Rational best = *std::min_element(costs.begin(), costs.end());
  std::vector<const Tour*> optimal;
  for (std::size_t k = 0; k < tours.size(); ++k)
    if (costs[k] == best) optimal.push_back(&tours[k]);
  std::size_t max_d = 0;
  for (const auto* a : optimal)
    for (const auto* b : optimal) max_d = std::max(max_d, edges_missing_from(*a, *b));
  check.via_oracle = static_cast<std::int64_t>(2 * max_d);
  return check;
}

bool verify_diameter_discordant(const TspInstance& inst) { return cross_check_diameter(inst).agrees(); }

namespace {

bool extend_path(const std::vector<std::vector<bool>>& adj, std::vector<int>& path, std::vector<bool>& used) {
  const std::size_t n = adj.size();
  const auto last = static_cast<std::size_t>(path.back());
  if (path.size() == n) return adj[last][0];
  for (std::size_t v = 1; v < n; ++v) {
    if (used[v] || !adj[last][v]) continue;
    used[v] = true;
    path.push_back(static_cast<int>(v));
    if (extend_path(adj, path, used)) return true;
    path.pop_back();
    used[v] = false;
  }
  return false;
}

}  // namespace

std::optional<Tour> hamiltonian_cycle(const std::vector<std::vector<bool>>& adjacency) {
  const std::size_t n = adjacency.size();
  if (n < 3) return std::nullopt;
  for (std::size_t i = 0; i < n; ++i) {
    if (adjacency[i].size() != n) throw DimensionError("adjacency matrix must be square");
    for (std::size_t j = 0; j < n; ++j)
      if (adjacency[i][j] != adjacency[j][i]) throw std::invalid_argument("adjacency matrix must be symmetric");
  }
  std::vector<int> path{0};
  std::vector<bool> used(n, false);
  used[0] = true;
  if (!extend_path(adjacency, path, used)) return std::nullopt;
  for (auto& v : path) ++v;
  return canonical_tour(std::move(path));
}

std::optional<Tour> find_disjoint_tour(const Tour& t) {
  const Tour c = canonical_tour(t);
  const std::size_t n = c.size();
  if (n < 5) return std::nullopt;
  std::vector<std::vector<bool>> complement(n, std::vector<bool>(n, true));
  for (std::size_t v = 0; v < n; ++v) complement[v][v] = false;
  for (std::size_t k = 0; k < n; ++k) {
    const auto a = static_cast<std::size_t>(c[k] - 1);
    const auto b = static_cast<std::size_t>(c[(k + 1) % n] - 1);
    complement[a][b] = complement[b][a] = false;
  }
  if (n == 5) {
    // the complement of a 5-cycle in K_5 is 2-regular and connected: walk it
    Assignment x(num_edges(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (complement[a][b]) x[edge_index(n, a, b)] = 1;
    return incidence_to_tour(x, n);
  }
  return hamiltonian_cycle(complement);
}

Tour random_tour(std::mt19937_64& rng, std::size_t n) {
  std::vector<int> cycle(n);
  std::iota(cycle.begin(), cycle.end(), 1);
  for (std::size_t k = n; k > 1; --k)
    std::swap(cycle[k - 1], cycle[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(k) - 1))]);
  return canonical_tour(std::move(cycle));
}

TspInstance random_instance(std::mt19937_64& rng, std::size_t n, int lo, int hi) {
  TspInstance inst(n);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j) inst.set_cost(i, j, Rational(uniform_int(rng, lo, hi)));
  return inst;
}

namespace {

std::size_t city_index(const nlohmann::json& v, std::size_t n) {
  if (!v.is_number_integer()) throw ParseError("city index must be an integer");
  const auto k = v.get<long long>();
  if (k < 1 || static_cast<std::size_t>(k) > n) throw ParseError("city index " + std::to_string(k) + " out of range");
  return static_cast<std::size_t>(k);
}

Rational entry_value(const nlohmann::json& e) {
  if (e.size() == 4) {
    const Rational num = rational_from_json(e[2]);
    const Rational den = rational_from_json(e[3]);
    if (den.is_zero()) throw ParseError("zero denominator in cost entry");
    return num / den;
  }
  if (e.size() == 3) return rational_from_json(e[2]);
  throw ParseError("cost entries must be [i, j, num, den] or [i, j, value]");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

TspInstance instance_from_json(const nlohmann::json& j) {
  try {
    const auto n = j.at("n").get<long long>();
    if (n < 3) throw ParseError("TSP instance needs n >= 3");
    TspInstance inst(static_cast<std::size_t>(n));
    if (j.contains("costs")) {
      for (const auto& e : j.at("costs")) {
        if (!e.is_array() || e.size() < 3) throw ParseError("cost entries must be arrays");
        const auto a = city_index(e[0], inst.size());
        const auto b = city_index(e[1], inst.size());
        if (a == b) throw ParseError("cost entry on a loop");
        inst.set_cost(a, b, entry_value(e));
      }
    }
    return inst;
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("malformed TSP instance JSON: ") + ex.what());
  }
}

nlohmann::json instance_to_json(const TspInstance& inst) {
  nlohmann::json costs = nlohmann::json::array();
  for (std::size_t i = 1; i <= inst.size(); ++i)
    for (std::size_t j = i + 1; j <= inst.size(); ++j) {
      if (inst.cost(i, j).is_zero()) continue;
      const auto parts = rational_parts_json(inst.cost(i, j));
      costs.push_back({i, j, parts["num"], parts["den"]});
    }
  return nlohmann::json{{"n", inst.size()}, {"costs", std::move(costs)}};
}

TspInstance instance_from_tsplib(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  long long dimension = -1;
  std::vector<std::string> weights;
  bool in_section = false;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t == "EOF") break;
    if (in_section) {
      if (std::isalpha(static_cast<unsigned char>(t[0]))) {
        in_section = false;
      } else {
        std::istringstream ls(t);
        std::string tok;
        while (ls >> tok) weights.push_back(tok);
        continue;
      }
    }
    if (t.rfind("EDGE_WEIGHT_SECTION", 0) == 0) {
      in_section = true;
      continue;
    }
    const auto colon = t.find(':');
    if (colon == std::string::npos) continue;
    const std::string key = trim(t.substr(0, colon));
    const std::string value = trim(t.substr(colon + 1));
    if (key == "DIMENSION") {
      try {
        dimension = std::stoll(value);
      } catch (const std::logic_error&) {
        throw ParseError("bad DIMENSION value '" + value + "'");
      }
    } else if (key == "EDGE_WEIGHT_TYPE" && value != "EXPLICIT") {
      throw ParseError("unsupported EDGE_WEIGHT_TYPE '" + value + "'; only EXPLICIT is read");
    } else if (key == "EDGE_WEIGHT_FORMAT" && value != "FULL_MATRIX") {
      throw ParseError("unsupported EDGE_WEIGHT_FORMAT '" + value + "'; only FULL_MATRIX is read");
    } else if (key == "TYPE" && value != "TSP") {
      throw ParseError("unsupported TYPE '" + value + "'; only symmetric TSP is read");
    }
  }
  if (dimension < 3) throw ParseError("TSPLIB instance needs DIMENSION >= 3");
  const auto n = static_cast<std::size_t>(dimension);
  if (weights.size() != n * n)
    throw ParseError("EDGE_WEIGHT_SECTION has " + std::to_string(weights.size()) + " entries, expected " +
                     std::to_string(n * n));
  TspInstance inst(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const Rational a = Rational::parse(weights[i * n + j]);
      const Rational b = Rational::parse(weights[j * n + i]);
      if (a != b)
        throw ParseError("cost matrix is not symmetric at (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")");
      inst.set_cost(i + 1, j + 1, a);
    }
  return inst;
}

TspInstance load_instance(const std::string& path) {
  const std::string text = read_text_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return instance_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::parse_error& ex) {
      throw ParseError(std::string("invalid JSON: ") + ex.what());
    }
  }
  return instance_from_tsplib(text);
}

}  // namespace diapoly::tsp
