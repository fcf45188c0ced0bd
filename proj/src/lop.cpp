#include "diapoly/lop.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

#include "diapoly/diameter.hpp"
#include "diapoly/errors.hpp"
#include "diapoly/json_support.hpp"
#include "diapoly/model_io.hpp"
#include "diapoly/random_model.hpp"

namespace diapoly::lop {

LopInstance::LopInstance(std::size_t n) : n_(n), weights_(n * n) {
  if (n < 2) throw std::invalid_argument("an LOP instance needs at least 2 items");
}

const Rational& LopInstance::weight(std::size_t i, std::size_t j) const {
  if (i < 1 || j < 1 || i > n_ || j > n_ || i == j) throw std::out_of_range("LOP weight index out of range");
  return weights_[(i - 1) * n_ + (j - 1)];
}

void LopInstance::set_weight(std::size_t i, std::size_t j, Rational w) {
  if (i < 1 || j < 1 || i > n_ || j > n_ || i == j) throw std::out_of_range("LOP weight index out of range");
  weights_[(i - 1) * n_ + (j - 1)] = std::move(w);
}

std::size_t num_pair_variables(std::size_t n) { return n * (n - 1); }

std::size_t pair_index(std::size_t n, std::size_t i, std::size_t j) {
  if (i == j || i >= n || j >= n) throw std::out_of_range("pair_index needs distinct items below n");
  return i * (n - 1) + (j < i ? j : j - 1);
}

BinaryProgram build(const LopInstance& inst) {
  const std::size_t n = inst.size();
  const std::size_t m = num_pair_variables(n);
  RatVector objective(m);
  std::vector<std::string> names(m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      objective[pair_index(n, i, j)] = inst.weight(i + 1, j + 1);
      names[pair_index(n, i, j)] = "x_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
    }
  BinaryProgram bp(m, std::move(objective), std::move(names));
  bp.set_name("lop" + std::to_string(n));

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      RatVector row(m);
      row[pair_index(n, i, j)] = 1;
      row[pair_index(n, j, i)] = 1;
      bp.add_constraint(std::move(row), Sense::Equal, Rational(1),
                        "sym_" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = i + 1; k < n; ++k) {
        if (j == k) continue;
        RatVector row(m);
        row[pair_index(n, i, j)] = 1;
        row[pair_index(n, j, k)] = 1;
        row[pair_index(n, k, i)] = 1;
        bp.add_constraint(std::move(row), Sense::LessEqual, Rational(2),
                          "cyc_" + std::to_string(i + 1) + "_" + std::to_string(j + 1) + "_" + std::to_string(k + 1));
      }
  return bp;
}

void validate(const Permutation& p) {
  if (p.size() < 2) throw EncodingError("a permutation needs at least 2 items");
  std::vector<bool> seen(p.size() + 1, false);
  for (int v : p) {
    if (v < 1 || static_cast<std::size_t>(v) > p.size() || seen[static_cast<std::size_t>(v)])
      throw EncodingError("image list is not a permutation of 1..n");
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Assignment perm_to_incidence(const Permutation& p) {
  validate(p);
  const std::size_t n = p.size();
  Assignment x(num_pair_variables(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) x[pair_index(n, i, j)] = p[i] < p[j] ? 1 : 0;
  return x;
}

Permutation incidence_to_perm(std::span<const std::uint8_t> x, std::size_t n) {
  if (n < 2 || x.size() != num_pair_variables(n))
    throw EncodingError("incidence vector length does not match n (n - 1)");
  // sigma(i) = 1 + number of items placed before i
  Permutation p(n);
  for (std::size_t i = 0; i < n; ++i) {
    int before = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto ij = x[pair_index(n, i, j)];
      const auto ji = x[pair_index(n, j, i)];
      if (ij > 1 || ji > 1 || ij + ji != 1) throw EncodingError("incidence vector violates x_ij + x_ji = 1");
      before += ji;
    }
    p[i] = before + 1;
  }
  try {
    validate(p);
  } catch (const EncodingError&) {
    throw EncodingError("incidence vector contains a directed cycle");
  }
  if (perm_to_incidence(p) != Assignment(x.begin(), x.end()))
    throw EncodingError("incidence vector contains a directed cycle");
  return p;
}

std::size_t kendall_tau(const Permutation& p1, const Permutation& p2) {
  if (p1.size() != p2.size()) throw DimensionError("kendall_tau needs permutations of equal size");
  std::size_t count = 0;
  for (std::size_t i = 0; i < p1.size(); ++i)
    for (std::size_t j = i + 1; j < p1.size(); ++j)
      if ((p1[i] < p1[j]) != (p2[i] < p2[j])) ++count;
  return count;
}

std::vector<Permutation> enumerate_permutations(std::size_t n) {
  Permutation p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<int>(i + 1);
  std::vector<Permutation> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<Assignment> feasible_points(std::size_t n) {
  std::vector<Assignment> out;
  for (const auto& p : enumerate_permutations(n)) out.push_back(perm_to_incidence(p));
  std::sort(out.begin(), out.end());
  return out;
}

PointSet diameter_points(std::size_t n) {
  return pair_completions(num_pair_variables(n), feasible_points(n), "lop" + std::to_string(n));
}

DiameterCrossCheck cross_check_diameter(const LopInstance& inst) {
  const std::size_t n = inst.size();
  if (n > kMaxVerifyItems)
    throw CapExceededError("Kendall tau verification enumerates S_n; n = " + std::to_string(n) + " exceeds " +
                           std::to_string(kMaxVerifyItems));
  const BinaryProgram bp = build(inst);
  const auto dp = build_diameter_program(bp, choose_epsilon(bp), Variant::Conjugate);
  DiameterSolveOptions options;
  options.constant_norm = static_cast<std::int64_t>(n * (n - 1) / 2);

  DiameterCrossCheck check;
  check.via_program = solve_diameter(dp, options).diameter;

  const auto perms = enumerate_permutations(n);
  std::vector<Rational> values;
  values.reserve(perms.size());
  for (const auto& p : perms) values.push_back(bp.evaluate(perm_to_incidence(p)));
  const Rational best = *std::max_element(values.begin(), values.end());
  std::vector<const Permutation*> optimal;
  for (std::size_t k = 0; k < perms.size(); ++k)
    if (values[k] == best) optimal.push_back(&perms[k]);
  std::size_t max_tau = 0;
  for (const auto* a : optimal)
    for (const auto* b : optimal) max_tau = std::max(max_tau, kendall_tau(*a, *b));
  check.via_oracle = static_cast<std::int64_t>(2 * max_tau);
  return check;
}

bool verify_diameter_kendall(const LopInstance& inst) { return cross_check_diameter(inst).agrees(); }

Inequality lift_inequality(const Inequality& ineq, std::size_t n) {
  const std::size_t m = num_pair_variables(n);
  if (n < 2 || ineq.a.size() != 3 * m) throw DimensionError("inequality does not live on 3 n (n - 1) coordinates");
  const std::size_t m1 = num_pair_variables(n + 1);
  Inequality out{RatVector(3 * m1), ineq.a0, ineq.sense, ineq.label};
  for (std::size_t block = 0; block < 3; ++block)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        out.a[block * m1 + pair_index(n + 1, i, j)] = ineq.a[block * m + pair_index(n, i, j)];
      }
  return out;
}

LopInstance random_instance(std::mt19937_64& rng, std::size_t n, int lo, int hi) {
  LopInstance inst(n);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j)
      if (i != j) inst.set_weight(i, j, Rational(uniform_int(rng, lo, hi)));
  return inst;
}

namespace {

std::size_t item_index(const nlohmann::json& v, std::size_t n) {
  if (!v.is_number_integer()) throw ParseError("item index must be an integer");
  const auto k = v.get<long long>();
  if (k < 1 || static_cast<std::size_t>(k) > n) throw ParseError("item index " + std::to_string(k) + " out of range");
  return static_cast<std::size_t>(k);
}

Rational entry_value(const nlohmann::json& e) {
  if (e.size() == 4) {
    const Rational num = rational_from_json(e[2]);
    const Rational den = rational_from_json(e[3]);
    if (den.is_zero()) throw ParseError("zero denominator in weight entry");
    return num / den;
  }
  if (e.size() == 3) return rational_from_json(e[2]);
  throw ParseError("weight entries must be [i, j, num, den] or [i, j, value]");
}

}  // namespace

LopInstance instance_from_json(const nlohmann::json& j) {
  try {
    const auto n = j.at("n").get<long long>();
    if (n < 2) throw ParseError("LOP instance needs n >= 2");
    LopInstance inst(static_cast<std::size_t>(n));
    if (j.contains("weights")) {
      for (const auto& e : j.at("weights")) {
        if (!e.is_array() || e.size() < 3) throw ParseError("weight entries must be arrays");
        const auto a = item_index(e[0], inst.size());
        const auto b = item_index(e[1], inst.size());
        if (a == b) throw ParseError("weight entry on the diagonal");
        inst.set_weight(a, b, entry_value(e));
      }
    }
    return inst;
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("malformed LOP instance JSON: ") + ex.what());
  }
}

nlohmann::json instance_to_json(const LopInstance& inst) {
  nlohmann::json weights = nlohmann::json::array();
  for (std::size_t i = 1; i <= inst.size(); ++i)
    for (std::size_t j = 1; j <= inst.size(); ++j) {
      if (i == j || inst.weight(i, j).is_zero()) continue;
      const auto parts = rational_parts_json(inst.weight(i, j));
      weights.push_back({i, j, parts["num"], parts["den"]});
    }
  return nlohmann::json{{"n", inst.size()}, {"weights", std::move(weights)}};
}

LopInstance instance_from_lolib(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> tokens;
  std::string line;
  bool started = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    std::vector<std::string> row;
    while (ls >> tok) row.push_back(tok);
    if (row.empty()) continue;
    // a leading name line is allowed before the size
    if (!started && !(std::isdigit(static_cast<unsigned char>(row[0][0])) || row[0][0] == '+')) continue;
    started = true;
    tokens.insert(tokens.end(), row.begin(), row.end());
  }
  if (tokens.empty()) throw ParseError("empty LOLIB instance");
  long long n = 0;
  try {
    std::size_t used = 0;
    n = std::stoll(tokens[0], &used);
    if (used != tokens[0].size()) throw ParseError("bad LOLIB size");
  } catch (const std::logic_error&) {
    throw ParseError("LOLIB instance must start with the item count");
  }
  if (n < 2) throw ParseError("LOP instance needs n >= 2");
  const auto un = static_cast<std::size_t>(n);
  if (tokens.size() != 1 + un * un)
    throw ParseError("LOLIB matrix has " + std::to_string(tokens.size() - 1) + " entries, expected " +
                     std::to_string(un * un));
  LopInstance inst(un);
  for (std::size_t i = 0; i < un; ++i)
    for (std::size_t j = 0; j < un; ++j)
      if (i != j) inst.set_weight(i + 1, j + 1, Rational::parse(tokens[1 + i * un + j]));
  return inst;
}

LopInstance load_instance(const std::string& path) {
  const std::string text = read_text_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return instance_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::parse_error& ex) {
      throw ParseError(std::string("invalid JSON: ") + ex.what());
    }
  }
  return instance_from_lolib(text);
}

}  // namespace diapoly::lop
