#include "diapoly/solver.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <string>

#include "diapoly/errors.hpp"

namespace diapoly {

namespace {

constexpr std::int64_t kIntLimit = std::int64_t{1} << 62;

// Integer image of a BinaryProgram: every row and the objective are scaled by
// the lcm of their denominators so the search loops run on int64.
struct CompiledRow {
  std::vector<std::int64_t> coef;
  Sense sense;
  std::int64_t rhs;
};

struct ColumnEntry {
  std::size_t row;
  std::int64_t coef;
};

struct CompiledModel {
  std::size_t n = 0;
  std::vector<std::int64_t> objective;
  std::vector<CompiledRow> rows;
  std::vector<std::vector<ColumnEntry>> columns;
};

std::int64_t checked_int(const Rational& r) {
  auto v = r.to_int64();
  if (!v || *v <= -kIntLimit || *v >= kIntLimit)
    throw Error("model coefficients exceed the exact integer range of the solver kernel");
  return *v;
}

std::vector<std::int64_t> scale_to_integers(const RatVector& values, const Rational* extra, std::int64_t* extra_out) {
  mpz_class den = 1;
  for (const auto& v : values) den = lcm(den, v.denominator());
  if (extra) den = lcm(den, extra->denominator());
  const Rational scale(den);
  std::vector<std::int64_t> out;
  out.reserve(values.size());
  __int128 magnitude = 0;
  for (const auto& v : values) {
    out.push_back(checked_int(v * scale));
    magnitude += out.back() < 0 ? -static_cast<__int128>(out.back()) : out.back();
  }
  if (extra) {
    *extra_out = checked_int(*extra * scale);
    magnitude += *extra_out < 0 ? -static_cast<__int128>(*extra_out) : *extra_out;
  }
  if (magnitude >= kIntLimit) throw Error("model coefficients exceed the exact integer range of the solver kernel");
  return out;
}

CompiledModel compile(const BinaryProgram& bp) {
  CompiledModel m;
  m.n = bp.num_variables();
  m.objective = scale_to_integers(bp.objective(), nullptr, nullptr);
  m.columns.resize(m.n);
  for (const auto& row : bp.constraints()) {
    CompiledRow r;
    r.sense = row.sense;
    r.coef = scale_to_integers(row.coefficients, &row.rhs, &r.rhs);
    const std::size_t idx = m.rows.size();
    for (std::size_t j = 0; j < m.n; ++j)
      if (r.coef[j] != 0) m.columns[j].push_back({idx, r.coef[j]});
    m.rows.push_back(std::move(r));
  }
  return m;
}

bool violated(Sense s, std::int64_t act, std::int64_t rhs) {
  switch (s) {
    case Sense::LessEqual: return act > rhs;
    case Sense::Equal: return act != rhs;
    case Sense::GreaterEqual: return act < rhs;
  }
  return true;
}

void check_cap(const BinaryProgram& bp, std::size_t cap) {
  const std::size_t limit = std::min(cap, kMaxEnumerationCap);
  if (bp.num_variables() > limit)
    throw CapExceededError("exhaustive enumeration of " + std::to_string(bp.num_variables()) +
                           " variables exceeds the cap of " + std::to_string(limit));
}

// Bit (n-1-j) holds variable j, so numeric order of masks is lexicographic
// order of assignments.
Assignment mask_to_assignment(std::uint64_t mask, std::size_t n) {
  Assignment a(n);
  for (std::size_t j = 0; j < n; ++j) a[j] = static_cast<std::uint8_t>((mask >> (n - 1 - j)) & 1U);
  return a;
}

// Visits every assignment in Gray-code order, calling visit(mask, objective)
// for each feasible one.
template <typename Visit>
void gray_scan(const CompiledModel& m, Visit&& visit) {
  const std::size_t n = m.n;
  std::vector<std::int64_t> act(m.rows.size(), 0);
  std::size_t bad = 0;
  for (std::size_t r = 0; r < m.rows.size(); ++r)
    if (violated(m.rows[r].sense, 0, m.rows[r].rhs)) ++bad;
  std::int64_t obj = 0;
  std::uint64_t mask = 0;
  if (bad == 0) visit(mask, obj);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < total; ++k) {
    const unsigned bit = static_cast<unsigned>(std::countr_zero(k));
    mask ^= std::uint64_t{1} << bit;
    const std::size_t j = n - 1 - bit;
    const bool on = (mask >> bit) & 1U;
    obj += on ? m.objective[j] : -m.objective[j];
    for (const auto& e : m.columns[j]) {
      const auto& row = m.rows[e.row];
      const bool was = violated(row.sense, act[e.row], row.rhs);
      act[e.row] += on ? e.coef : -e.coef;
      const bool is = violated(row.sense, act[e.row], row.rhs);
      if (was != is) is ? ++bad : --bad;
    }
    if (bad == 0) visit(mask, obj);
  }
}

}  // namespace

std::size_t default_enumeration_cap() {
  if (const char* env = std::getenv("DIAPOLY_ENUM_CAP")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return std::min<std::size_t>(v, kMaxEnumerationCap);
  }
  return 26;
}

SolveReport solve_enumerate(const BinaryProgram& bp, std::size_t cap) {
  check_cap(bp, cap);
  const CompiledModel m = compile(bp);
  bool found = false;
  std::uint64_t best_mask = 0;
  std::int64_t best_obj = 0;
  gray_scan(m, [&](std::uint64_t mask, std::int64_t obj) {
    if (!found || obj > best_obj || (obj == best_obj && mask < best_mask)) {
      found = true;
      best_obj = obj;
      best_mask = mask;
    }
  });
  SolveReport report;
  report.nodes_explored = std::uint64_t{1} << bp.num_variables();
  if (found) {
    report.status = SolveStatus::Optimal;
    Assignment a = mask_to_assignment(best_mask, bp.num_variables());
    Rational value = bp.evaluate(a);
    report.best = Solution{std::move(a), std::move(value)};
  }
  return report;
}

std::vector<Solution> enumerate_optimal_set(const BinaryProgram& bp, std::size_t cap) {
  check_cap(bp, cap);
  const CompiledModel m = compile(bp);
  bool found = false;
  std::int64_t best_obj = 0;
  std::vector<std::uint64_t> masks;
  gray_scan(m, [&](std::uint64_t mask, std::int64_t obj) {
    if (!found || obj > best_obj) {
      found = true;
      best_obj = obj;
      masks.clear();
    }
    if (obj == best_obj) masks.push_back(mask);
  });
  if (!found) throw InfeasibleError("model has no feasible assignment");
  std::sort(masks.begin(), masks.end());
  std::vector<Solution> out;
  out.reserve(masks.size());
  for (auto mask : masks) {
    Assignment a = mask_to_assignment(mask, bp.num_variables());
    Rational value = bp.evaluate(a);
    out.push_back(Solution{std::move(a), std::move(value)});
  }
  return out;
}

std::vector<Assignment> enumerate_feasible(const BinaryProgram& bp, std::size_t cap) {
  check_cap(bp, cap);
  const CompiledModel m = compile(bp);
  std::vector<std::uint64_t> masks;
  gray_scan(m, [&](std::uint64_t mask, std::int64_t) { masks.push_back(mask); });
  std::sort(masks.begin(), masks.end());
  std::vector<Assignment> out;
  out.reserve(masks.size());
  for (auto mask : masks) out.push_back(mask_to_assignment(mask, bp.num_variables()));
  return out;
}

namespace {

class BranchAndBound {
 public:
  explicit BranchAndBound(const CompiledModel& m) : m_(m) {
    const std::size_t rows = m.rows.size();
    act_.assign(rows, 0);
    free_min_.assign(rows, 0);
    free_max_.assign(rows, 0);
    for (std::size_t r = 0; r < rows; ++r)
      for (auto c : m.rows[r].coef) (c < 0 ? free_min_[r] : free_max_[r]) += c;
    positive_suffix_.assign(m.n + 1, 0);
    for (std::size_t j = m.n; j-- > 0;)
      positive_suffix_[j] = positive_suffix_[j + 1] + std::max<std::int64_t>(m.objective[j], 0);
    current_.assign(m.n, 0);
  }

  void run() {
    for (std::size_t r = 0; r < m_.rows.size(); ++r)
      if (dead(r)) {
        nodes_ = 1;
        return;
      }
    descend(0, 0);
  }

  bool found() const { return found_; }
  const Assignment& best() const { return best_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  bool dead(std::size_t r) const {
    const auto& row = m_.rows[r];
    const std::int64_t lo = act_[r] + free_min_[r];
    const std::int64_t hi = act_[r] + free_max_[r];
    switch (row.sense) {
      case Sense::LessEqual: return lo > row.rhs;
      case Sense::Equal: return lo > row.rhs || hi < row.rhs;
      case Sense::GreaterEqual: return hi < row.rhs;
    }
    return true;
  }

  // Fixes variable j to v; returns false if some touched row became hopeless.
  bool fix(std::size_t j, int v) {
    bool ok = true;
    for (const auto& e : m_.columns[j]) {
      (e.coef < 0 ? free_min_[e.row] : free_max_[e.row]) -= e.coef;
      if (v) act_[e.row] += e.coef;
      if (ok && dead(e.row)) ok = false;
    }
    return ok;
  }

  void unfix(std::size_t j, int v) {
    for (const auto& e : m_.columns[j]) {
      (e.coef < 0 ? free_min_[e.row] : free_max_[e.row]) += e.coef;
      if (v) act_[e.row] -= e.coef;
    }
  }

  void descend(std::size_t depth, std::int64_t value) {
    ++nodes_;
    if (found_ && value + positive_suffix_[depth] <= best_value_) return;
    if (depth == m_.n) {
      found_ = true;
      best_value_ = value;
      best_ = current_;
      return;
    }
    for (int v : {1, 0}) {
      current_[depth] = static_cast<std::uint8_t>(v);
      if (fix(depth, v)) descend(depth + 1, value + (v ? m_.objective[depth] : 0));
      unfix(depth, v);
    }
    current_[depth] = 0;
  }

  const CompiledModel& m_;
  std::vector<std::int64_t> act_, free_min_, free_max_, positive_suffix_;
  Assignment current_, best_;
  std::int64_t best_value_ = 0;
  bool found_ = false;
  std::uint64_t nodes_ = 0;
};

}  // namespace

SolveReport solve_bnb(const BinaryProgram& bp) {
  const CompiledModel m = compile(bp);
  BranchAndBound search(m);
  search.run();
  SolveReport report;
  report.nodes_explored = search.nodes();
  if (search.found()) {
    report.status = SolveStatus::Optimal;
    Rational value = bp.evaluate(search.best());
    report.best = Solution{search.best(), std::move(value)};
  }
  return report;
}

}  // namespace diapoly
