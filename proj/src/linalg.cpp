#include "diapoly/linalg.hpp"

#include <algorithm>
#include <stdexcept>

#include "diapoly/errors.hpp"

namespace diapoly {

namespace {

constexpr std::int64_t kSmallLimit = std::int64_t{1} << 50;

std::size_t bit_size(const Rational& r) {
  return mpz_sizeinbase(r.raw().get_num_mpz_t(), 2) + mpz_sizeinbase(r.raw().get_den_mpz_t(), 2);
}

}  // namespace

RatMatrix::RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ragged matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

RatMatrix RatMatrix::from_rows(const std::vector<RatVector>& rows, std::size_t cols) {
  RatMatrix m(0, cols);
  for (const auto& r : rows) m.append_row(r);
  return m;
}

RatMatrix RatMatrix::identity(std::size_t n) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

void RatMatrix::append_row(std::span<const Rational> values) {
  if (values.size() != cols_) throw DimensionError("row length does not match matrix width");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

std::size_t rank(const RatMatrix& input) {
  RatMatrix m = input;
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::vector<std::size_t> col_order(cols);
  for (std::size_t c = 0; c < cols; ++c) col_order[c] = c;

  std::size_t r = 0;
  for (; r < std::min(rows, cols); ++r) {
    // full pivoting: smallest nonzero entry (by bit size) in the trailing block
    std::size_t best_row = rows, best_col = cols, best_size = 0;
    for (std::size_t i = r; i < rows; ++i) {
      for (std::size_t jj = r; jj < cols; ++jj) {
        const Rational& v = m(i, col_order[jj]);
        if (v.is_zero()) continue;
        std::size_t s = bit_size(v);
        if (best_row == rows || s < best_size) {
          best_row = i;
          best_col = jj;
          best_size = s;
        }
      }
    }
    if (best_row == rows) break;
    if (best_row != r)
      for (std::size_t c = 0; c < cols; ++c) std::swap(m(r, c), m(best_row, c));
    std::swap(col_order[r], col_order[best_col]);

    const std::size_t pc = col_order[r];
    const Rational pivot = m(r, pc);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (m(i, pc).is_zero()) continue;
      const Rational factor = m(i, pc) / pivot;
      for (std::size_t jj = r; jj < cols; ++jj) {
        const std::size_t c = col_order[jj];
        if (!m(r, c).is_zero()) m(i, c) -= factor * m(r, c);
      }
    }
  }
  return r;
}

IncrementalRankBuilder::IncrementalRankBuilder(std::size_t dimension, std::optional<std::size_t> rank_cap)
    : dim_(dimension), cap_(rank_cap) {
  rebuild_annihilator();
}

bool IncrementalRankBuilder::saturated() const {
  return rank() == dim_ || (cap_ && rank() >= *cap_);
}

bool IncrementalRankBuilder::add(std::span<const Rational> v) {
  if (v.size() != dim_) throw DimensionError("vector length does not match builder dimension");
  if (saturated()) return false;
  return insert(RatVector(v.begin(), v.end()));
}

bool IncrementalRankBuilder::add(std::span<const std::int64_t> v) {
  if (v.size() != dim_) throw DimensionError("vector length does not match builder dimension");
  if (saturated()) return false;

  bool small_input = std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x > -kSmallLimit && x < kSmallLimit; });
  if (small_valid_ && small_input) {
    const std::size_t free_count = dim_ - rank();
    bool in_span = true;
    for (std::size_t f = 0; f < free_count && in_span; ++f) {
      const std::int64_t* a = small_annihilator_.data() + f * dim_;
      __int128 dot = 0;
      for (std::size_t j = 0; j < dim_; ++j)
        if (v[j] != 0 && a[j] != 0) dot += static_cast<__int128>(a[j]) * v[j];
      in_span = dot == 0;
    }
    if (in_span) return false;
  }
  RatVector r;
  r.reserve(dim_);
  for (auto x : v) r.emplace_back(static_cast<long long>(x));
  return insert(std::move(r));
}

bool IncrementalRankBuilder::insert(RatVector v) {
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    const Rational f = v[pivots_[k]];
    if (f.is_zero()) continue;
    for (std::size_t j = 0; j < dim_; ++j)
      if (!basis_[k][j].is_zero()) v[j] -= f * basis_[k][j];
  }
  auto lead = std::find_if(v.begin(), v.end(), [](const Rational& x) { return !x.is_zero(); });
  if (lead == v.end()) return false;

  const std::size_t pc = static_cast<std::size_t>(lead - v.begin());
  const Rational inv = Rational(1) / *lead;
  for (auto& x : v)
    if (!x.is_zero()) x *= inv;
  for (auto& row : basis_) {
    const Rational f = row[pc];
    if (f.is_zero()) continue;
    for (std::size_t j = 0; j < dim_; ++j)
      if (!v[j].is_zero()) row[j] -= f * v[j];
  }
  auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), pc) - pivots_.begin();
  pivots_.insert(pivots_.begin() + pos, pc);
  basis_.insert(basis_.begin() + pos, std::move(v));
  rebuild_annihilator();
  return true;
}

void IncrementalRankBuilder::rebuild_annihilator() {
  annihilator_.clear();
  std::vector<bool> is_pivot(dim_, false);
  for (auto p : pivots_) is_pivot[p] = true;

  // For a free column f the span satisfies v[f] = sum_k v[p_k] * R[k][f];
  // clearing denominators gives one integral row per free column.
  for (std::size_t f = 0; f < dim_; ++f) {
    if (is_pivot[f]) continue;
    mpz_class den = 1;
    for (const auto& row : basis_) den = lcm(den, row[f].denominator());
    RatVector a(dim_);
    a[f] = Rational(den);
    for (std::size_t k = 0; k < basis_.size(); ++k)
      if (!basis_[k][f].is_zero()) a[pivots_[k]] = -basis_[k][f] * Rational(den);
    mpz_class g = 0;
    for (const auto& x : a) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.raw().get_num_mpz_t());
    if (g > 1)
      for (auto& x : a) x /= Rational(g);
    annihilator_.push_back(std::move(a));
  }

  small_valid_ = true;
  small_annihilator_.assign(annihilator_.size() * dim_, 0);
  for (std::size_t f = 0; f < annihilator_.size() && small_valid_; ++f) {
    for (std::size_t j = 0; j < dim_; ++j) {
      auto v = annihilator_[f][j].to_int64();
      if (!v || *v <= -kSmallLimit || *v >= kSmallLimit) {
        small_valid_ = false;
        break;
      }
      small_annihilator_[f * dim_ + j] = *v;
    }
  }
}

std::vector<RatVector> IncrementalRankBuilder::annihilator() const { return annihilator_; }

int affine_dimension(const std::vector<RatVector>& points) {
  if (points.empty()) throw std::invalid_argument("affine_dimension of an empty point list");
  const std::size_t dim = points.front().size();
  IncrementalRankBuilder builder(dim);
  RatVector diff(dim);
  for (const auto& p : points) {
    if (p.size() != dim) throw DimensionError("points of differing length");
  }
  for (const auto& p : points) {
    if (builder.saturated()) break;
    for (std::size_t j = 0; j < dim; ++j) diff[j] = p[j] - points.front()[j];
    builder.add(std::span<const Rational>(diff));
  }
  return static_cast<int>(builder.rank());
}

}  // namespace diapoly
