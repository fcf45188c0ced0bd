#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "diapoly/rational.hpp"

namespace diapoly {

using RatVector = std::vector<Rational>;

/// Dense row-major matrix of exact rationals.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows);
  static RatMatrix from_rows(const std::vector<RatVector>& rows, std::size_t cols);
  static RatMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Rational> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Rational> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  void append_row(std::span<const Rational> values);
  RatMatrix transpose() const;

  friend bool operator==(const RatMatrix&, const RatMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Exact rank by Gaussian elimination with full pivoting.
std::size_t rank(const RatMatrix& m);

/// Accumulates vectors one at a time and tracks the rank of their span.
///
/// The span is kept in reduced row echelon form. Alongside it the builder
/// caches an integral basis of the orthogonal complement, so membership of an
/// integer vector is decided with a handful of machine-integer dot products;
/// rational elimination only runs when the rank actually grows. Once the rank
/// reaches the dimension (or the optional cap) further vectors are ignored.
class IncrementalRankBuilder {
 public:
  explicit IncrementalRankBuilder(std::size_t dimension, std::optional<std::size_t> rank_cap = std::nullopt);

  /// Returns true when `v` was independent of the vectors seen so far.
  bool add(std::span<const Rational> v);
  bool add(std::span<const std::int64_t> v);

  std::size_t rank() const { return basis_.size(); }
  std::size_t dimension() const { return dim_; }
  bool saturated() const;

  /// Reduced row echelon basis of the span, rows ordered by pivot column.
  const std::vector<RatVector>& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  /// Primitive integral vectors spanning the orthogonal complement of the span.
  std::vector<RatVector> annihilator() const;

 private:
  bool insert(RatVector v);
  void rebuild_annihilator();

  std::size_t dim_;
  std::optional<std::size_t> cap_;
  std::vector<RatVector> basis_;
  std::vector<std::size_t> pivots_;
  std::vector<RatVector> annihilator_;
  std::vector<std::int64_t> small_annihilator_;  // row-major, valid iff small_valid_
  bool small_valid_ = false;
};

/// Dimension of the affine hull of `points` (0 for a single point).
/// Throws std::invalid_argument on an empty list, DimensionError on ragged input.
int affine_dimension(const std::vector<RatVector>& points);

}  // namespace diapoly
