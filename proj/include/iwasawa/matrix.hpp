#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "iwasawa/error.hpp"
#include "iwasawa/polynomial.hpp"

namespace iwasawa {

/// Row-major dense matrix over a commutative ring.
template <typename R>
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols, const R& zero)
      : rows_(rows), cols_(cols), zero_(ring_like(zero, 0)), a_(rows * cols, zero_) {}

  explicit Matrix(const std::vector<std::vector<R>>& rows, const R& zero)
      : rows_(rows.size()), cols_(rows.empty() ? 0 : rows.front().size()), zero_(ring_like(zero, 0)) {
    a_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      require(row.size() == cols_, ErrorCode::DimensionMismatch, "ragged matrix rows");
      a_.insert(a_.end(), row.begin(), row.end());
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  const R& zero() const { return zero_; }

  R& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const R& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  void swap_rows(std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < cols_; ++k) std::swap((*this)(i, k), (*this)(j, k));
  }

  /// The matrix with row `skip_row` and column `skip_col` removed.
  Matrix minor(std::size_t skip_row, std::size_t skip_col) const {
    Matrix m(rows_ - 1, cols_ - 1, zero_);
    for (std::size_t i = 0, mi = 0; i < rows_; ++i) {
      if (i == skip_row) continue;
      for (std::size_t j = 0, mj = 0; j < cols_; ++j) {
        if (j == skip_col) continue;
        m(mi, mj++) = (*this)(i, j);
      }
      ++mi;
    }
    return m;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  R zero_;
  std::vector<R> a_;
};

namespace detail {
template <typename R>
void require_square(const Matrix<R>& m) {
  require(m.is_square(), ErrorCode::DimensionMismatch,
          "determinant of a " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + " matrix");
}
}  // namespace detail

/// Laplace expansion along the first row. Division-free; O(n!) so only for small n.
template <typename R>
R cofactor_det(const Matrix<R>& m) {
  detail::require_square(m);
  const std::size_t n = m.rows();
  if (n == 0) return ring_like(m.zero(), 1);
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  R acc = m.zero();
  for (std::size_t j = 0; j < n; ++j) {
    if (ring_is_zero(m(0, j))) continue;
    R term = m(0, j) * cofactor_det(m.minor(0, j));
    if (j % 2 == 0) {
      acc += term;
    } else {
      acc -= term;
    }
  }
  return acc;
}

/// Berkowitz's division-free determinant, O(n^4) ring operations. Valid over
/// any commutative ring, including truncated power series where exact division
/// by a pivot is unavailable.
template <typename R>
R berkowitz_det(const Matrix<R>& m) {
  detail::require_square(m);
  const std::size_t n = m.rows();
  const R zero = m.zero();
  const R one = ring_like(zero, 1);
  if (n == 0) return one;

  // Characteristic-polynomial coefficients of the leading r x r block,
  // highest degree first: v[0] = 1.
  std::vector<R> v{one, R(zero - m(0, 0))};
  for (std::size_t r = 1; r < n; ++r) {
    // Column R = m(0..r-1, r), row S = m(r, 0..r-1), block A = m(0..r-1, 0..r-1).
    // Toeplitz entries: c_0 = 1, c_1 = -a_rr, c_k = -S A^{k-2} R for k >= 2.
    std::vector<R> col(r, zero);
    for (std::size_t i = 0; i < r; ++i) col[i] = m(i, r);
    std::vector<R> c(r + 2, zero);
    c[0] = one;
    c[1] = zero - m(r, r);
    for (std::size_t k = 2; k <= r + 1; ++k) {
      R s = zero;
      for (std::size_t j = 0; j < r; ++j) s += m(r, j) * col[j];
      c[k] = zero - s;
      std::vector<R> next(r, zero);
      for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) next[i] += m(i, j) * col[j];
      }
      col = std::move(next);
    }
    std::vector<R> w(r + 2, zero);
    for (std::size_t i = 0; i < r + 2; ++i) {
      for (std::size_t j = 0; j <= i && j < v.size(); ++j) w[i] += c[i - j] * v[j];
    }
    v = std::move(w);
  }
  // v is the characteristic polynomial det(tI - M); det(M) = (-1)^n v[n].
  return n % 2 == 0 ? v[n] : R(zero - v[n]);
}

/// Fraction-free Gaussian elimination (Bareiss). Requires an integral domain
/// with exact division, i.e. BigInt or Rational.
template <typename R>
R bareiss_det(Matrix<R> m) {
  detail::require_square(m);
  const std::size_t n = m.rows();
  const R one = ring_like(m.zero(), 1);
  if (n == 0) return one;
  R prev = one;
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (ring_is_zero(m(k, k))) {
      std::size_t pivot = k + 1;
      while (pivot < n && ring_is_zero(m(pivot, k))) ++pivot;
      if (pivot == n) return m.zero();
      m.swap_rows(k, pivot);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m(i, j) = R((m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev);
      }
    }
    prev = m(k, k);
  }
  return negate ? R(m.zero() - m(n - 1, n - 1)) : m(n - 1, n - 1);
}

}  // namespace iwasawa
