#pragma once

// Dense exact linear algebra over GMP integers and rationals.

#include <gmpxx.h>

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

namespace posetlab {

using Integer = mpz_class;
using Rational = mpq_class;

template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const T& x) { return x == 0; });
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    assert(a.cols_ == b.rows_);
    Matrix m(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& x = a(i, k);
        if (x == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (b(k, j) != 0) m(i, j) += x * b(k, j);
      }
    return m;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) {
    assert(a.rows_ == b.rows_ && a.cols_ == b.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
    for (std::size_t r = 0; r < m.rows_; ++r) {
      os << '[';
      for (std::size_t c = 0; c < m.cols_; ++c) os << (c ? " " : "") << m(r, c);
      os << "]\n";
    }
    return os;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using QMatrix = Matrix<Rational>;

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
inline std::size_t rank_fraction_free(IntMatrix m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  std::size_t rank = 0;
  Integer prev = 1;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t r = rank; r < rows; ++r)
      if (m(r, c) != 0) {
        piv = r;
        break;
      }
    if (piv == rows) continue;
    m.swap_rows(piv, rank);
    const Integer p = m(rank, c);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      const Integer f = m(r, c);
      for (std::size_t k = c + 1; k < cols; ++k) {
        if (f == 0 && m(r, k) == 0) continue;
        Integer v = p * m(r, k) - f * m(rank, k);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        m(r, k) = std::move(v);
      }
      m(r, c) = 0;
    }
    prev = p;
    ++rank;
  }
  return rank;
}

/// Reduced row echelon form in place; returns the pivot columns.
inline std::vector<std::size_t> rref(QMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < m.cols() && row < m.rows(); ++c) {
    std::size_t piv = m.rows();
    for (std::size_t r = row; r < m.rows(); ++r)
      if (m(r, c) != 0) {
        piv = r;
        break;
      }
    if (piv == m.rows()) continue;
    m.swap_rows(piv, row);
    const Rational inv = 1 / m(row, c);
    for (std::size_t k = c; k < m.cols(); ++k)
      if (m(row, k) != 0) m(row, k) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, c) == 0) continue;
      const Rational f = m(r, c);
      for (std::size_t k = c; k < m.cols(); ++k)
        if (m(row, k) != 0) m(r, k) -= f * m(row, k);
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

inline std::size_t rank(QMatrix m) { return rref(m).size(); }

/// Kernel of a linear map, with a basis normalised so that its coordinate
/// matrix on the free columns is the identity. `coords` reads off the
/// coordinates of any kernel vector from those free positions.
struct Kernel {
  std::size_t ambient = 0;
  std::vector<std::size_t> free_cols;
  QMatrix basis;  // ambient x dim, columns are basis vectors

  std::size_t dim() const { return free_cols.size(); }

  std::vector<Rational> coords(const std::vector<Rational>& v) const {
    std::vector<Rational> out(free_cols.size());
    for (std::size_t i = 0; i < free_cols.size(); ++i) out[i] = v[free_cols[i]];
    return out;
  }
};

inline Kernel kernel(QMatrix m, std::size_t cols) {
  Kernel k;
  k.ambient = cols;
  std::vector<std::size_t> pivots;
  if (m.rows() > 0) pivots = rref(m);
  std::vector<char> is_pivot(cols, 0);
  for (auto p : pivots) is_pivot[p] = 1;
  for (std::size_t c = 0; c < cols; ++c)
    if (!is_pivot[c]) k.free_cols.push_back(c);
  k.basis = QMatrix(cols, k.free_cols.size());
  for (std::size_t j = 0; j < k.free_cols.size(); ++j) {
    const std::size_t f = k.free_cols[j];
    k.basis(f, j) = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r)
      if (m(r, f) != 0) k.basis(pivots[r], j) = -m(r, f);
  }
  return k;
}

inline Kernel kernel(const QMatrix& m) { return kernel(m, m.cols()); }

/// Solve A x = b exactly. Returns nullopt when inconsistent; when the system
/// is underdetermined the free variables are set to zero.
inline std::optional<std::vector<Rational>> solve(const QMatrix& a, const std::vector<Rational>& b,
                                                  bool* unique = nullptr) {
  QMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) aug(r, c) = a(r, c);
    aug(r, a.cols()) = b[r];
  }
  const auto pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
  if (unique) *unique = pivots.size() == a.cols();
  std::vector<Rational> x(a.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, a.cols());
  return x;
}

/// Inverse of a square matrix, or nullopt when singular.
inline std::optional<QMatrix> inverse(const QMatrix& a) {
  const std::size_t n = a.rows();
  QMatrix aug(n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = a(r, c);
    aug(r, n + r) = 1;
  }
  const auto pivots = rref(aug);
  if (pivots.size() < n || (n > 0 && pivots[n - 1] != n - 1)) return std::nullopt;
  QMatrix inv(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) inv(r, c) = aug(r, n + c);
  return inv;
}

}  // namespace posetlab
