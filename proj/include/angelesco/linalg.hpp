#pragma once

#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <vector>

#include "precision.hpp"

namespace angelesco {

inline Real magnitude(const Real &x) { return abs(x); }
inline Real magnitude(const Complex &z) { return abs(z); }

template <class T> class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    a_.reserve(rows_ * cols_);
    for (auto &row : init) {
      if (row.size() != cols_)
        throw DomainError("ragged matrix initializer");
      for (auto &v : row)
        a_.push_back(v);
    }
  }
  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T &operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const T &operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix &a, const Matrix &b) {
    if (a.cols_ != b.rows_)
      throw DomainError("matrix product shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (iszero_entry(a(i, k)))
          continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }
  friend Matrix operator+(Matrix a, const Matrix &b) {
    for (std::size_t i = 0; i < a.a_.size(); ++i)
      a.a_[i] += b.a_[i];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix &b) {
    for (std::size_t i = 0; i < a.a_.size(); ++i)
      a.a_[i] -= b.a_[i];
    return a;
  }

  // max row sum of moduli
  Real norm_inf() const {
    Real best(0);
    for (std::size_t i = 0; i < rows_; ++i) {
      Real s(0);
      for (std::size_t j = 0; j < cols_; ++j)
        s += magnitude((*this)(i, j));
      best = max(best, s);
    }
    return best;
  }
  // max column sum of moduli
  Real norm_1() const { return transpose().norm_inf(); }

private:
  static bool iszero_entry(const Real &x) { return iszero(x); }
  static bool iszero_entry(const Complex &z) { return iszero(z.re) && iszero(z.im); }

  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> a_;
};

using RMatrix = Matrix<Real>;
using CMatrix = Matrix<Complex>;

// Partial-pivot LU. Immutable after construction, so solves may run concurrently.
template <class T> class LU {
public:
  explicit LU(Matrix<T> a) : lu_(std::move(a)), perm_(lu_.rows()) {
    const std::size_t n = lu_.rows();
    if (lu_.cols() != n)
      throw DomainError("LU of a non-square matrix");
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      Real best = magnitude(lu_(k, k));
      for (std::size_t i = k + 1; i < n; ++i) {
        Real m = magnitude(lu_(i, k));
        if (m > best) {
          best = std::move(m);
          p = i;
        }
      }
      if (p != k) {
        for (std::size_t j = 0; j < n; ++j)
          std::swap(lu_(k, j), lu_(p, j));
        std::swap(perm_[k], perm_[p]);
        sign_ = -sign_;
      }
      if (iszero(best)) {
        singular_ = true;
        continue;
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        T f = lu_(i, k) / lu_(k, k);
        for (std::size_t j = k + 1; j < n; ++j)
          lu_(i, j) -= f * lu_(k, j);
        lu_(i, k) = std::move(f);
      }
    }
    if (n) {
      pivot_max_ = magnitude(lu_(0, 0));
      pivot_min_ = pivot_max_;
      for (std::size_t k = 1; k < n; ++k) {
        Real m = magnitude(lu_(k, k));
        pivot_max_ = max(pivot_max_, m);
        pivot_min_ = min(pivot_min_, m);
      }
    }
  }

  std::size_t size() const { return lu_.rows(); }
  bool singular() const { return singular_; }
  const Real &pivot_max() const { return pivot_max_; }
  const Real &pivot_min() const { return pivot_min_; }
  // log2 of the largest-to-smallest pivot ratio: bits of cancellation to expect
  double pivot_bits_lost() const {
    if (singular_ || iszero(pivot_min_))
      return 1e300;
    return (log2(pivot_max_) - log2(pivot_min_)).to_double();
  }

  std::vector<T> solve(std::vector<T> b) const {
    const std::size_t n = size();
    check_rhs(b.size());
    std::vector<T> x(n);
    for (std::size_t i = 0; i < n; ++i)
      x[i] = b[perm_[i]];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j)
        x[i] -= lu_(i, j) * x[j];
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = i + 1; j < n; ++j)
        x[i] -= lu_(i, j) * x[j];
      x[i] /= lu_(i, i);
    }
    return x;
  }

  // solves A^T x = b with the same factorization
  std::vector<T> solve_transposed(std::vector<T> b) const {
    const std::size_t n = size();
    check_rhs(b.size());
    // A = P^T L U, so A^T = U^T L^T P
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j)
        b[i] -= lu_(j, i) * b[j];
      b[i] /= lu_(i, i);
    }
    for (std::size_t i = n; i-- > 0;)
      for (std::size_t j = i + 1; j < n; ++j)
        b[i] -= lu_(j, i) * b[j];
    std::vector<T> x(n);
    for (std::size_t i = 0; i < n; ++i)
      x[perm_[i]] = std::move(b[i]);
    return x;
  }

  T determinant() const {
    T d(sign_);
    for (std::size_t i = 0; i < size(); ++i)
      d *= lu_(i, i);
    return d;
  }

  Matrix<T> inverse() const {
    const std::size_t n = size();
    Matrix<T> inv(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<T> e(n);
      e[j] = T(1);
      auto col = solve(std::move(e));
      for (std::size_t i = 0; i < n; ++i)
        inv(i, j) = std::move(col[i]);
    }
    return inv;
  }

private:
  void check_rhs(std::size_t m) const {
    if (m != size())
      throw DomainError("right-hand side has wrong length");
    if (singular_)
      throw PrecisionInsufficient("matrix is numerically singular");
  }

  Matrix<T> lu_;
  std::vector<std::size_t> perm_;
  int sign_ = 1;
  bool singular_ = false;
  Real pivot_max_, pivot_min_;
};

template <class T> T determinant(const Matrix<T> &a) { return LU<T>(a).determinant(); }

template <class T> std::vector<T> solve(const Matrix<T> &a, std::vector<T> b) {
  return LU<T>(a).solve(std::move(b));
}

// Exact inverse of a 3x3 matrix by cofactors (used for constant combination matrices).
inline CMatrix inverse3(const CMatrix &m) {
  auto c = [&](int i, int j) -> const Complex & { return m(i, j); };
  CMatrix adj(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int i1 = (j + 1) % 3, i2 = (j + 2) % 3, j1 = (i + 1) % 3, j2 = (i + 2) % 3;
      adj(i, j) = c(i1, j1) * c(i2, j2) - c(i1, j2) * c(i2, j1);
    }
  Complex det = c(0, 0) * adj(0, 0) + c(0, 1) * adj(1, 0) + c(0, 2) * adj(2, 0);
  if (iszero(abs(det)))
    throw DomainError("singular 3x3 matrix");
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      adj(i, j) /= det;
  return adj;
}

} // namespace angelesco
