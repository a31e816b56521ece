#pragma once

// Exact elimination routines. Determinants over Q use fraction-free
// (Bareiss) elimination on row-scaled integer matrices; everything else is
// Gauss-Jordan in the field.

#include <cstddef>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#include "spinform/matrix.hpp"

namespace spinform {

template <Field F>
struct Rref {
  Matrix<F> reduced;
  std::vector<std::size_t> pivot_columns;
};

/// Reduced row echelon form; pivots are chosen as the first nonzero entry in row order.
template <Field F>
Rref<F> rref(Matrix<F> a) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t sel = row;
    while (sel < a.rows() && a(sel, col).is_zero()) ++sel;
    if (sel == a.rows()) continue;
    if (sel != row) {
      for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(sel, c), a(row, c));
    }
    const F inv = a(row, col).inverse();
    for (std::size_t c = col; c < a.cols(); ++c) a(row, c) = a(row, c) * inv;
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == row || a(r, col).is_zero()) continue;
      const F factor = a(r, col);
      for (std::size_t c = col; c < a.cols(); ++c) a(r, c) = a(r, c) - factor * a(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(a), std::move(pivots)};
}

template <Field F>
std::size_t rank(const Matrix<F>& a) {
  return rref(a).pivot_columns.size();
}

/// Kernel basis as the columns of the returned matrix.
///
/// One vector per free column, in increasing column order; each vector is
/// scaled so that its first nonzero coordinate equals 1.
template <Field F>
Matrix<F> kernel_basis(const Matrix<F>& a) {
  const auto [r, pivots] = rref(a);
  const std::size_t n = a.cols();
  std::vector<bool> is_pivot(n, false);
  for (std::size_t p : pivots) is_pivot[p] = true;
  std::vector<std::vector<F>> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    std::vector<F> v(n, a.zero());
    v[free] = one_like(a.zero());
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r(i, free);
    std::size_t lead = 0;
    while (v[lead].is_zero()) ++lead;
    const F inv = v[lead].inverse();
    for (auto& x : v) x = x * inv;
    basis.push_back(std::move(v));
  }
  return from_columns(basis, n, a.zero());
}

template <Field F>
F determinant(const Matrix<F>& a) {
  if (!a.is_square()) throw DimensionMismatch("determinant of " + a.shape());
  const std::size_t n = a.rows();
  if (n == 0) return one_like(a.zero());
  if constexpr (std::is_same_v<F, Rational>) {
    // Scale each row to integers, then run Bareiss; every division is exact.
    std::vector<mpz_class> m(n * n);
    mpz_class scale = 1;
    for (std::size_t i = 0; i < n; ++i) {
      mpz_class l = 1;
      for (std::size_t j = 0; j < n; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).denominator().get_mpz_t());
      scale *= l;
      for (std::size_t j = 0; j < n; ++j) m[i * n + j] = a(i, j).numerator() * (l / a(i, j).denominator());
    }
    int sign = 1;
    mpz_class prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (m[k * n + k] == 0) {
        std::size_t sel = k + 1;
        while (sel < n && m[sel * n + k] == 0) ++sel;
        if (sel == n) return Rational();
        for (std::size_t j = 0; j < n; ++j) std::swap(m[k * n + j], m[sel * n + j]);
        sign = -sign;
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        for (std::size_t j = k + 1; j < n; ++j) {
          mpz_class v = m[i * n + j] * m[k * n + k] - m[i * n + k] * m[k * n + j];
          mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
          m[i * n + j] = std::move(v);
        }
      }
      prev = m[k * n + k];
    }
    return Rational(m[n * n - 1] * sign, scale);
  } else {
    Matrix<F> m = a;
    F det = one_like(a.zero());
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t sel = k;
      while (sel < n && m(sel, k).is_zero()) ++sel;
      if (sel == n) return a.zero();
      if (sel != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(sel, j));
        det = -det;
      }
      det = det * m(k, k);
      const F inv = m(k, k).inverse();
      for (std::size_t i = k + 1; i < n; ++i) {
        if (m(i, k).is_zero()) continue;
        const F f = m(i, k) * inv;
        for (std::size_t j = k; j < n; ++j) m(i, j) = m(i, j) - f * m(k, j);
      }
    }
    return det;
  }
}

template <Field F>
Matrix<F> inverse(const Matrix<F>& a) {
  if (!a.is_square()) throw DimensionMismatch("inverse of " + a.shape());
  const std::size_t n = a.rows();
  const auto [r, pivots] = rref(hstack(a, Matrix<F>::identity(n, a.zero())));
  if (pivots.size() < n || pivots[n - 1] != n - 1) throw Singular("matrix is not invertible");
  return r.block(0, n, n, n);
}

/// Some X with A X = B (free variables set to zero), or nullopt if inconsistent.
template <Field F>
std::optional<Matrix<F>> solve(const Matrix<F>& a, const Matrix<F>& b) {
  if (a.rows() != b.rows()) throw DimensionMismatch("solve " + a.shape() + " / " + b.shape());
  const std::size_t n = a.cols();
  const auto [r, pivots] = rref(hstack(a, b));
  Matrix<F> x(n, b.cols(), a.zero());
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    if (pivots[i] >= n) return std::nullopt;
    for (std::size_t c = 0; c < b.cols(); ++c) x(pivots[i], c) = r(i, n + c);
  }
  return x;
}

/// Coordinates of the columns of `v` in the basis given by the columns of `basis`.
template <Field F>
Matrix<F> coordinates_in(const Matrix<F>& basis, const Matrix<F>& v) {
  auto x = solve(basis, v);
  if (!x) throw DimensionMismatch("vector not in the span of the basis");
  return *std::move(x);
}

/// Flattens a matrix row-major into a column vector.
template <class T>
std::vector<T> flatten(const Matrix<T>& m) {
  return std::vector<T>(m.entries().begin(), m.entries().end());
}

}  // namespace spinform
