#pragma once

#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spinform/error.hpp"
#include "spinform/scalar.hpp"

namespace spinform {

/// Dense row-major matrix over a commutative ring element type.
///
/// The matrix keeps a zero element of its ring so that empty matrices still
/// know which field they belong to. Element types only need `+ - *` and the
/// free functions `zero_like` / `one_like`; the field algorithms in
/// linalg.hpp additionally require `Field`.
template <class T>
class Matrix {
 public:
  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols, const T& fill)
      : rows_(rows), cols_(cols), zero_(zero_like(fill)), entries_(rows * cols, fill) {}

  Matrix(std::size_t rows, std::size_t cols, std::vector<T> entries, const T& zero)
      : rows_(rows), cols_(cols), zero_(zero), entries_(std::move(entries)) {
    if (entries_.size() != rows * cols) {
      throw DimensionMismatch("expected " + std::to_string(rows * cols) + " entries, got " +
                              std::to_string(entries_.size()));
    }
  }

  static Matrix zeros(std::size_t rows, std::size_t cols, const T& zero) {
    return Matrix(rows, cols, zero);
  }

  static Matrix identity(std::size_t n, const T& zero) {
    Matrix m(n, n, zero);
    const T one = one_like(zero);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  const T& zero() const { return zero_; }

  T& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  std::span<const T> entries() const { return entries_; }

  std::vector<T> column(std::size_t c) const {
    std::vector<T> out;
    out.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out.push_back((*this)(r, c));
    return out;
  }

  std::vector<T> row(std::size_t r) const {
    return std::vector<T>(entries_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                          entries_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_, zero_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionMismatch("block out of range");
    Matrix b(nr, nc, zero_);
    for (std::size_t r = 0; r < nr; ++r)
      for (std::size_t c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
    return b;
  }

  Matrix& operator+=(const Matrix& o) {
    same_shape(o, "+");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] = entries_[i] + o.entries_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    same_shape(o, "-");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] = entries_[i] - o.entries_[i];
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  Matrix operator-() const {
    Matrix m(rows_, cols_, zero_);
    for (std::size_t i = 0; i < entries_.size(); ++i) m.entries_[i] = zero_ - entries_[i];
    return m;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) {
      throw DimensionMismatch(a.shape() + " * " + b.shape());
    }
    Matrix c(a.rows_, b.cols_, a.zero_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) = c(i, j) + aik * b(k, j);
      }
    }
    return c;
  }

  friend Matrix operator*(const T& s, const Matrix& m) {
    Matrix r = m;
    for (auto& e : r.entries_) e = s * e;
    return r;
  }

  friend std::vector<T> operator*(const Matrix& a, const std::vector<T>& x) {
    if (a.cols_ != x.size()) throw DimensionMismatch(a.shape() + " * vector");
    std::vector<T> y(a.rows_, a.zero_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) y[i] = y[i] + a(i, k) * x[k];
    return y;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

  friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
    os << '[';
    for (std::size_t r = 0; r < m.rows_; ++r) {
      os << (r ? "; " : "");
      for (std::size_t c = 0; c < m.cols_; ++c) os << (c ? " " : "") << m(r, c).to_string();
    }
    return os << ']';
  }

 private:
  void same_shape(const Matrix& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw DimensionMismatch(shape() + " " + op + " " + o.shape());
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  T zero_{};
  std::vector<T> entries_;
};

// Field-typed constructors ---------------------------------------------------

template <Field F>
Matrix<F> zeros(std::size_t rows, std::size_t cols, const FieldDescriptor& field) {
  return Matrix<F>(rows, cols, F::zero(field));
}

template <Field F>
Matrix<F> identity(std::size_t n, const FieldDescriptor& field) {
  return Matrix<F>::identity(n, F::zero(field));
}

/// Builds a matrix from small integer literals, row-major.
template <Field F>
Matrix<F> from_ints(std::size_t rows, std::size_t cols, std::initializer_list<long long> values,
                    const FieldDescriptor& field) {
  if (values.size() != rows * cols) throw DimensionMismatch("from_ints: wrong entry count");
  std::vector<F> entries;
  entries.reserve(values.size());
  for (long long v : values) entries.push_back(F::from_int(v, field));
  return Matrix<F>(rows, cols, std::move(entries), F::zero(field));
}

template <class T>
Matrix<T> diagonal(const std::vector<T>& values, const T& zero) {
  Matrix<T> m(values.size(), values.size(), zero);
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

template <class T>
Matrix<T> column_matrix(const std::vector<T>& v, const T& zero) {
  return Matrix<T>(v.size(), 1, v, zero);
}

template <class T>
Matrix<T> block_diag(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> m(a.rows() + b.rows(), a.cols() + b.cols(), a.zero());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) m(r, c) = a(r, c);
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) m(a.rows() + r, a.cols() + c) = b(r, c);
  return m;
}

/// Columns of `a` followed by columns of `b`.
template <class T>
Matrix<T> hstack(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows()) throw DimensionMismatch("hstack " + a.shape() + " | " + b.shape());
  Matrix<T> m(a.rows(), a.cols() + b.cols(), a.zero());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) m(r, c) = a(r, c);
    for (std::size_t c = 0; c < b.cols(); ++c) m(r, a.cols() + c) = b(r, c);
  }
  return m;
}

template <class T>
Matrix<T> from_columns(const std::vector<std::vector<T>>& cols, std::size_t rows, const T& zero) {
  Matrix<T> m(rows, cols.size(), zero);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].size() != rows) throw DimensionMismatch("from_columns: ragged columns");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = cols[c][r];
  }
  return m;
}

/// Commutator XY - YX.
template <class T>
Matrix<T> commutator(const Matrix<T>& x, const Matrix<T>& y) {
  return x * y - y * x;
}

}  // namespace spinform
