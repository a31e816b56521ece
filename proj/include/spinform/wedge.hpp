#pragma once

// The wedge-square representation of GL_4 on Lambda^2(k^4) and its derivative.
// Basis order is lexicographic: (1,2),(1,3),(1,4),(2,3),(2,4),(3,4).

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "spinform/matrix.hpp"

namespace spinform {

inline constexpr std::array<std::pair<std::size_t, std::size_t>, 6> kWedgeBasis = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Position of e_i ^ e_j (i < j, zero-based) in the wedge basis.
constexpr std::size_t wedge_index(std::size_t i, std::size_t j) {
  for (std::size_t k = 0; k < kWedgeBasis.size(); ++k) {
    if (kWedgeBasis[k].first == i && kWedgeBasis[k].second == j) return k;
  }
  return kWedgeBasis.size();
}

/// Coordinates of u ^ v in the wedge basis.
template <class T>
std::vector<T> wedge_coords(const std::vector<T>& u, const std::vector<T>& v) {
  std::vector<T> out;
  out.reserve(6);
  for (const auto& [i, j] : kWedgeBasis) out.push_back(u[i] * v[j] - u[j] * v[i]);
  return out;
}

/// Matrix of v ^ w -> Av ^ Aw; entries are the 2x2 minors of A.
template <class T>
Matrix<T> wedge_square(const Matrix<T>& a) {
  if (a.rows() != 4 || a.cols() != 4) throw DimensionMismatch("wedge_square of " + a.shape());
  Matrix<T> out(6, 6, a.zero());
  for (std::size_t c = 0; c < 6; ++c) {
    const auto [j1, j2] = kWedgeBasis[c];
    for (std::size_t r = 0; r < 6; ++r) {
      const auto [i1, i2] = kWedgeBasis[r];
      out(r, c) = a(i1, j1) * a(i2, j2) - a(i2, j1) * a(i1, j2);
    }
  }
  return out;
}

/// Matrix of v ^ w -> Xv ^ w + v ^ Xw, the derivative of wedge_square at the identity.
template <class T>
Matrix<T> lie_wedge_square(const Matrix<T>& x) {
  if (x.rows() != 4 || x.cols() != 4) throw DimensionMismatch("lie_wedge_square of " + x.shape());
  const Matrix<T> id = Matrix<T>::identity(4, x.zero());
  Matrix<T> out(6, 6, x.zero());
  for (std::size_t c = 0; c < 6; ++c) {
    const auto [j1, j2] = kWedgeBasis[c];
    const auto left = wedge_coords(x.column(j1), id.column(j2));
    const auto right = wedge_coords(id.column(j1), x.column(j2));
    for (std::size_t r = 0; r < 6; ++r) out(r, c) = left[r] + right[r];
  }
  return out;
}

}  // namespace spinform
