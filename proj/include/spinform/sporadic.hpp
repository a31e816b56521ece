#pragma once

// The four sporadic isogenies as matrix functors:
//
//   spin6: SL_4 -> SO(G6)        A |-> wedge_square(A)
//   spin5: Sp_4 -> SO(G5)        wedge_square restricted to ker(omega)
//   spin4: SL_2 x SL_2 -> SO(G4) M |-> A M B^-1 on Mat_2x2
//   spin3: SL_2 -> SO(G3)        X |-> A X A^-1 on trace-zero matrices
//
// together with the forms they preserve. Bases: wedge basis in lexicographic
// order; Mat_2x2 as (E11, E12, E21, E22); trace-zero as (E12, H, E21).

#include <cstddef>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "spinform/groups.hpp"
#include "spinform/wedge.hpp"

namespace spinform {

/// Coordinates of e_i ^ e_j for arbitrary distinct one-based indices.
template <Field F>
std::vector<F> basis_wedge(std::size_t i, std::size_t j, const FieldDescriptor& field) {
  const Matrix<F> id = identity<F>(4, field);
  return wedge_coords(id.column(i - 1), id.column(j - 1));
}

template <Field F>
struct FormTable {
  Matrix<F> g6;             // determinant pairing on Lambda^2(k^4)
  Matrix<F> omega_row;      // 1x6, omega(e_i ^ e_j) = Omega_ij
  Matrix<F> kernel_basis;   // 6x5 canonical basis of ker(omega)
  Matrix<F> g5;             // G6 restricted to kernel_basis
  Matrix<F> g4;             // -tr(X W Y^t W^-1) on Mat_2x2
  Matrix<F> g3;             // tr(XY) on trace-zero matrices
  Matrix<F> stab45_matrix;  // 6x4, images of E11, E12, E21, E22
  Matrix<F> trace_zero;     // 4x3, (E12, H, E21) in Mat_2x2 coordinates
  std::vector<F> identity_matrix;    // I_2 in Mat_2x2 coordinates
  std::vector<F> complement_line;    // e1^e2 + e3^e4, spans the complement of ker(omega)
  std::vector<F> hyperbolic_minus;   // e1^e2 - e3^e4

  static FormTable build(const FieldDescriptor& field) {
    FormTable t;
    const F zero = F::zero(field);
    const Matrix<F> id4 = identity<F>(4, field);

    t.g6 = Matrix<F>(6, 6, zero);
    for (std::size_t a = 0; a < 6; ++a) {
      for (std::size_t b = 0; b < 6; ++b) {
        const auto [i1, j1] = kWedgeBasis[a];
        const auto [i2, j2] = kWedgeBasis[b];
        t.g6(a, b) = determinant(from_columns<F>({id4.column(i1), id4.column(j1), id4.column(i2), id4.column(j2)}, 4, zero));
      }
    }

    const Matrix<F> omega = standard_symplectic_form<F>(field);
    t.omega_row = Matrix<F>(1, 6, zero);
    for (std::size_t a = 0; a < 6; ++a) t.omega_row(0, a) = omega(kWedgeBasis[a].first, kWedgeBasis[a].second);
    t.kernel_basis = spinform::kernel_basis(t.omega_row);
    t.g5 = t.kernel_basis.transpose() * t.g6 * t.kernel_basis;

    const auto mat_basis = matrix_units(field);
    const Matrix<F> w = from_ints<F>(2, 2, {0, -1, 1, 0}, field);
    const Matrix<F> w_inv = inverse(w);
    t.g4 = Matrix<F>(4, 4, zero);
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b)
        t.g4(a, b) = -trace(mat_basis[a] * w * mat_basis[b].transpose() * w_inv);

    const auto tz = trace_zero_basis(field);
    t.g3 = Matrix<F>(3, 3, zero);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) t.g3(a, b) = trace(tz[a] * tz[b]);

    t.stab45_matrix = from_columns<F>({basis_wedge<F>(4, 1, field), basis_wedge<F>(1, 3, field),
                                       basis_wedge<F>(4, 2, field), basis_wedge<F>(2, 3, field)},
                                      6, zero);
    std::vector<std::vector<F>> tz_cols;
    for (const auto& m : tz) tz_cols.push_back(flatten(m));
    t.trace_zero = from_columns(tz_cols, 4, zero);
    t.identity_matrix = flatten(identity<F>(2, field));

    const auto e12 = basis_wedge<F>(1, 2, field);
    const auto e34 = basis_wedge<F>(3, 4, field);
    for (std::size_t k = 0; k < 6; ++k) {
      t.complement_line.push_back(e12[k] + e34[k]);
      t.hyperbolic_minus.push_back(e12[k] - e34[k]);
    }
    return t;
  }

  /// E11, E12, E21, E22.
  static std::vector<Matrix<F>> matrix_units(const FieldDescriptor& field) {
    std::vector<Matrix<F>> out;
    for (std::size_t k = 0; k < 4; ++k) {
      Matrix<F> m = zeros<F>(2, 2, field);
      m(k / 2, k % 2) = F::one(field);
      out.push_back(std::move(m));
    }
    return out;
  }

  /// E12, H = diag(1, -1), E21.
  static std::vector<Matrix<F>> trace_zero_basis(const FieldDescriptor& field) {
    return {from_ints<F>(2, 2, {0, 1, 0, 0}, field), from_ints<F>(2, 2, {1, 0, 0, -1}, field),
            from_ints<F>(2, 2, {0, 0, 1, 0}, field)};
  }

  static F trace(const Matrix<F>& m) {
    F s = m.zero();
    for (std::size_t i = 0; i < m.rows(); ++i) s = s + m(i, i);
    return s;
  }
};

/// Shared, lazily built table per field.
template <Field F>
const FormTable<F>& form_table(const FieldDescriptor& field) {
  static std::mutex mutex;
  static std::map<std::uint64_t, FormTable<F>> cache;
  const std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(field.modulus());
  if (it == cache.end()) it = cache.emplace(field.modulus(), FormTable<F>::build(field)).first;
  return it->second;
}

// Ring-generic kernels (also used on expression matrices) -------------------

/// adj([[a,b],[c,d]]) = [[d,-b],[-c,a]]; the inverse on SL_2.
template <class T>
Matrix<T> adjugate2(const Matrix<T>& a) {
  if (a.rows() != 2 || a.cols() != 2) throw DimensionMismatch("adjugate2 of " + a.shape());
  Matrix<T> r(2, 2, a.zero());
  r(0, 0) = a(1, 1);
  r(0, 1) = a.zero() - a(0, 1);
  r(1, 0) = a.zero() - a(1, 0);
  r(1, 1) = a(0, 0);
  return r;
}

/// Matrix of M |-> A M C on Mat_2x2 in the basis (E11, E12, E21, E22).
template <class T>
Matrix<T> two_sided_action(const Matrix<T>& a, const Matrix<T>& c) {
  Matrix<T> out(4, 4, a.zero());
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) out(2 * i + j, 2 * k + l) = a(i, k) * c(l, j);
  return out;
}

/// Matrix of X |-> A X C on trace-zero matrices (E12, H, E21), for C = A^-1.
template <class T>
Matrix<T> conjugation_action(const Matrix<T>& a, const Matrix<T>& a_inv) {
  const T zero = a.zero();
  const T one = one_like(zero);
  std::vector<Matrix<T>> basis(3, Matrix<T>(2, 2, zero));
  basis[0](0, 1) = one;
  basis[1](0, 0) = one;
  basis[1](1, 1) = zero - one;
  basis[2](1, 0) = one;
  Matrix<T> out(3, 3, zero);
  for (std::size_t c = 0; c < 3; ++c) {
    const Matrix<T> y = a * basis[c] * a_inv;
    out(0, c) = y(0, 1);
    out(1, c) = y(0, 0);
    out(2, c) = y(1, 0);
  }
  return out;
}

// Group-level maps -----------------------------------------------------------

template <Field F>
GroupDescriptor<F> so_of(const Matrix<F>& gram) {
  return GroupDescriptor<F>::special_orthogonal(QuadraticForm<F>(gram));
}

namespace detail {

template <Field F>
void require(const GroupElement<F>& g, const GroupDescriptor<F>& expected, const char* map) {
  if (!(g.group() == expected)) {
    throw MembershipFailure(std::string(map) + " expects " + expected.name() + ", got " + g.group().name());
  }
}

}  // namespace detail

template <Field F>
GroupElement<F> spin6_map(const GroupElement<F>& a) {
  const FieldDescriptor field = a.group().field();
  detail::require(a, GroupDescriptor<F>::special_linear(4, field), "spin6_map");
  return GroupElement<F>(so_of(form_table<F>(field).g6), wedge_square(a.matrix()));
}

template <Field F>
Matrix<F> spin5_matrix(const Matrix<F>& s, const FormTable<F>& table) {
  return coordinates_in(table.kernel_basis, wedge_square(s) * table.kernel_basis);
}

template <Field F>
GroupElement<F> spin5_map(const GroupElement<F>& s) {
  const FieldDescriptor field = s.group().field();
  detail::require(s, GroupDescriptor<F>::symplectic4(field), "spin5_map");
  const auto& table = form_table<F>(field);
  return GroupElement<F>(so_of(table.g5), spin5_matrix(s.matrix(), table));
}

template <Field F>
GroupElement<F> spin4_map(const GroupElement<F>& a, const GroupElement<F>& b) {
  const FieldDescriptor field = a.group().field();
  const auto sl2 = GroupDescriptor<F>::special_linear(2, field);
  detail::require(a, sl2, "spin4_map");
  detail::require(b, sl2, "spin4_map");
  return GroupElement<F>(so_of(form_table<F>(field).g4), two_sided_action(a.matrix(), adjugate2(b.matrix())));
}

template <Field F>
GroupElement<F> spin3_map(const GroupElement<F>& a) {
  const FieldDescriptor field = a.group().field();
  detail::require(a, GroupDescriptor<F>::special_linear(2, field), "spin3_map");
  return GroupElement<F>(so_of(form_table<F>(field).g3), conjugation_action(a.matrix(), adjugate2(a.matrix())));
}

// Lie algebra derivatives ----------------------------------------------------

/// ad(X) on trace-zero matrices.
template <Field F>
Matrix<F> lie_spin3(const Matrix<F>& x) {
  const Matrix<F> id = Matrix<F>::identity(2, x.zero());
  return conjugation_action(x, id) - conjugation_action(id, x);
}

/// M |-> X M - M Y.
template <Field F>
Matrix<F> lie_spin4(const Matrix<F>& x, const Matrix<F>& y) {
  const Matrix<F> id = Matrix<F>::identity(2, x.zero());
  return two_sided_action(x, id) - two_sided_action(id, y);
}

template <Field F>
Matrix<F> lie_spin5(const Matrix<F>& x, const FormTable<F>& table) {
  return coordinates_in(table.kernel_basis, lie_wedge_square(x) * table.kernel_basis);
}

/// Basis of sl_n: E_ij (i != j) in row-major order, then E_ii - E_{i+1,i+1}.
template <Field F>
std::vector<Matrix<F>> sl_basis(std::size_t n, const FieldDescriptor& field) {
  std::vector<Matrix<F>> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) out.push_back(elementary(n, i, j, F::one(field)) - identity<F>(n, field));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    Matrix<F> h = zeros<F>(n, n, field);
    h(i, i) = F::one(field);
    h(i + 1, i + 1) = -F::one(field);
    out.push_back(std::move(h));
  }
  return out;
}

/// Basis of sp_4 = {X : X^t Omega + Omega X = 0}, from the kernel of that linear map.
template <Field F>
std::vector<Matrix<F>> sp4_basis(const FieldDescriptor& field) {
  const Matrix<F> omega = standard_symplectic_form<F>(field);
  Matrix<F> system = zeros<F>(16, 16, field);
  for (std::size_t k = 0; k < 16; ++k) {
    Matrix<F> e = zeros<F>(4, 4, field);
    e(k / 4, k % 4) = F::one(field);
    const auto image = flatten(e.transpose() * omega + omega * e);
    for (std::size_t r = 0; r < 16; ++r) system(r, k) = image[r];
  }
  const Matrix<F> kernel = kernel_basis(system);
  std::vector<Matrix<F>> out;
  for (std::size_t c = 0; c < kernel.cols(); ++c) out.emplace_back(4, 4, kernel.column(c), F::zero(field));
  return out;
}

/// Rank of the linear map X |-> rep(X), as a matrix whose columns are flattened images.
template <Field F, class Rep>
std::size_t derivative_rank(const std::vector<Matrix<F>>& basis, Rep&& rep) {
  std::vector<std::vector<F>> cols;
  for (const auto& x : basis) cols.push_back(flatten(rep(x)));
  if (cols.empty()) return 0;
  return rank(from_columns(cols, cols[0].size(), basis[0].zero()));
}

}  // namespace spinform
