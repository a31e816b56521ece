#pragma once

// SL(n), Sp_4 and SO(q) as explicit matrix groups with exact membership tests.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "spinform/quadform.hpp"
#include "spinform/random.hpp"

namespace spinform {

enum class GroupKind { special_linear, symplectic4, special_orthogonal };

/// J = [[0,1],[-1,0]].
template <Field F>
Matrix<F> standard_j(const FieldDescriptor& field) {
  return from_ints<F>(2, 2, {0, 1, -1, 0}, field);
}

/// The symplectic Gram block-diag(J, J) fixed throughout.
template <Field F>
Matrix<F> standard_symplectic_form(const FieldDescriptor& field) {
  return block_diag(standard_j<F>(field), standard_j<F>(field));
}

template <Field F>
class GroupDescriptor {
 public:
  static GroupDescriptor special_linear(std::size_t n, const FieldDescriptor& field) {
    if (n == 0) throw UnsupportedGroup("SL(0)");
    return GroupDescriptor(GroupKind::special_linear, n, zeros<F>(0, 0, field));
  }

  static GroupDescriptor symplectic4(const FieldDescriptor& field) {
    return symplectic4(standard_symplectic_form<F>(field));
  }

  static GroupDescriptor symplectic4(Matrix<F> omega) {
    if (omega.rows() != 4 || omega.cols() != 4) throw DimensionMismatch("symplectic form must be 4x4");
    if (!(omega.transpose() == -omega)) throw UnsupportedGroup("symplectic form must be antisymmetric");
    if (determinant(omega).is_zero()) throw UnsupportedGroup("symplectic form must be invertible");
    return GroupDescriptor(GroupKind::symplectic4, 4, std::move(omega));
  }

  static GroupDescriptor special_orthogonal(const QuadraticForm<F>& q) {
    if (!is_nonsingular(q)) throw SingularForm("SO of a singular form");
    return GroupDescriptor(GroupKind::special_orthogonal, q.rank(), q.gram());
  }

  GroupKind kind() const { return kind_; }
  std::size_t dimension() const { return n_; }
  /// Omega for Sp_4, the Gram matrix for SO; empty for SL.
  const Matrix<F>& form() const { return form_; }
  FieldDescriptor field() const { return form_.zero().field(); }

  std::string name() const {
    switch (kind_) {
      case GroupKind::special_linear: return "SL(" + std::to_string(n_) + ")";
      case GroupKind::symplectic4: return "Sp(4)";
      case GroupKind::special_orthogonal: return "SO(" + std::to_string(n_) + ")";
    }
    return "?";
  }

  friend bool operator==(const GroupDescriptor&, const GroupDescriptor&) = default;

 private:
  GroupDescriptor(GroupKind kind, std::size_t n, Matrix<F> form) : kind_(kind), n_(n), form_(std::move(form)) {}

  GroupKind kind_;
  std::size_t n_;
  Matrix<F> form_;
};

template <Field F>
bool check_membership(const Matrix<F>& m, const GroupDescriptor<F>& g) {
  if (m.rows() != g.dimension() || m.cols() != g.dimension()) {
    throw DimensionMismatch(m.shape() + " matrix for " + g.name());
  }
  switch (g.kind()) {
    case GroupKind::special_linear:
      return determinant(m).is_one();
    case GroupKind::symplectic4:
      return m.transpose() * g.form() * m == g.form();
    case GroupKind::special_orthogonal:
      return m.transpose() * g.form() * m == g.form() && determinant(m).is_one();
  }
  return false;
}

/// A matrix together with the group it is certified to lie in.
template <Field F>
class GroupElement {
 public:
  GroupElement(GroupDescriptor<F> group, Matrix<F> matrix) : group_(std::move(group)), matrix_(std::move(matrix)) {
    if (!check_membership(matrix_, group_)) {
      throw MembershipFailure("matrix is not an element of " + group_.name());
    }
  }

  const GroupDescriptor<F>& group() const { return group_; }
  const Matrix<F>& matrix() const { return matrix_; }

  friend GroupElement operator*(const GroupElement& a, const GroupElement& b) {
    if (!(a.group_ == b.group_)) throw MembershipFailure("product across groups");
    return GroupElement(a.group_, a.matrix_ * b.matrix_);
  }

  GroupElement inverse() const { return GroupElement(group_, spinform::inverse(matrix_)); }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;

 private:
  GroupDescriptor<F> group_;
  Matrix<F> matrix_;
};

/// Elementary transvection I + t E_ij (i != j).
template <Field F>
Matrix<F> elementary(std::size_t n, std::size_t i, std::size_t j, const F& t) {
  Matrix<F> m = identity<F>(n, t.field());
  m(i, j) = t;
  return m;
}

/// Symplectic transvection x -> x + t * omega(x, v) * v, i.e. I + t v v^t Omega^t.
template <Field F>
Matrix<F> symplectic_transvection(const Matrix<F>& omega, const std::vector<F>& v, const F& t) {
  const Matrix<F> col = column_matrix(v, omega.zero());
  return Matrix<F>::identity(omega.rows(), omega.zero()) + t * (col * col.transpose() * omega.transpose());
}

/// Reflection in the anisotropic vector v: x -> x - B(x, v) / q(v) * v, with B given by `gram`.
template <Field F>
Matrix<F> reflection(const Matrix<F>& gram, const std::vector<F>& v) {
  const std::vector<F> gv = gram * v;
  F bvv = gram.zero();
  for (std::size_t i = 0; i < v.size(); ++i) bvv = bvv + v[i] * gv[i];
  if (bvv.is_zero()) throw ZeroInput("reflection in an isotropic vector");
  const F scale = F::from_int(2, gram.zero().field()) / bvv;
  Matrix<F> m = Matrix<F>::identity(gram.rows(), gram.zero());
  for (std::size_t r = 0; r < v.size(); ++r)
    for (std::size_t c = 0; c < v.size(); ++c) m(r, c) = m(r, c) - scale * v[r] * gv[c];
  return m;
}

/// Product of 2 * length reflections in random anisotropic vectors.
template <Field F>
Matrix<F> random_orthogonal_matrix(const GroupDescriptor<F>& g, Rng& rng, std::size_t length) {
  const FieldDescriptor field = g.field();
  const std::size_t n = g.dimension();
  Matrix<F> m = identity<F>(n, field);
  for (std::size_t k = 0; k < 2 * length; ++k) {
    while (true) {
      std::vector<F> v(n, F::zero(field));
      for (auto& x : v) x = field.is_rationals() ? F::from_int(rng.between(-1, 1), field) : random_scalar<F>(rng, field);
      const std::vector<F> gv = g.form() * v;
      F bvv = F::zero(field);
      for (std::size_t i = 0; i < n; ++i) bvv = bvv + v[i] * gv[i];
      if (bvv.is_zero()) continue;
      m = m * reflection(g.form(), v);
      break;
    }
  }
  return m;
}

template <Field F>
Matrix<F> random_matrix_in(const GroupDescriptor<F>& g, Rng& rng, std::size_t length) {
  if (length == 0) throw UnsupportedGroup("random_element needs length >= 1");
  const FieldDescriptor field = g.field();
  const std::size_t n = g.dimension();
  switch (g.kind()) {
    case GroupKind::special_linear: {
      if (n == 1) return identity<F>(1, field);
      Matrix<F> m = identity<F>(n, field);
      for (std::size_t k = 0; k < length; ++k) {
        const std::size_t i = rng.below(n);
        std::size_t j = rng.below(n - 1);
        if (j >= i) ++j;
        m = m * elementary(n, i, j, random_nonzero_scalar<F>(rng, field));
      }
      return m;
    }
    case GroupKind::symplectic4: {
      Matrix<F> m = identity<F>(4, field);
      for (std::size_t k = 0; k < length; ++k) {
        std::vector<F> v(4, F::zero(field));
        bool nonzero = false;
        while (!nonzero) {
          for (auto& x : v) {
            x = field.is_rationals() ? F::from_int(rng.between(-1, 1), field) : random_scalar<F>(rng, field);
            nonzero = nonzero || !x.is_zero();
          }
        }
        m = m * symplectic_transvection(g.form(), v, random_nonzero_scalar<F>(rng, field));
      }
      return m;
    }
    case GroupKind::special_orthogonal:
      return random_orthogonal_matrix(g, rng, length);
  }
  throw UnsupportedGroup(g.name());
}

/// Product of `length` seeded random elementary generators; membership re-checked.
template <Field F>
GroupElement<F> random_element(const GroupDescriptor<F>& g, Rng& rng, std::size_t length) {
  return GroupElement<F>(g, random_matrix_in(g, rng, length));
}

template <Field F>
GroupElement<F> random_element(const GroupDescriptor<F>& g, std::uint64_t seed, std::size_t length) {
  Rng rng(seed);
  return random_element(g, rng, length);
}

/// (A, B) -> block-diag(A, B) in Sp_4 for Omega = block-diag(J, J).
template <Field F>
GroupElement<F> long_root_embedding(const GroupElement<F>& a, const GroupElement<F>& b) {
  const auto sl2 = GroupDescriptor<F>::special_linear(2, a.group().field());
  if (!(a.group() == sl2) || !(b.group() == sl2)) throw MembershipFailure("long_root_embedding takes SL(2) x SL(2)");
  return GroupElement<F>(GroupDescriptor<F>::symplectic4(a.group().field()), block_diag(a.matrix(), b.matrix()));
}

template <Field F>
std::pair<GroupElement<F>, GroupElement<F>> diagonal_embedding(const GroupElement<F>& a) {
  return {a, a};
}

/// The natural inclusion Sp_4 into SL_4.
template <Field F>
GroupElement<F> symplectic_to_special_linear(const GroupElement<F>& s) {
  return GroupElement<F>(GroupDescriptor<F>::special_linear(4, s.group().field()), s.matrix());
}

/// One named factor of a word in elementary symplectic matrices: I + t * N.
template <Field F>
struct ElementaryFactor {
  std::string name;
  Matrix<F> matrix;
};

/// Word in root-group elements whose product is the plane swap e1<->e3, e2<->e4.
///
/// Short root: x(t) = I + t (E13 - E42), x'(t) = I + t (E31 - E24); x(1) x'(-1) x(1)
/// sends (e1, e2, e3, e4) to (-e3, -e4, e1, e2). Long root in the first plane:
/// u(t) = I + t E12, l(t) = I + t E21; (u(1) l(-1) u(1))^2 = diag(-1, -1, 1, 1)
/// fixes the signs.
template <Field F>
std::vector<ElementaryFactor<F>> weyl_swap_factorization(const FieldDescriptor& field) {
  auto unit = [&](std::initializer_list<std::pair<std::size_t, std::size_t>> plus,
                  std::initializer_list<std::pair<std::size_t, std::size_t>> minus, long long t) {
    Matrix<F> m = identity<F>(4, field);
    for (auto [i, j] : plus) m(i, j) = m(i, j) + F::from_int(t, field);
    for (auto [i, j] : minus) m(i, j) = m(i, j) - F::from_int(t, field);
    return m;
  };
  const Matrix<F> xs = unit({{0, 2}}, {{3, 1}}, 1);
  const Matrix<F> ys = unit({{2, 0}}, {{1, 3}}, -1);
  const Matrix<F> u = unit({{0, 1}}, {}, 1);
  const Matrix<F> l = unit({{1, 0}}, {}, -1);
  return {{"x_short(1)", xs}, {"x_-short(-1)", ys}, {"x_short(1)", xs},
          {"x_long(1)", u},   {"x_-long(-1)", l},   {"x_long(1)", u},
          {"x_long(1)", u},   {"x_-long(-1)", l},   {"x_long(1)", u}};
}

/// The fixed element of Sp_4 conjugating block-diag(A, B) to block-diag(B, A).
template <Field F>
GroupElement<F> weyl_swap_conjugator(const FieldDescriptor& field) {
  Matrix<F> w = zeros<F>(4, 4, field);
  w(0, 2) = w(1, 3) = w(2, 0) = w(3, 1) = F::one(field);
  return GroupElement<F>(GroupDescriptor<F>::symplectic4(field), std::move(w));
}

template <Field F>
json to_json(const GroupDescriptor<F>& g) {
  switch (g.kind()) {
    case GroupKind::special_linear:
      return json{{"kind", "special_linear"}, {"n", g.dimension()}, {"field", g.field().to_string()}};
    case GroupKind::symplectic4:
      return json{{"kind", "symplectic4"}, {"omega", to_json(g.form())}};
    case GroupKind::special_orthogonal:
      return json{{"kind", "special_orthogonal"}, {"gram", to_json(g.form())}};
  }
  return nullptr;
}

template <Field F>
GroupDescriptor<F> group_from_json(const json& j, const FieldDescriptor& field) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "special_linear") return GroupDescriptor<F>::special_linear(j.at("n").get<std::size_t>(), field);
  if (kind == "symplectic4") {
    return j.contains("omega") ? GroupDescriptor<F>::symplectic4(matrix_from_json<F>(j.at("omega")))
                               : GroupDescriptor<F>::symplectic4(field);
  }
  if (kind == "special_orthogonal") {
    return GroupDescriptor<F>::special_orthogonal(QuadraticForm<F>(matrix_from_json<F>(j.at("gram"))));
  }
  throw ParseError("unknown group kind '" + kind + "'");
}

template <Field F>
json to_json(const GroupElement<F>& e) {
  return json{{"group", to_json(e.group())}, {"matrix", to_json(e.matrix())}};
}

/// Reads {"group": ..., "matrix": ...}; the field comes from the matrix.
template <Field F>
GroupElement<F> group_element_from_json(const json& j) {
  try {
    Matrix<F> m = matrix_from_json<F>(j.at("matrix"));
    const FieldDescriptor field = m.zero().field();
    return GroupElement<F>(group_from_json<F>(j.at("group"), field), std::move(m));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed group element: ") + e.what());
  }
}

}  // namespace spinform
