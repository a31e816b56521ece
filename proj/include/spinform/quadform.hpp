#pragma once

// Quadratic forms on free modules, stored by the Gram matrix of the polar
// bilinear form B(x, y) = q(x + y) - q(x) - q(y). Values are q(x) = B(x, x) / 2,
// which needs 2 to be invertible; characteristic 2 never reaches this code.

#include <cstddef>
#include <deque>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#include "spinform/certificate.hpp"
#include "spinform/linalg.hpp"

namespace spinform {

template <Field F>
class QuadraticForm {
 public:
  explicit QuadraticForm(Matrix<F> gram) : gram_(std::move(gram)) {
    if (!gram_.is_square()) throw DimensionMismatch("Gram matrix must be square, got " + gram_.shape());
    if (!(gram_ == gram_.transpose())) throw DimensionMismatch("Gram matrix must be symmetric");
  }

  /// Diagonal form sum_i values[i] * x_i^2.
  static QuadraticForm from_q_values(const std::vector<F>& values, const FieldDescriptor& field) {
    std::vector<F> doubled;
    doubled.reserve(values.size());
    for (const auto& v : values) doubled.push_back(v + v);
    return QuadraticForm(diagonal(doubled, F::zero(field)));
  }

  static QuadraticForm zero_rank(const FieldDescriptor& field) {
    return QuadraticForm(Matrix<F>(0, 0, F::zero(field)));
  }

  const Matrix<F>& gram() const { return gram_; }
  std::size_t rank() const { return gram_.rows(); }
  FieldDescriptor field() const { return gram_.zero().field(); }

  friend bool operator==(const QuadraticForm&, const QuadraticForm&) = default;

 private:
  Matrix<F> gram_;
};

template <Field F>
F polar(const QuadraticForm<F>& f, const std::vector<F>& x, const std::vector<F>& y) {
  if (x.size() != f.rank() || y.size() != f.rank()) throw DimensionMismatch("vector length vs form rank");
  const std::vector<F> gy = f.gram() * y;
  F s = f.gram().zero();
  for (std::size_t i = 0; i < x.size(); ++i) s = s + x[i] * gy[i];
  return s;
}

template <Field F>
F q_value(const QuadraticForm<F>& f, const std::vector<F>& x) {
  const F two = F::from_int(2, f.field());
  return polar(f, x, x) / two;
}

/// n copies of the hyperbolic plane, Gram block-diag([[0,1],[1,0]], ...).
template <Field F>
QuadraticForm<F> hyperbolic_form(std::size_t n, const FieldDescriptor& field) {
  Matrix<F> g = zeros<F>(2 * n, 2 * n, field);
  for (std::size_t i = 0; i < n; ++i) {
    g(2 * i, 2 * i + 1) = F::one(field);
    g(2 * i + 1, 2 * i) = F::one(field);
  }
  return QuadraticForm<F>(std::move(g));
}

template <Field F>
QuadraticForm<F> orthogonal_sum(const QuadraticForm<F>& f, const QuadraticForm<F>& g) {
  if (f.field() != g.field()) throw MixedFields(f.field().to_string() + " vs " + g.field().to_string());
  return QuadraticForm<F>(block_diag(f.gram(), g.gram()));
}

template <Field F>
F discriminant(const QuadraticForm<F>& f) {
  return determinant(f.gram());
}

template <Field F>
bool is_nonsingular(const QuadraticForm<F>& f) {
  return !discriminant(f).is_zero();
}

template <Field F>
struct Diagonalization {
  Matrix<F> change_of_basis;  // T with T^t G T = diag(diagonal)
  std::vector<F> diagonal;    // polar values B(t_i, t_i)
};

namespace detail {

// Congruence step on (T, G' = T^t G T): column `dst` of T gains c * column `src`.
template <Field F>
void add_column(Matrix<F>& t, Matrix<F>& g, std::size_t dst, std::size_t src, const F& c) {
  for (std::size_t r = 0; r < t.rows(); ++r) t(r, dst) = t(r, dst) + c * t(r, src);
  for (std::size_t r = 0; r < g.rows(); ++r) g(r, dst) = g(r, dst) + c * g(r, src);
  for (std::size_t k = 0; k < g.cols(); ++k) g(dst, k) = g(dst, k) + c * g(src, k);
}

template <Field F>
void swap_columns(Matrix<F>& t, Matrix<F>& g, std::size_t a, std::size_t b) {
  for (std::size_t r = 0; r < t.rows(); ++r) std::swap(t(r, a), t(r, b));
  for (std::size_t r = 0; r < g.rows(); ++r) std::swap(g(r, a), g(r, b));
  for (std::size_t k = 0; k < g.cols(); ++k) std::swap(g(a, k), g(b, k));
}

}  // namespace detail

/// Symmetric Gaussian elimination.
///
/// Pivot rule at step k: use G'(k,k) if nonzero; otherwise swap in the first
/// later index with a nonzero diagonal entry; otherwise add the first later
/// basis vector j with G'(k,j) != 0 to basis vector k (giving 2 G'(k,j) != 0).
template <Field F>
Diagonalization<F> diagonalize(const QuadraticForm<F>& f) {
  if (!is_nonsingular(f)) throw SingularForm("diagonalize needs a nonsingular form");
  const std::size_t n = f.rank();
  Matrix<F> t = identity<F>(n, f.field());
  Matrix<F> g = f.gram();
  for (std::size_t k = 0; k < n; ++k) {
    if (g(k, k).is_zero()) {
      std::size_t i = k + 1;
      while (i < n && g(i, i).is_zero()) ++i;
      if (i < n) {
        detail::swap_columns(t, g, k, i);
      } else {
        std::size_t j = k + 1;
        while (j < n && g(k, j).is_zero()) ++j;
        if (j == n) throw SingularForm("zero row during diagonalization");
        detail::add_column(t, g, k, j, F::one(f.field()));
      }
    }
    const F inv = g(k, k).inverse();
    for (std::size_t j = k + 1; j < n; ++j) {
      if (g(k, j).is_zero()) continue;
      detail::add_column(t, g, j, k, -(g(k, j) * inv));
    }
  }
  std::vector<F> diag;
  for (std::size_t i = 0; i < n; ++i) diag.push_back(g(i, i));
  return {std::move(t), std::move(diag)};
}

namespace detail {

template <Field F>
void require_finite(const QuadraticForm<F>& f, const char* op) {
  if constexpr (!std::is_same_v<F, ModP>) {
    throw WrongField(std::string(op) + " needs a finite field, got " + f.field().to_string());
  }
}

}  // namespace detail

namespace detail {

/// Isotropic coordinates for sum a_i z_i^2 with two or three nonzero a_i.
/// Two terms: z = (1, s) with s^2 = -a_1/a_2, smaller root. Three terms:
/// (z_1, z_2) runs lexicographically over F_p^2 \ {0} until
/// -(a_1 z_1^2 + a_2 z_2^2)/a_3 is a square (or zero).
inline std::optional<std::vector<ModP>> diagonal_isotropic(const std::vector<ModP>& a) {
  const FieldDescriptor field = a[0].field();
  if (a.size() == 2) {
    const ModP target = -(a[0] / a[1]);
    if (!is_square(target)) return std::nullopt;
    return std::vector<ModP>{ModP::one(field), sqrt_mod(target)};
  }
  const std::uint64_t p = field.modulus();
  const ModP inv3 = a[2].inverse();
  for (std::uint64_t z1 = 0; z1 < p; ++z1) {
    for (std::uint64_t z2 = (z1 == 0 ? 1 : 0); z2 < p; ++z2) {
      const ModP x1(z1, field);
      const ModP x2(z2, field);
      const ModP target = -((a[0] * x1 * x1 + a[1] * x2 * x2) * inv3);
      if (target.is_zero() || is_square(target)) return std::vector<ModP>{x1, x2, sqrt_mod(target)};
    }
  }
  throw SingularForm("ternary diagonal form without isotropic vector");
}

}  // namespace detail

/// A nonzero isotropic vector, or nullopt iff the form is anisotropic.
///
/// Works on a diagonalization sum a_i z_i^2 and searches the first two
/// (rank 2) or three (rank >= 3) coordinates.
template <Field F>
std::optional<std::vector<F>> find_isotropic(const QuadraticForm<F>& f) {
  detail::require_finite(f, "find_isotropic");
  if constexpr (std::is_same_v<F, ModP>) {
    if (!is_nonsingular(f)) throw SingularForm("find_isotropic needs a nonsingular form");
    const std::size_t n = f.rank();
    if (n < 2) return std::nullopt;
    const FieldDescriptor field = f.field();
    const auto [t, diag] = diagonalize(f);
    const ModP half = ModP::from_int(2, field).inverse();
    std::vector<ModP> a;
    for (std::size_t i = 0; i < std::min<std::size_t>(n, 3); ++i) a.push_back(diag[i] * half);
    const auto local = detail::diagonal_isotropic(a);
    if (!local) return std::nullopt;
    std::vector<ModP> z(n, ModP::zero(field));
    std::copy(local->begin(), local->end(), z.begin());
    return t * z;
  } else {
    return std::nullopt;
  }
}

template <Field F>
struct WittDecomposition {
  std::size_t witt_index = 0;
  /// Columns x_1, y_1, ..., x_w, y_w, then a basis of the anisotropic part.
  Matrix<F> hyperbolic_change_of_basis;
  QuadraticForm<F> anisotropic_residue;
};

/// Splits off hyperbolic planes until the remaining form is anisotropic.
///
/// After one diagonalization the work stays inside spans of two or three
/// pairwise orthogonal vectors: find isotropic x there, take y = e/B(x,e)
/// corrected by -q(y) x, and keep the orthogonal complement of the plane
/// (a single vector) for the next round.
template <Field F>
WittDecomposition<F> witt_decompose(const QuadraticForm<F>& f) {
  detail::require_finite(f, "witt_decompose");
  if constexpr (std::is_same_v<F, ModP>) {
    const FieldDescriptor field = f.field();
    const std::size_t n = f.rank();
    const auto [t, diag] = diagonalize(f);  // throws SingularForm
    const ModP zero = ModP::zero(field);
    const ModP two = ModP::from_int(2, field);
    const ModP half = two.inverse();

    struct Slot {
      std::vector<ModP> v;  // original coordinates
      ModP q;               // q-value
    };
    std::deque<Slot> pending;
    for (std::size_t i = 0; i < n; ++i) pending.push_back({t.column(i), diag[i] * half});

    auto expand = [&](const std::vector<ModP>& local) {
      std::vector<ModP> out(n, zero);
      for (std::size_t i = 0; i < local.size(); ++i) {
        if (local[i].is_zero()) continue;
        for (std::size_t r = 0; r < n; ++r) out[r] = out[r] + local[i] * pending[i].v[r];
      }
      return out;
    };

    std::vector<std::vector<ModP>> hyperbolic;
    while (pending.size() >= 2) {
      const std::size_t m = std::min<std::size_t>(pending.size(), 3);
      std::vector<ModP> a;
      for (std::size_t i = 0; i < m; ++i) a.push_back(pending[i].q);
      const auto iso = detail::diagonal_isotropic(a);
      if (!iso) break;
      const std::vector<ModP>& x = *iso;
      // Local polar form: B(u, v) = sum 2 a_i u_i v_i.
      std::vector<ModP> bx(m, zero);
      for (std::size_t i = 0; i < m; ++i) bx[i] = two * a[i] * x[i];
      std::size_t e = 0;
      while (bx[e].is_zero()) ++e;
      std::vector<ModP> y(m, zero);
      y[e] = bx[e].inverse();
      const ModP qy = a[e] * y[e] * y[e];
      for (std::size_t i = 0; i < m; ++i) y[i] = y[i] - qy * x[i];

      std::optional<Slot> complement;
      for (std::size_t g = 0; m == 3 && g < 3 && !complement; ++g) {
        if (g == e) continue;
        const ModP byg = two * a[g] * y[g];
        const ModP bxg = two * a[g] * x[g];
        std::vector<ModP> w(3, zero);
        w[g] = ModP::one(field);
        for (std::size_t i = 0; i < 3; ++i) w[i] = w[i] - byg * x[i] - bxg * y[i];
        ModP qw = zero;
        for (std::size_t i = 0; i < 3; ++i) qw = qw + a[i] * w[i] * w[i];
        if (!qw.is_zero()) complement = Slot{expand(w), qw};
      }
      if (m == 3 && !complement) throw SingularForm("hyperbolic plane without complement");
      hyperbolic.push_back(expand(x));
      hyperbolic.push_back(expand(y));
      for (std::size_t i = 0; i < m; ++i) pending.pop_front();
      if (complement) pending.push_front(std::move(*complement));
    }

    std::vector<std::vector<ModP>> all = hyperbolic;
    std::vector<ModP> residue_diag;
    for (const auto& s : pending) {
      all.push_back(s.v);
      residue_diag.push_back(s.q * two);
    }
    return {hyperbolic.size() / 2, from_columns(all, n, zero),
            residue_diag.empty() ? QuadraticForm<ModP>::zero_rank(field) : QuadraticForm<ModP>(diagonal(residue_diag, zero))};
  } else {
    throw WrongField("witt_decompose needs a prime field");
  }
}

/// Rank and discriminant square class decide isometry over a finite field of odd characteristic.
template <Field F>
bool is_isometric_ff(const QuadraticForm<F>& f, const QuadraticForm<F>& g) {
  detail::require_finite(f, "is_isometric_ff");
  if (f.field() != g.field()) throw MixedFields(f.field().to_string() + " vs " + g.field().to_string());
  if (f.rank() != g.rank()) return false;
  const F df = discriminant(f);
  const F dg = discriminant(g);
  if (df.is_zero() || dg.is_zero()) throw SingularForm("is_isometric_ff needs nonsingular forms");
  return is_square(df * dg);
}

/// PASS iff witness^t * g.gram * witness == f.gram and the witness is invertible.
template <Field F>
Certificate verify_isometry(const Matrix<F>& witness, const QuadraticForm<F>& f, const QuadraticForm<F>& g) {
  if (!witness.is_square() || witness.rows() != f.rank() || g.rank() != f.rank()) {
    throw DimensionMismatch("isometry witness " + witness.shape() + " for ranks " +
                            std::to_string(f.rank()) + ", " + std::to_string(g.rank()));
  }
  Certificate cert("isometry", f.field().to_string());
  const Matrix<F> pulled = witness.transpose() * g.gram() * witness;
  cert.expect(!determinant(witness).is_zero(), "witness_invertible",
              [&] { return json{{"witness", to_json(witness)}}; });
  cert.expect(pulled == f.gram(), "gram_pullback",
              [&] { return json{{"pulled_back", to_json(pulled)}, {"expected", to_json(f.gram())}}; });
  cert.witness()["matrix"] = to_json(witness);
  cert.set_samples(1);
  return cert;
}

/// An isometry (source, phi) -> (target, psi): matrix^t * target.gram * matrix == source.gram.
template <Field F>
class Isometry {
 public:
  Isometry(QuadraticForm<F> source, QuadraticForm<F> target, Matrix<F> matrix)
      : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
    if (!verify_isometry(matrix_, source_, target_).passed()) {
      throw NotAnIsometry("matrix does not carry the target Gram to the source Gram");
    }
  }
  const QuadraticForm<F>& source() const { return source_; }
  const QuadraticForm<F>& target() const { return target_; }
  const Matrix<F>& matrix() const { return matrix_; }

 private:
  QuadraticForm<F> source_;
  QuadraticForm<F> target_;
  Matrix<F> matrix_;
};

template <Field F>
json to_json(const QuadraticForm<F>& f) {
  return json{{"gram", to_json(f.gram())}, {"field", f.field().to_string()}};
}

/// Reads {"gram": matrix} or {"field": "fp:5", "gram": [[...], ...]}; nested rows use the
/// top-level field, else `fallback`.
template <Field F>
QuadraticForm<F> form_from_json(const json& j, const FieldDescriptor& fallback = FieldDescriptor::rationals()) {
  if (!j.is_object() || !j.contains("gram")) throw ParseError("form needs a \"gram\" matrix");
  const json& gram = j.at("gram");
  if (!gram.is_array()) return QuadraticForm<F>(matrix_from_json<F>(gram));
  const FieldDescriptor field = j.contains("field") ? field_from_json(j) : fallback;
  const std::size_t n = gram.size();
  Matrix<F> m(n, n, F::zero(field));
  for (std::size_t r = 0; r < n; ++r) {
    if (!gram[r].is_array() || gram[r].size() != n) throw ParseError("gram rows must form a square array");
    for (std::size_t c = 0; c < n; ++c) m(r, c) = scalar_from_json<F>(gram[r][c], field);
  }
  return QuadraticForm<F>(std::move(m));
}

/// Field named by a form file, or `fallback` when it names none.
inline FieldDescriptor form_field(const json& j, const FieldDescriptor& fallback) {
  if (j.is_object() && j.contains("field")) return field_from_json(j);
  if (j.is_object() && j.contains("gram") && j.at("gram").is_object()) return field_from_json(j.at("gram"));
  return fallback;
}

template <Field F>
json to_json(const WittDecomposition<F>& w) {
  return json{{"witt_index", w.witt_index},
              {"change_of_basis", to_json(w.hyperbolic_change_of_basis)},
              {"anisotropic_residue", to_json(w.anisotropic_residue)}};
}

}  // namespace spinform
