#pragma once

// Verifiers for the identities relating the sporadic maps to each other and
// to the stabilization sequence SL_2 -> SL_2 x SL_2 -> Sp_4 -> SL_4. Each
// returns a certificate; every identity is checked in exact arithmetic.

#include <cstddef>
#include <cstdint>
#include <string>
#include <type_traits>
#include <vector>

#include "spinform/certificate.hpp"
#include "spinform/sporadic.hpp"

namespace spinform {

struct VerifyPlan {
  FieldDescriptor field = FieldDescriptor::rationals();
  std::uint64_t seed = 0;
  std::size_t samples = 500;
  std::size_t kernel_samples = 10000;
  std::size_t word_length = 8;
};

/// Fields on which form-level facts are cross-checked by Witt decomposition.
inline std::vector<std::uint64_t> witt_check_primes(const FieldDescriptor& extra) {
  std::vector<std::uint64_t> primes = {5, 7, 109};
  if (extra.is_finite() && extra.modulus() != 5 && extra.modulus() != 7 && extra.modulus() != 109) {
    primes.push_back(extra.modulus());
  }
  return primes;
}

/// Basis of {T : T src[k] = dst[k] T for all k}, each T of shape dst_dim x src_dim.
template <Field F>
std::vector<Matrix<F>> intertwiner_space(const std::vector<Matrix<F>>& src, const std::vector<Matrix<F>>& dst) {
  if (src.empty() || src.size() != dst.size()) throw DimensionMismatch("intertwiner_space needs paired generators");
  const std::size_t n = src[0].rows();
  const std::size_t m = dst[0].rows();
  const F zero = src[0].zero();
  Matrix<F> system(src.size() * m * n, m * n, zero);
  for (std::size_t g = 0; g < src.size(); ++g) {
    // (T A - B T)_{ij} = sum_k T_ik A_kj - sum_k B_ik T_kj, unknown T_ab at column a*n+b.
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t row = g * m * n + i * n + j;
        for (std::size_t k = 0; k < n; ++k) system(row, i * n + k) = system(row, i * n + k) + src[g](k, j);
        for (std::size_t k = 0; k < m; ++k) system(row, k * n + j) = system(row, k * n + j) - dst[g](i, k);
      }
    }
  }
  const Matrix<F> kernel = kernel_basis(system);
  std::vector<Matrix<F>> out;
  for (std::size_t c = 0; c < kernel.cols(); ++c) out.emplace_back(m, n, kernel.column(c), zero);
  return out;
}

namespace detail {

template <Field F>
GroupElement<F> random_sl(std::size_t n, Rng& rng, const VerifyPlan& plan) {
  return random_element(GroupDescriptor<F>::special_linear(n, plan.field), rng, plan.word_length);
}

template <Field F>
GroupElement<F> random_sp4(Rng& rng, const VerifyPlan& plan) {
  return random_element(GroupDescriptor<F>::symplectic4(plan.field), rng, plan.word_length);
}

/// [[1,1],[0,1]], [[1,0],[1,1]], diag(2, 1/2).
template <Field F>
std::vector<Matrix<F>> sl2_generators(const FieldDescriptor& field) {
  Matrix<F> d = zeros<F>(2, 2, field);
  d(0, 0) = F::from_int(2, field);
  d(1, 1) = d(0, 0).inverse();
  return {from_ints<F>(2, 2, {1, 1, 0, 1}, field), from_ints<F>(2, 2, {1, 0, 1, 1}, field), d};
}

template <Field F>
json vec_json(const std::vector<F>& v) {
  return to_json(v);
}

}  // namespace detail

// ---------------------------------------------------------------------------

template <Field F>
Certificate verify_forms_in(const VerifyPlan& plan) {
  const FieldDescriptor field = plan.field;
  Certificate cert("forms", field.to_string(), plan.seed);
  const auto& t = form_table<F>(field);
  const F zero = F::zero(field);

  cert.expect(t.g6 == t.g6.transpose(), "g6_symmetric");
  cert.expect(!determinant(t.g6).is_zero(), "g6_nonsingular");
  auto g6_at = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return t.g6(wedge_index(i - 1, j - 1), wedge_index(k - 1, l - 1));
  };
  std::size_t nonzero = 0;
  for (const auto& e : t.g6.entries()) nonzero += e.is_zero() ? 0 : 1;
  cert.expect(g6_at(1, 2, 3, 4) == F::one(field) && g6_at(1, 3, 2, 4) == -F::one(field) &&
                  g6_at(1, 4, 2, 3) == F::one(field) && nonzero == 6,
              "g6_entries", [&] { return json{{"g6", to_json(t.g6)}}; });

  // The six vectors (e_i ^ e_j) +- (e_k ^ e_l).
  const QuadraticForm<F> q6(t.g6);
  std::vector<std::vector<F>> vectors;
  const std::size_t pairs[3][4] = {{1, 2, 3, 4}, {1, 3, 2, 4}, {1, 4, 2, 3}};
  for (const auto& p : pairs) {
    const auto u = basis_wedge<F>(p[0], p[1], field);
    const auto v = basis_wedge<F>(p[2], p[3], field);
    std::vector<F> plus, minus;
    for (std::size_t k = 0; k < 6; ++k) {
      plus.push_back(u[k] + v[k]);
      minus.push_back(u[k] - v[k]);
    }
    vectors.push_back(plus);
    vectors.push_back(minus);
  }
  const long long expected_q[6] = {1, -1, -1, 1, 1, -1};
  json q_values = json::array();
  for (std::size_t a = 0; a < 6; ++a) {
    const F qa = q_value(q6, vectors[a]);
    q_values.push_back(to_json(qa));
    cert.expect(qa == F::from_int(expected_q[a], field), "orthogonal_basis_q_value_" + std::to_string(a),
                [&] { return json{{"vector", detail::vec_json(vectors[a])}, {"q", to_json(qa)}}; });
    for (std::size_t b = a + 1; b < 6; ++b) {
      cert.expect(polar(q6, vectors[a], vectors[b]).is_zero(), "orthogonal_basis_pairwise",
                  [&] { return json{{"a", a}, {"b", b}}; });
    }
  }
  cert.witness()["orthogonal_basis_q_values"] = q_values;

  cert.expect(t.omega_row == from_ints<F>(1, 6, {1, 0, 0, 0, 0, 1}, field), "omega_row",
              [&] { return json{{"omega_row", to_json(t.omega_row)}}; });
  const Matrix<F> expected_kernel = from_ints<F>(6, 5,
                                                 {0, 0, 0, 0, 1,  //
                                                  1, 0, 0, 0, 0,  //
                                                  0, 1, 0, 0, 0,  //
                                                  0, 0, 1, 0, 0,  //
                                                  0, 0, 0, 1, 0,  //
                                                  0, 0, 0, 0, -1},
                                                 field);
  cert.expect(t.kernel_basis == expected_kernel, "omega_kernel_basis",
              [&] { return json{{"kernel_basis", to_json(t.kernel_basis)}}; });
  cert.witness()["g5"] = to_json(t.g5);

  // Both placements of W in the modified trace form give the same Gram matrix.
  const Matrix<F> w = from_ints<F>(2, 2, {0, -1, 1, 0}, field);
  const auto units = FormTable<F>::matrix_units(field);
  Matrix<F> g4_swapped(4, 4, zero);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b)
      g4_swapped(a, b) = -FormTable<F>::trace(units[a] * inverse(w) * units[b].transpose() * w);
  cert.expect(g4_swapped == t.g4, "modified_trace_w_placement");

  // q(M) = c * det(M) on Mat_2x2, pinned by q(E11) = 0 and q(I) = c.
  const QuadraticForm<F> q4(t.g4);
  const F c4 = q_value(q4, t.identity_matrix);
  cert.expect(q_value(q4, flatten(units[0])).is_zero(), "e11_isotropic");
  Rng rng(plan.seed, 11);
  for (std::size_t s = 0; s < plan.samples; ++s) {
    std::vector<F> m;
    for (int k = 0; k < 4; ++k) m.push_back(random_scalar<F>(rng, field));
    const F det = m[0] * m[3] - m[1] * m[2];
    cert.expect(q_value(q4, m) == c4 * det, "g4_q_is_scaled_det", [&] { return json{{"m", detail::vec_json(m)}}; });
  }
  cert.set_samples(plan.samples);
  cert.ledger()["q_convention"] = "q(x) = B(x,x)/2, Gram stores B";
  cert.ledger()["g4_q_over_det"] = to_json(c4);
  cert.ledger()["g4_polar_over_det"] = to_json(c4 + c4);

  const QuadraticForm<F> q3(t.g3);
  cert.expect(!determinant(t.g3).is_zero() && !determinant(t.g4).is_zero() && !determinant(t.g5).is_zero(),
              "g3_g4_g5_nonsingular");

  // Diagonal square classes of G6 over Q: three positive, three negative.
  {
    const auto& tq = form_table<Rational>(FieldDescriptor::rationals());
    const auto diag = diagonalize(QuadraticForm<Rational>(tq.g6)).diagonal;
    int positive = 0;
    for (const auto& d : diag) positive += d.sign() > 0 ? 1 : 0;
    cert.expect(positive == 3 && diag.size() == 6, "g6_signature_over_q",
                [&] { return json{{"diagonal", to_json(diag)}}; });
  }

  json witt = json::object();
  for (std::uint64_t p : witt_check_primes(field)) {
    const FieldDescriptor fp = FieldDescriptor::prime_field(p);
    const auto& tp = form_table<ModP>(fp);
    const std::size_t w6 = witt_decompose(QuadraticForm<ModP>(tp.g6)).witt_index;
    const std::size_t w5 = witt_decompose(QuadraticForm<ModP>(tp.g5)).witt_index;
    const std::size_t w4 = witt_decompose(QuadraticForm<ModP>(tp.g4)).witt_index;
    const std::size_t w3 = witt_decompose(QuadraticForm<ModP>(tp.g3)).witt_index;
    witt[fp.to_string()] = {{"g6", w6}, {"g5", w5}, {"g4", w4}, {"g3", w3}};
    cert.expect(w6 == 3 && w5 == 2 && w4 == 2 && w3 == 1, "witt_indices_" + fp.to_string(),
                [&] { return witt[fp.to_string()]; });
  }
  cert.witness()["witt_indices"] = witt;
  return cert;
}

inline Certificate verify_forms(const VerifyPlan& plan) {
  return with_field(plan.field, [&]<class F>(std::type_identity<F>) { return verify_forms_in<F>(plan); });
}

// ---------------------------------------------------------------------------

template <Field F>
Certificate verify_kernels_in(const VerifyPlan& plan) {
  const FieldDescriptor field = plan.field;
  Certificate cert("kernels", field.to_string(), plan.seed);
  const auto& t = form_table<F>(field);

  const std::size_t r6 = derivative_rank(sl_basis<F>(4, field), [](const Matrix<F>& x) { return lie_wedge_square(x); });
  const std::size_t r5 = derivative_rank(sp4_basis<F>(field), [&](const Matrix<F>& x) { return lie_spin5(x, t); });
  const auto sl2 = sl_basis<F>(2, field);
  const std::size_t r3 = derivative_rank(sl2, [](const Matrix<F>& x) { return lie_spin3(x); });
  std::vector<Matrix<F>> sl2_pairs;
  const Matrix<F> zero2 = zeros<F>(2, 2, field);
  for (const auto& x : sl2) sl2_pairs.push_back(block_diag(x, zero2));
  for (const auto& y : sl2) sl2_pairs.push_back(block_diag(zero2, y));
  const std::size_t r4 = derivative_rank(sl2_pairs, [](const Matrix<F>& xy) {
    return lie_spin4(xy.block(0, 0, 2, 2), xy.block(2, 2, 2, 2));
  });
  cert.witness()["lie_ranks"] = {{"spin6", r6}, {"spin5", r5}, {"spin4", r4}, {"spin3", r3}};
  cert.witness()["lie_dimensions"] = {{"sl4", 15}, {"sp4", sp4_basis<F>(field).size()}, {"sl2xsl2", 6}, {"sl2", 3}};
  cert.expect(r6 == 15, "lie_kernel_spin6");
  cert.expect(r5 == 10 && sp4_basis<F>(field).size() == 10, "lie_kernel_spin5");
  cert.expect(r4 == 6, "lie_kernel_spin4");
  cert.expect(r3 == 3, "lie_kernel_spin3");

  const auto sl4 = GroupDescriptor<F>::special_linear(4, field);
  const Matrix<F> id4 = identity<F>(4, field);
  const Matrix<F> id6 = identity<F>(6, field);
  cert.expect(spin6_map(GroupElement<F>(sl4, id4)).matrix() == id6, "spin6_identity");
  cert.expect(spin6_map(GroupElement<F>(sl4, -id4)).matrix() == id6, "spin6_minus_identity");
  const auto sl2g = GroupDescriptor<F>::special_linear(2, field);
  const GroupElement<F> minus2(sl2g, -identity<F>(2, field));
  cert.expect(spin3_map(minus2).matrix() == identity<F>(3, field), "spin3_minus_identity");
  cert.expect(spin4_map(minus2, minus2).matrix() == identity<F>(4, field), "spin4_minus_identity");
  cert.expect(spin5_map(GroupElement<F>(GroupDescriptor<F>::symplectic4(field), -id4)).matrix() == identity<F>(5, field),
              "spin5_minus_identity");

  Rng rng(plan.seed, 12);
  std::size_t central = 0;
  for (std::size_t s = 0; s < plan.kernel_samples; ++s) {
    const auto a = detail::random_sl<F>(4, rng, plan);
    if (a.matrix() == id4 || a.matrix() == -id4) {
      ++central;
      continue;
    }
    cert.expect(!(wedge_square(a.matrix()) == id6), "spin6_noncentral_nontrivial",
                [&] { return json{{"a", to_json(a.matrix())}}; });
  }
  cert.set_samples(plan.kernel_samples);
  cert.witness()["central_samples_skipped"] = central;
  return cert;
}

inline Certificate verify_kernels(const VerifyPlan& plan) {
  return with_field(plan.field, [&]<class F>(std::type_identity<F>) { return verify_kernels_in<F>(plan); });
}

// ---------------------------------------------------------------------------

template <Field F>
Certificate verify_stab56_in(const VerifyPlan& plan) {
  const FieldDescriptor field = plan.field;
  Certificate cert("stab56", field.to_string(), plan.seed);
  const auto& t = form_table<F>(field);
  const Matrix<F> basis = hstack(t.kernel_basis, column_matrix(t.complement_line, F::zero(field)));
  const Matrix<F> basis_inv = inverse(basis);

  const QuadraticForm<F> q6(t.g6);
  const F qc = q_value(q6, t.complement_line);
  cert.ledger()["complement_q_value"] = to_json(qc);
  cert.expect(qc == F::one(field), "complement_is_unit_line");
  cert.expect(basis.transpose() * t.g6 * basis == block_diag(t.g5, Matrix<F>(1, 1, F::from_int(2, field))),
              "g6_splits_as_g5_plus_line");

  const Matrix<F> one = identity<F>(1, field);
  auto check = [&](const Matrix<F>& s) {
    const Matrix<F> w = wedge_square(s);
    const Matrix<F> split = basis_inv * w * basis;
    const Matrix<F> expected = block_diag(spin5_matrix(s, t), one);
    cert.expect(split == expected, "block_splitting", [&] { return json{{"s", to_json(s)}}; });
    cert.expect(t.omega_row * w == t.omega_row, "omega_invariant", [&] { return json{{"s", to_json(s)}}; });
  };
  check(identity<F>(4, field));
  Rng rng(plan.seed, 13);
  for (std::size_t s = 0; s < plan.samples; ++s) check(detail::random_sp4<F>(rng, plan).matrix());
  cert.set_samples(plan.samples + 1);
  return cert;
}

inline Certificate verify_stab56(const VerifyPlan& plan) {
  return with_field(plan.field, [&]<class F>(std::type_identity<F>) { return verify_stab56_in<F>(plan); });
}

// ---------------------------------------------------------------------------

template <Field F>
Certificate verify_stab45_in(const VerifyPlan& plan) {
  const FieldDescriptor field = plan.field;
  Certificate cert("stab45", field.to_string(), plan.seed);
  const auto& t = form_table<F>(field);
  const Matrix<F> id2 = identity<F>(2, field);
  const Matrix<F>& s45 = t.stab45_matrix;

  std::vector<Matrix<F>> src_gens, dst_gens;
  auto intertwines = [&](const Matrix<F>& a, const Matrix<F>& b) {
    const Matrix<F> big = wedge_square(block_diag(a, b));
    const Matrix<F> small = two_sided_action(a, adjugate2(b));
    const Matrix<F> fixed_plus = column_matrix(t.complement_line, F::zero(field));
    const Matrix<F> fixed_minus = column_matrix(t.hyperbolic_minus, F::zero(field));
    cert.expect(big * s45 == s45 * small, "intertwining",
                [&] { return json{{"a", to_json(a)}, {"b", to_json(b)}}; });
    cert.expect(big * fixed_plus == fixed_plus && big * fixed_minus == fixed_minus, "trivial_on_complement",
                [&] { return json{{"a", to_json(a)}, {"b", to_json(b)}}; });
  };
  for (const auto& g : detail::sl2_generators<F>(field)) {
    intertwines(g, id2);
    intertwines(id2, g);
    src_gens.push_back(two_sided_action(g, id2));
    src_gens.push_back(two_sided_action(id2, adjugate2(g)));
    dst_gens.push_back(wedge_square(block_diag(g, id2)));
    dst_gens.push_back(wedge_square(block_diag(id2, g)));
  }
  Rng rng(plan.seed, 14);
  for (std::size_t s = 0; s < plan.samples; ++s) {
    const auto a = detail::random_sl<F>(2, rng, plan);
    const auto b = detail::random_sl<F>(2, rng, plan);
    intertwines(a.matrix(), b.matrix());
  }
  cert.set_samples(plan.samples);
  if (!cert.passed()) {
    json space = json::array();
    for (const auto& m : intertwiner_space(src_gens, dst_gens)) space.push_back(to_json(m));
    cert.witness()["intertwiner_space_basis"] = space;
  }

  cert.expect(rank(s45) == 4, "injective");
  const Matrix<F> pulled = s45.transpose() * t.g6 * s45;
  // Single scalar c with pulled = c * G4, read off the (E11, E22) entry.
  const F c = pulled(0, 3) / t.g4(0, 3);
  cert.expect(pulled == c * t.g4, "isometry_onto_image", [&] { return json{{"pullback", to_json(pulled)}}; });
  cert.ledger()["stab45_pullback_scale"] = to_json(c);

  const QuadraticForm<F> q6(t.g6);
  for (std::size_t col = 0; col < 4; ++col) {
    cert.expect(polar(q6, s45.column(col), t.complement_line).is_zero() &&
                    polar(q6, s45.column(col), t.hyperbolic_minus).is_zero(),
                "image_orthogonal_to_trivial_plane", [&] { return json{{"column", col}}; });
  }
  const Matrix<F> plane = hstack(column_matrix(t.complement_line, F::zero(field)), column_matrix(t.hyperbolic_minus, F::zero(field)));
  const Matrix<F> plane_gram = plane.transpose() * t.g6 * plane;
  cert.witness()["trivial_plane_gram"] = to_json(plane_gram);
  cert.expect(plane_gram(0, 1).is_zero() && (plane_gram(0, 0) * plane_gram(1, 1) == -F::from_int(4, field)),
              "trivial_plane_is_hyperbolic");
  cert.witness()["stab45_matrix"] = to_json(s45);
  return cert;
}

inline Certificate verify_stab45(const VerifyPlan& plan) {
  return with_field(plan.field, [&]<class F>(std::type_identity<F>) { return verify_stab45_in<F>(plan); });
}

// ---------------------------------------------------------------------------

template <Field F>
Certificate verify_stab34_in(const VerifyPlan& plan) {
  const FieldDescriptor field = plan.field;
  Certificate cert("stab34", field.to_string(), plan.seed);
  const auto& t = form_table<F>(field);
  const Matrix<F> ident = column_matrix(t.identity_matrix, F::zero(field));

  auto check = [&](const Matrix<F>& a) {
    const Matrix<F> x = two_sided_action(a, adjugate2(a));
    cert.expect(x * t.trace_zero == t.trace_zero * conjugation_action(a, adjugate2(a)), "restriction_is_spin3",
                [&] { return json{{"a", to_json(a)}}; });
    cert.expect(x * ident == ident, "identity_fixed", [&] { return json{{"a", to_json(a)}}; });
  };
  check(identity<F>(2, field));
  Rng rng(plan.seed, 15);
  for (std::size_t s = 0; s < plan.samples; ++s) check(detail::random_sl<F>(2, rng, plan).matrix());
  cert.set_samples(plan.samples + 1);

  const Matrix<F> restricted = t.trace_zero.transpose() * t.g4 * t.trace_zero;
  const F c = restricted(1, 1) / t.g3(1, 1);
  cert.expect(restricted == c * t.g3, "restriction_matches_trace_form", [&] { return json{{"restricted", to_json(restricted)}}; });
  cert.ledger()["stab34_restriction_scale"] = to_json(c);
  const QuadraticForm<F> q4(t.g4);
  bool orthogonal = true;
  for (std::size_t col = 0; col < 3; ++col) orthogonal = orthogonal && polar(q4, t.trace_zero.column(col), t.identity_matrix).is_zero();
  cert.expect(orthogonal, "identity_orthogonal_to_trace_zero");
  cert.ledger()["identity_line_q_value"] = to_json(q_value(q4, t.identity_matrix));
  return cert;
}

inline Certificate verify_stab34(const VerifyPlan& plan) {
  return with_field(plan.field, [&]<class F>(std::type_identity<F>) { return verify_stab34_in<F>(plan); });
}

// ---------------------------------------------------------------------------

/// block-diag(B, (B^-1)^t) for B in SL_2.
template <Field F>
Matrix<F> hyperbolic_block(const Matrix<F>& b) {
  return block_diag(b, adjugate2(b).transpose());
}

template <Field F>
Certificate verify_hypso4_in(const VerifyPlan& plan) {
  const FieldDescriptor field = plan.field;
  Certificate cert("hypso4", field.to_string(), plan.seed);
  const Matrix<F> id2 = identity<F>(2, field);
  auto rho = [&](const Matrix<F>& b) { return two_sided_action(id2, adjugate2(b)); };

  std::vector<Matrix<F>> src, dst;
  for (const auto& g : detail::sl2_generators<F>(field)) {
    src.push_back(rho(g));
    dst.push_back(hyperbolic_block(g));
  }
  const auto space = intertwiner_space(src, dst);
  cert.witness()["intertwiner_space_dimension"] = space.size();

  // First invertible element among: basis vectors, pairwise sums, then seeded combinations.
  std::optional<Matrix<F>> chosen;
  for (const auto& m : space) {
    if (!determinant(m).is_zero()) {
      chosen = m;
      break;
    }
  }
  for (std::size_t i = 0; !chosen && i < space.size(); ++i) {
    for (std::size_t j = i + 1; !chosen && j < space.size(); ++j) {
      const Matrix<F> m = space[i] + space[j];
      if (!determinant(m).is_zero()) chosen = m;
    }
  }
  Rng rng(plan.seed, 16);
  for (int attempt = 0; !chosen && !space.empty() && attempt < 64; ++attempt) {
    Matrix<F> m = zeros<F>(4, 4, field);
    for (const auto& b : space) m = m + random_scalar<F>(rng, field) * b;
    if (!determinant(m).is_zero()) chosen = m;
  }
  if (!cert.expect(chosen.has_value(), "invertible_intertwiner_exists", [&] {
        json gens = json::array();
        for (std::size_t k = 0; k < src.size(); ++k) gens.push_back({{"rho", to_json(src[k])}, {"target", to_json(dst[k])}});
        return json{{"space_dimension", space.size()}, {"system", gens}};
      })) {
    return cert;
  }
  const Matrix<F>& t = *chosen;
  cert.witness()["intertwiner"] = to_json(t);
  for (std::size_t s = 0; s < plan.samples; ++s) {
    const Matrix<F> b = detail::random_sl<F>(2, rng, plan).matrix();
    cert.expect(t * rho(b) == hyperbolic_block(b) * t, "intertwines_random", [&] { return json{{"b", to_json(b)}}; });
  }
  cert.set_samples(plan.samples);
  // block-diag(B, B^-t) preserves the hyperbolic Gram [[0, I], [I, 0]] on k^2 + (k^2)^*.
  Matrix<F> ev = zeros<F>(4, 4, field);
  ev(0, 2) = ev(2, 0) = ev(1, 3) = ev(3, 1) = F::one(field);
  const Matrix<F> b = detail::sl2_generators<F>(field)[0];
  cert.expect(hyperbolic_block(b).transpose() * ev * hyperbolic_block(b) == ev, "target_is_hyperbolic");
  cert.witness()["hyperbolic_gram"] = to_json(ev);
  return cert;
}

inline Certificate verify_hypso4(const VerifyPlan& plan) {
  return with_field(plan.field, [&]<class F>(std::type_identity<F>) { return verify_hypso4_in<F>(plan); });
}

// ---------------------------------------------------------------------------

template <Field F>
Certificate verify_weyl_equivalence_in(const VerifyPlan& plan) {
  const FieldDescriptor field = plan.field;
  Certificate cert("weyl", field.to_string(), plan.seed);
  const auto sp4 = GroupDescriptor<F>::symplectic4(field);
  const GroupElement<F> w = weyl_swap_conjugator<F>(field);
  const Matrix<F> w_inv = inverse(w.matrix());
  cert.expect(check_membership(w.matrix(), sp4), "w_symplectic");

  const auto factors = weyl_swap_factorization<F>(field);
  Matrix<F> product = identity<F>(4, field);
  json names = json::array();
  for (const auto& f : factors) {
    cert.expect(check_membership(f.matrix, sp4), "factor_symplectic", [&] { return json{{"factor", f.name}}; });
    product = product * f.matrix;
    names.push_back({{"name", f.name}, {"matrix", to_json(f.matrix)}});
  }
  cert.expect(product == w.matrix(), "factorization_product",
              [&] { return json{{"product", to_json(product)}, {"w", to_json(w.matrix())}}; });
  cert.witness()["factorization"] = names;
  cert.witness()["factorization_length"] = factors.size();
  cert.witness()["w"] = to_json(w.matrix());
  const Matrix<F> w2 = w.matrix() * w.matrix();
  cert.expect(w2 == identity<F>(4, field) || w2 == -identity<F>(4, field), "w_squared_central");

  const Matrix<F> id2 = identity<F>(2, field);
  Rng rng(plan.seed, 17);
  for (std::size_t s = 0; s < plan.samples; ++s) {
    const Matrix<F> a = detail::random_sl<F>(2, rng, plan).matrix();
    const Matrix<F> b = detail::random_sl<F>(2, rng, plan).matrix();
    cert.expect(w.matrix() * block_diag(a, id2) * w_inv == block_diag(id2, a), "conjugates_iota1_to_iota2",
                [&] { return json{{"a", to_json(a)}}; });
    cert.expect(w.matrix() * block_diag(a, b) * w_inv == block_diag(b, a), "swaps_blocks",
                [&] { return json{{"a", to_json(a)}, {"b", to_json(b)}}; });
  }
  cert.set_samples(plan.samples);
  return cert;
}

inline Certificate verify_weyl_equivalence(const VerifyPlan& plan) {
  return with_field(plan.field, [&]<class F>(std::type_identity<F>) { return verify_weyl_equivalence_in<F>(plan); });
}

// ---------------------------------------------------------------------------

/// map(gh) = map(g) map(h) and image membership for all four sporadic maps.
template <Field F>
Certificate verify_homomorphisms_in(const VerifyPlan& plan) {
  const FieldDescriptor field = plan.field;
  Certificate cert("homomorphisms", field.to_string(), plan.seed);
  Rng rng(plan.seed, 18);
  for (std::size_t s = 0; s < plan.samples; ++s) {
    const auto a = detail::random_sl<F>(4, rng, plan);
    const auto b = detail::random_sl<F>(4, rng, plan);
    const auto fa = spin6_map(a);  // membership asserted by construction
    cert.expect(spin6_map(a * b) == fa * spin6_map(b), "spin6", [&] { return json{{"g", to_json(a)}, {"h", to_json(b)}}; });

    const auto s1 = detail::random_sp4<F>(rng, plan);
    const auto s2 = detail::random_sp4<F>(rng, plan);
    cert.expect(spin5_map(s1 * s2) == spin5_map(s1) * spin5_map(s2), "spin5",
                [&] { return json{{"g", to_json(s1)}, {"h", to_json(s2)}}; });

    const auto a1 = detail::random_sl<F>(2, rng, plan);
    const auto b1 = detail::random_sl<F>(2, rng, plan);
    const auto a2 = detail::random_sl<F>(2, rng, plan);
    const auto b2 = detail::random_sl<F>(2, rng, plan);
    cert.expect(spin4_map(a1 * a2, b1 * b2) == spin4_map(a1, b1) * spin4_map(a2, b2), "spin4",
                [&] { return json{{"g", {to_json(a1), to_json(b1)}}, {"h", {to_json(a2), to_json(b2)}}}; });
    cert.expect(spin3_map(a1 * a2) == spin3_map(a1) * spin3_map(a2), "spin3",
                [&] { return json{{"g", to_json(a1)}, {"h", to_json(a2)}}; });
    cert.expect(long_root_embedding(a1 * a2, b1 * b2) == long_root_embedding(a1, b1) * long_root_embedding(a2, b2),
                "long_root_embedding");
  }
  cert.set_samples(plan.samples);
  return cert;
}

inline Certificate verify_homomorphisms(const VerifyPlan& plan) {
  return with_field(plan.field, [&]<class F>(std::type_identity<F>) { return verify_homomorphisms_in<F>(plan); });
}

}  // namespace spinform
