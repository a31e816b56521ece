#include <gtest/gtest.h>

#include <algorithm>
#include <array>

#include "spinform/propositions.hpp"

namespace spinform {
namespace {

const FieldDescriptor Q = FieldDescriptor::rationals();
const FieldDescriptor F5 = FieldDescriptor::prime_field(5);

using R = Rational;

int permutation_sign(std::array<int, 4> p) {
  int sign = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (p[i] > p[j]) sign = -sign;
  return sign;
}

// <ei^ej, ek^el> = sign of (i j k l) when all four differ, else 0.
Matrix<R> g6_oracle() {
  const std::pair<int, int> pairs[6] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  Matrix<R> g(6, 6, R(0));
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) {
      std::array<int, 4> p = {pairs[a].first, pairs[a].second, pairs[b].first, pairs[b].second};
      std::array<int, 4> sorted = p;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
      g(a, b) = R(permutation_sign(p));
    }
  }
  return g;
}

GroupElement<R> sl2(long a, long b, long c, long d) {
  return GroupElement<R>(GroupDescriptor<R>::special_linear(2, Q),
                         Matrix<R>(2, 2, {R(a), R(b), R(c), R(d)}, R(0)));
}

std::vector<R> wedge(std::size_t i, std::size_t j) { return basis_wedge<R>(i, j, Q); }

TEST(FormTable, DeterminantPairing) {
  const auto& t = form_table<R>(Q);
  EXPECT_EQ(t.g6, g6_oracle());
  EXPECT_EQ(t.g6(wedge_index(0, 1), wedge_index(2, 3)), R(1));
  EXPECT_EQ(t.g6(wedge_index(0, 2), wedge_index(1, 3)), R(-1));
  EXPECT_EQ(t.g6(wedge_index(0, 3), wedge_index(1, 2)), R(1));
  EXPECT_EQ(t.omega_row, Matrix<R>(1, 6, {R(1), R(0), R(0), R(0), R(0), R(1)}, R(0)));
}

TEST(FormTable, OrthogonalBasisQValues) {
  const auto& t = form_table<R>(Q);
  const QuadraticForm<R> q6(t.g6);
  std::vector<std::vector<R>> vs;
  for (auto [u, v] : {std::pair{wedge(1, 2), wedge(3, 4)}, {wedge(1, 3), wedge(2, 4)}, {wedge(1, 4), wedge(2, 3)}}) {
    std::vector<R> plus(6, R(0)), minus(6, R(0));
    for (std::size_t k = 0; k < 6; ++k) {
      plus[k] = u[k] + v[k];
      minus[k] = u[k] - v[k];
    }
    vs.push_back(plus);
    vs.push_back(minus);
  }
  const std::vector<R> expected = {R(1), R(-1), R(-1), R(1), R(1), R(-1)};
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(q_value(q6, vs[i]), expected[i]) << i;
    for (std::size_t j = i + 1; j < 6; ++j) EXPECT_TRUE(polar(q6, vs[i], vs[j]).is_zero()) << i << "," << j;
  }
}

TEST(FormTable, Stab45Columns) {
  const auto& t = form_table<R>(Q);
  const auto e14 = wedge(1, 4), e13 = wedge(1, 3), e24 = wedge(2, 4), e23 = wedge(2, 3);
  auto neg = [](std::vector<R> v) {
    for (auto& x : v) x = -x;
    return v;
  };
  EXPECT_EQ(t.stab45_matrix.column(0), neg(e14));
  EXPECT_EQ(t.stab45_matrix.column(1), e13);
  EXPECT_EQ(t.stab45_matrix.column(2), neg(e24));
  EXPECT_EQ(t.stab45_matrix.column(3), e23);
  EXPECT_TRUE(polar(QuadraticForm<R>(t.g6), e13, wedge(1, 2)).is_zero());
}

TEST(Spin6, Examples) {
  const auto sl4 = GroupDescriptor<R>::special_linear(4, Q);
  EXPECT_EQ(spin6_map(GroupElement<R>(sl4, identity<R>(4, Q))).matrix(), identity<R>(6, Q));
  EXPECT_EQ(spin6_map(GroupElement<R>(sl4, -identity<R>(4, Q))).matrix(), identity<R>(6, Q));
  const R a(3, 2);
  const auto d = GroupElement<R>(sl4, diagonal<R>({a, a.inverse(), R(1), R(1)}, R(0)));
  EXPECT_EQ(spin6_map(d).matrix(), diagonal<R>({R(1), a, a, a.inverse(), a.inverse(), R(1)}, R(0)));
  EXPECT_THROW(spin6_map(sl2(1, 0, 0, 1)), MembershipFailure);
}

TEST(Spin5, Examples) {
  const auto sp4 = GroupDescriptor<R>::symplectic4(Q);
  const auto& t = form_table<R>(Q);
  EXPECT_EQ(spin5_map(GroupElement<R>(sp4, identity<R>(4, Q))).matrix(), identity<R>(5, Q));
  const auto j = GroupElement<R>(sp4, block_diag(standard_j<R>(Q), identity<R>(2, Q)));
  const auto m = spin5_map(j).matrix();
  EXPECT_EQ(m.transpose() * t.g5 * m, t.g5);
  EXPECT_EQ(t.kernel_basis * m, wedge_square(j.matrix()) * t.kernel_basis);

  Rng rng(5);
  for (int s = 0; s < 200; ++s) {
    const auto x = random_element(sp4, rng, 8).matrix();
    ASSERT_EQ(t.omega_row * wedge_square(x), t.omega_row);
  }
}

TEST(Spin4, Examples) {
  const auto& t = form_table<R>(Q);
  const auto id = sl2(1, 0, 0, 1);
  EXPECT_EQ(spin4_map(id, id).matrix(), identity<R>(4, Q));
  const R s(5, 3);
  const auto d = GroupElement<R>(GroupDescriptor<R>::special_linear(2, Q), diagonal<R>({s, s.inverse()}, R(0)));
  EXPECT_EQ(spin4_map(d, id).matrix(), diagonal<R>({s, s, s.inverse(), s.inverse()}, R(0)));

  // q(M) = c det(M) with c = -1: E11 is isotropic and q(I) = -1.
  const QuadraticForm<R> q4(t.g4);
  EXPECT_EQ(q_value(q4, {R(1), R(0), R(0), R(0)}), R(0));
  EXPECT_EQ(q_value(q4, t.identity_matrix), R(-1));
  Rng rng(6);
  for (int k = 0; k < 50; ++k) {
    std::vector<R> m;
    for (int i = 0; i < 4; ++i) m.emplace_back(static_cast<long>(rng.between(-9, 9)));
    EXPECT_EQ(q_value(q4, m), -(m[0] * m[3] - m[1] * m[2]));
  }
}

TEST(Spin3, Examples) {
  const auto id = sl2(1, 0, 0, 1);
  EXPECT_EQ(spin3_map(id).matrix(), identity<R>(3, Q));
  EXPECT_EQ(spin3_map(sl2(-1, 0, 0, -1)).matrix(), identity<R>(3, Q));
  const R s(2);
  const auto d = GroupElement<R>(GroupDescriptor<R>::special_linear(2, Q), diagonal<R>({s, s.inverse()}, R(0)));
  EXPECT_EQ(spin3_map(d).matrix(), diagonal<R>({s * s, R(1), (s * s).inverse()}, R(0)));
}

TEST(SporadicMaps, HomomorphismsOverF5) {
  Rng rng(7);
  const auto sl2g = GroupDescriptor<ModP>::special_linear(2, F5);
  const auto sl4g = GroupDescriptor<ModP>::special_linear(4, F5);
  const auto sp4g = GroupDescriptor<ModP>::symplectic4(F5);
  for (int s = 0; s < 100; ++s) {
    const auto a = random_element(sl2g, rng, 6), b = random_element(sl2g, rng, 6);
    const auto c = random_element(sl2g, rng, 6), d = random_element(sl2g, rng, 6);
    ASSERT_EQ(spin3_map(a * b), spin3_map(a) * spin3_map(b));
    ASSERT_EQ(spin4_map(a * c, b * d), spin4_map(a, b) * spin4_map(c, d));
    const auto x = random_element(sl4g, rng, 8), y = random_element(sl4g, rng, 8);
    ASSERT_EQ(spin6_map(x * y), spin6_map(x) * spin6_map(y));
    const auto u = random_element(sp4g, rng, 8), v = random_element(sp4g, rng, 8);
    ASSERT_EQ(spin5_map(u * v), spin5_map(u) * spin5_map(v));
  }
}

TEST(SporadicMaps, LieDerivativeRanks) {
  EXPECT_EQ(derivative_rank(sl_basis<R>(2, Q), [](const auto& x) { return lie_spin3(x); }), 3U);
  const auto& t = form_table<R>(Q);
  EXPECT_EQ(derivative_rank(sp4_basis<R>(Q), [&](const auto& x) { return lie_spin5(x, t); }), 10U);
}

TEST(Stab45, HandComputedImage) {
  const auto& t = form_table<R>(Q);
  const auto id = identity<R>(2, Q);
  const Matrix<R> b(2, 2, {R(1), R(1), R(0), R(1)}, R(0));
  const std::vector<R> e11 = {R(1), R(0), R(0), R(0)};
  // rho(E11) = E11 B^-1 = E11 - E12.
  EXPECT_EQ(two_sided_action(id, adjugate2(b)) * e11, (std::vector<R>{R(1), R(-1), R(0), R(0)}));
  std::vector<R> expected(6, R(0));
  const auto e41 = t.stab45_matrix.column(0);
  const auto e31 = wedge(3, 1);
  for (std::size_t k = 0; k < 6; ++k) expected[k] = e41[k] + e31[k];
  EXPECT_EQ(t.stab45_matrix * (two_sided_action(id, adjugate2(b)) * e11), expected);
  EXPECT_EQ(wedge_square(block_diag(id, b)) * (t.stab45_matrix * e11), expected);
}

TEST(Hypso4, RightMultiplicationOnDiagonal) {
  const R s(7, 2);
  const auto b = diagonal<R>({s, s.inverse()}, R(0));
  EXPECT_EQ(two_sided_action(identity<R>(2, Q), adjugate2(b)), diagonal<R>({s.inverse(), s, s.inverse(), s}, R(0)));
}

class VerifierTest : public ::testing::TestWithParam<std::string> {};

TEST_P(VerifierTest, PassesWithSmallPlans) {
  VerifyPlan plan;
  plan.field = FieldDescriptor::parse(GetParam());
  plan.samples = 20;
  plan.kernel_samples = 200;
  for (auto* verify : {&verify_forms, &verify_kernels, &verify_stab56, &verify_stab45, &verify_stab34, &verify_hypso4,
                       &verify_weyl_equivalence, &verify_homomorphisms}) {
    const Certificate cert = verify(plan);
    EXPECT_TRUE(cert.passed()) << cert.to_json().dump(1);
  }
}

INSTANTIATE_TEST_SUITE_P(Fields, VerifierTest, ::testing::Values("q", "fp:5", "fp:7", "fp:109", "fp:101"));

TEST(Verifiers, RecordedConstants) {
  VerifyPlan plan;
  plan.samples = 5;
  plan.kernel_samples = 50;
  const auto forms = verify_forms(plan).to_json();
  EXPECT_EQ(forms.at("ledger_constants").at("g4_q_over_det"), "-1");
  EXPECT_EQ(verify_stab45(plan).ledger().at("stab45_pullback_scale"), "1");
  EXPECT_EQ(verify_stab34(plan).ledger().at("stab34_restriction_scale"), "1");
  EXPECT_EQ(verify_stab56(plan).ledger().at("complement_q_value"), "1");
  const auto hyp = verify_hypso4(plan);
  EXPECT_EQ(hyp.witness().at("intertwiner_space_dimension"), 4);
  EXPECT_EQ(hyp.witness().at("intertwiner").at("entries"),
            json::parse(R"(["0","1","0","0","-1","0","0","0","0","0","1","0","0","0","0","1"])"));
  const auto weyl = verify_weyl_equivalence(plan);
  EXPECT_EQ(weyl.witness().at("factorization").size(), 9U);
}

TEST(Verifiers, Deterministic) {
  VerifyPlan plan;
  plan.field = F5;
  plan.seed = 99;
  plan.samples = 10;
  plan.kernel_samples = 100;
  EXPECT_EQ(verify_stab56(plan).to_json().dump(), verify_stab56(plan).to_json().dump());
  EXPECT_EQ(verify_kernels(plan).to_json().dump(), verify_kernels(plan).to_json().dump());
}

}  // namespace
}  // namespace spinform
