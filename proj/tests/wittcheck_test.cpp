#include <gtest/gtest.h>

#include "spinform/wittcheck.hpp"

namespace spinform {
namespace {

const FieldDescriptor F7 = FieldDescriptor::prime_field(7);

QuadraticForm<ModP> diag_q(std::initializer_list<long> q, const FieldDescriptor& f) {
  std::vector<ModP> values;
  for (long v : q) values.push_back(ModP::from_int(v, f));
  return QuadraticForm<ModP>::from_q_values(values, f);
}

// Nonsingular forms over F_p are classified by rank and the square class of det(Gram).
bool same_class(const QuadraticForm<ModP>& a, const QuadraticForm<ModP>& b) {
  return a.rank() == b.rank() && is_square(discriminant(a)) == is_square(discriminant(b));
}

TEST(WittCheck, HyperbolicPairIsTrivial) {
  const auto h = hyperbolic_form<ModP>(1, F7);
  const auto hh = orthogonal_sum(h, h);
  EXPECT_TRUE(is_isometric_ff(hh, hh));
  EXPECT_TRUE(is_isometric_ff(h, h));
  EXPECT_TRUE(detail::is_hyperbolic(h));
}

TEST(WittCheck, RandomRankFourPairsOverF7) {
  FuzzPlan plan;
  plan.primes = {7};
  plan.min_rank = plan.max_rank = 4;
  plan.samples = 500;
  plan.isotropic_forms = 50;
  const auto cert = run_cancellation_suite(plan);
  ASSERT_TRUE(cert.passed()) << cert.to_json().dump(1);
  const json& stats = cert.witness().at("per_field").at("fp:7");
  EXPECT_EQ(stats.at("passed"), 500);
  EXPECT_GT(stats.at("antecedent_true").get<int>(), 0);
  EXPECT_GT(stats.at("vacuous").get<int>(), 0);
  EXPECT_EQ(stats.at("even_rank_checked"), 500);
}

TEST(WittCheck, CancellationAgreesWithClassificationOracle) {
  Rng rng(5);
  for (std::uint64_t p : {5ULL, 7ULL, 11ULL, 109ULL}) {
    const auto field = FieldDescriptor::prime_field(p);
    const auto h = hyperbolic_form<ModP>(1, field);
    for (int s = 0; s < 200; ++s) {
      const std::size_t n = 1 + rng.below(5);
      const auto q1 = detail::random_nonsingular_form(n, rng, field);
      const auto q2 = detail::random_nonsingular_form(n, rng, field);
      const bool stable = is_isometric_ff(orthogonal_sum(q1, h), orthogonal_sum(q2, h));
      ASSERT_EQ(stable, same_class(q1, q2));
      ASSERT_EQ(detail::isometric_by_witt(q1, q2), same_class(q1, q2));
      if (stable) ASSERT_TRUE(is_isometric_ff(q1, q2));
    }
  }
}

TEST(WittCheck, AdversarialPairIsVacuous) {
  // 3 is not a square mod 7, so the discriminants fall in different classes.
  const auto q1 = diag_q({1, 1}, F7);
  const auto q2 = diag_q({1, 3}, F7);
  ASSERT_FALSE(same_class(q1, q2));
  const auto h = hyperbolic_form<ModP>(1, F7);
  EXPECT_FALSE(is_isometric_ff(orthogonal_sum(q1, h), orthogonal_sum(q2, h)));
  EXPECT_FALSE(is_isometric_ff(q1, q2));

  // Suite bookkeeping: every pair is counted as antecedent-true or vacuous.
  FuzzPlan plan;
  plan.primes = {5};
  plan.min_rank = plan.max_rank = 2;
  plan.samples = 300;
  plan.isotropic_forms = 10;
  const auto cert = run_cancellation_suite(plan);
  const json& stats = cert.witness().at("per_field").at("fp:5");
  EXPECT_EQ(stats.at("antecedent_true").get<int>() + stats.at("vacuous").get<int>(), 300);
}

TEST(WittCheck, StablyHyperbolicIsHyperbolic) {
  Rng rng(8);
  for (std::uint64_t p : {3ULL, 5ULL, 7ULL}) {
    const auto field = FieldDescriptor::prime_field(p);
    const auto h = hyperbolic_form<ModP>(1, field);
    for (int s = 0; s < 200; ++s) {
      const auto q = detail::random_nonsingular_form(2 + 2 * rng.below(2), rng, field);
      if (detail::is_hyperbolic(orthogonal_sum(q, h))) ASSERT_TRUE(detail::is_hyperbolic(q)) << q.gram();
    }
  }
  EXPECT_FALSE(detail::is_hyperbolic(diag_q({1, 1}, F7)));
  EXPECT_TRUE(detail::is_hyperbolic(diag_q({1, -1}, F7)));
}

TEST(WittCheck, FuzzPlanValidation) {
  FuzzPlan plan;
  EXPECT_NO_THROW(plan.validate());
  plan.max_rank = 7;
  EXPECT_THROW(plan.validate(), InvalidPlan);
  plan.max_rank = 3;
  plan.min_rank = 4;
  EXPECT_THROW(plan.validate(), InvalidPlan);
  plan.min_rank = 0;
  EXPECT_THROW(plan.validate(), InvalidPlan);
  FuzzPlan even;
  even.primes = {2};
  EXPECT_THROW(even.validate(), InvalidField);
  FuzzPlan composite;
  composite.primes = {9};
  EXPECT_THROW(composite.validate(), InvalidField);
}

TEST(WittCheck, CancellationIsDeterministic) {
  FuzzPlan plan;
  plan.samples = 100;
  plan.isotropic_forms = 20;
  plan.seed = 77;
  EXPECT_EQ(run_cancellation_suite(plan).to_json().dump(), run_cancellation_suite(plan).to_json().dump());
}

TEST(WittCheck, ChainIdentityAndDiagonals) {
  for (const auto& field : {FieldDescriptor::rationals(), F7, FieldDescriptor::prime_field(109)}) {
    VerifyPlan plan{field, 0};
    plan.samples = 0;
    const auto cert = run_stabilization_chain(plan);
    ASSERT_TRUE(cert.passed()) << cert.to_json().dump(1);
    // Diagonals for t = 2, 3, 5; over F7 none of them vanish.
    EXPECT_EQ(cert.witness().at("diagonal_examples").size(), 3U);
  }
  VerifyPlan q{FieldDescriptor::rationals(), 0};
  q.samples = 0;
  const auto cert = run_stabilization_chain(q);
  const json& t2 = cert.witness().at("diagonal_examples").at(0);
  EXPECT_EQ(t2.at("t"), 2);
  EXPECT_EQ(matrix_from_json<Rational>(t2.at("stage3")),
            diagonal<Rational>({Rational(4), Rational(1), Rational(1, 4)}, Rational(0)));
}

TEST(WittCheck, ChainRandomSeeds) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    VerifyPlan plan{seed % 2 == 0 ? FieldDescriptor::rationals() : F7, seed};
    plan.samples = 1;
    const auto cert = run_stabilization_chain(plan);
    ASSERT_TRUE(cert.passed()) << cert.to_json().dump(1);
  }
}

}  // namespace
}  // namespace spinform
