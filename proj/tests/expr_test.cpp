#include <gtest/gtest.h>

#include "spinform/expr.hpp"
#include "spinform/random.hpp"

namespace spinform {
namespace {

const FieldDescriptor F101 = FieldDescriptor::prime_field(101);

Expr x(std::size_t i) { return Expr::variable(i); }

// Random expression over two variables; no division by sums, so the Laurent form is exact.
Expr random_laurent_expr(Rng& rng, int depth) {
  if (depth == 0 || rng.below(4) == 0) {
    switch (rng.below(3)) {
      case 0:
        return Expr(static_cast<long>(rng.between(-3, 3)));
      default:
        return x(rng.below(2));
    }
  }
  switch (rng.below(6)) {
    case 0:
      return random_laurent_expr(rng, depth - 1) + random_laurent_expr(rng, depth - 1);
    case 1:
      return random_laurent_expr(rng, depth - 1) - random_laurent_expr(rng, depth - 1);
    case 2:
      return random_laurent_expr(rng, depth - 1) * random_laurent_expr(rng, depth - 1);
    case 3:
      return random_laurent_expr(rng, depth - 1) / x(rng.below(2));
    case 4:
      return x(rng.below(2)).pow(static_cast<long>(rng.between(-2, 2)));
    default:
      return -random_laurent_expr(rng, depth - 1);
  }
}

TEST(Expr, ParseAndPrint) {
  const Expr e = parse_expr("(* (var 0) (inv (var 1)))");
  EXPECT_EQ(e.to_string(), "(* (var 0) (inv (var 1)))");
  EXPECT_EQ(e.arity(), 2U);
  EXPECT_EQ(parse_expr("  ( +  1/2 (var 0) ) ").to_string(), "(+ 1/2 (var 0))");
  EXPECT_EQ(parse_expr("-3").to_string(), "-3");
  EXPECT_EQ(parse_expr("(pow (var 2) -2)").arity(), 3U);
}

TEST(Expr, ParseErrors) {
  for (const char* bad : {"", "(+ 1", "(foo 1)", "(var -1)", "(pow (var 0))", "(/ 1 2 3)", "1 2", "(inv)", "1/0"}) {
    EXPECT_THROW(parse_expr(bad), ParseError) << bad;
  }
}

TEST(Expr, PrintParseRoundTrip) {
  Rng rng(1);
  for (int s = 0; s < 500; ++s) {
    const Expr e = random_laurent_expr(rng, 4);
    ASSERT_EQ(parse_expr(e.to_string()).to_string(), e.to_string());
  }
}

TEST(Expr, Evaluation) {
  PointEvaluator ev(F101, {ModP::from_int(3, F101), ModP::from_int(5, F101)});
  EXPECT_EQ(*ev(parse_expr("(+ (* (var 0) (var 1)) 1)")), ModP::from_int(16, F101));
  EXPECT_EQ(*ev(parse_expr("(/ (var 0) (var 1))")), ModP::from_int(3, F101) / ModP::from_int(5, F101));
  EXPECT_EQ(*ev(parse_expr("(pow (var 0) -2)")), (ModP::from_int(9, F101)).inverse());
  EXPECT_FALSE(ev(parse_expr("(inv (- (var 0) 3))")).has_value());
  EXPECT_FALSE(ev(parse_expr("(+ 1 (/ 1 (- (var 1) 5)))")).has_value());
}

TEST(Expr, SimplifyToLaurentNormalForm) {
  EXPECT_EQ(simplify(parse_expr("(* (var 0) (inv (var 0)))")).to_string(), "1");
  EXPECT_EQ(simplify(parse_expr("(- (var 1) (var 1))")).to_string(), "0");
  EXPECT_EQ(laurent_equal(parse_expr("(* (var 0) (var 0))"), parse_expr("(pow (var 0) 2)")), true);
  EXPECT_EQ(laurent_equal(parse_expr("(var 0)"), parse_expr("(var 1)")), false);
  EXPECT_FALSE(laurent_equal(parse_expr("(inv (+ (var 0) 1))"), Expr(1L)).has_value());
}

// Simplification keeps the value at every point where both sides are defined.
TEST(Expr, SimplifyPreservesValues) {
  Rng rng(2);
  for (int s = 0; s < 300; ++s) {
    const Expr e = random_laurent_expr(rng, 4);
    const Expr simple = simplify(e);
    for (int k = 0; k < 5; ++k) {
      PointEvaluator ev(F101, {ModP(1 + rng.below(100), F101), ModP(1 + rng.below(100), F101)});
      const auto a = ev(e);
      const auto b = ev(simple);
      if (a && b) {
        ASSERT_EQ(*a, *b) << e.to_string() << " vs " << simple.to_string();
      }
    }
  }
}

// A Laurent polynomial P / x^m is a reduced fraction, so its degrees bound any other representation.
TEST(Expr, DegreeBoundDominatesLaurentDegrees) {
  Rng rng(3);
  for (int s = 0; s < 500; ++s) {
    const Expr e = random_laurent_expr(rng, 4);
    const auto l = to_laurent(e);
    ASSERT_TRUE(l.has_value());
    if (l->empty()) continue;
    std::vector<long> shift(2, 0);
    for (const auto& [mono, c] : *l)
      for (std::size_t i = 0; i < mono.size() && i < 2; ++i) shift[i] = std::max(shift[i], -mono[i]);
    long num = 0;
    for (const auto& [mono, c] : *l) {
      long d = shift[0] + shift[1];
      for (std::size_t i = 0; i < mono.size() && i < 2; ++i) d += mono[i];
      num = std::max(num, d);
    }
    ASSERT_LE(static_cast<std::uint64_t>(num), e.degree().num) << e.to_string();
    ASSERT_LE(static_cast<std::uint64_t>(shift[0] + shift[1]), e.degree().den) << e.to_string();
  }
}

}  // namespace
}  // namespace spinform
