#include <gtest/gtest.h>

#include "spinform/cocycle.hpp"

namespace spinform {
namespace {

Expr u() { return Expr::variable(0); }
Expr v() { return Expr::variable(1); }

ExprMatrix m2(Expr a, Expr b, Expr c, Expr d) { return ExprMatrix(2, 2, {a, b, c, d}, Expr(0L)); }
ExprMatrix id(std::size_t n) { return ExprMatrix::identity(n, Expr(0L)); }

Cover two_charts() {
  Cover c(2, 1);
  c.add_overlap(0, 1, {u()});
  return c;
}

Cover three_charts() {
  Cover c(3, 2);
  c.add_overlap(0, 1, {u()});
  c.add_overlap(1, 2, {v()});
  c.add_overlap(0, 2, {u(), v()});
  return c;
}

TransitionData diag_unit() {
  TransitionData t(two_charts(), 2);
  t.set(0, 1, m2(u(), 0L, 0L, u().inverse()));
  t.set(1, 0, m2(u().inverse(), 0L, 0L, u()));
  return t;
}

// g_ij = h_i h_j^-1 from noncommuting SL_2 charts.
ChartTrivialization three_chart_witness() {
  return {{0, m2(u(), 0L, 0L, u().inverse())}, {1, m2(1L, v(), 0L, 1L)}, {2, m2(1L, 0L, u() * v(), 1L)}};
}

TransitionData from_witness(const ChartTrivialization& h) {
  TransitionData t(three_charts(), 2);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j) t.set(i, j, h.at(i) * adjugate2(h.at(j)));
  return t;
}

bool entries_equal(const ExprMatrix& a, const ExprMatrix& b) {
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (laurent_equal(a(r, c), b(r, c)) != true) return false;
  return true;
}

double log2_bound(const Certificate& c) { return c.witness().at("failure_bound").at("log2_failure_bound").get<double>(); }

TEST(Cocycle, IdentityAndTwoChartData) {
  const EvaluationPlan plan;
  TransitionData t(two_charts(), 2);
  t.set(0, 1, id(2));
  t.set(1, 0, id(2));
  EXPECT_TRUE(check_cocycle(t, plan).passed());

  const auto cert = check_cocycle(diag_unit(), plan);
  EXPECT_TRUE(cert.passed()) << cert.to_json().dump(1);
  EXPECT_LE(log2_bound(cert), -40.0);
  EXPECT_EQ(cert.samples(), 500U);
}

TEST(Cocycle, CorruptedTripleFailsWithWitnessPoint) {
  const EvaluationPlan plan;
  auto t = from_witness(three_chart_witness());
  EXPECT_TRUE(check_cocycle(t, plan).passed());
  auto g02 = t.at(0, 2);
  g02(0, 0) = g02(0, 0) + Expr(1L);
  t.set(0, 2, g02);
  const auto cert = check_cocycle(t, plan);
  ASSERT_FALSE(cert.passed());
  const json& ce = cert.counterexample();
  EXPECT_EQ(ce.at("check"), "triple_overlap");
  EXPECT_EQ(ce.at("triple"), json::parse("[0, 1, 2]"));
  EXPECT_EQ(ce.at("point").size(), 2U);
}

TEST(Cocycle, StructureCheck) {
  const EvaluationPlan plan;
  EXPECT_TRUE(structure_check(diag_unit(), plan).passed());
  TransitionData bad(two_charts(), 2);
  bad.set(0, 1, m2(u(), 0L, 0L, 1L));
  const auto cert = structure_check(bad, plan);
  ASSERT_FALSE(cert.passed());
  EXPECT_EQ(cert.counterexample().at("check"), "determinant");
  bad.set_structure(Structure::gl());
  EXPECT_TRUE(structure_check(bad, plan).passed());
}

TEST(Cocycle, PushforwardSpin3) {
  const EvaluationPlan plan;
  const auto pushed = pushforward(diag_unit(), Representation::spin3);
  EXPECT_EQ(pushed.rank(), 3U);
  EXPECT_EQ(pushed.structure().label, "SO(G3)");
  const ExprMatrix expected(3, 3, {u().pow(2), 0L, 0L, 0L, 1L, 0L, 0L, 0L, u().pow(-2)}, Expr(0L));
  EXPECT_EQ(pushed.at(0, 1), expected);
  EXPECT_TRUE(entries_equal(pushed.at(0, 1), expected));
  EXPECT_TRUE(structure_check(pushed, plan).passed());
  EXPECT_TRUE(check_cocycle(pushed, plan).passed());

  TransitionData trivial(two_charts(), 2);
  trivial.set(0, 1, id(2));
  EXPECT_EQ(pushforward(trivial, Representation::spin3).at(0, 1), id(3));
}

TEST(Cocycle, PushforwardSpin4FixesIdentitySection) {
  const EvaluationPlan plan;
  const auto pushed = pushforward(from_witness(three_chart_witness()), Representation::spin4_diag);
  EXPECT_TRUE(structure_check(pushed, plan).passed());
  EXPECT_TRUE(check_cocycle(pushed, plan).passed());
  const std::vector<Expr> ident = {1L, 0L, 0L, 1L};
  for (const auto& [pair, g] : pushed.transitions()) {
    const auto image = g * ident;
    for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(laurent_equal(image[k], ident[k]), true);
  }
}

TEST(Cocycle, PushforwardSpin6) {
  const EvaluationPlan plan;
  TransitionData t(two_charts(), 4);
  ExprMatrix g = id(4);
  g(0, 0) = u();
  g(1, 1) = u().inverse();
  g(2, 3) = u();
  t.set(0, 1, g);
  const auto pushed = pushforward(t, Representation::spin6_hyp3);
  EXPECT_EQ(pushed.rank(), 6U);
  EXPECT_TRUE(structure_check(pushed, plan).passed());
  EXPECT_THROW(pushforward(diag_unit(), Representation::spin6_hyp3), RankMismatch);
  EXPECT_THROW(pushforward(t, Representation::spin3), RankMismatch);
  t.set_structure(Structure::gl());
  EXPECT_THROW(pushforward(t, Representation::spin6_hyp3), InvalidPlan);
  EXPECT_THROW(parse_representation("spin7"), InvalidPlan);
}

TEST(Cocycle, Twists) {
  const EvaluationPlan plan;
  const auto t = diag_unit();
  const UnitCocycle one = {{{0, 1}, Expr(1L)}, {{1, 0}, Expr(1L)}};
  const auto same = twist_by_unit(t, one, plan);
  EXPECT_TRUE(transitions_agree(same.data, t, plan).passed());
  EXPECT_EQ(same.report.witness().at("structure"), "SL");

  const UnitCocycle sign = {{{0, 1}, Expr(-1L)}, {{1, 0}, Expr(-1L)}};
  EXPECT_EQ(twist_by_unit(t, sign, plan).data.structure().label, "SL");

  TransitionData t2(Cover(2, 2), 2);
  {
    Cover c(2, 2);
    c.add_overlap(0, 1, {u(), v()});
    t2 = TransitionData(c, 2);
    t2.set(0, 1, m2(u(), 0L, 0L, u().inverse()));
    t2.set(1, 0, m2(u().inverse(), 0L, 0L, u()));
  }
  const UnitCocycle by_v = {{{0, 1}, v()}, {{1, 0}, v().inverse()}};
  const auto down = twist_by_unit(t2, by_v, plan);
  EXPECT_EQ(down.data.structure().label, "GL");
  EXPECT_TRUE(down.report.witness().contains("warning"));
  EXPECT_TRUE(check_cocycle(down.data, plan).passed());

  const UnitCocycle broken = {{{0, 1}, v()}, {{1, 0}, v()}};
  EXPECT_THROW(twist_by_unit(t2, broken, plan), NotACocycle);
}

TEST(Cocycle, TwistActionComposes) {
  const EvaluationPlan plan;
  Cover c(2, 2);
  c.add_overlap(0, 1, {u(), v()});
  TransitionData t(c, 2, Structure::gl());
  t.set(0, 1, m2(u(), v(), 0L, 1L));
  t.set(1, 0, m2(u().inverse(), -(v() / u()), 0L, 1L));
  const UnitCocycle a = {{{0, 1}, u()}, {{1, 0}, u().inverse()}};
  const UnitCocycle b = {{{0, 1}, v().pow(2)}, {{1, 0}, v().pow(-2)}};
  UnitCocycle ab;
  for (const auto& [pair, e] : a) ab[pair] = e * b.at(pair);
  const auto stepwise = twist_by_unit(twist_by_unit(t, a, plan).data, b, plan).data;
  const auto direct = twist_by_unit(t, ab, plan).data;
  const auto cert = transitions_agree(stepwise, direct, plan);
  EXPECT_TRUE(cert.passed()) << cert.to_json().dump(1);
  EXPECT_LE(log2_bound(cert), -40.0);
}

TEST(Cocycle, SignTwistInvariance) {
  const EvaluationPlan plan;
  const UnitCocycle sign = {{{0, 1}, Expr(-1L)}, {{1, 0}, Expr(-1L)}};
  const auto t = diag_unit();
  const auto twisted = pushforward(twist_by_unit(t, sign, plan).data, Representation::spin3);
  const auto plain = pushforward(t, Representation::spin3);
  for (const auto& [pair, g] : plain.transitions()) EXPECT_TRUE(entries_equal(g, twisted.at(pair.first, pair.second)));
  EXPECT_TRUE(transitions_agree(plain, twisted, plan).passed());
}

TEST(Cocycle, CoboundaryWitness) {
  const EvaluationPlan plan;
  TransitionData trivial(two_charts(), 2);
  trivial.set(0, 1, id(2));
  EXPECT_TRUE(verify_coboundary_witness(trivial, {{0, id(2)}, {1, id(2)}}, plan).passed());

  const auto h = three_chart_witness();
  const auto t = from_witness(h);
  const auto ok = verify_coboundary_witness(t, h, plan);
  EXPECT_TRUE(ok.passed()) << ok.to_json().dump(1);
  EXPECT_LE(log2_bound(ok), -40.0);

  // h_i^-1 h_j is the other convention; the charts do not commute.
  TransitionData wrong(three_charts(), 2);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j) wrong.set(i, j, adjugate2(h.at(i)) * h.at(j));
  const auto bad = verify_coboundary_witness(wrong, h, plan);
  ASSERT_FALSE(bad.passed());
  EXPECT_EQ(bad.counterexample().at("check"), "coboundary");
}

TEST(Cocycle, PlanErrors) {
  EvaluationPlan small;
  small.prime = 7;
  EXPECT_THROW(check_cocycle(diag_unit(), small), InvalidPlan);
  EvaluationPlan even;
  even.prime = 1ULL << 20;
  EXPECT_THROW(check_cocycle(diag_unit(), even), InvalidPlan);

  Cover degenerate(2, 1);
  degenerate.add_overlap(0, 1, {u() - u()});
  TransitionData t(degenerate, 1, Structure::gl());
  t.set(0, 1, ExprMatrix(1, 1, u()));
  EXPECT_THROW(check_cocycle(t, EvaluationPlan{}), DegenerateCover);

  EXPECT_THROW(two_charts().add_overlap(0, 0), InvalidPlan);
  TransitionData r(two_charts(), 2);
  EXPECT_THROW(r.set(0, 1, id(3)), RankMismatch);
  EXPECT_THROW(r.set(0, 1, m2(Expr::variable(4), 0L, 0L, 1L)), DimensionMismatch);
}

TEST(Cocycle, Deterministic) {
  EvaluationPlan plan;
  plan.seed = 12;
  const auto t = from_witness(three_chart_witness());
  EXPECT_EQ(check_cocycle(t, plan).to_json().dump(), check_cocycle(t, plan).to_json().dump());
}

TEST(Cocycle, JsonRoundTrip) {
  const auto t = from_witness(three_chart_witness());
  const auto back = transition_from_json(to_json(t));
  EXPECT_EQ(to_json(back), to_json(t));
  EXPECT_THROW(transition_from_json(json::parse(R"({"rank": 2})")), ParseError);
  EXPECT_THROW(transition_from_json(json::parse(
                   R"({"cover": {"charts": 2, "variables": 1}, "rank": 1, "transitions": [{"pair": [0, 1], "matrix": [["1"]]}]})")),
               InvalidPlan);
  const auto units = units_from_json(json::parse(R"j({"units": [{"pair": [0, 1], "value": "(var 0)"}]})j"));
  EXPECT_EQ(units.at({0, 1}).to_string(), "(var 0)");
}

}  // namespace
}  // namespace spinform
