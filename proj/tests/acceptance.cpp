// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "spinform/spinform.hpp"

namespace {

using namespace spinform;

const std::vector<FieldDescriptor> kFields = {FieldDescriptor::rationals(), FieldDescriptor::prime_field(5),
                                              FieldDescriptor::prime_field(7), FieldDescriptor::prime_field(109)};
constexpr std::uint64_t kSeed = 2024;

struct Outcome {
  bool passed = true;
  std::string detail;
  std::vector<Certificate> certificates;

  void require(bool ok, const std::string& what) {
    if (!ok && passed) detail = what;
    passed = passed && ok;
  }
  void add(Certificate c) {
    require(c.passed(), c.check() + " over " + c.to_json().at("field").get<std::string>() + ": " + c.counterexample().dump());
    certificates.push_back(std::move(c));
  }
};

VerifyPlan plan_for(const FieldDescriptor& field) {
  VerifyPlan plan;
  plan.field = field;
  plan.seed = kSeed;
  return plan;
}

std::size_t witt_index_by_classification(const QuadraticForm<ModP>& f) {
  const std::size_t n = f.rank();
  if (n % 2 == 1) return n / 2;
  ModP d = discriminant(f);
  if ((n / 2) % 2 == 1) d = -d;
  return is_square(d) ? n / 2 : n / 2 - 1;
}

// 1. Orthogonal basis, q-values and Witt indices.
Outcome criterion_forms() {
  Outcome out;
  for (const auto& f : kFields) out.add(verify_forms(plan_for(f)));
  for (std::uint64_t p : {5ULL, 7ULL, 109ULL}) {
    const auto field = FieldDescriptor::prime_field(p);
    const auto& t = form_table<ModP>(field);
    const std::size_t expected[4] = {1, 2, 2, 3};
    const Matrix<ModP>* grams[4] = {&t.g3, &t.g4, &t.g5, &t.g6};
    for (std::size_t k = 0; k < 4; ++k) {
      const QuadraticForm<ModP> form(*grams[k]);
      const auto w = witt_decompose(form).witt_index;
      out.require(w == expected[k] && witt_index_by_classification(form) == expected[k],
                  "witt index of G" + std::to_string(k + 3) + " over " + field.to_string());
    }
  }
  return out;
}

template <Field F>
void recheck_images(Outcome& out, const VerifyPlan& plan) {
  const FieldDescriptor& field = plan.field;
  const auto& t = form_table<F>(field);
  Rng rng(plan.seed, 4242);
  auto preserved = [&](const Matrix<F>& m, const Matrix<F>& g) {
    return m.transpose() * g * m == g && determinant(m).is_one();
  };
  const auto sl2 = GroupDescriptor<F>::special_linear(2, field);
  const auto sl4 = GroupDescriptor<F>::special_linear(4, field);
  const auto sp4 = GroupDescriptor<F>::symplectic4(field);
  for (std::size_t s = 0; s < plan.samples; ++s) {
    const auto a = random_element(sl2, rng, plan.word_length);
    const auto b = random_element(sl2, rng, plan.word_length);
    const bool ok = preserved(spin3_map(a).matrix(), t.g3) && preserved(spin4_map(a, b).matrix(), t.g4) &&
                    preserved(spin5_map(random_element(sp4, rng, plan.word_length)).matrix(), t.g5) &&
                    preserved(spin6_map(random_element(sl4, rng, plan.word_length)).matrix(), t.g6);
    out.require(ok, "image outside SO over " + field.to_string());
    if (!ok) return;
  }
}

// 2. Homomorphism property and exact preservation with det 1.
Outcome criterion_homomorphisms() {
  Outcome out;
  for (const auto& f : kFields) {
    const auto plan = plan_for(f);
    out.add(verify_homomorphisms(plan));
    with_field(f, [&]<class F>(std::type_identity<F>) { recheck_images<F>(out, plan); });
  }
  return out;
}

Outcome criterion_for(const std::string& check) {
  Outcome out;
  for (const auto& f : kFields) out.add(run_check(check, plan_for(f)));
  return out;
}

// 3. Lie kernel rank, +-I, non-central samples.
Outcome criterion_kernels() {
  Outcome out = criterion_for("kernels");
  for (const auto& c : out.certificates) out.require(c.samples() == 10000, "kernel sample count");
  for (const auto& f : kFields) {
    with_field(f, [&]<class F>(std::type_identity<F>) {
      std::vector<std::vector<F>> columns;
      for (const auto& x : sl_basis<F>(4, f)) {
        const auto m = lie_wedge_square(x);
        const auto e = m.entries();
        columns.emplace_back(e.begin(), e.end());
      }
      out.require(rank(from_columns<F>(columns, 36, F::zero(f))) == 15, "rank of the Lie derivative over " + f.to_string());
    });
  }
  return out;
}

// 9. Witt cancellation over finite fields.
Outcome criterion_cancellation() {
  Outcome out;
  FuzzPlan plan;
  plan.primes = {5, 7, 11, 109};
  plan.samples = 100000;
  plan.isotropic_forms = 1000;
  plan.seed = kSeed;
  out.add(run_cancellation_suite(plan));
  const json& per_field = out.certificates.back().witness().at("per_field");
  for (const auto& [name, stats] : per_field.items()) {
    out.require(stats.at("passed") == 100000, "cancellation pairs passed over " + name);
  }
  return out;
}

Expr u() { return Expr::variable(0); }
Expr v() { return Expr::variable(1); }
ExprMatrix m2(Expr a, Expr b, Expr c, Expr d) { return ExprMatrix(2, 2, {a, b, c, d}, Expr(0L)); }

Certificate failure_bound_check(const Certificate& c) {
  Certificate out("failure_bound_" + c.check(), "fp:" + std::to_string(EvaluationPlan{}.prime), kSeed);
  const double bound = c.witness().at("failure_bound").at("log2_failure_bound").get<double>();
  out.expect(bound <= -40.0, "at_most_2^-40", [&] { return json{{"log2_failure_bound", bound}}; });
  return out;
}

// 10. Cocycle lab.
Outcome criterion_cocycles() {
  Outcome out;
  EvaluationPlan plan;
  plan.seed = kSeed;

  Cover two(2, 1);
  two.add_overlap(0, 1, {u()});
  TransitionData diag(two, 2);
  diag.set(0, 1, m2(u(), 0L, 0L, u().inverse()));
  diag.set(1, 0, m2(u().inverse(), 0L, 0L, u()));
  const auto pushed = pushforward(diag, Representation::spin3);
  const ExprMatrix expected(3, 3, {u().pow(2), 0L, 0L, 0L, 1L, 0L, 0L, 0L, u().pow(-2)}, Expr(0L));
  bool exact = true;
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) exact = exact && laurent_equal(pushed.at(0, 1)(r, c), expected(r, c)) == true;
  out.require(exact, "spin3 pushforward of diag(u, 1/u)");
  const auto pushed_check = check_cocycle(pushed, plan);
  out.add(pushed_check);
  out.add(failure_bound_check(pushed_check));

  // Corrupted triple overlap.
  Cover three(3, 2);
  three.add_overlap(0, 1, {u()});
  three.add_overlap(1, 2, {v()});
  three.add_overlap(0, 2, {u(), v()});
  const std::vector<ExprMatrix> h = {m2(u(), 0L, 0L, u().inverse()), m2(1L, v(), 0L, 1L), m2(1L, 0L, u() * v(), 1L)};
  TransitionData glued(three, 2);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j) glued.set(i, j, h[i] * adjugate2(h[j]));
  const auto good = check_cocycle(glued, plan);
  out.add(good);
  out.add(failure_bound_check(good));
  auto corrupted = glued;
  auto g02 = corrupted.at(0, 2);
  g02(0, 1) = g02(0, 1) + u();
  corrupted.set(0, 2, g02);
  const auto bad = check_cocycle(corrupted, plan);
  out.require(!bad.passed() && bad.counterexample().contains("point") && bad.counterexample().at("point").size() == 2,
              "corrupted triple overlap was not caught with a witness point");

  // Twist action composes: (t . a) . b = t . (ab).
  Cover pair(2, 2);
  pair.add_overlap(0, 1, {u(), v()});
  TransitionData gl(pair, 2, Structure::gl());
  gl.set(0, 1, m2(u(), v(), 0L, 1L));
  gl.set(1, 0, m2(u().inverse(), -(v() / u()), 0L, 1L));
  const UnitCocycle a = {{{0, 1}, u()}, {{1, 0}, u().inverse()}};
  const UnitCocycle b = {{{0, 1}, v().pow(3)}, {{1, 0}, v().pow(-3)}};
  UnitCocycle ab;
  for (const auto& [key, e] : a) ab[key] = e * b.at(key);
  const auto composed = transitions_agree(twist_by_unit(twist_by_unit(gl, a, plan).data, b, plan).data,
                                          twist_by_unit(gl, ab, plan).data, plan);
  out.add(composed);
  out.add(failure_bound_check(composed));

  // The sign twist disappears under spin3.
  const UnitCocycle sign = {{{0, 1}, Expr(-1L)}, {{1, 0}, Expr(-1L)}};
  const auto twisted = pushforward(twist_by_unit(diag, sign, plan).data, Representation::spin3);
  bool invariant = true;
  for (const auto& [key, g] : pushed.transitions())
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c)
        invariant = invariant && laurent_equal(g(r, c), twisted.at(key.first, key.second)(r, c)) == true;
  out.require(invariant, "sign twist changed the spin3 pushforward");
  return out;
}

struct Criterion {
  int number;
  std::string title;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {1, "form facts and Witt indices", criterion_forms},
      {2, "homomorphisms and exact preservation", criterion_homomorphisms},
      {3, "kernel of the wedge-square map", criterion_kernels},
      {4, "Sp4 inside SL4 block splitting", [] { return criterion_for("stab56"); }},
      {5, "Mat2x2 into the determinant form", [] { return criterion_for("stab45"); }},
      {6, "diagonal SL2 and trace-zero restriction", [] { return criterion_for("stab34"); }},
      {7, "hyperbolic intertwiner", [] { return criterion_for("hypso4"); }},
      {8, "Weyl conjugacy of the long-root factors", [] { return criterion_for("weyl"); }},
      {9, "Witt cancellation over finite fields", criterion_cancellation},
      {10, "cocycle lab", criterion_cocycles},
  };
  return list;
}

std::string run_all(bool print) {
  json all = json::array();
  for (const auto& c : criteria()) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (print) {
      std::printf("criterion %2d: %s  %s (%.1fs)%s%s\n", c.number, o.passed ? "PASS" : "FAIL", c.title.c_str(), secs,
                  o.passed ? "" : "  ", o.detail.c_str());
      std::fflush(stdout);
    }
    all.push_back({{"criterion", c.number}, {"status", o.passed ? "PASS" : "FAIL"}, {"manifest", manifest(o.certificates)}});
  }
  return all.dump();
}

}  // namespace

int main() {
  const std::string first = run_all(true);
  const std::string second = run_all(false);
  const bool passed = first.find(R"("status":"FAIL")") == std::string::npos;
  const bool same = first == second;
  std::printf("criterion 11: %s  byte-identical manifests on rerun (%zu bytes)\n", same ? "PASS" : "FAIL", first.size());
  return passed && same ? 0 : 1;
}
