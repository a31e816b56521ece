#pragma once

// Seeded fuzzing of Witt cancellation over finite fields, plus the chained
// stabilization check SO(G3) -> SO(G4) -> SO(G5) -> SO(G6).

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "spinform/certificate.hpp"
#include "spinform/propositions.hpp"
#include "spinform/quadform.hpp"

namespace spinform {

inline constexpr std::size_t kMaxFuzzRank = 8;

struct FuzzPlan {
  std::vector<std::uint64_t> primes = {5, 7, 11, 109};
  std::size_t min_rank = 1;
  std::size_t max_rank = 6;  // the stabilized forms then stay within kMaxFuzzRank
  std::size_t samples = 500;
  std::uint64_t seed = 0;
  /// Forms per prime for the exhaustive isotropic cross-check (primes <= 11, rank <= 4).
  std::size_t isotropic_forms = 1000;
  unsigned threads = 0;  // 0: hardware concurrency

  void validate() const {
    if (min_rank < 1 || min_rank > max_rank || max_rank + 2 > kMaxFuzzRank) {
      throw InvalidPlan("fuzz ranks must satisfy 1 <= min <= max and max + 2 <= " + std::to_string(kMaxFuzzRank));
    }
    for (auto p : primes) FieldDescriptor::prime_field(p);
  }
};

namespace detail {

/// Runs body(i) for i in [0, n) on several threads; results land in index order.
template <class Result, class Body>
std::vector<Result> parallel_map(std::size_t n, unsigned threads, Body&& body) {
  std::vector<Result> out(n);
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += threads) out[i] = body(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

inline Matrix<ModP> random_invertible(std::size_t n, Rng& rng, const FieldDescriptor& field) {
  for (;;) {
    Matrix<ModP> m(n, n, ModP::zero(field));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = random_scalar<ModP>(rng, field);
    if (!determinant(m).is_zero()) return m;
  }
}

inline QuadraticForm<ModP> random_nonsingular_form(std::size_t n, Rng& rng, const FieldDescriptor& field) {
  for (;;) {
    Matrix<ModP> g(n, n, ModP::zero(field));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        g(i, j) = random_scalar<ModP>(rng, field);
        g(j, i) = g(i, j);
      }
    }
    if (!determinant(g).is_zero()) return QuadraticForm<ModP>(g);
  }
}

inline QuadraticForm<ModP> transform(const QuadraticForm<ModP>& f, const Matrix<ModP>& p) {
  return QuadraticForm<ModP>(p.transpose() * f.gram() * p);
}

inline QuadraticForm<ModP> negate(const QuadraticForm<ModP>& f) { return QuadraticForm<ModP>(-f.gram()); }

/// Witt-route isometry test: f and g of equal rank n are isometric iff f ⊥ -g has Witt index n.
inline bool isometric_by_witt(const QuadraticForm<ModP>& f, const QuadraticForm<ModP>& g) {
  if (f.rank() != g.rank()) return false;
  return witt_decompose(orthogonal_sum(f, negate(g))).witt_index == f.rank();
}

inline bool is_hyperbolic(const QuadraticForm<ModP>& f) {
  return f.rank() % 2 == 0 && witt_decompose(f).witt_index == f.rank() / 2;
}

struct CancellationSample {
  bool antecedent = false;
  bool stably_hyperbolic = false;
  bool stably_hyperbolic_checked = false;
  std::optional<json> failure;
};

inline CancellationSample cancellation_sample(std::uint64_t seed, std::uint64_t p, std::size_t index, const FuzzPlan& plan) {
  const FieldDescriptor field = FieldDescriptor::prime_field(p);
  Rng rng(seed, p * 0x100000001b3ULL + index);
  const std::size_t n = plan.min_rank + rng.below(plan.max_rank - plan.min_rank + 1);
  const auto h = hyperbolic_form<ModP>(1, field);
  CancellationSample out;

  QuadraticForm<ModP> q1 = random_nonsingular_form(n, rng, field);
  // Half of the pairs are related by a change of basis so the antecedent is often true.
  QuadraticForm<ModP> q2 = rng.coin() ? transform(q1, random_invertible(n, rng, field)) : random_nonsingular_form(n, rng, field);
  const auto s1 = orthogonal_sum(q1, h);
  const auto s2 = orthogonal_sum(q2, h);

  auto fail = [&](const std::string& what) {
    out.failure = json{{"check", what}, {"field", field.to_string()}, {"index", index},
                       {"q1", to_json(q1.gram())}, {"q2", to_json(q2.gram())}};
  };

  out.antecedent = is_isometric_ff(s1, s2);
  if (out.antecedent != isometric_by_witt(s1, s2)) {
    fail("stabilized_classification_disagrees");
    return out;
  }
  if (out.antecedent) {
    const bool by_invariants = is_isometric_ff(q1, q2);
    const bool by_witt = isometric_by_witt(q1, q2);
    if (!by_invariants || !by_witt) {
      fail("cancellation");
      return out;
    }
  }
  if (n % 2 == 0) {
    out.stably_hyperbolic_checked = true;
    out.stably_hyperbolic = is_hyperbolic(s1);
    if (out.stably_hyperbolic && !is_hyperbolic(q1)) fail("stably_hyperbolic_not_hyperbolic");
  }
  return out;
}

/// Every vector of F_p^n, lexicographic, zero excluded.
inline bool exhaustive_isotropic(const QuadraticForm<ModP>& f) {
  const std::size_t n = f.rank();
  const std::uint64_t p = f.field().modulus();
  std::vector<std::uint64_t> digits(n, 0);
  const FieldDescriptor field = f.field();
  for (;;) {
    std::size_t k = 0;
    while (k < n && ++digits[k] == p) digits[k++] = 0;
    if (k == n) return false;
    std::vector<ModP> x;
    for (auto d : digits) x.emplace_back(d, field);
    if (q_value(f, x).is_zero()) return true;
  }
}

}  // namespace detail

/// Cancellation and "stably hyperbolic implies hyperbolic" on random pairs per field.
inline Certificate run_cancellation_suite(const FuzzPlan& plan) {
  plan.validate();
  Certificate cert("cancellation", "fp", plan.seed);
  json per_field = json::object();
  for (std::uint64_t p : plan.primes) {
    const auto results = detail::parallel_map<detail::CancellationSample>(
        plan.samples, plan.threads, [&](std::size_t i) { return detail::cancellation_sample(plan.seed, p, i, plan); });
    std::size_t antecedent = 0, vacuous = 0, passed = 0, stably = 0, even = 0;
    json first_failure = nullptr;
    for (const auto& r : results) {
      if (r.failure) {
        if (first_failure.is_null()) first_failure = *r.failure;
        continue;
      }
      ++passed;
      (r.antecedent ? antecedent : vacuous) += 1;
      even += r.stably_hyperbolic_checked ? 1 : 0;
      stably += r.stably_hyperbolic ? 1 : 0;
    }
    const std::string name = "fp:" + std::to_string(p);
    per_field[name] = {{"pairs", plan.samples},
                       {"passed", passed},
                       {"antecedent_true", antecedent},
                       {"vacuous", vacuous},
                       {"even_rank_checked", even},
                       {"stably_hyperbolic", stably},
                       {"first_failure", first_failure}};
    cert.expect(first_failure.is_null(), "cancellation_" + name, [&] { return first_failure; });
    cert.add_samples(plan.samples);
  }

  // find_isotropic against brute force for small p and rank.
  json agreement = json::object();
  for (std::uint64_t p : {3ULL, 5ULL, 7ULL, 11ULL}) {
    const FieldDescriptor field = FieldDescriptor::prime_field(p);
    const auto results = detail::parallel_map<std::optional<json>>(plan.isotropic_forms, plan.threads, [&](std::size_t i) -> std::optional<json> {
      Rng rng(plan.seed, 0x15f0ULL * p + i + (1ULL << 40));
      const std::size_t n = 1 + rng.below(4);
      const auto f = detail::random_nonsingular_form(n, rng, field);
      const auto found = find_isotropic(f);
      const bool exists = detail::exhaustive_isotropic(f);
      bool ok = found.has_value() == exists;
      if (found) {
        bool nonzero = false;
        for (const auto& x : *found) nonzero = nonzero || !x.is_zero();
        ok = ok && nonzero && q_value(f, *found).is_zero();
      }
      if (ok) return std::nullopt;
      return json{{"check", "isotropic_agreement"}, {"gram", to_json(f.gram())}, {"exhaustive", exists},
                  {"found", found ? to_json(*found) : json(nullptr)}};
    });
    std::size_t agree = 0;
    json first = nullptr;
    for (const auto& r : results) {
      if (!r) {
        ++agree;
      } else if (first.is_null()) {
        first = *r;
      }
    }
    const std::string name = "fp:" + std::to_string(p);
    agreement[name] = {{"forms", plan.isotropic_forms}, {"agree", agree}};
    cert.expect(first.is_null(), "isotropic_agreement_" + name, [&] { return first; });
  }
  cert.witness()["per_field"] = per_field;
  cert.witness()["isotropic_agreement"] = agreement;
  cert.witness()["ranks"] = {plan.min_rank, plan.max_rank};
  return cert;
}

// ---------------------------------------------------------------------------

/// One pass up the chain for A in SL_2; every stage named in the subchecks.
template <Field F>
void stabilization_step(Certificate& cert, const Matrix<F>& a, const FieldDescriptor& field) {
  const auto& t = form_table<F>(field);
  const F zero = F::zero(field);
  const Matrix<F> one = identity<F>(1, field);
  auto ctx = [&] { return json{{"a", to_json(a)}}; };

  const Matrix<F> x3 = conjugation_action(a, adjugate2(a));
  cert.expect(x3.transpose() * t.g3 * x3 == t.g3, "stage3_preserves_g3", ctx);

  const Matrix<F> x4 = two_sided_action(a, adjugate2(a));
  const Matrix<F> p4 = hstack(t.trace_zero, column_matrix(t.identity_matrix, zero));
  cert.expect(x4.transpose() * t.g4 * x4 == t.g4, "stage4_preserves_g4", ctx);
  cert.expect(inverse(p4) * x4 * p4 == block_diag(x3, one), "stage4_restricts_to_stage3", ctx);

  const Matrix<F> s = block_diag(a, a);
  const Matrix<F> x5 = spin5_matrix(s, t);
  const Matrix<F> q5 = coordinates_in(t.kernel_basis, hstack(t.stab45_matrix, column_matrix(t.hyperbolic_minus, zero)));
  cert.expect(x5.transpose() * t.g5 * x5 == t.g5, "stage5_preserves_g5", ctx);
  cert.expect(inverse(q5) * x5 * q5 == block_diag(x4, one), "stage5_restricts_to_stage4", ctx);

  const Matrix<F> x6 = wedge_square(s);
  const Matrix<F> p6 = hstack(t.kernel_basis, column_matrix(t.complement_line, zero));
  cert.expect(x6.transpose() * t.g6 * x6 == t.g6, "stage6_preserves_g6", ctx);
  cert.expect(inverse(p6) * x6 * p6 == block_diag(x5, one), "stage6_restricts_to_stage5", ctx);

  // The three added directions: the identity line of stage 4 and the hyperbolic plane spanned by u +- v.
  const Matrix<F> added = hstack(t.stab45_matrix * column_matrix(t.identity_matrix, zero),
                                 hstack(column_matrix(t.hyperbolic_minus, zero), column_matrix(t.complement_line, zero)));
  cert.expect(x6 * added == added, "composite_fixes_complement", ctx);
  const Matrix<F> image3 = t.stab45_matrix * t.trace_zero;
  cert.expect(x6 * image3 == image3 * x3, "composite_restricts_to_stage3", ctx);
}

template <Field F>
Certificate run_stabilization_chain_in(const VerifyPlan& plan) {
  const FieldDescriptor field = plan.field;
  Certificate cert("chain", field.to_string(), plan.seed);
  const auto& t = form_table<F>(field);
  stabilization_step<F>(cert, identity<F>(2, field), field);

  // diag(t, 1/t): stage 3 is diag(t^2, 1, t^-2), stage 6 is diag(1, t^2, 1, 1, t^-2, 1).
  json diagonals = json::array();
  for (long v : {2L, 3L, 5L}) {
    const F s = F::from_int(v, field);
    if (s.is_zero()) continue;
    const Matrix<F> a = diagonal<F>({s, s.inverse()}, F::zero(field));
    stabilization_step<F>(cert, a, field);
    const Matrix<F> x3 = conjugation_action(a, adjugate2(a));
    const Matrix<F> x6 = wedge_square(block_diag(a, a));
    const F s2 = s * s;
    const F one = F::one(field);
    cert.expect(x3 == diagonal<F>({s2, one, s2.inverse()}, F::zero(field)), "diagonal_stage3",
                [&] { return json{{"t", v}}; });
    cert.expect(x6 == diagonal<F>({one, s2, one, one, s2.inverse(), one}, F::zero(field)), "diagonal_stage6",
                [&] { return json{{"t", v}}; });
    diagonals.push_back({{"t", v}, {"stage3", to_json(x3)}, {"stage6", to_json(x6)}});
  }
  cert.witness()["diagonal_examples"] = diagonals;
  cert.witness()["complement_gram"] = to_json(
      [&] {
        const Matrix<F> added = hstack(t.stab45_matrix * column_matrix(t.identity_matrix, F::zero(field)),
                                       hstack(column_matrix(t.hyperbolic_minus, F::zero(field)), column_matrix(t.complement_line, F::zero(field))));
        return added.transpose() * t.g6 * added;
      }());

  Rng rng(plan.seed, 19);
  for (std::size_t s = 0; s < plan.samples; ++s) {
    stabilization_step<F>(cert, detail::random_sl<F>(2, rng, plan).matrix(), field);
  }
  cert.set_samples(plan.samples + 4);
  return cert;
}

inline Certificate run_stabilization_chain(const VerifyPlan& plan) {
  return with_field(plan.field, [&]<class F>(std::type_identity<F>) { return run_stabilization_chain_in<F>(plan); });
}

}  // namespace spinform
