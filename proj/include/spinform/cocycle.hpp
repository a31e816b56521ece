#pragma once

// Transition data on an abstract cover and randomized identity testing of
// the cocycle condition over a large prime field.
//
// Each sampled point must avoid every declared localizing function and every
// divisor occurring in the expressions being compared. A nonzero rational
// function N/D with deg N <= d vanishes at a uniform point, conditioned on
// the divisors being nonzero, with probability at most d / (p - D) where D
// bounds the total divisor degree. Independent trials multiply.

#include <array>
#include <cmath>
#include <limits>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spinform/certificate.hpp"
#include "spinform/expr.hpp"
#include "spinform/linalg.hpp"
#include "spinform/random.hpp"
#include "spinform/sporadic.hpp"

namespace spinform {

using ChartPair = std::pair<std::size_t, std::size_t>;
using ExprMatrix = Matrix<Expr>;

inline constexpr std::uint64_t kMersenne61 = (1ULL << 61) - 1;
inline constexpr int kMaxResamples = 64;

struct EvaluationPlan {
  std::uint64_t prime = kMersenne61;
  std::size_t trials = 500;
  std::uint64_t seed = 0;

  FieldDescriptor field() const {
    if (prime % 2 == 0 || !is_prime_u64(prime)) throw InvalidPlan(std::to_string(prime) + " is not an odd prime");
    return FieldDescriptor::prime_field(prime);
  }
};

class Cover {
 public:
  Cover() = default;
  Cover(std::size_t charts, std::size_t variables) : charts_(charts), variables_(variables) {}

  std::size_t charts() const { return charts_; }
  std::size_t variables() const { return variables_; }

  /// Declares U_i ∩ U_j as the locus where every listed function is invertible.
  void add_overlap(std::size_t i, std::size_t j, std::vector<Expr> localizing = {}) {
    if (i >= charts_ || j >= charts_ || i == j) throw InvalidPlan("bad overlap (" + std::to_string(i) + "," + std::to_string(j) + ")");
    for (const auto& f : localizing) {
      if (f.arity() > variables_) throw DimensionMismatch("localizing function uses more than " + std::to_string(variables_) + " variables");
    }
    overlaps_[{std::min(i, j), std::max(i, j)}] = std::move(localizing);
  }

  bool has_overlap(std::size_t i, std::size_t j) const { return overlaps_.count({std::min(i, j), std::max(i, j)}) != 0; }
  const std::map<ChartPair, std::vector<Expr>>& overlaps() const { return overlaps_; }

  /// Triples i<j<k whose three pairwise overlaps are declared.
  std::vector<std::array<std::size_t, 3>> triples() const {
    std::vector<std::array<std::size_t, 3>> out;
    for (std::size_t i = 0; i < charts_; ++i)
      for (std::size_t j = i + 1; j < charts_; ++j)
        for (std::size_t k = j + 1; k < charts_; ++k)
          if (has_overlap(i, j) && has_overlap(j, k) && has_overlap(i, k)) out.push_back({i, j, k});
    return out;
  }

  std::vector<Expr> localizing_functions() const {
    std::vector<Expr> out;
    for (const auto& [pair, fs] : overlaps_) out.insert(out.end(), fs.begin(), fs.end());
    return out;
  }

 private:
  std::size_t charts_ = 0;
  std::size_t variables_ = 0;
  std::map<ChartPair, std::vector<Expr>> overlaps_;
};

/// Target group of the transition matrices. The SO Gram matrix is rational.
struct Structure {
  enum class Kind { general_linear, special_linear, special_orthogonal };
  Kind kind = Kind::special_linear;
  std::optional<Matrix<Rational>> gram;
  std::string label;

  static Structure gl() { return {Kind::general_linear, std::nullopt, "GL"}; }
  static Structure sl() { return {Kind::special_linear, std::nullopt, "SL"}; }
  static Structure so(Matrix<Rational> gram, std::string label = "SO") { return {Kind::special_orthogonal, std::move(gram), std::move(label)}; }

  std::string name() const { return label; }
};

class TransitionData {
 public:
  TransitionData(Cover cover, std::size_t rank, Structure structure = Structure::sl())
      : cover_(std::move(cover)), rank_(rank), structure_(std::move(structure)) {}

  const Cover& cover() const { return cover_; }
  std::size_t rank() const { return rank_; }
  const Structure& structure() const { return structure_; }
  void set_structure(Structure s) { structure_ = std::move(s); }

  void set(std::size_t i, std::size_t j, ExprMatrix g) {
    if (g.rows() != rank_ || g.cols() != rank_) throw RankMismatch("transition " + g.shape() + " in rank " + std::to_string(rank_));
    if (i != j && !cover_.has_overlap(i, j)) throw InvalidPlan("no overlap declared for (" + std::to_string(i) + "," + std::to_string(j) + ")");
    for (const auto& e : g.entries()) {
      if (e.arity() > cover_.variables()) throw DimensionMismatch("transition entry uses an undeclared variable");
    }
    g_.insert_or_assign(ChartPair{i, j}, std::move(g));
  }

  const ExprMatrix* find(std::size_t i, std::size_t j) const {
    auto it = g_.find({i, j});
    return it == g_.end() ? nullptr : &it->second;
  }
  const ExprMatrix& at(std::size_t i, std::size_t j) const {
    const auto* g = find(i, j);
    if (g == nullptr) throw InvalidPlan("missing transition (" + std::to_string(i) + "," + std::to_string(j) + ")");
    return *g;
  }
  const std::map<ChartPair, ExprMatrix>& transitions() const { return g_; }

 private:
  Cover cover_;
  std::size_t rank_;
  Structure structure_;
  std::map<ChartPair, ExprMatrix> g_;
};

// ---------------------------------------------------------------------------

namespace detail {

inline std::optional<Matrix<ModP>> evaluate(PointEvaluator& ev, const ExprMatrix& m, const FieldDescriptor& field) {
  Matrix<ModP> out(m.rows(), m.cols(), ModP::zero(field));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      auto v = ev(m(r, c));
      if (!v) return std::nullopt;
      out(r, c) = *v;
    }
  }
  return out;
}

inline json point_json(const std::vector<ModP>& point) {
  json out = json::array();
  for (const auto& x : point) out.push_back(x.residue());
  return out;
}

}  // namespace detail

/// Sampling loop shared by every identity check over F_p. Guards must be
/// nonzero at accepted points; degree bounds are registered by the caller for
/// each side of each identity before run().
class IdentitySampler {
 public:
  IdentitySampler(const EvaluationPlan& plan, std::size_t variables, std::uint64_t stream)
      : plan_(plan), field_(plan.field()), variables_(variables), rng_(plan.seed, stream) {}

  void add_guard(const Expr& e) {
    guards_.push_back(e);
    divisor_total_ += e.degree().num + e.divisor_degree();
  }
  /// Registers an expression whose value enters an identity.
  void account(const Expr& e) {
    account_degree(e.degree().num + e.degree().den);
    divisor_total_ += e.divisor_degree();
  }
  /// Registers a bound on num + den of one side of an identity.
  void account_degree(std::uint64_t total) { side_bound_ = std::max(side_bound_, total); }

  const FieldDescriptor& field() const { return field_; }

  /// Runs `check` at `trials` admissible points. The check returns a
  /// counterexample payload, resample_marker() when a compared expression
  /// hits a vanishing divisor, or nullopt on success.
  template <class Check>
  void run(Certificate& cert, Check&& check) {
    // a - b = N / D with deg N bounded by the sum of both sides' num + den.
    const std::uint64_t d = 2 * side_bound_;
    if (plan_.prime <= 4 * std::max<std::uint64_t>(d + divisor_total_, 1)) {
      throw InvalidPlan("prime " + std::to_string(plan_.prime) + " must exceed 4 * degree bound " +
                        std::to_string(d + divisor_total_));
    }
    const double per_trial = static_cast<double>(d) / (static_cast<double>(plan_.prime) - static_cast<double>(divisor_total_));
    log2_bound_ = d == 0 ? -std::numeric_limits<double>::infinity() : static_cast<double>(plan_.trials) * std::log2(per_trial);
    cert.witness()["failure_bound"] = {{"degree_bound", d},
                                       {"divisor_degree", divisor_total_},
                                       {"prime", plan_.prime},
                                       {"trials", plan_.trials},
                                       {"per_trial", per_trial},
                                       {"log2_failure_bound", d == 0 ? json(nullptr) : json(log2_bound_)},
                                       {"exact", d == 0}};

    std::size_t resampled = 0;
    std::size_t done = 0;
    while (done < plan_.trials) {
      if (resampled > kMaxResamples * (done + 1)) {
        throw DegenerateCover("no admissible sample point after " + std::to_string(resampled) + " attempts");
      }
      std::vector<ModP> point;
      for (std::size_t v = 0; v < variables_; ++v) point.push_back(ModP(rng_.below(plan_.prime), field_));
      PointEvaluator ev(field_, std::move(point));
      bool admissible = true;
      for (const auto& g : guards_) {
        auto val = ev(g);
        admissible = admissible && val && !val->is_zero();
      }
      std::optional<json> outcome;
      if (admissible) outcome = check(ev);
      if (!admissible || (outcome && *outcome == resample_marker())) {
        ++resampled;
        continue;
      }
      ++done;
      if (outcome) {
        json ce = *outcome;
        ce["point"] = detail::point_json(ev.point());
        ce["trial"] = done;
        const std::string name = ce.value("check", std::string("identity"));
        cert.expect(false, name, [&] { return ce; });
        break;
      }
    }
    cert.set_samples(done);
    cert.witness()["resampled_points"] = resampled;
  }

  static json resample_marker() { return json("resample"); }

  double log2_bound() const { return log2_bound_; }

 private:
  EvaluationPlan plan_;
  FieldDescriptor field_;
  std::size_t variables_;
  Rng rng_;
  std::vector<Expr> guards_;
  std::uint64_t side_bound_ = 0;
  std::uint64_t divisor_total_ = 0;
  double log2_bound_ = 0;
};

inline json resample_marker() { return IdentitySampler::resample_marker(); }

namespace detail {

inline void guard_cover(IdentitySampler& s, const Cover& cover) {
  for (const auto& f : cover.localizing_functions()) s.add_guard(f);
}

inline void account_matrix(IdentitySampler& s, const ExprMatrix& m) {
  for (const auto& e : m.entries()) s.account(e);
}

inline std::uint64_t entry_degree(const ExprMatrix& m) {
  std::uint64_t e = 0;
  for (const auto& x : m.entries()) e = std::max(e, x.degree().num + x.degree().den);
  return e;
}

/// Entries of a*b are sums of r two-factor products; over a common denominator num + den <= 2 r (ea + eb).
inline void account_product(IdentitySampler& s, const ExprMatrix& a, const ExprMatrix& b) {
  s.account_degree(2 * a.cols() * (entry_degree(a) + entry_degree(b)));
}

inline json mismatch(const std::string& check, const Matrix<ModP>& lhs, const Matrix<ModP>& rhs) {
  for (std::size_t r = 0; r < lhs.rows(); ++r)
    for (std::size_t c = 0; c < lhs.cols(); ++c)
      if (!(lhs(r, c) == rhs(r, c))) {
        return json{{"check", check}, {"entry", {r, c}}, {"lhs", lhs(r, c).residue()}, {"rhs", rhs(r, c).residue()}};
      }
  return json{{"check", check}};
}

}  // namespace detail

/// g_ik = g_ij g_jk on every triple overlap; g_ij g_ji = I where both are given; g_ii = I.
inline Certificate check_cocycle(const TransitionData& t, const EvaluationPlan& plan) {
  Certificate cert("cocycle", "fp:" + std::to_string(plan.prime), plan.seed);
  const auto triples = t.cover().triples();
  IdentitySampler sampler(plan, t.cover().variables(), 21);
  detail::guard_cover(sampler, t.cover());
  for (const auto& [pair, g] : t.transitions()) detail::account_matrix(sampler, g);
  std::vector<std::array<std::size_t, 3>> used;
  for (const auto& tr : triples) {
    const auto* gij = t.find(tr[0], tr[1]);
    const auto* gjk = t.find(tr[1], tr[2]);
    const auto* gik = t.find(tr[0], tr[2]);
    if (gij == nullptr || gjk == nullptr || gik == nullptr) continue;
    detail::account_product(sampler, *gij, *gjk);
    used.push_back(tr);
  }
  std::vector<ChartPair> inverse_pairs;
  for (const auto& [pair, g] : t.transitions()) {
    if (pair.first < pair.second && t.find(pair.second, pair.first) != nullptr) {
      detail::account_product(sampler, g, t.at(pair.second, pair.first));
      inverse_pairs.push_back(pair);
    }
  }
  json triple_list = json::array();
  for (const auto& tr : used) triple_list.push_back({tr[0], tr[1], tr[2]});
  cert.witness()["triples"] = triple_list;
  cert.witness()["inverse_pairs"] = inverse_pairs.size();
  cert.ledger()["cocycle_condition"] = "g_ik = g_ij * g_jk";

  const FieldDescriptor field = sampler.field();
  const Matrix<ModP> id = identity<ModP>(t.rank(), field);
  sampler.run(cert, [&](PointEvaluator& ev) -> std::optional<json> {
    for (const auto& [pair, g] : t.transitions()) {
      if (pair.first != pair.second) continue;
      auto v = detail::evaluate(ev, g, field);
      if (!v) return resample_marker();
      if (!(*v == id)) {
        json ce = detail::mismatch("diagonal_identity", *v, id);
        ce["pair"] = {pair.first, pair.second};
        return ce;
      }
    }
    for (const auto& tr : used) {
      auto gij = detail::evaluate(ev, t.at(tr[0], tr[1]), field);
      auto gjk = detail::evaluate(ev, t.at(tr[1], tr[2]), field);
      auto gik = detail::evaluate(ev, t.at(tr[0], tr[2]), field);
      if (!gij || !gjk || !gik) return resample_marker();
      const Matrix<ModP> product = *gij * *gjk;
      if (!(product == *gik)) {
        json ce = detail::mismatch("triple_overlap", *gik, product);
        ce["triple"] = {tr[0], tr[1], tr[2]};
        return ce;
      }
    }
    for (const auto& pair : inverse_pairs) {
      auto a = detail::evaluate(ev, t.at(pair.first, pair.second), field);
      auto b = detail::evaluate(ev, t.at(pair.second, pair.first), field);
      if (!a || !b) return resample_marker();
      if (!(*a * *b == id)) {
        json ce = detail::mismatch("inverse_pair", *a * *b, id);
        ce["pair"] = {pair.first, pair.second};
        return ce;
      }
    }
    return std::nullopt;
  });
  cert.expect(true, "triple_overlap");
  return cert;
}

/// Group equations for every transition at sampled points.
inline Certificate structure_check(const TransitionData& t, const EvaluationPlan& plan) {
  Certificate cert("structure", "fp:" + std::to_string(plan.prime), plan.seed);
  const Structure& s = t.structure();
  cert.witness()["structure"] = s.name();
  IdentitySampler sampler(plan, t.cover().variables(), 22);
  detail::guard_cover(sampler, t.cover());
  for (const auto& [pair, g] : t.transitions()) {
    detail::account_matrix(sampler, g);
    // det: r! products of r entries; Gram preservation: r^2 products of two entries.
    // Both have num + den <= 4 r^2 e over a common denominator.
    sampler.account_degree(4 * t.rank() * t.rank() * detail::entry_degree(g));
  }

  const FieldDescriptor field = sampler.field();
  std::optional<Matrix<ModP>> gram;
  if (s.kind == Structure::Kind::special_orthogonal) {
    if (!s.gram || s.gram->rows() != t.rank()) throw RankMismatch("SO structure Gram does not match rank");
    Matrix<ModP> gm(t.rank(), t.rank(), ModP::zero(field));
    for (std::size_t r = 0; r < t.rank(); ++r)
      for (std::size_t c = 0; c < t.rank(); ++c) gm(r, c) = ModP::from_rational((*s.gram)(r, c), field);
    gram = gm;
  }
  const ModP one = ModP::one(field);
  sampler.run(cert, [&](PointEvaluator& ev) -> std::optional<json> {
    for (const auto& [pair, g] : t.transitions()) {
      auto m = detail::evaluate(ev, g, field);
      if (!m) return resample_marker();
      const ModP det = determinant(*m);
      const bool det_ok = s.kind == Structure::Kind::general_linear ? !det.is_zero() : det == one;
      if (!det_ok) {
        return json{{"check", "determinant"}, {"pair", {pair.first, pair.second}}, {"determinant", det.residue()}};
      }
      if (gram && !(m->transpose() * *gram * *m == *gram)) {
        json ce = detail::mismatch("gram_preserved", m->transpose() * *gram * *m, *gram);
        ce["pair"] = {pair.first, pair.second};
        return ce;
      }
    }
    return std::nullopt;
  });
  cert.expect(true, s.kind == Structure::Kind::general_linear ? "invertible" : "determinant_one");
  if (gram) cert.expect(true, "gram_preserved");
  return cert;
}

// ---------------------------------------------------------------------------
// Pushforward along the sporadic representations.

enum class Representation { spin3, spin4_diag, spin6_hyp3 };

inline Representation parse_representation(const std::string& name) {
  if (name == "spin3") return Representation::spin3;
  if (name == "spin4_diag") return Representation::spin4_diag;
  if (name == "spin6_hyp3") return Representation::spin6_hyp3;
  throw InvalidPlan("unknown representation '" + name + "'");
}

inline std::string to_string(Representation rep) {
  switch (rep) {
    case Representation::spin3:
      return "spin3";
    case Representation::spin4_diag:
      return "spin4_diag";
    case Representation::spin6_hyp3:
      return "spin6_hyp3";
  }
  return {};
}

/// Applies the representation to one SL matrix of expressions; the SL inverse is the adjugate.
inline ExprMatrix apply_representation(Representation rep, const ExprMatrix& g) {
  ExprMatrix out = [&] {
    switch (rep) {
      case Representation::spin3:
        return conjugation_action(g, adjugate2(g));
      case Representation::spin4_diag:
        return two_sided_action(g, adjugate2(g));
      case Representation::spin6_hyp3:
        return wedge_square(g);
    }
    return g;
  }();
  Matrix<Expr> simplified(out.rows(), out.cols(), Expr(0L));
  for (std::size_t r = 0; r < out.rows(); ++r)
    for (std::size_t c = 0; c < out.cols(); ++c) simplified(r, c) = simplify(out(r, c));
  return simplified;
}

inline TransitionData pushforward(const TransitionData& t, Representation rep) {
  const std::size_t source = rep == Representation::spin6_hyp3 ? 4 : 2;
  if (t.rank() != source) {
    throw RankMismatch(to_string(rep) + " needs rank " + std::to_string(source) + ", got " + std::to_string(t.rank()));
  }
  if (t.structure().kind != Structure::Kind::special_linear) throw InvalidPlan("pushforward needs SL-structured data");
  const FieldDescriptor q = FieldDescriptor::rationals();
  const auto& table = form_table<Rational>(q);
  Structure target = [&] {
    switch (rep) {
      case Representation::spin3:
        return Structure::so(table.g3, "SO(G3)");
      case Representation::spin4_diag:
        return Structure::so(table.g4, "SO(G4)");
      case Representation::spin6_hyp3:
        return Structure::so(table.g6, "SO(G6)");
    }
    return Structure::sl();
  }();
  const std::size_t rank = rep == Representation::spin3 ? 3 : rep == Representation::spin4_diag ? 4 : 6;
  TransitionData out(t.cover(), rank, std::move(target));
  for (const auto& [pair, g] : t.transitions()) out.set(pair.first, pair.second, apply_representation(rep, g));
  return out;
}

// ---------------------------------------------------------------------------
// Twisting by a scalar cocycle.

using UnitCocycle = std::map<ChartPair, Expr>;

inline TransitionData unit_transition_data(const Cover& cover, const UnitCocycle& u) {
  TransitionData d(cover, 1, Structure::gl());
  for (const auto& [pair, e] : u) d.set(pair.first, pair.second, ExprMatrix(1, 1, e));
  return d;
}

struct TwistResult {
  TransitionData data;
  Certificate report;
};

/// g_ij -> u_ij g_ij. SL survives iff u^r = 1; SO(G) survives iff u^2 = 1 and u^r = 1; otherwise GL.
inline TwistResult twist_by_unit(const TransitionData& t, const UnitCocycle& u, const EvaluationPlan& plan) {
  const TransitionData units = unit_transition_data(t.cover(), u);
  const Certificate unit_check = check_cocycle(units, plan);
  if (!unit_check.passed()) throw NotACocycle("unit data fails the cocycle condition: " + unit_check.counterexample().dump());

  TransitionData out(t.cover(), t.rank(), t.structure());
  for (const auto& [pair, g] : t.transitions()) {
    auto it = u.find(pair);
    if (it == u.end()) throw NotACocycle("no unit given on (" + std::to_string(pair.first) + "," + std::to_string(pair.second) + ")");
    ExprMatrix scaled(g.rows(), g.cols(), Expr(0L));
    for (std::size_t r = 0; r < g.rows(); ++r)
      for (std::size_t c = 0; c < g.cols(); ++c) scaled(r, c) = simplify(it->second * g(r, c));
    out.set(pair.first, pair.second, std::move(scaled));
  }

  Certificate report("twist", "fp:" + std::to_string(plan.prime), plan.seed);
  report.absorb(unit_check, "unit_cocycle");
  const Structure& s = t.structure();
  std::string structure = s.name();
  if (s.kind != Structure::Kind::general_linear) {
    // u^r = 1 (and u^2 = 1 for SO) tested as identities on every overlap.
    const long r = static_cast<long>(t.rank());
    IdentitySampler sampler(plan, t.cover().variables(), 23);
    detail::guard_cover(sampler, t.cover());
    for (const auto& [pair, e] : u) sampler.account(e.pow(std::max<long>(r, 2)));
    Certificate torsion("torsion", "fp:" + std::to_string(plan.prime), plan.seed);
    sampler.run(torsion, [&](PointEvaluator& ev) -> std::optional<json> {
      for (const auto& [pair, e] : u) {
        auto v = ev(e);
        if (!v) return resample_marker();
        const bool ok = v->pow(static_cast<std::uint64_t>(r)).is_one() &&
                        (s.kind != Structure::Kind::special_orthogonal || (*v * *v).is_one());
        if (!ok) return json{{"check", "unit_torsion"}, {"pair", {pair.first, pair.second}}, {"unit", v->residue()}};
      }
      return std::nullopt;
    });
    const bool retained = torsion.passed();
    report.witness()["torsion_check"] = torsion.to_json();
    if (!retained) {
      out.set_structure(Structure::gl());
      structure = "GL";
      report.witness()["warning"] = "structure downgraded from " + s.name() + " to GL: units are not " +
                                    std::to_string(r) + "-torsion";
    }
    report.witness()["structure_retained"] = retained;
  }
  report.witness()["structure"] = structure;
  report.expect(true, "twist_applied");
  return {std::move(out), std::move(report)};
}

/// Entrywise identity between two transition data on the same cover.
inline Certificate transitions_agree(const TransitionData& a, const TransitionData& b, const EvaluationPlan& plan) {
  Certificate cert("agree", "fp:" + std::to_string(plan.prime), plan.seed);
  if (a.rank() != b.rank()) throw RankMismatch("ranks " + std::to_string(a.rank()) + " and " + std::to_string(b.rank()));
  IdentitySampler sampler(plan, std::max(a.cover().variables(), b.cover().variables()), 24);
  detail::guard_cover(sampler, a.cover());
  for (const auto& [pair, g] : a.transitions()) {
    if (b.find(pair.first, pair.second) == nullptr) {
      cert.expect(false, "same_pairs", [&] { return json{{"pair", {pair.first, pair.second}}}; });
      return cert;
    }
    detail::account_matrix(sampler, g);
    detail::account_matrix(sampler, b.at(pair.first, pair.second));
  }
  cert.expect(a.transitions().size() == b.transitions().size(), "same_pairs");
  const FieldDescriptor field = sampler.field();
  sampler.run(cert, [&](PointEvaluator& ev) -> std::optional<json> {
    for (const auto& [pair, g] : a.transitions()) {
      auto x = detail::evaluate(ev, g, field);
      auto y = detail::evaluate(ev, b.at(pair.first, pair.second), field);
      if (!x || !y) return resample_marker();
      if (!(*x == *y)) {
        json ce = detail::mismatch("entrywise", *x, *y);
        ce["pair"] = {pair.first, pair.second};
        return ce;
      }
    }
    return std::nullopt;
  });
  cert.expect(true, "entrywise");
  return cert;
}

// ---------------------------------------------------------------------------

using ChartTrivialization = std::map<std::size_t, ExprMatrix>;

namespace detail {

inline Expr det_expr(const ExprMatrix& m) {
  // Laplace expansion; ranks here are at most 6.
  const std::size_t n = m.rows();
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  Expr acc(0L);
  for (std::size_t c = 0; c < n; ++c) {
    ExprMatrix minor(n - 1, n - 1, Expr(0L));
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t k = 0, kk = 0; k < n; ++k)
        if (k != c) minor(r - 1, kk++) = m(r, k);
    const Expr term = m(0, c) * det_expr(minor);
    acc = c % 2 == 0 ? acc + term : acc - term;
  }
  return acc;
}

}  // namespace detail

/// PASS iff g_ij = h_i h_j^-1 (checked as g_ij h_j = h_i) at every sampled point.
inline Certificate verify_coboundary_witness(const TransitionData& t, const ChartTrivialization& h, const EvaluationPlan& plan) {
  Certificate cert("coboundary", "fp:" + std::to_string(plan.prime), plan.seed);
  cert.ledger()["coboundary_convention"] = "g_ij = h_i * h_j^-1";
  IdentitySampler sampler(plan, t.cover().variables(), 25);
  detail::guard_cover(sampler, t.cover());
  for (const auto& [chart, m] : h) {
    if (m.rows() != t.rank() || m.cols() != t.rank()) throw RankMismatch("witness for chart " + std::to_string(chart) + " is " + m.shape());
    sampler.add_guard(detail::det_expr(m));
    detail::account_matrix(sampler, m);
  }
  for (const auto& [pair, g] : t.transitions()) {
    if (pair.first == pair.second) continue;
    if (h.count(pair.first) == 0 || h.count(pair.second) == 0) {
      throw InvalidPlan("witness missing for chart pair (" + std::to_string(pair.first) + "," + std::to_string(pair.second) + ")");
    }
    detail::account_product(sampler, g, h.at(pair.second));
  }
  const FieldDescriptor field = sampler.field();
  sampler.run(cert, [&](PointEvaluator& ev) -> std::optional<json> {
    for (const auto& [chart, m] : h) {
      auto v = detail::evaluate(ev, m, field);
      if (!v) return resample_marker();
      if (determinant(*v).is_zero()) return resample_marker();
    }
    for (const auto& [pair, g] : t.transitions()) {
      if (pair.first == pair.second) continue;
      auto gv = detail::evaluate(ev, g, field);
      auto hi = detail::evaluate(ev, h.at(pair.first), field);
      auto hj = detail::evaluate(ev, h.at(pair.second), field);
      if (!gv || !hi || !hj) return resample_marker();
      if (!(*gv * *hj == *hi)) {
        json ce = detail::mismatch("coboundary", *gv * *hj, *hi);
        ce["pair"] = {pair.first, pair.second};
        return ce;
      }
    }
    return std::nullopt;
  });
  cert.expect(true, "coboundary");
  return cert;
}

// ---------------------------------------------------------------------------
// JSON formats.
//
//   cover:      {"charts": m, "variables": n, "overlaps": [{"pair": [i, j], "localizing": ["(var 0)"]}]}
//   transition: {"cover": cover, "rank": r, "structure": "SL" | "GL" | {"gram": matrix},
//                "transitions": [{"pair": [i, j], "matrix": [["expr", ...], ...]}]}
//   units:      {"units": [{"pair": [i, j], "value": "expr"}]}
//   witness:    {"charts": [{"chart": i, "matrix": [[...]]}]}

inline Expr expr_from_json(const json& j) {
  if (j.is_number_integer()) return Expr(static_cast<long>(j.get<long long>()));
  if (!j.is_string()) throw ParseError("expression must be a string or integer");
  return parse_expr(j.get<std::string>());
}

inline ExprMatrix expr_matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw ParseError("matrix must be a nonempty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  ExprMatrix m(rows, cols, Expr(0L));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw ParseError("ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = expr_from_json(j[r][c]);
  }
  return m;
}

inline json to_json(const ExprMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c).to_string());
    rows.push_back(row);
  }
  return rows;
}

namespace detail {

inline ChartPair pair_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("pair must be [i, j]");
  return {j[0].get<std::size_t>(), j[1].get<std::size_t>()};
}

}  // namespace detail

inline Cover cover_from_json(const json& j) {
  try {
    Cover c(j.at("charts").get<std::size_t>(), j.at("variables").get<std::size_t>());
    for (const auto& o : j.value("overlaps", json::array())) {
      const auto [a, b] = detail::pair_from_json(o.at("pair"));
      std::vector<Expr> fs;
      for (const auto& f : o.value("localizing", json::array())) fs.push_back(expr_from_json(f));
      c.add_overlap(a, b, std::move(fs));
    }
    return c;
  } catch (const json::exception& e) {
    throw ParseError(std::string("cover: ") + e.what());
  }
}

inline json to_json(const Cover& c) {
  json overlaps = json::array();
  for (const auto& [pair, fs] : c.overlaps()) {
    json list = json::array();
    for (const auto& f : fs) list.push_back(f.to_string());
    overlaps.push_back({{"pair", {pair.first, pair.second}}, {"localizing", list}});
  }
  return json{{"charts", c.charts()}, {"variables", c.variables()}, {"overlaps", overlaps}};
}

inline Structure structure_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "SL") return Structure::sl();
    if (s == "GL") return Structure::gl();
    throw ParseError("unknown structure '" + s + "'");
  }
  if (j.is_object() && j.contains("gram")) {
    return Structure::so(matrix_from_json<Rational>(j.at("gram")), j.value("label", std::string("SO")));
  }
  throw ParseError("structure must be \"SL\", \"GL\" or {\"gram\": matrix}");
}

inline json to_json(const Structure& s) {
  if (s.kind == Structure::Kind::special_linear) return "SL";
  if (s.kind == Structure::Kind::general_linear) return "GL";
  return json{{"gram", to_json(*s.gram)}, {"label", s.label}};
}

inline TransitionData transition_from_json(const json& j) {
  try {
    TransitionData t(cover_from_json(j.at("cover")), j.at("rank").get<std::size_t>(),
                     structure_from_json(j.value("structure", json("SL"))));
    for (const auto& e : j.at("transitions")) {
      const auto [a, b] = detail::pair_from_json(e.at("pair"));
      t.set(a, b, expr_matrix_from_json(e.at("matrix")));
    }
    return t;
  } catch (const json::exception& e) {
    throw ParseError(std::string("transition data: ") + e.what());
  }
}

inline json to_json(const TransitionData& t) {
  json list = json::array();
  for (const auto& [pair, g] : t.transitions()) list.push_back({{"pair", {pair.first, pair.second}}, {"matrix", to_json(g)}});
  return json{{"cover", to_json(t.cover())}, {"rank", t.rank()}, {"structure", to_json(t.structure())}, {"transitions", list}};
}

inline UnitCocycle units_from_json(const json& j) {
  try {
    UnitCocycle u;
    for (const auto& e : j.at("units")) u[detail::pair_from_json(e.at("pair"))] = expr_from_json(e.at("value"));
    return u;
  } catch (const json::exception& e) {
    throw ParseError(std::string("units: ") + e.what());
  }
}

inline ChartTrivialization trivialization_from_json(const json& j) {
  try {
    ChartTrivialization h;
    for (const auto& e : j.at("charts")) h[e.at("chart").get<std::size_t>()] = expr_matrix_from_json(e.at("matrix"));
    return h;
  } catch (const json::exception& e) {
    throw ParseError(std::string("witness: ") + e.what());
  }
}

}  // namespace spinform
