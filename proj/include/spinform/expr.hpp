#pragma once

// Immutable expression DAGs for regular functions on chart overlaps.
//
// Every node carries a structural degree bound (numerator, denominator) for
// the rational function it denotes: the node equals N/D with deg N <= num and
// deg D <= den. Evaluation happens over F_p and reports a vanishing divisor
// instead of throwing, so callers can resample.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "spinform/error.hpp"
#include "spinform/scalar.hpp"

namespace spinform {

struct DegreeBound {
  std::uint64_t num = 0;
  std::uint64_t den = 0;
  friend bool operator==(const DegreeBound&, const DegreeBound&) = default;
};

class Expr {
 public:
  enum class Op { constant, variable, add, sub, mul, div, inv, pow, neg };

  Expr() : Expr(Rational()) {}
  Expr(long value) : Expr(Rational(value)) {}  // NOLINT(google-explicit-constructor)
  explicit Expr(const Rational& value) : node_(std::make_shared<Node>(Node{Op::constant, value, 0, 0, {}, {0, 0}})) {}

  static Expr constant(const Rational& value) { return Expr(value); }
  static Expr variable(std::size_t index) {
    return Expr(std::make_shared<Node>(Node{Op::variable, Rational(), index, 0, {}, {1, 0}}));
  }

  Op op() const { return node_->op; }
  const Rational& value() const { return node_->value; }
  std::size_t index() const { return node_->index; }
  long exponent() const { return node_->exponent; }
  const std::vector<Expr>& args() const { return node_->args; }
  const DegreeBound& degree() const { return node_->degree; }
  const void* id() const { return node_.get(); }

  bool is_constant() const { return op() == Op::constant; }

  friend Expr operator+(const Expr& a, const Expr& b) {
    const auto& x = a.degree();
    const auto& y = b.degree();
    return make(Op::add, {a, b}, {std::max(x.num + y.den, y.num + x.den), x.den + y.den});
  }
  friend Expr operator-(const Expr& a, const Expr& b) {
    const auto& x = a.degree();
    const auto& y = b.degree();
    return make(Op::sub, {a, b}, {std::max(x.num + y.den, y.num + x.den), x.den + y.den});
  }
  friend Expr operator*(const Expr& a, const Expr& b) {
    return make(Op::mul, {a, b}, {a.degree().num + b.degree().num, a.degree().den + b.degree().den});
  }
  friend Expr operator/(const Expr& a, const Expr& b) {
    return make(Op::div, {a, b}, {a.degree().num + b.degree().den, a.degree().den + b.degree().num});
  }
  Expr operator-() const { return make(Op::neg, {*this}, degree()); }
  Expr inverse() const { return make(Op::inv, {*this}, {degree().den, degree().num}); }
  Expr pow(long k) const {
    const std::uint64_t m = static_cast<std::uint64_t>(k < 0 ? -k : k);
    const DegreeBound d = k < 0 ? DegreeBound{m * degree().den, m * degree().num} : DegreeBound{m * degree().num, m * degree().den};
    return make(Op::pow, {*this}, d, k);
  }

  /// Structural equality of the printed forms.
  friend bool operator==(const Expr& a, const Expr& b) { return a.node_ == b.node_ || a.to_string() == b.to_string(); }

  /// Largest variable index used plus one.
  std::size_t arity() const {
    std::size_t n = 0;
    visit([&](const Expr& e) {
      if (e.op() == Op::variable) n = std::max(n, e.index() + 1);
    });
    return n;
  }

  /// Numerator degree bounds of every divisor in the DAG, summed once per shared node.
  std::uint64_t divisor_degree() const {
    std::uint64_t total = 0;
    visit([&](const Expr& e) {
      if (e.op() == Op::div) total += e.args()[1].degree().num;
      if (e.op() == Op::inv) total += e.args()[0].degree().num;
      if (e.op() == Op::pow && e.exponent() < 0) total += e.args()[0].degree().num;
    });
    return total;
  }

  std::string to_string() const {
    switch (op()) {
      case Op::constant:
        return value().to_string();
      case Op::variable:
        return "(var " + std::to_string(index()) + ")";
      case Op::add:
        return "(+ " + args()[0].to_string() + " " + args()[1].to_string() + ")";
      case Op::sub:
        return "(- " + args()[0].to_string() + " " + args()[1].to_string() + ")";
      case Op::mul:
        return "(* " + args()[0].to_string() + " " + args()[1].to_string() + ")";
      case Op::div:
        return "(/ " + args()[0].to_string() + " " + args()[1].to_string() + ")";
      case Op::inv:
        return "(inv " + args()[0].to_string() + ")";
      case Op::pow:
        return "(pow " + args()[0].to_string() + " " + std::to_string(exponent()) + ")";
      case Op::neg:
        return "(- " + args()[0].to_string() + ")";
    }
    return {};
  }

  /// Calls fn once per distinct node, children first.
  template <class Fn>
  void visit(Fn&& fn) const {
    std::unordered_map<const void*, bool> seen;
    visit_impl(*this, seen, fn);
  }

 private:
  struct Node {
    Op op;
    Rational value;
    std::size_t index;
    long exponent;
    std::vector<Expr> args;
    DegreeBound degree;
  };

  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static Expr make(Op op, std::vector<Expr> args, DegreeBound degree, long exponent = 0) {
    return Expr(std::make_shared<Node>(Node{op, Rational(), 0, exponent, std::move(args), degree}));
  }

  template <class Fn>
  static void visit_impl(const Expr& e, std::unordered_map<const void*, bool>& seen, Fn& fn) {
    if (!seen.emplace(e.id(), true).second) return;
    for (const auto& a : e.args()) visit_impl(a, seen, fn);
    fn(e);
  }

  std::shared_ptr<const Node> node_;
};

inline std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << e.to_string(); }
inline Expr zero_like(const Expr&) { return Expr(0L); }
inline Expr one_like(const Expr&) { return Expr(1L); }

// ---------------------------------------------------------------------------
// Evaluation over F_p.

/// Memoizing evaluator for one point. Returns nullopt where a divisor vanishes.
class PointEvaluator {
 public:
  PointEvaluator(const FieldDescriptor& field, std::vector<ModP> point) : field_(field), point_(std::move(point)) {}

  std::optional<ModP> operator()(const Expr& e) {
    if (auto it = cache_.find(e.id()); it != cache_.end()) return it->second.second;
    const std::optional<ModP> v = compute(e);
    cache_.emplace(e.id(), std::pair{e, v});
    return v;
  }

  const std::vector<ModP>& point() const { return point_; }

 private:
  std::optional<ModP> compute(const Expr& e) {
    using Op = Expr::Op;
    switch (e.op()) {
      case Op::constant: {
        if (field_.modulus() != 0 && mpz_divisible_ui_p(e.value().denominator().get_mpz_t(), field_.modulus()) != 0) {
          return std::nullopt;
        }
        return ModP::from_rational(e.value(), field_);
      }
      case Op::variable:
        if (e.index() >= point_.size()) throw DimensionMismatch("variable " + std::to_string(e.index()) + " out of range");
        return point_[e.index()];
      default:
        break;
    }
    std::vector<ModP> xs;
    for (const auto& a : e.args()) {
      auto v = (*this)(a);
      if (!v) return std::nullopt;
      xs.push_back(*v);
    }
    switch (e.op()) {
      case Op::add:
        return xs[0] + xs[1];
      case Op::sub:
        return xs[0] - xs[1];
      case Op::mul:
        return xs[0] * xs[1];
      case Op::neg:
        return -xs[0];
      case Op::div:
        if (xs[1].is_zero()) return std::nullopt;
        return xs[0] / xs[1];
      case Op::inv:
        if (xs[0].is_zero()) return std::nullopt;
        return xs[0].inverse();
      case Op::pow: {
        const long k = e.exponent();
        if (k < 0 && xs[0].is_zero()) return std::nullopt;
        const ModP base = k < 0 ? xs[0].inverse() : xs[0];
        return base.pow(static_cast<std::uint64_t>(k < 0 ? -k : k));
      }
      default:
        return std::nullopt;
    }
  }

  FieldDescriptor field_;
  std::vector<ModP> point_;
  // Holds each key alive so a freed node's address cannot alias a later one.
  std::unordered_map<const void*, std::pair<Expr, std::optional<ModP>>> cache_;
};

// ---------------------------------------------------------------------------
// Prefix syntax: integers, "n/d", (var i), (+ a b ...), (- a b), (- a), (* a b ...),
// (/ a b), (inv a), (neg a), (pow a k).

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    Expr e = parse();
    skip_space();
    if (pos_ != text_.size()) fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) ++pos_;
  }

  std::string token() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' &&
           std::isspace(static_cast<unsigned char>(text_[pos_])) == 0) {
      ++pos_;
    }
    if (start == pos_) fail("expected token");
    return std::string(text_.substr(start, pos_ - start));
  }

  static bool is_number(const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    bool slash = false;
    for (; i < t.size(); ++i) {
      if (t[i] == '/' && !slash && i + 1 < t.size()) {
        slash = true;
      } else if (std::isdigit(static_cast<unsigned char>(t[i])) == 0) {
        return false;
      }
    }
    return true;
  }

  long integer() {
    const std::string t = token();
    try {
      std::size_t used = 0;
      const long v = std::stol(t, &used);
      if (used != t.size()) fail("expected integer");
      return v;
    } catch (const std::logic_error&) {
      fail("expected integer");
    }
  }

  Expr parse() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end");
    if (text_[pos_] == ')') fail("unexpected ')'");
    if (text_[pos_] != '(') {
      const std::string t = token();
      if (!is_number(t)) fail("unknown atom '" + t + "'");
      try {
        return Expr(Rational::parse(t));
      } catch (const Error&) {
        fail("bad number '" + t + "'");
      }
    }
    ++pos_;
    const std::string head = token();
    Expr out;
    if (head == "var") {
      const long i = integer();
      if (i < 0) fail("negative variable index");
      out = Expr::variable(static_cast<std::size_t>(i));
    } else if (head == "pow") {
      const Expr base = parse();
      out = base.pow(integer());
    } else {
      std::vector<Expr> args;
      skip_space();
      while (pos_ < text_.size() && text_[pos_] != ')') {
        args.push_back(parse());
        skip_space();
      }
      out = combine(head, args);
    }
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
    ++pos_;
    return out;
  }

  Expr combine(const std::string& head, const std::vector<Expr>& args) const {
    auto arity = [&](std::size_t lo, std::size_t hi) {
      if (args.size() < lo || args.size() > hi) fail("wrong argument count for '" + head + "'");
    };
    if (head == "+" || head == "*") {
      arity(2, SIZE_MAX);
      Expr acc = args[0];
      for (std::size_t i = 1; i < args.size(); ++i) acc = head == "+" ? acc + args[i] : acc * args[i];
      return acc;
    }
    if (head == "-") {
      arity(1, 2);
      return args.size() == 1 ? -args[0] : args[0] - args[1];
    }
    if (head == "neg") {
      arity(1, 1);
      return -args[0];
    }
    if (head == "/") {
      arity(2, 2);
      return args[0] / args[1];
    }
    if (head == "inv") {
      arity(1, 1);
      return args[0].inverse();
    }
    fail("unknown operator '" + head + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Expr parse_expr(std::string_view text) { return detail::ExprParser(text).parse_all(); }

// ---------------------------------------------------------------------------
// Laurent normal form: exact equality for expressions that only divide by
// monomials. Anything else has no normal form here.

using Monomial = std::vector<long>;  // exponent per variable, trailing zeros trimmed
using Laurent = std::map<Monomial, Rational>;

namespace detail {

inline Monomial trim(Monomial m) {
  while (!m.empty() && m.back() == 0) m.pop_back();
  return m;
}

inline Monomial add_monomials(const Monomial& a, const Monomial& b) {
  Monomial out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return trim(std::move(out));
}

inline void accumulate(Laurent& acc, const Monomial& m, const Rational& c) {
  auto [it, inserted] = acc.emplace(m, c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second.is_zero()) acc.erase(it);
  } else if (c.is_zero()) {
    acc.erase(it);
  }
}

inline Laurent laurent_mul(const Laurent& a, const Laurent& b) {
  Laurent out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) accumulate(out, add_monomials(ma, mb), ca * cb);
  return out;
}

/// Inverse of a single nonzero term.
inline std::optional<Laurent> laurent_inverse(const Laurent& a) {
  if (a.size() != 1) return std::nullopt;
  const auto& [m, c] = *a.begin();
  Monomial neg(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) neg[i] = -m[i];
  return Laurent{{neg, c.inverse()}};
}

inline std::optional<Laurent> laurent_pow(const Laurent& a, long k) {
  Laurent base = a;
  if (k < 0) {
    auto inv = laurent_inverse(a);
    if (!inv) return std::nullopt;
    base = *inv;
    k = -k;
  }
  Laurent out{{Monomial{}, Rational(1)}};
  for (long i = 0; i < k; ++i) out = laurent_mul(out, base);
  return out;
}

}  // namespace detail

inline std::optional<Laurent> to_laurent(const Expr& e) {
  using Op = Expr::Op;
  switch (e.op()) {
    case Op::constant: {
      Laurent out;
      detail::accumulate(out, {}, e.value());
      return out;
    }
    case Op::variable: {
      Monomial m(e.index() + 1, 0);
      m.back() = 1;
      return Laurent{{m, Rational(1)}};
    }
    default:
      break;
  }
  std::vector<Laurent> xs;
  for (const auto& a : e.args()) {
    auto v = to_laurent(a);
    if (!v) return std::nullopt;
    xs.push_back(std::move(*v));
  }
  switch (e.op()) {
    case Op::add:
    case Op::sub: {
      Laurent out = xs[0];
      for (const auto& [m, c] : xs[1]) detail::accumulate(out, m, e.op() == Op::add ? c : -c);
      return out;
    }
    case Op::neg: {
      Laurent out;
      for (const auto& [m, c] : xs[0]) out.emplace(m, -c);
      return out;
    }
    case Op::mul:
      return detail::laurent_mul(xs[0], xs[1]);
    case Op::div: {
      auto inv = detail::laurent_inverse(xs[1]);
      if (!inv) return std::nullopt;
      return detail::laurent_mul(xs[0], *inv);
    }
    case Op::inv:
      return detail::laurent_inverse(xs[0]);
    case Op::pow:
      return detail::laurent_pow(xs[0], e.exponent());
    default:
      return std::nullopt;
  }
}

/// Rebuilds an expression from a Laurent normal form in a canonical shape.
inline Expr from_laurent(const Laurent& l) {
  std::optional<Expr> sum;
  for (const auto& [m, c] : l) {
    std::optional<Expr> term;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      Expr factor = m[i] == 1 ? Expr::variable(i) : Expr::variable(i).pow(m[i]);
      term = term ? *term * factor : factor;
    }
    if (!term) {
      term = Expr(c);
    } else if (c == Rational(-1)) {
      term = -*term;
    } else if (!c.is_one()) {
      term = Expr(c) * *term;
    }
    sum = sum ? *sum + *term : *term;
  }
  return sum ? *sum : Expr(0L);
}

/// Canonical form when the expression is a Laurent polynomial, otherwise unchanged.
inline Expr simplify(const Expr& e) {
  auto l = to_laurent(e);
  return l ? from_laurent(*l) : e;
}

/// Exact equality decided through Laurent normal forms; nullopt if either side has none.
inline std::optional<bool> laurent_equal(const Expr& a, const Expr& b) {
  auto la = to_laurent(a);
  auto lb = to_laurent(b);
  if (!la || !lb) return std::nullopt;
  return *la == *lb;
}

}  // namespace spinform
