#pragma once

// Exact scalars: arbitrary-precision rationals and residues modulo an odd
// prime below 2^64. Both types are immutable values in canonical form, so
// equality is structural.

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>

#include "spinform/error.hpp"

namespace spinform {

namespace detail {

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  if (m <= UINT32_MAX) return a * b % m;
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

}  // namespace detail

/// Deterministic Miller-Rabin; the first twelve prime bases are exact for all n < 2^64.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  constexpr std::uint64_t kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t b : kBases) {
    if (n % b == 0) return n == b;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (std::uint64_t a : kBases) {
    std::uint64_t x = detail::pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = detail::mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// Which field a scalar lives in: Q, or F_p for an odd prime p.
class FieldDescriptor {
 public:
  enum class Kind { rationals, prime_field };

  FieldDescriptor() = default;

  static FieldDescriptor rationals() { return FieldDescriptor{}; }

  static FieldDescriptor prime_field(std::uint64_t p) {
    if (p == 2) throw InvalidField("characteristic 2 is not supported");
    if (!is_prime_u64(p)) throw InvalidField(std::to_string(p) + " is not prime");
    FieldDescriptor d;
    d.kind_ = Kind::prime_field;
    d.modulus_ = p;
    return d;
  }

  /// Parses "q" or "fp:<p>".
  static FieldDescriptor parse(std::string_view text) {
    if (text == "q" || text == "Q") return rationals();
    if (text.starts_with("fp:")) {
      const std::string digits(text.substr(3));
      if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
        throw InvalidField("malformed field '" + std::string(text) + "'");
      }
      try {
        return prime_field(std::stoull(digits));
      } catch (const std::out_of_range&) {
        throw InvalidField("modulus out of range in '" + std::string(text) + "'");
      }
    }
    throw InvalidField("unknown field '" + std::string(text) + "', expected q or fp:<p>");
  }

  /// For values already known to carry a validated modulus.
  static FieldDescriptor prime_field_unchecked(std::uint64_t p) {
    FieldDescriptor d;
    d.kind_ = Kind::prime_field;
    d.modulus_ = p;
    return d;
  }

  Kind kind() const { return kind_; }
  bool is_rationals() const { return kind_ == Kind::rationals; }
  bool is_finite() const { return kind_ == Kind::prime_field; }
  std::uint64_t modulus() const { return modulus_; }

  std::string to_string() const {
    return is_rationals() ? std::string("q") : "fp:" + std::to_string(modulus_);
  }

  friend bool operator==(const FieldDescriptor&, const FieldDescriptor&) = default;

 private:
  Kind kind_ = Kind::rationals;
  std::uint64_t modulus_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, const FieldDescriptor& d) {
  return os << d.to_string();
}

// ---------------------------------------------------------------------------

class Rational {
 public:
  Rational() = default;
  Rational(long n) : value_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(int n) : value_(n) {}   // NOLINT(google-explicit-constructor)
  Rational(long num, long den) : Rational(mpz_class(num), mpz_class(den)) {}
  Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw DivisionByZero("zero denominator");
    value_ = mpq_class(num, den);
    value_.canonicalize();
  }
  explicit Rational(mpq_class v) : value_(std::move(v)) { value_.canonicalize(); }

  /// Parses "n" or "n/d".
  static Rational parse(std::string_view text) {
    const auto slash = text.find('/');
    mpz_class num;
    mpz_class den = 1;
    auto parse_int = [&](std::string_view s, mpz_class& out) {
      std::string str(s);
      if (str.empty() || out.set_str(str, 10) != 0) {
        throw ParseError("malformed rational '" + std::string(text) + "'");
      }
    };
    if (slash == std::string_view::npos) {
      parse_int(text, num);
    } else {
      parse_int(text.substr(0, slash), num);
      parse_int(text.substr(slash + 1), den);
    }
    return Rational(num, den);
  }

  static Rational zero(const FieldDescriptor& d) {
    check_field(d);
    return Rational();
  }
  static Rational one(const FieldDescriptor& d) {
    check_field(d);
    return Rational(1L);
  }
  static Rational from_int(long long n, const FieldDescriptor& d) {
    check_field(d);
    return Rational(static_cast<long>(n));
  }

  FieldDescriptor field() const { return FieldDescriptor::rationals(); }
  bool is_zero() const { return sgn(value_) == 0; }
  bool is_one() const { return value_ == 1; }
  int sign() const { return sgn(value_); }

  const mpq_class& value() const { return value_; }
  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }

  Rational inverse() const {
    if (is_zero()) throw DivisionByZero("inverse of 0");
    return Rational(mpq_class(1) / value_);
  }

  std::string to_string() const {
    if (value_.get_den() == 1) return value_.get_num().get_str();
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
  }

  Rational operator-() const { return Rational(mpq_class(-value_)); }
  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw DivisionByZero("division by 0");
    value_ /= o.value_;
    return *this;
  }
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  static void check_field(const FieldDescriptor& d) {
    if (!d.is_rationals()) throw MixedFields("expected q, got " + d.to_string());
  }

  mpq_class value_;
};

inline std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

// ---------------------------------------------------------------------------

/// Least nonnegative residue modulo an odd prime carried alongside the value.
class ModP {
 public:
  ModP() = default;
  ModP(std::uint64_t residue, const FieldDescriptor& d) : p_(check_field(d)), value_(residue % p_) {}

  static ModP zero(const FieldDescriptor& d) { return ModP(0, d); }
  static ModP one(const FieldDescriptor& d) { return ModP(1, d); }
  static ModP from_int(long long n, const FieldDescriptor& d) {
    const std::uint64_t p = check_field(d);
    __int128 r = static_cast<__int128>(n) % static_cast<__int128>(p);
    if (r < 0) r += p;
    return raw(static_cast<std::uint64_t>(r), p);
  }
  /// Reduces a rational; fails when p divides the denominator.
  static ModP from_rational(const Rational& q, const FieldDescriptor& d) {
    const std::uint64_t p = check_field(d);
    const mpz_class pz(std::to_string(p));
    mpz_class num = q.numerator() % pz;
    if (num < 0) num += pz;
    mpz_class den = q.denominator() % pz;
    if (den == 0) throw DivisionByZero("denominator vanishes modulo " + std::to_string(p));
    ModP n(std::stoull(num.get_str()), d);
    ModP m(std::stoull(den.get_str()), d);
    return n / m;
  }

  FieldDescriptor field() const { return FieldDescriptor::prime_field_unchecked(p_); }
  std::uint64_t residue() const { return value_; }
  std::uint64_t modulus() const { return p_; }
  bool is_zero() const { return value_ == 0; }
  bool is_one() const { return value_ == 1; }

  ModP inverse() const {
    if (value_ == 0) throw DivisionByZero("inverse of 0 mod " + std::to_string(p_));
    if (p_ < (1ULL << 62)) return raw(inverse_small(), p_);
    __int128 t = 0, new_t = 1;
    __int128 r = p_, new_r = value_;
    while (new_r != 0) {
      const __int128 q = r / new_r;
      t -= q * new_t;
      std::swap(t, new_t);
      r -= q * new_r;
      std::swap(r, new_r);
    }
    if (t < 0) t += p_;
    return raw(static_cast<std::uint64_t>(t), p_);
  }

  ModP pow(std::uint64_t e) const { return raw(detail::pow_mod(value_, e, p_), p_); }

  std::string to_string() const { return std::to_string(value_); }

  ModP operator-() const { return raw(value_ == 0 ? 0 : p_ - value_, p_); }
  ModP& operator+=(const ModP& o) {
    same(o);
    value_ = value_ >= p_ - o.value_ ? value_ - (p_ - o.value_) : value_ + o.value_;
    return *this;
  }
  ModP& operator-=(const ModP& o) {
    same(o);
    value_ = value_ >= o.value_ ? value_ - o.value_ : value_ + (p_ - o.value_);
    return *this;
  }
  ModP& operator*=(const ModP& o) {
    same(o);
    value_ = detail::mul_mod(value_, o.value_, p_);
    return *this;
  }
  ModP& operator/=(const ModP& o) {
    same(o);
    return *this *= o.inverse();
  }
  friend ModP operator+(ModP a, const ModP& b) { return a += b; }
  friend ModP operator-(ModP a, const ModP& b) { return a -= b; }
  friend ModP operator*(ModP a, const ModP& b) { return a *= b; }
  friend ModP operator/(ModP a, const ModP& b) { return a /= b; }
  friend bool operator==(const ModP& a, const ModP& b) {
    a.same(b);
    return a.value_ == b.value_;
  }

 private:
  static std::uint64_t check_field(const FieldDescriptor& d) {
    if (!d.is_finite()) throw MixedFields("expected a prime field, got " + d.to_string());
    return d.modulus();
  }
  std::uint64_t inverse_small() const {
    std::int64_t t = 0, new_t = 1;
    auto r = static_cast<std::int64_t>(p_);
    auto new_r = static_cast<std::int64_t>(value_);
    while (new_r != 0) {
      const std::int64_t q = r / new_r;
      t -= q * new_t;
      std::swap(t, new_t);
      r -= q * new_r;
      std::swap(r, new_r);
    }
    return static_cast<std::uint64_t>(t < 0 ? t + static_cast<std::int64_t>(p_) : t);
  }
  static ModP raw(std::uint64_t v, std::uint64_t p) {
    ModP r;
    r.p_ = p;
    r.value_ = v;
    return r;
  }
  void same(const ModP& o) const {
    if (p_ != o.p_) {
      throw MixedFields("fp:" + std::to_string(p_) + " vs fp:" + std::to_string(o.p_));
    }
  }

  std::uint64_t p_ = 3;
  std::uint64_t value_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, const ModP& x) { return os << x.to_string(); }

/// Exact field element types the algorithms are written against.
template <class F>
concept Field = std::regular<F> && requires(const F& a, const F& b, const FieldDescriptor& d, long long n) {
  { a + b } -> std::same_as<F>;
  { a - b } -> std::same_as<F>;
  { a * b } -> std::same_as<F>;
  { a / b } -> std::same_as<F>;
  { -a } -> std::same_as<F>;
  { a.inverse() } -> std::same_as<F>;
  { a.is_zero() } -> std::same_as<bool>;
  { a.field() } -> std::same_as<FieldDescriptor>;
  { F::zero(d) } -> std::same_as<F>;
  { F::one(d) } -> std::same_as<F>;
  { F::from_int(n, d) } -> std::same_as<F>;
};

inline Rational zero_like(const Rational&) { return Rational(); }
inline Rational one_like(const Rational&) { return Rational(1L); }
inline ModP zero_like(const ModP& x) { return ModP::zero(x.field()); }
inline ModP one_like(const ModP& x) { return ModP::one(x.field()); }

/// Square test for a nonzero scalar.
inline bool is_square(const Rational& a) {
  if (a.is_zero()) throw ZeroInput("is_square of 0");
  if (a.sign() < 0) return false;
  return mpz_perfect_square_p(a.numerator().get_mpz_t()) != 0 &&
         mpz_perfect_square_p(a.denominator().get_mpz_t()) != 0;
}

/// Euler's criterion.
inline bool is_square(const ModP& a) {
  if (a.is_zero()) throw ZeroInput("is_square of 0");
  return a.pow((a.modulus() - 1) / 2).is_one();
}

/// Square root of a square residue by Tonelli-Shanks; returns the smaller of the two roots.
inline ModP sqrt_mod(const ModP& a) {
  const std::uint64_t p = a.modulus();
  const FieldDescriptor d = a.field();
  if (a.is_zero()) return a;
  if (!is_square(a)) throw ZeroInput(a.to_string() + " is not a square mod " + std::to_string(p));
  std::uint64_t q = p - 1;
  unsigned s = 0;
  while ((q & 1U) == 0) {
    q >>= 1U;
    ++s;
  }
  ModP z(2, d);
  while (is_square(z)) z += ModP::one(d);
  ModP c = z.pow(q);
  ModP x = a.pow((q + 1) / 2);
  ModP t = a.pow(q);
  unsigned m = s;
  while (!t.is_one()) {
    unsigned i = 0;
    ModP t2 = t;
    while (!t2.is_one()) {
      t2 *= t2;
      ++i;
    }
    ModP b = c;
    for (unsigned k = 0; k + i + 1 < m; ++k) b *= b;
    x *= b;
    c = b * b;
    t *= c;
    m = i;
  }
  const ModP other = -x;
  return other.residue() < x.residue() ? other : x;
}

/// Calls fn(std::type_identity<F>{}) with F matching the runtime field.
template <class Fn>
decltype(auto) with_field(const FieldDescriptor& field, Fn&& fn) {
  if (field.is_rationals()) return fn(std::type_identity<Rational>{});
  return fn(std::type_identity<ModP>{});
}

}  // namespace spinform
