#pragma once

#include <cstdint>
#include <random>
#include <type_traits>

#include "spinform/scalar.hpp"

namespace spinform {

/// Seeded generator; a (seed, stream) pair fully determines the sequence.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : engine_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound), bound > 0. Rejection keeps it unbiased and portable.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % bound;
  }

  /// Uniform integer in [lo, hi].
  long long between(long long lo, long long hi) {
    return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  bool coin() { return (engine_() >> 63U) != 0; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31U);
  }

  std::mt19937_64 engine_;
};

/// Coefficient box used for random rationals; keeps products of generators small.
inline constexpr long long kRationalBox = 2;

/// Random scalar: an integer in [-kRationalBox, kRationalBox] over Q, uniform over F_p.
template <Field F>
F random_scalar(Rng& rng, const FieldDescriptor& field) {
  if (field.is_rationals()) return F::from_int(rng.between(-kRationalBox, kRationalBox), field);
  if constexpr (std::is_same_v<F, ModP>) {
    return ModP(rng.below(field.modulus()), field);
  } else {
    throw MixedFields("rational type asked for " + field.to_string());
  }
}

template <Field F>
F random_nonzero_scalar(Rng& rng, const FieldDescriptor& field) {
  F x = random_scalar<F>(rng, field);
  while (x.is_zero()) x = random_scalar<F>(rng, field);
  return x;
}

}  // namespace spinform
