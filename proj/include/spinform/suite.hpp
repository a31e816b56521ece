#pragma once

// Named verification checks, as run by `spinform verify`.

#include <algorithm>
#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "spinform/propositions.hpp"
#include "spinform/wittcheck.hpp"

namespace spinform {

inline constexpr std::array<std::string_view, 9> kCheckNames = {
    "forms", "kernels", "stab56", "stab45", "stab34", "hypso4", "weyl", "cancellation", "chain"};

inline bool is_check_name(std::string_view name) {
  return std::find(kCheckNames.begin(), kCheckNames.end(), name) != kCheckNames.end();
}

/// Cancellation runs over the plan's field when it is finite, else over the default primes.
inline FuzzPlan fuzz_plan_for(const VerifyPlan& plan) {
  FuzzPlan fuzz;
  fuzz.samples = plan.samples;
  fuzz.seed = plan.seed;
  if (plan.field.is_finite()) fuzz.primes = {plan.field.modulus()};
  return fuzz;
}

inline Certificate run_check(std::string_view name, const VerifyPlan& plan) {
  if (name == "forms") return verify_forms(plan);
  if (name == "kernels") return verify_kernels(plan);
  if (name == "stab56") return verify_stab56(plan);
  if (name == "stab45") return verify_stab45(plan);
  if (name == "stab34") return verify_stab34(plan);
  if (name == "hypso4") return verify_hypso4(plan);
  if (name == "weyl") return verify_weyl_equivalence(plan);
  if (name == "cancellation") return run_cancellation_suite(fuzz_plan_for(plan));
  if (name == "chain") return run_stabilization_chain(plan);
  if (name == "homomorphisms") return verify_homomorphisms(plan);
  throw InvalidPlan("unknown check '" + std::string(name) + "'");
}

/// Runs the named checks ("all" expands to every entry of kCheckNames) in canonical order.
inline std::vector<Certificate> run_checks(const std::vector<std::string>& names, const VerifyPlan& plan) {
  std::vector<std::string> selected;
  for (const auto& n : names) {
    if (n == "all") {
      selected.assign(kCheckNames.begin(), kCheckNames.end());
      break;
    }
    if (!is_check_name(n) && n != "homomorphisms") throw InvalidPlan("unknown check '" + n + "'");
    if (std::find(selected.begin(), selected.end(), n) == selected.end()) selected.push_back(n);
  }
  const auto rank = [](const std::string& n) {
    return static_cast<std::size_t>(std::find(kCheckNames.begin(), kCheckNames.end(), n) - kCheckNames.begin());
  };
  std::stable_sort(selected.begin(), selected.end(), [&](const auto& a, const auto& b) { return rank(a) < rank(b); });
  std::vector<Certificate> out;
  out.reserve(selected.size());
  for (const auto& n : selected) out.push_back(run_check(n, plan));
  return out;
}

}  // namespace spinform
