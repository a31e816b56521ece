#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "spinform/json_io.hpp"

namespace spinform {

inline constexpr int kSchemaVersion = 1;

/// Outcome of one verification. A FAIL always carries the first counterexample found.
class Certificate {
 public:
  explicit Certificate(std::string check, std::string field = "q", std::uint64_t seed = 0)
      : check_(std::move(check)), field_(std::move(field)), seed_(seed) {}

  const std::string& check() const { return check_; }
  bool passed() const { return counterexample_.is_null(); }
  const json& counterexample() const { return counterexample_; }
  std::size_t samples() const { return samples_; }

  void set_samples(std::size_t n) { samples_ = n; }
  void add_samples(std::size_t n) { samples_ += n; }

  /// Records a named sub-check. The counterexample thunk is only evaluated on failure.
  bool expect(bool ok, const std::string& what, const std::function<json()>& counterexample = {}) {
    auto& slot = subchecks_[what];
    if (!ok) {
      slot = "FAIL";
      if (counterexample_.is_null()) {
        json ce = counterexample ? counterexample() : json::object();
        if (!ce.is_object()) ce = json{{"value", ce}};
        ce["check"] = what;
        counterexample_ = std::move(ce);
      }
    } else if (slot.is_null()) {
      slot = "PASS";
    }
    return ok;
  }

  json& witness() { return witness_; }
  const json& witness() const { return witness_; }
  json& ledger() { return ledger_; }
  const json& ledger() const { return ledger_; }

  /// Merges another certificate's verdicts under a prefix.
  void absorb(const Certificate& other, const std::string& prefix) {
    for (const auto& [name, status] : other.subchecks_.items()) {
      expect(status == "PASS", prefix + "." + name, [&] { return other.counterexample_; });
    }
    samples_ += other.samples_;
  }

  json to_json() const {
    json j{{"schema", kSchemaVersion},
           {"check", check_},
           {"status", passed() ? "PASS" : "FAIL"},
           {"field", field_},
           {"seed", seed_},
           {"samples", samples_},
           {"subchecks", subchecks_},
           {"witness", witness_},
           {"ledger_constants", ledger_}};
    if (!passed()) j["counterexample"] = counterexample_;
    return j;
  }

 private:
  std::string check_;
  std::string field_;
  std::uint64_t seed_;
  std::size_t samples_ = 0;
  json subchecks_ = json::object();
  json witness_ = json::object();
  json ledger_ = json::object();
  json counterexample_;
};

/// Top-level summary of a batch of certificates.
inline json manifest(const std::vector<Certificate>& certs) {
  json checks = json::array();
  json list = json::array();
  bool all = true;
  for (const auto& c : certs) {
    checks.push_back({{"check", c.check()}, {"status", c.passed() ? "PASS" : "FAIL"}});
    list.push_back(c.to_json());
    all = all && c.passed();
  }
  return json{{"schema", kSchemaVersion},
              {"status", all ? "PASS" : "FAIL"},
              {"checks", std::move(checks)},
              {"certificates", std::move(list)}};
}

}  // namespace spinform
