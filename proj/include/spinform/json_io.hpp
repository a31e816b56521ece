#pragma once

// JSON encodings shared by certificates, the CLI and input files.
//
//   rational          "num/den" (den omitted when 1)
//   prime-field elt   {"residue": n, "p": p}
//   matrix            {"rows": r, "cols": c, "field": "q" | "fp:p", "entries": [row-major]}
//   quadratic form    {"gram": matrix, "field": ...}

#include <cstdint>
#include <string>
#include <type_traits>
#include <vector>

#include "json.hpp"
#include "spinform/matrix.hpp"

namespace spinform {

using json = nlohmann::json;

inline json to_json(const Rational& r) { return r.to_string(); }

inline json to_json(const ModP& x) { return json{{"residue", x.residue()}, {"p", x.modulus()}}; }

inline json to_json(const FieldDescriptor& d) { return d.to_string(); }

template <class T>
json to_json(const std::vector<T>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

template <Field F>
json to_json(const Matrix<F>& m) {
  json entries = json::array();
  for (const auto& e : m.entries()) entries.push_back(to_json(e));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"field", m.zero().field().to_string()},
              {"entries", std::move(entries)}};
}

template <Field F>
F scalar_from_json(const json& j, const FieldDescriptor& field) {
  if (j.is_number_integer()) return F::from_int(j.get<long long>(), field);
  if (j.is_string()) {
    const Rational q = Rational::parse(j.get<std::string>());
    if constexpr (std::is_same_v<F, Rational>) {
      return q;
    } else {
      return ModP::from_rational(q, field);
    }
  }
  if (j.is_object() && j.contains("residue")) {
    if constexpr (std::is_same_v<F, ModP>) {
      const auto p = j.at("p").get<std::uint64_t>();
      if (p != field.modulus()) {
        throw MixedFields("element mod " + std::to_string(p) + " in " + field.to_string());
      }
      return ModP(j.at("residue").get<std::uint64_t>(), field);
    } else {
      throw MixedFields("prime-field element in a rational matrix");
    }
  }
  throw ParseError("malformed scalar: " + j.dump());
}

inline FieldDescriptor field_from_json(const json& j) {
  if (!j.is_object() || !j.contains("field")) throw ParseError("missing \"field\"");
  return FieldDescriptor::parse(j.at("field").get<std::string>());
}

template <Field F>
Matrix<F> matrix_from_json(const json& j) {
  try {
    const FieldDescriptor field = field_from_json(j);
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    const json& entries = j.at("entries");
    if (!entries.is_array() || entries.size() != rows * cols) {
      throw ParseError("entry count does not match " + std::to_string(rows) + "x" +
                       std::to_string(cols));
    }
    std::vector<F> values;
    values.reserve(entries.size());
    for (const auto& e : entries) values.push_back(scalar_from_json<F>(e, field));
    return Matrix<F>(rows, cols, std::move(values), F::zero(field));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed matrix: ") + e.what());
  }
}

}  // namespace spinform
