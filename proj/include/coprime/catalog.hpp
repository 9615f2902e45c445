#pragma once

// Built-in curve catalog plus user-catalog merging. The stored discriminants
// are recomputed from the a-invariants at load time as a tamper check.

#include <array>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "coprime/curves.hpp"
#include "coprime/errors.hpp"

namespace coprime {

struct CatalogEntry {
  std::string label;
  std::array<mpz_class, 5> ainvs;  // a1, a2, a3, a4, a6
  std::string discriminant;        // decimal string, empty = not pinned

  WeierstrassCurve curve() const {
    WeierstrassCurve c(ainvs[0], ainvs[1], ainvs[2], ainvs[3], ainvs[4], label);
    if (!discriminant.empty() && c.discriminant != mpz_class(discriminant))
      throw std::runtime_error("catalog: stored discriminant mismatch for " + label);
    return c;
  }
};

inline std::vector<CatalogEntry> builtin_catalog() {
  return {
      {"140.b1", {0, 0, 0, 32, 212}, "-21512960"},
      {"34020.c1", {0, 0, 0, -12393, 197073}, "105039483711120"},
      {"297.a1", {0, 0, 1, -81, 290}, "-2381643"},
      {"405.a1", {0, 0, 1, -3, -2}, "405"},
      {"484.a1", {0, 1, 0, -9357, 347279}, "-603634608896"},
      {"847.c1", {0, 1, 1, -10809, -436166}, "-954871379"},
  };
}

// User catalog: JSON array of {"label": str, "ainvs": [a1,a2,a3,a4,a6]} with
// integer entries given as numbers or decimal strings. Entries override
// built-ins with the same label.
inline std::vector<CatalogEntry> load_catalog(const std::string& user_path = {}) {
  std::vector<CatalogEntry> entries = builtin_catalog();
  if (user_path.empty()) return entries;

  std::ifstream in(user_path);
  if (!in) throw std::runtime_error("catalog: cannot open " + user_path);
  nlohmann::json doc = nlohmann::json::parse(in);
  if (!doc.is_array()) throw std::runtime_error("catalog: expected a JSON array");

  auto as_mpz = [](const nlohmann::json& v) {
    if (v.is_string()) return mpz_class(v.get<std::string>());
    return mpz_class(static_cast<long>(v.get<long long>()));
  };

  for (const auto& item : doc) {
    CatalogEntry e;
    e.label = item.at("label").get<std::string>();
    const auto& a = item.at("ainvs");
    if (!a.is_array() || a.size() != 5)
      throw std::runtime_error("catalog: ainvs must have 5 entries for " + e.label);
    for (int i = 0; i < 5; ++i) e.ainvs[i] = as_mpz(a[i]);
    if (item.contains("discriminant")) e.discriminant = item["discriminant"].get<std::string>();
    bool replaced = false;
    for (auto& existing : entries) {
      if (existing.label == e.label) {
        existing = e;
        replaced = true;
        break;
      }
    }
    if (!replaced) entries.push_back(e);
  }
  return entries;
}

// Resolves a curve by catalog label or by a literal "[a1,a2,a3,a4,a6]" list.
inline WeierstrassCurve resolve_curve(const std::string& spec,
                                      const std::vector<CatalogEntry>& catalog) {
  for (const auto& e : catalog)
    if (e.label == spec) return e.curve();
  if (!spec.empty() && spec.front() == '[') {
    nlohmann::json a = nlohmann::json::parse(spec);
    if (a.is_array() && a.size() == 5) {
      auto get = [&](int i) {
        return a[i].is_string() ? mpz_class(a[i].get<std::string>())
                                : mpz_class(static_cast<long>(a[i].get<long long>()));
      };
      return WeierstrassCurve(get(0), get(1), get(2), get(3), get(4), spec);
    }
  }
  throw std::invalid_argument("unknown curve: " + spec);
}

}  // namespace coprime
