#pragma once

// Pass/fail checks and the JSON pieces shared by catalog and CLI reports.
// Numbers are written by nlohmann::json, which emits the shortest decimal
// that round-trips to the same double, so reports are byte-stable.

#include "dflat/dflatopt.hpp"
#include "dflat/rep_json.hpp"
#include "dflat/sympdecomp.hpp"

#include <string>
#include <vector>

namespace dflat {

inline constexpr int kSchemaVersion = 1;

struct Check {
  std::string name;
  json expected;
  json actual;
  bool pass = false;
};

inline json to_json(const Check &c) {
  return {{"name", c.name}, {"expected", c.expected}, {"actual", c.actual}, {"pass", c.pass}};
}

/// Collects checks and warnings; one failed check fails the whole report.
class CheckList {
public:
  void add(Check c) { checks_.push_back(std::move(c)); }

  void less(const std::string &name, double actual, double bound) {
    add({name, "< " + bound_text(bound), actual, actual < bound});
  }

  void greater(const std::string &name, double actual, double bound) {
    add({name, "> " + bound_text(bound), actual, actual > bound});
  }

  template <typename T>
  void equal(const std::string &name, const T &actual, const T &expected) {
    add({name, json(expected), json(actual), actual == expected});
  }

  void flag(const std::string &name, bool ok, json actual = nullptr, json expected = true) {
    add({name, std::move(expected), actual.is_null() ? json(ok) : std::move(actual), ok});
  }

  void warn(std::string text) { warnings_.push_back(std::move(text)); }

  bool passed() const {
    for (const auto &c : checks_)
      if (!c.pass) return false;
    return true;
  }

  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const auto &c : checks_)
      if (!c.pass) out.push_back(c.name);
    return out;
  }

  const std::vector<Check> &checks() const { return checks_; }
  const std::vector<std::string> &warnings() const { return warnings_; }

  const Check *find(const std::string &name) const {
    for (const auto &c : checks_)
      if (c.name == name) return &c;
    return nullptr;
  }

  json checks_json() const {
    json out = json::array();
    for (const auto &c : checks_) out.push_back(to_json(c));
    return out;
  }

private:
  static std::string bound_text(double b) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", b);
    return buf;
  }

  std::vector<Check> checks_;
  std::vector<std::string> warnings_;
};

inline json decomposition_json(const IsotypicDecomposition &dec) {
  json comps = json::array();
  for (const auto &c : dec.components) comps.push_back({{"dim", c.dim}, {"casimir", c.casimir}});
  return {{"space", dec.space_label}, {"space_dim", dec.space_dim}, {"components", comps}};
}

inline json relation_json(const RelationFit &fit, const std::optional<std::array<long, 3>> &expected,
                          std::optional<double> out_of_sample) {
  json j;
  j["fitted"] = fit.integers ? json(*fit.integers) : json(nullptr);
  j["expected"] = expected ? json(*expected) : json(nullptr);
  j["residual"] = fit.found() ? json(fit.max_residual) : json(nullptr);
  j["out_of_sample_residual"] = out_of_sample ? json(*out_of_sample) : json(nullptr);
  j["nullity"] = fit.nullity;
  j["samples"] = fit.samples;
  if (fit.found()) {
    j["coefficients"] = fit.coefficients;
    j["ratios"] = fit.ratios;
  }
  return j;
}

inline json flat_json(const FlatSearchResult &r) {
  json j;
  j["found"] = r.found;
  if (!r.found) return j;
  j["point"] = vector_to_json(r.point);
  j["k"] = complex_to_json(r.k);
  j["k_fit"] = complex_to_json(r.k_fit);
  j["residual"] = r.proportionality_residual;
  j["gradient_norm"] = r.gradient_norm;
  j["d_sup_norm"] = r.d_sup_norm;
  j["stabilizer_dim"] = r.stabilizer_dim;
  j["g_value"] = r.g_value;
  j["starts_used"] = r.starts_used;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  json orbits = json::array();
  for (const auto &o : r.orbits)
    orbits.push_back({{"stabilizer_dim", o.stabilizer_dim}, {"k_abs", o.k_abs}, {"g_value", o.g_value},
                      {"first_start", o.first_start}, {"count", o.count}});
  j["certified_orbits"] = orbits;
  return j;
}

inline json complementarity_json(const ComplementarityReport &r) {
  json j;
  j["low_max"] = r.low_max;
  j["adj_at_low_max"] = r.adj_at_low_max;
  j["adj_max"] = r.adj_max;
  j["low_at_adj_max"] = r.low_at_adj_max;
  j["stabilizer_at_low_max"] = r.stabilizer_at_low_max;
  j["stabilizer_at_adj_max"] = r.stabilizer_at_adj_max;
  j["argmax_low"] = vector_to_json(r.argmax_low);
  j["argmax_adj"] = vector_to_json(r.argmax_adj);
  if (r.g_at_low_max) j["g_at_low_max"] = *r.g_at_low_max;
  if (r.g_max) j["g_max"] = *r.g_max;
  if (r.low_max_is_g_max) j["low_max_is_g_max"] = *r.low_max_is_g_max;
  return j;
}

} // namespace dflat
