#pragma once

// JSON form of a Representation:
//
//   {
//     "group_label": "SU(3)",
//     "dim": 3,
//     "factors": [{"label": "SU(3)", "begin": 0, "end": 8, "coupling": 1.0}],
//     "generators": [ [ [[re, im], ...], ... ], ... ]
//   }
//
// Each generator is a list of rows; each entry is a [re, im] pair. "factors"
// may be omitted, in which case all generators form one factor.

#include "dflat/representation.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <string>

namespace dflat {

using json = nlohmann::json;

inline json complex_to_json(cplx c) { return json::array({c.real(), c.imag()}); }

inline json matrix_to_json(const ComplexMatrix &m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json vector_to_json(const ComplexVector &v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

inline json rep_to_json(const Representation &rep) {
  json factors = json::array();
  for (const auto &f : rep.factors)
    factors.push_back({{"label", f.label}, {"begin", f.begin}, {"end", f.end}, {"coupling", f.coupling}});
  json gens = json::array();
  for (const auto &t : rep.generators) gens.push_back(matrix_to_json(t));
  return {{"group_label", rep.group_label}, {"dim", rep.dim}, {"factors", factors}, {"generators", gens}};
}

namespace detail {

inline void reject_unknown_keys(const json &obj, const std::set<std::string> &allowed,
                                const std::string &where) {
  for (const auto &item : obj.items())
    if (!allowed.count(item.key()))
      throw PreconditionError(where + ": unknown key '" + item.key() + "'");
}

inline cplx complex_from_json(const json &j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw PreconditionError("representation JSON: complex entries must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace detail

/// Parses and structurally checks a representation. Numerical validity
/// (Hermiticity, closure, ...) is left to validate_rep.
inline Representation rep_from_json(const json &j) {
  if (!j.is_object()) throw PreconditionError("representation JSON: top level must be an object");
  detail::reject_unknown_keys(j, {"group_label", "dim", "factors", "generators"}, "representation JSON");
  if (!j.contains("dim") || !j.contains("generators"))
    throw PreconditionError("representation JSON: 'dim' and 'generators' are required");
  Representation rep;
  rep.group_label = j.value("group_label", std::string("user"));
  const long dim = j.at("dim").get<long>();
  if (dim < 1) throw PreconditionError("representation JSON: dim must be positive");
  rep.dim = dim;
  for (const auto &g : j.at("generators")) {
    if (!g.is_array() || static_cast<long>(g.size()) != dim)
      throw PreconditionError("representation JSON: each generator needs dim rows");
    ComplexMatrix t(dim, dim);
    for (long r = 0; r < dim; ++r) {
      const auto &row = g[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<long>(row.size()) != dim)
        throw PreconditionError("representation JSON: each row needs dim entries");
      for (long c = 0; c < dim; ++c) t(r, c) = detail::complex_from_json(row[static_cast<std::size_t>(c)]);
    }
    rep.generators.push_back(std::move(t));
  }
  if (rep.generators.empty()) throw PreconditionError("representation JSON: no generators");
  if (j.contains("factors")) {
    for (const auto &f : j.at("factors")) {
      detail::reject_unknown_keys(f, {"label", "begin", "end", "coupling"}, "representation JSON factor");
      rep.factors.push_back(Factor{f.value("label", std::string("factor")), f.at("begin").get<std::size_t>(),
                                   f.at("end").get<std::size_t>(), f.value("coupling", 1.0)});
    }
  } else {
    rep.factors = single_factor(rep.group_label, rep.generators.size());
  }
  return rep;
}

inline Representation load_rep(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open representation file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error &e) {
    throw PreconditionError("representation file '" + path + "': " + e.what());
  }
  return rep_from_json(j);
}

} // namespace dflat
