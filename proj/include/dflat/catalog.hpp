#pragma once

// Built-in cases: a representation, its invariant (if any) and the constants
// each case is expected to reproduce. run_case executes all checks for one
// case and returns a self-contained report.

#include "dflat/report.hpp"
#include "dflat/repkit.hpp"

#include <functional>
#include <map>

namespace dflat {

struct CaseSpec {
  std::string name;
  std::string description;
  std::function<Representation()> build;
  std::optional<std::string> invariant; // label accepted by Invariant::from_label
  std::array<int, 2> expected_sym2_dims{}; // {larger, smaller}
  std::optional<std::array<long, 3>> expected_relation;
  std::optional<int> expected_flat_stabilizer_dim;
  std::map<std::string, std::string> provenance; // field -> where the value comes from
};

inline std::vector<CaseSpec> list_cases() {
  std::vector<CaseSpec> cases;
  cases.push_back({"su3_6", "symmetric 6 of SU(3), cubic invariant det(S)",
                   [] { return derived_rep(su_fundamental(3), DerivedMode::sym2); },
                   "det_sym3", {15, 6}, std::array<long, 3>{18, 15, 8}, 3,
                   {{"expected_sym2_dims", "published decomposition"},
                    {"expected_relation", "published quartic relation"},
                    {"expected_flat_stabilizer_dim", "dim so(3)"}}});
  cases.push_back({"su6_15", "antisymmetric 15 of SU(6), cubic invariant Pf(A)",
                   [] { return derived_rep(su_fundamental(6), DerivedMode::antisym2); },
                   "pfaffian6", {105, 15}, std::array<long, 3>{9, 12, 8}, 21,
                   {{"expected_sym2_dims", "published decomposition"},
                    {"expected_relation", "published quartic relation"},
                    {"expected_flat_stabilizer_dim", "dim sp(6)"}}});
#if DFLAT_WITH_E6
  cases.push_back({"e6_27", "27 of E6 on the exceptional Jordan algebra, cubic norm",
                   [] { return e6_27(); }, "jordan_det", {351, 27}, std::array<long, 3>{15, 9, 2}, 52,
                   {{"expected_sym2_dims", "published decomposition"},
                    {"expected_relation", "published quartic relation"},
                    {"expected_flat_stabilizer_dim", "dim f4"}}});
#endif
  cases.push_back({"so10_16", "chiral spinor 16 of SO(10), no invariant",
                   [] { return so10_spinor16(); }, std::nullopt, {126, 10},
                   std::array<long, 3>{32, 16, 5}, std::nullopt,
                   {{"expected_sym2_dims", "published decomposition"},
                    {"expected_relation", "published quartic relation"}}});
  cases.push_back({"bifund_33", "(3, 3bar) of SU(3)xSU(3), invariant det(phi)",
                   [] { return bifundamental(3, 3); }, "bifund_det(3)", {36, 9}, std::nullopt, 8,
                   {{"expected_sym2_dims", "standard Sym^2 of a bifundamental"},
                    {"expected_flat_stabilizer_dim", "dim of the diagonal su(3)"}}});
  cases.push_back({"bifund_32", "(3, 2bar) of SU(3)xSU(2), no invariant",
                   [] { return bifundamental(3, 2); }, std::nullopt, {18, 3}, std::nullopt, std::nullopt,
                   {{"expected_sym2_dims", "published decomposition"}}});
  return cases;
}

inline std::vector<std::string> case_names() {
  std::vector<std::string> out;
  for (const auto &c : list_cases()) out.push_back(c.name);
  return out;
}

inline std::optional<CaseSpec> find_case(const std::string &name) {
  for (auto &c : list_cases())
    if (c.name == name) return c;
  return std::nullopt;
}

inline CaseSpec require_case(const std::string &name) {
  auto c = find_case(name);
  if (!c) throw PreconditionError("unknown case '" + name + "'");
  return *c;
}

/// Unit point whose orbit carries the highest weight. For so10_16 there is no
/// closed form here, so the direction is the argmax of I_adj / N^2 over 64
/// starts.
inline Point maxweight_direction(const std::string &name, std::uint64_t seed = 42) {
  if (name == "su3_6") return Point::Unit(6, 0);                          // E_11
  if (name == "su6_15") return Point::Unit(15, 0);                        // e_1 ^ e_2
  if (name == "bifund_32") return Point::Unit(6, 0);                      // rank one, E_11
  if (name == "so10_16") {
    const Representation rep = so10_spinor16();
    OptimizerOptions opt;
    opt.starts = 64;
    opt.seed = seed;
    return canonicalize(maximize_objective(adjoint_ratio_objective(rep), rep.dim, opt).point);
  }
  throw PreconditionError("maxweight_direction: no max-weight direction registered for '" + name + "'");
}

/// The invariant-preserving direction used as the flat representative.
inline Point symmetric_direction(const std::string &name) {
  Point z;
  if (name == "su3_6") z = sym3_identity_coords();
  else if (name == "su6_15") z = symplectic_form_coords();
#if DFLAT_WITH_E6
  else if (name == "e6_27") z = jordan_identity_coords();
#endif
  else if (name == "bifund_33") z = bifund_identity_coords(3);
  else throw PreconditionError("symmetric_direction: none registered for '" + name + "'");
  return z / z.norm();
}

struct RunOptions {
  std::uint64_t seed = 42;
  int starts = 16;
  double tol = 1e-10; // optimizer stopping tolerance
  int samples = 100;  // relation-fit samples
};

// Seed offsets keep the sample families of one run disjoint.
namespace seed_offset {
inline constexpr std::uint64_t out_of_sample = 1'000'000;
inline constexpr std::uint64_t pointwise = 2'000'000;
inline constexpr std::uint64_t min_d2 = 3'000'000;
} // namespace seed_offset

// Thresholds applied by run_case.
namespace case_tol {
inline constexpr double relation = 1e-8;
inline constexpr double out_of_sample = 1e-8;
inline constexpr double d_sup = 1e-8;
inline constexpr double proportionality = 1e-8; // relative to |grad F|
inline constexpr double k_consistency = 1e-10;  // relative to |k|
inline constexpr double singular_values = 1e-8;
inline constexpr double min_d2 = 1e-3;
inline constexpr double vanishing = 1e-10;
inline constexpr double nonvanishing = 1e-2;
inline constexpr double critical_g = 1e-8;      // relative
inline constexpr double slice_min = 1e-6;
inline constexpr double slice_nonzero = 0.1;
inline constexpr double maxweight = 1e-12;
inline constexpr int no_invariant_starts = 64;
inline constexpr int pointwise_samples = 1000;
inline constexpr int out_of_sample_points = 50;
} // namespace case_tol

struct CaseReport {
  std::string name;
  CheckList checks;
  json sections = json::object();

  bool passed() const { return checks.passed(); }
};

namespace detail {

inline void relation_section(const CaseSpec &spec, const Representation &rep,
                             const IsotypicDecomposition &dec, const RunOptions &o, CaseReport &out) {
  const RelationFit fit = fit_relation(rep, dec, o.samples, o.seed);
  std::optional<double> oos;
  if (fit.found())
    oos = validate_relation(fit, rep, dec, case_tol::out_of_sample_points, o.seed + seed_offset::out_of_sample);
  out.sections["relation"] = relation_json(fit, spec.expected_relation, oos);
  if (!spec.expected_relation) return;
  out.checks.equal("relation_nullity", fit.nullity, 1);
  if (!fit.found()) return;
  const double dev = relation_deviation(fit, *spec.expected_relation);
  out.checks.add({"relation_ratios", json(*spec.expected_relation),
                  fit.integers ? json(*fit.integers) : json(fit.ratios), dev < case_tol::relation});
  out.sections["relation"]["deviation"] = dev;
  out.checks.less("relation_out_of_sample_residual", *oos, case_tol::out_of_sample);
}

inline void flat_section(const CaseSpec &spec, const Representation &rep, const Invariant &inv,
                         const RunOptions &o, CaseReport &out) {
  OptimizerOptions opt;
  opt.starts = o.starts;
  opt.seed = o.seed;
  opt.tol = o.tol;
  const FlatSearchResult r = find_flat(rep, inv, opt);
  out.sections["flat_direction_found"] = r.found;
  out.sections["flat"] = flat_json(r);
  out.checks.flag("flat_found", r.found);
  if (!r.found) return;
  out.checks.less("flat_d_sup_norm", r.d_sup_norm, case_tol::d_sup);
  out.checks.less("flat_proportionality_residual", r.proportionality_residual / r.gradient_norm,
                  case_tol::proportionality);
  out.checks.less("flat_k_consistency", std::abs(r.k_fit - r.k) / std::abs(r.k), case_tol::k_consistency);
  if (spec.expected_flat_stabilizer_dim)
    out.checks.equal("flat_stabilizer_dim", r.stabilizer_dim, *spec.expected_flat_stabilizer_dim);
  if (!r.converged) out.checks.warn("flat search stopped before the gradient tolerance was met");

  const Point unit = scale_to_unit_k(inv, r.point);
  out.sections["flat"]["unit_k_point"] = vector_to_json(unit);
  out.sections["flat"]["unit_k_norm_squared"] = norm_n(unit);

  if (inv.kind() == InvariantKind::bifund_det) {
    const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(rep.dim))));
    const RealVector sv = bifundamental_matrix(r.point, n, n).jacobiSvd().singularValues();
    const double target = 1.0 / std::sqrt(static_cast<double>(n));
    out.sections["flat"]["singular_values"] = std::vector<double>(sv.data(), sv.data() + sv.size());
    out.checks.less("flat_singular_values", (sv.array() - target).abs().maxCoeff(), case_tol::singular_values);
  }
}

inline double minimize_d2(const Representation &rep, std::vector<std::size_t> factors, const RunOptions &o) {
  OptimizerOptions opt;
  opt.starts = case_tol::no_invariant_starts;
  opt.seed = o.seed + seed_offset::min_d2;
  opt.tol = o.tol;
  return -maximize_objective(neg_d_squared_objective(rep, std::move(factors)), rep.dim, opt).value;
}

inline void complementarity_section(const CaseSpec &spec, const Representation &rep,
                                    const IsotypicDecomposition &dec,
                                    const std::optional<Invariant> &inv, const RunOptions &o,
                                    CaseReport &out) {
  const ComplementarityReport c = complementarity_scan(rep, dec, inv, o.starts, o.seed);
  out.sections["complementarity"] = complementarity_json(c);
  const bool tabulated = spec.expected_relation.has_value();
  if (tabulated) out.checks.less("low_at_adj_max", c.low_at_adj_max, case_tol::vanishing);
  if (tabulated && inv) {
    out.checks.less("adj_at_low_max", c.adj_at_low_max, case_tol::vanishing);
    if (c.g_max)
      out.checks.less("critical_orbit_g", std::abs(*c.g_at_low_max - *c.g_max) / *c.g_max, case_tol::critical_g);
  }
  if (spec.name == "so10_16") {
    out.checks.greater("adj_at_low_max", c.adj_at_low_max, case_tol::nonvanishing);
    if (c.stabilizer_at_low_max != 21)
      out.checks.warn("stabilizer at argmax of I_low is " + std::to_string(c.stabilizer_at_low_max) +
                      ", expected 21");
  }
  if (spec.name == "bifund_32") {
    const DVector d = d_vector(rep, c.argmax_low);
    const double su3 = d.slice(0).norm(), su2 = d.slice(1).norm();
    out.sections["complementarity"]["su3_slice_norm_at_low_max"] = su3;
    out.sections["complementarity"]["su2_slice_norm_at_low_max"] = su2;
    out.checks.less("su2_slice_at_low_max", su2, case_tol::vanishing);
    out.checks.greater("su3_slice_at_low_max", su3, case_tol::slice_nonzero);
  }
}

} // namespace detail

inline CaseReport run_case(const std::string &name, const RunOptions &o = {}) {
  const CaseSpec spec = require_case(name);
  if (o.starts < 1 || o.samples < 3 || !(o.tol > 0.0))
    throw PreconditionError("run_case: starts >= 1, samples >= 3 and tol > 0 are required");
  CaseReport out;
  out.name = name;
  const Representation rep = spec.build();

  const ValidationReport v = validate_rep(rep);
  json fails = json::array();
  for (const auto &f : v.failures()) fails.push_back(f);
  out.checks.add({"rep_valid", json::array(), fails, v.passed()});
  json val = json::object();
  for (const auto &c : v.checks) val[c.name] = c.value;
  if (v.commutant_dim) val["commutant_dim"] = *v.commutant_dim;
  out.sections["validation"] = val;
  if (!v.passed()) return out;

  const IsotypicDecomposition dec = sym2_decompose(rep);
  out.sections["decomposition"] = decomposition_json(dec);
  std::vector<int> dims = dec.dims();
  std::sort(dims.rbegin(), dims.rend());
  out.checks.equal("sym2_dims", dims, std::vector<int>{spec.expected_sym2_dims[0], spec.expected_sym2_dims[1]});
  if (dec.components.size() != 2) return out;

  detail::relation_section(spec, rep, dec, o, out);

  std::optional<Invariant> inv;
  if (spec.invariant) inv = Invariant::from_label(*spec.invariant);
  if (inv) {
    detail::flat_section(spec, rep, *inv, o, out);
  } else {
    const double m = detail::minimize_d2(rep, {}, o);
    out.sections["flat_direction_found"] = false;
    out.sections["min_d2"] = m;
    out.checks.greater("min_d2_positive", m, case_tol::min_d2);
  }

  if (name == "su3_6" || name == "su6_15" || name == "bifund_32") {
    const double low = quartic_invariant(dec, dec.lowest_dim_index(), maxweight_direction(name, o.seed));
    out.sections["maxweight_low"] = low;
    out.checks.less("maxweight_low_vanishes", low, case_tol::maxweight);
  }

  if (name == "bifund_32") {
    const double slice = detail::minimize_d2(rep, {0}, o);
    out.sections["su3_slice_min"] = slice;
    out.checks.add({"su3_slice_min", "1/12 +- 1e-06", slice,
                    std::abs(slice - 1.0 / 12.0) < case_tol::slice_min});
    double worst_gap = std::numeric_limits<double>::infinity();
    int violations = 0;
    for (int i = 0; i < case_tol::pointwise_samples; ++i) {
      const DVector d = d_vector(rep, random_unit_point(rep.dim, o.seed + seed_offset::pointwise + i));
      const double gap = d.factor_squared(0) - d.factor_squared(1);
      worst_gap = std::min(worst_gap, gap);
      if (!(gap > 0.0)) ++violations;
    }
    out.sections["factor_gap_min"] = worst_gap;
    out.checks.add({"factor_inequality", "0 violations", violations, violations == 0});
  }

  detail::complementarity_section(spec, rep, dec, inv, o, out);
  return out;
}

} // namespace dflat
