// Acceptance suite: one PASS/FAIL line per criterion.
//
//   dflat_acceptance            run every criterion
//   dflat_acceptance --only N   run criterion N (1-7)
//
// Exit status is 0 iff every criterion that ran passed.

#include "dflat/cli.hpp"

#include <cstdio>
#include <functional>
#include <sstream>

using namespace dflat;

namespace {

// Pinned tolerances.
constexpr double kRelationTol = 1e-8;        // relative deviation of c1/c3, c2/c3
constexpr double kOutOfSampleTol = 1e-8;     // relative relation residual
constexpr int kOutOfSamplePoints = 50;
constexpr int kFitSamples = 100;
constexpr double kDSupTol = 1e-8;
constexpr double kProportionalityTol = 1e-8; // times |grad F|
constexpr double kKTol = 1e-10;              // times |k|
constexpr double kMinD2 = 1e-3;
constexpr int kMinD2Starts = 64;
constexpr double kSliceMin = 1.0 / 12.0;
constexpr double kSliceTol = 1e-6;
constexpr int kPointwiseSamples = 1000;
constexpr double kVanishing = 1e-10;
constexpr double kNonVanishing = 0.01;
constexpr double kGradientTol = 1e-6;
constexpr int kGradientPoints = 20;
constexpr double kInvarianceTol = 1e-9;
constexpr double kCompletenessTol = 1e-12;
constexpr int kCompletenessPoints = 100;
constexpr double kClosureTol = 1e-9;
constexpr int kDerivationDim = 52;
constexpr std::uint64_t kSeed = 42;
constexpr int kStarts = 16;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string &what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

Representation build(const std::string &name) { return require_case(name).build(); }

std::vector<std::string> e6_optional(std::vector<std::string> names) {
#if !DFLAT_WITH_E6
  std::erase(names, std::string("e6_27"));
#endif
  return names;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// 1. Sym^2 dimensions, exact.
Outcome decomposition_dims() {
  Outcome o;
  const std::vector<std::pair<std::string, std::vector<int>>> want = {
      {"su3_6", {6, 15}}, {"su6_15", {15, 105}}, {"so10_16", {10, 126}},
      {"e6_27", {27, 351}}, {"bifund_32", {3, 18}}};
  for (const auto &[name, dims] : want) {
    if (e6_optional({name}).empty()) continue;
    std::vector<int> got = sym2_decompose(build(name)).dims();
    std::sort(got.begin(), got.end());
    o.detail << " " << name << "={" << got[0] << "," << (got.size() > 1 ? got[1] : -1) << "}";
    o.require(got == dims, name);
  }
  return o;
}

// 2. Relation ratios and out-of-sample residual.
Outcome relation_ratios() {
  Outcome o;
  for (const auto &name : e6_optional({"su3_6", "su6_15", "e6_27", "so10_16"})) {
    const CaseSpec spec = require_case(name);
    const Representation rep = spec.build();
    const IsotypicDecomposition dec = sym2_decompose(rep);
    const RelationFit fit = fit_relation(rep, dec, kFitSamples, kSeed);
    if (!fit.found()) {
      o.require(false, name + " nullity " + std::to_string(fit.nullity));
      continue;
    }
    const double dev = relation_deviation(fit, *spec.expected_relation);
    const double oos = validate_relation(fit, rep, dec, kOutOfSamplePoints, kSeed + 1'000'000);
    const auto &e = *spec.expected_relation;
    o.detail << " " << name << "=" << fit.ratios[0] << ":" << fit.ratios[1] << ":1";
    if (fit.integers) o.detail << "(" << (*fit.integers)[0] << ":" << (*fit.integers)[1] << ":" << (*fit.integers)[2] << ")";
    o.detail << " expected " << e[0] << ":" << e[1] << ":" << e[2] << " oos=" << fmt(oos) << ";";
    o.require(dev < kRelationTol, name + " ratios");
    o.require(oos < kOutOfSampleTol, name + " out-of-sample");
  }
  return o;
}

// 3. Flat-direction certificates and stabilizers.
Outcome flat_certificates() {
  Outcome o;
  for (const auto &name : e6_optional({"su3_6", "su6_15", "e6_27", "bifund_33"})) {
    const CaseSpec spec = require_case(name);
    const Representation rep = spec.build();
    const Invariant inv = Invariant::from_label(*spec.invariant);
    OptimizerOptions opt;
    opt.starts = kStarts;
    opt.seed = kSeed;
    const FlatSearchResult r = find_flat(rep, inv, opt);
    if (!r.found) {
      o.require(false, name + " not found");
      continue;
    }
    const double kerr = std::abs(r.k_fit - r.k) / std::abs(r.k);
    o.detail << " " << name << ": D=" << fmt(r.d_sup_norm) << " res/grad="
             << fmt(r.proportionality_residual / r.gradient_norm) << " stab=" << r.stabilizer_dim << ";";
    o.require(r.d_sup_norm < kDSupTol, name + " D");
    o.require(r.proportionality_residual < kProportionalityTol * r.gradient_norm, name + " proportionality");
    o.require(kerr < kKTol, name + " k");
    o.require(r.stabilizer_dim == *spec.expected_flat_stabilizer_dim, name + " stabilizer");
  }
  return o;
}

double min_d2(const Representation &rep, std::vector<std::size_t> factors) {
  OptimizerOptions opt;
  opt.starts = kMinD2Starts;
  opt.seed = kSeed;
  return -maximize_objective(neg_d_squared_objective(rep, std::move(factors)), rep.dim, opt).value;
}

// 4. No-invariant cases.
Outcome no_invariant_cases() {
  Outcome o;
  for (const std::string name : {"so10_16", "bifund_32"}) {
    const double m = min_d2(build(name), {});
    o.detail << " " << name << " min D.D=" << fmt(m) << ";";
    o.require(m > kMinD2, name + " min D.D");
  }
  const Representation rep = build("bifund_32");
  const double slice = min_d2(rep, {0});
  o.detail << " SU(3) slice min=" << slice << ";";
  o.require(std::abs(slice - kSliceMin) < kSliceTol, "slice minimum");
  int violations = 0;
  for (int i = 0; i < kPointwiseSamples; ++i) {
    const DVector d = d_vector(rep, random_unit_point(rep.dim, kSeed + 2'000'000 + static_cast<std::uint64_t>(i)));
    if (!(d.factor_squared(0) > d.factor_squared(1))) ++violations;
  }
  o.detail << " factor inequality violations=" << violations << "/" << kPointwiseSamples;
  o.require(violations == 0, "factor inequality");
  return o;
}

// 5. Complementarity of the two quartic terms.
Outcome complementarity() {
  Outcome o;
  for (const auto &name : e6_optional({"su3_6", "su6_15", "so10_16", "e6_27"})) {
    const Representation rep = build(name);
    const IsotypicDecomposition dec = sym2_decompose(rep);
    const ComplementarityReport r = complementarity_scan(rep, dec, std::nullopt, kStarts, kSeed);
    o.detail << " " << name << ": low@adjmax=" << fmt(r.low_at_adj_max) << " adj@lowmax=" << fmt(r.adj_at_low_max) << ";";
    if (name != "e6_27") o.require(r.low_at_adj_max < kVanishing, name + " low at adj max");
    if (name == "so10_16") o.require(r.adj_at_low_max > kNonVanishing, name + " adj at low max");
    else o.require(r.adj_at_low_max < kVanishing, name + " adj at low max");
  }
  return o;
}

// 6. Property suites.
Outcome property_suites() {
  Outcome o;
  double grad = 0.0, invariance = 0.0;
  for (const auto &name : e6_optional({"su3_6", "su6_15", "e6_27", "bifund_33"})) {
    const CaseSpec spec = require_case(name);
    const GradientCheckReport g =
        gradient_check(Invariant::from_label(*spec.invariant), spec.build(), kGradientPoints, kSeed);
    grad = std::max(grad, g.max_gradient_error);
    invariance = std::max(invariance, g.max_invariance_residual);
  }
  o.detail << " gradient err=" << fmt(grad) << " invariance=" << fmt(invariance);
  o.require(grad < kGradientTol, "gradient");
  o.require(invariance < kInvarianceTol, "invariance");

  double completeness = 0.0, closure = 0.0;
  for (const auto &c : list_cases()) {
    const Representation rep = c.build();
    closure = std::max(closure, closure_residual(rep.generators));
    const IsotypicDecomposition dec = sym2_decompose(rep);
    for (int i = 0; i < kCompletenessPoints; ++i) {
      const Point z = random_unit_point(rep.dim, kSeed + static_cast<std::uint64_t>(i));
      double sum = 0.0;
      for (std::size_t l = 0; l < dec.components.size(); ++l) sum += quartic_invariant(dec, l, z);
      completeness = std::max(completeness, std::abs(sum - 1.0));
    }
  }
  o.detail << " sum I_l - N^2=" << fmt(completeness) << " closure=" << fmt(closure);
  o.require(completeness < kCompletenessTol, "completeness");
  o.require(closure < kClosureTol, "closure");
#if DFLAT_WITH_E6
  const int dim = e6_construction().derivation_dim;
  o.detail << " derivations=" << dim;
  o.require(dim == kDerivationDim, "derivation dimension");
#endif
  return o;
}

// 7. Byte-identical reports for identical seeds.
Outcome determinism() {
  Outcome o;
  int identical = 0, total = 0;
  auto twice = [&](const std::vector<std::string> &args) {
    std::ostringstream a, b, err;
    cli::run_cli(args, a, err);
    cli::run_cli(args, b, err);
    ++total;
    if (a.str() == b.str() && !a.str().empty()) ++identical;
    else o.require(false, args[0] + " " + args[args.size() - 1]);
  };
  for (const auto &name : case_names()) twice({"catalog", "run", "--case", name, "--seed", "42"});
  twice({"verify-relations", "--case", "so10_16", "--seed", "42"});
  twice({"find-flat", "--case", "su6_15", "--seed", "42"});
  o.detail << " identical " << identical << "/" << total;
  return o;
}

} // namespace

int main(int argc, char **argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"decomposition dimensions", decomposition_dims},
      {"relation ratios", relation_ratios},
      {"flat-direction certificates", flat_certificates},
      {"no-invariant cases", no_invariant_cases},
      {"complementarity", complementarity},
      {"property suites", property_suites},
      {"determinism", determinism},
  };
  int only = 0;
  if (argc == 3 && std::string(argv[1]) == "--only") only = std::atoi(argv[2]);
  else if (argc != 1) {
    std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
    return 2;
  }
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::fprintf(stderr, "criterion must be 1-%zu\n", criteria.size());
    return 2;
  }
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<int>(i + 1) != only) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception &e) {
      o.pass = false;
      o.detail << " exception: " << e.what();
    }
    all = all && o.pass;
    std::printf("%s %zu %s:%s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.str().c_str());
  }
  return all ? 0 : 1;
}
