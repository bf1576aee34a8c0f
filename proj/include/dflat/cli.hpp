#pragma once

// Command-line front end. run_cli parses arguments, runs one command and
// returns its exit code:
//   0 success, 1 expectation failure, 2 usage error, 3 unsupported operation.
// Reports go to --output (written atomically) or to stdout.

#include "dflat/catalog.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

namespace dflat::cli {

enum ExitCode : int { ok = 0, expectation_failed = 1, usage = 2, unsupported = 3 };

/// An operation that is well-formed but not available for the given input.
class UnsupportedError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string case_name;
  std::string rep_path;
  std::string invariant;
  std::string expect; // "c1,c2,c3"
  long long seed = 42;
  int starts = 16;
  double tol = 1e-10;
  int samples = 100;
  std::string output;
};

inline json config_json(const RunConfig &c) {
  json j = {{"seed", c.seed}, {"starts", c.starts}, {"tol", c.tol}, {"samples", c.samples}};
  if (!c.case_name.empty()) j["case"] = c.case_name;
  if (!c.rep_path.empty()) j["rep"] = c.rep_path;
  if (!c.invariant.empty()) j["invariant"] = c.invariant;
  if (!c.expect.empty()) j["expect"] = c.expect;
  return j;
}

inline void check_config(const RunConfig &c) {
  if (c.seed < 0) throw PreconditionError("--seed must be non-negative");
  if (c.starts < 1) throw PreconditionError("--starts must be positive");
  if (c.samples < 3) throw PreconditionError("--samples must be at least 3");
  if (!(c.tol > 0.0)) throw PreconditionError("--tol must be positive");
}

inline RunOptions run_options(const RunConfig &c) {
  return {static_cast<std::uint64_t>(c.seed), c.starts, c.tol, c.samples};
}

inline json report_header(const RunConfig &c) {
  json r;
  r["schema_version"] = kSchemaVersion;
  r["command"] = c.command;
  r["config"] = config_json(c);
  r["case"] = c.case_name.empty() ? json(nullptr) : json(c.case_name);
  return r;
}

inline void attach_checks(json &report, const CheckList &checks) {
  report["passed"] = checks.passed();
  report["checks"] = checks.checks_json();
  report["warnings"] = checks.warnings();
}

/// Writes text to path through a temporary file in the same directory.
inline void write_atomic(const std::string &path, const std::string &text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw PreconditionError("cannot write '" + tmp.string() + "'");
    out << text;
    if (!out.flush()) throw PreconditionError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw PreconditionError("cannot move report to '" + path + "': " + ec.message());
  }
}

inline void emit(const RunConfig &c, const json &report, std::ostream &out) {
  const std::string text = report.dump(2) + "\n";
  if (c.output.empty()) out << text;
  else write_atomic(c.output, text);
}

inline std::array<long, 3> parse_expect(const std::string &text) {
  std::array<long, 3> v{};
  std::istringstream in(text);
  std::string item;
  std::size_t i = 0;
  while (std::getline(in, item, ',')) {
    if (i == 3) throw PreconditionError("--expect takes exactly three integers");
    try {
      std::size_t used = 0;
      v[i] = std::stol(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception &) {
      throw PreconditionError("--expect: '" + item + "' is not an integer");
    }
    ++i;
  }
  if (i != 3) throw PreconditionError("--expect takes exactly three integers");
  if (v[2] == 0) throw PreconditionError("--expect: the third coefficient must be nonzero");
  return v;
}

/// Representation named by --case or loaded from --rep (exactly one).
inline Representation input_rep(const RunConfig &c) {
  if (c.case_name.empty() == c.rep_path.empty())
    throw PreconditionError("exactly one of --case and --rep is required");
  if (!c.case_name.empty()) return require_case(c.case_name).build();
  Representation rep = load_rep(c.rep_path);
  const ValidationReport v = validate_rep(rep);
  if (!v.passed()) {
    std::string msg = "representation in '" + c.rep_path + "' failed validation:";
    for (const auto &f : v.failures()) msg += " " + f;
    throw PreconditionError(msg);
  }
  return rep;
}

inline int cmd_catalog_list(std::ostream &out) {
  out << std::left << std::setw(11) << "case" << std::setw(15) << "invariant" << std::setw(11) << "sym2"
      << std::setw(11) << "relation" << "stabilizer\n";
  for (const auto &c : list_cases()) {
    auto dims = std::to_string(c.expected_sym2_dims[0]) + "+" + std::to_string(c.expected_sym2_dims[1]);
    std::string rel = "-";
    if (c.expected_relation) {
      const auto &r = *c.expected_relation;
      rel = std::to_string(r[0]) + ":" + std::to_string(r[1]) + ":" + std::to_string(r[2]);
    }
    out << std::setw(11) << c.name << std::setw(15) << c.invariant.value_or("-") << std::setw(11) << dims
        << std::setw(11) << rel
        << (c.expected_flat_stabilizer_dim ? std::to_string(*c.expected_flat_stabilizer_dim) : "-") << "\n";
  }
  return ok;
}

inline int cmd_catalog_run(const RunConfig &c, std::ostream &out) {
  if (c.case_name.empty()) throw PreconditionError("catalog run requires --case");
  const CaseReport cr = run_case(c.case_name, run_options(c));
  json report = report_header(c);
  attach_checks(report, cr.checks);
  for (const auto &item : cr.sections.items()) report[item.key()] = item.value();
  emit(c, report, out);
  return cr.passed() ? ok : expectation_failed;
}

inline int cmd_verify_relations(const RunConfig &c, std::ostream &out) {
  const Representation rep = input_rep(c);
  std::optional<std::array<long, 3>> expected;
  if (!c.expect.empty()) expected = parse_expect(c.expect);
  else if (!c.case_name.empty()) expected = require_case(c.case_name).expected_relation;

  const IsotypicDecomposition dec = sym2_decompose(rep);
  if (dec.components.size() != 2)
    throw UnsupportedError("Sym^2 has " + std::to_string(dec.components.size()) +
                           " isotypic components; the relation fit needs exactly two");
  const RelationFit fit = fit_relation(rep, dec, c.samples, static_cast<std::uint64_t>(c.seed));
  std::optional<double> oos;
  if (fit.found())
    oos = validate_relation(fit, rep, dec, case_tol::out_of_sample_points,
                            static_cast<std::uint64_t>(c.seed) + seed_offset::out_of_sample);

  CheckList checks;
  checks.equal("relation_nullity", fit.nullity, 1);
  json report = report_header(c);
  report["decomposition"] = decomposition_json(dec);
  report["relation"] = relation_json(fit, expected, oos);
  if (fit.found()) {
    checks.less("relation_out_of_sample_residual", *oos, case_tol::out_of_sample);
    if (expected) {
      const double dev = relation_deviation(fit, *expected);
      report["relation"]["deviation"] = dev;
      checks.add({"relation_ratios", json(*expected), fit.integers ? json(*fit.integers) : json(fit.ratios),
                  dev < case_tol::relation});
    }
  }
  attach_checks(report, checks);
  emit(c, report, out);
  return checks.passed() ? ok : expectation_failed;
}

inline int cmd_find_flat(const RunConfig &c, std::ostream &out) {
  std::string label = c.invariant;
  std::optional<int> expected_stab;
  if (!c.case_name.empty()) {
    const CaseSpec spec = require_case(c.case_name);
    if (!spec.invariant) throw UnsupportedError("no invariant registered for this representation");
    if (label.empty()) label = *spec.invariant;
    expected_stab = spec.expected_flat_stabilizer_dim;
  }
  if (label.empty()) throw PreconditionError("find-flat with --rep requires --invariant");
  const Invariant inv = Invariant::from_label(label);
  const Representation rep = input_rep(c);

  OptimizerOptions opt;
  opt.starts = c.starts;
  opt.seed = static_cast<std::uint64_t>(c.seed);
  opt.tol = c.tol;
  const FlatSearchResult r = find_flat(rep, inv, opt);

  CheckList checks;
  json report = report_header(c);
  report["invariant"] = inv.label();
  report["flat_direction_found"] = r.found;
  report["flat"] = flat_json(r);
  checks.flag("flat_found", r.found);
  if (r.found) {
    checks.less("flat_d_sup_norm", r.d_sup_norm, case_tol::d_sup);
    checks.less("flat_proportionality_residual", r.proportionality_residual / r.gradient_norm,
                case_tol::proportionality);
    checks.less("flat_k_consistency", std::abs(r.k_fit - r.k) / std::abs(r.k), case_tol::k_consistency);
    if (expected_stab) checks.equal("flat_stabilizer_dim", r.stabilizer_dim, *expected_stab);
    if (inv.degree() != 2) {
      const Point unit = scale_to_unit_k(inv, r.point);
      report["flat"]["unit_k_point"] = vector_to_json(unit);
      report["flat"]["unit_k"] = complex_to_json(proportionality_check(inv, unit).k);
    }
    if (inv.kind() == InvariantKind::bifund_det) {
      const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(rep.dim))));
      const RealVector sv = bifundamental_matrix(r.point, n, n).jacobiSvd().singularValues();
      report["flat"]["singular_values"] = std::vector<double>(sv.data(), sv.data() + sv.size());
      checks.less("flat_singular_values", (sv.array() - 1.0 / std::sqrt(double(n))).abs().maxCoeff(),
                  case_tol::singular_values);
    }
  }
  attach_checks(report, checks);
  emit(c, report, out);
  return checks.passed() ? ok : expectation_failed;
}

inline int cmd_export_rep(const RunConfig &c, std::ostream &out) {
  if (c.case_name.empty()) throw PreconditionError("export-rep requires --case");
  const Representation rep = require_case(c.case_name).build();
  const std::string text = rep_to_json(rep).dump() + "\n";
  if (c.output.empty()) out << text;
  else write_atomic(c.output, text);
  return ok;
}

inline int run_cli(std::vector<std::string> args, std::ostream &out = std::cout,
                   std::ostream &err = std::cerr) {
  CLI::App app{"D-flat direction finder and representation checks", "dflat"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&cfg](CLI::App *sub) {
    sub->add_option("--seed", cfg.seed, "base RNG seed")->envname("DFLAT_SEED");
    sub->add_option("--starts", cfg.starts, "optimizer restarts");
    sub->add_option("--tol", cfg.tol, "optimizer gradient tolerance");
    sub->add_option("--samples", cfg.samples, "relation-fit sample points");
    sub->add_option("--output,-o", cfg.output, "report path (stdout when omitted)");
  };

  auto *catalog = app.add_subcommand("catalog", "built-in cases");
  catalog->require_subcommand(1);
  auto *list = catalog->add_subcommand("list", "print the case table");
  auto *run = catalog->add_subcommand("run", "run every check of one case");
  run->add_option("--case", cfg.case_name, "case name")->required();
  common(run);

  auto *verify = app.add_subcommand("verify-relations", "fit the quartic relation");
  verify->add_option("--case", cfg.case_name, "case name");
  verify->add_option("--rep", cfg.rep_path, "representation JSON file");
  verify->add_option("--expect", cfg.expect, "expected integer triple c1,c2,c3");
  common(verify);

  auto *flat = app.add_subcommand("find-flat", "search for a D-flat point");
  flat->add_option("--case", cfg.case_name, "case name");
  flat->add_option("--rep", cfg.rep_path, "representation JSON file");
  flat->add_option("--invariant", cfg.invariant, "invariant label, e.g. det_sym3 or bifund_det(3)");
  common(flat);

  auto *exporter = app.add_subcommand("export-rep", "write a case's representation as JSON");
  exporter->add_option("--case", cfg.case_name, "case name")->required();
  exporter->add_option("--output,-o", cfg.output, "output path (stdout when omitted)");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  try {
    if (*list) return cmd_catalog_list(out);
    check_config(cfg);
    if (*run) return cfg.command = "catalog run", cmd_catalog_run(cfg, out);
    if (*verify) return cfg.command = "verify-relations", cmd_verify_relations(cfg, out);
    if (*flat) return cfg.command = "find-flat", cmd_find_flat(cfg, out);
    if (*exporter) return cfg.command = "export-rep", cmd_export_rep(cfg, out);
  } catch (const UnsupportedError &e) {
    err << "dflat: unsupported: " << e.what() << "\n";
    return unsupported;
  } catch (const PreconditionError &e) {
    err << "dflat: " << e.what() << "\n";
    return usage;
  } catch (const std::exception &e) {
    err << "dflat: " << e.what() << "\n";
    return expectation_failed;
  }
  return usage;
}

inline int run_cli(int argc, char **argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(std::move(args));
}

} // namespace dflat::cli
