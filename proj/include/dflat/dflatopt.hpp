#pragma once

// D-terms, the objective G = |F(z)|^2 / N(z)^n, multistart Riemannian
// gradient ascent on the unit sphere, the proportionality certificate
// dF/dz = k z* with k = n F / N, and the stabilizer dimension of a point.

#include "dflat/invariants.hpp"
#include "dflat/numcore.hpp"
#include "dflat/representation.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace dflat {

/// D_alpha = z^dagger T_alpha z, with factor bookkeeping for product groups.
struct DVector {
  RealVector components;
  std::vector<Factor> factors;

  RealVector slice(std::size_t factor) const {
    const Factor &f = factors.at(factor);
    return components.segment(static_cast<Eigen::Index>(f.begin), static_cast<Eigen::Index>(f.size()));
  }
  /// (D.D) restricted to one factor.
  double factor_squared(std::size_t factor) const { return slice(factor).squaredNorm(); }
  /// sum over factors of (D.D)_factor / g_factor^2.
  double weighted_squared() const {
    double s = 0.0;
    for (std::size_t f = 0; f < factors.size(); ++f)
      s += factor_squared(f) / (factors[f].coupling * factors[f].coupling);
    return s;
  }
  double squared() const { return components.squaredNorm(); }
  double sup_norm() const { return components.size() ? components.cwiseAbs().maxCoeff() : 0.0; }
};

inline void require_dim(const Representation &rep, const Point &z, const char *what) {
  if (z.size() != rep.dim)
    throw PreconditionError(std::string(what) + ": point has dimension " + std::to_string(z.size()) +
                            ", representation has " + std::to_string(rep.dim));
}

inline DVector d_vector(const Representation &rep, const Point &z) {
  require_dim(rep, z, "d_vector");
  DVector d{RealVector(static_cast<Eigen::Index>(rep.generators.size())), rep.factors};
  for (std::size_t a = 0; a < rep.generators.size(); ++a)
    d.components(static_cast<Eigen::Index>(a)) = z.dot(rep.generators[a] * z).real();
  return d;
}

/// N(z) = sum_a z_a z_a*.
inline double norm_n(const Point &z) { return z.squaredNorm(); }

/// G(z) = |F(z)|^2 / N(z)^n; homogeneous of degree 0.
inline double g_value(const Invariant &inv, const Point &z) {
  const double n = norm_n(z);
  if (!(n > 0.0)) throw PreconditionError("g_value: z = 0 lies outside the domain");
  return std::norm(inv.evaluate(z)) / std::pow(n, inv.degree());
}

// ---------------------------------------------------------------------------
// Objectives and the optimizer
//
// Gradients of real functions of z are packed as complex vectors
// g = df/dx + i df/dy, so that df = Re <g, dz>.
// ---------------------------------------------------------------------------

struct ObjectiveValue {
  double value = 0.0;
  ComplexVector gradient;
};

using Objective = std::function<ObjectiveValue(const Point &)>;

inline Objective g_objective(const Invariant &inv) {
  return [inv](const Point &z) {
    const double nz = norm_n(z);
    const int deg = inv.degree();
    const cplx f = inv.evaluate(z);
    const ComplexVector df = inv.gradient(z);
    const double nn = std::pow(nz, deg);
    const double value = std::norm(f) / nn;
    ComplexVector grad = (2.0 * f) * df.conjugate() / nn - (2.0 * deg * value / nz) * z;
    return ObjectiveValue{value, std::move(grad)};
  };
}

/// -(D.D) summed over the selected factors (all when empty), unweighted.
inline Objective neg_d_squared_objective(const Representation &rep,
                                         std::vector<std::size_t> selected = {}) {
  std::vector<std::size_t> gens;
  if (selected.empty())
    for (std::size_t a = 0; a < rep.generators.size(); ++a) gens.push_back(a);
  else
    for (std::size_t f : selected)
      for (std::size_t a = rep.factors.at(f).begin; a < rep.factors.at(f).end; ++a) gens.push_back(a);
  return [rep, gens](const Point &z) {
    ObjectiveValue out{0.0, ComplexVector::Zero(z.size())};
    for (std::size_t a : gens) {
      const ComplexVector tz = rep.generators[a] * z;
      const double d = z.dot(tz).real();
      out.value -= d * d;
      out.gradient -= (4.0 * d) * tz;
    }
    return out;
  };
}

struct OptimizerOptions {
  int starts = 16;
  int max_iterations = 5000;
  double tol = 1e-12;          // on the Riemannian gradient norm
  std::uint64_t seed = 42;     // start i uses seed + i
  double min_value = -std::numeric_limits<double>::infinity(); // runs ending below are failed
  bool record_trace = false;
};

struct StartRecord {
  int index = 0;
  double value = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  bool discarded = false;
  std::string note;
  Point point;               // final iterate
  std::vector<double> trace; // accepted objective values, when recorded
};

struct OptimizationResult {
  Point point;
  double value = -std::numeric_limits<double>::infinity();
  double gradient_norm = 0.0;
  int best_start = -1;
  int starts_used = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<StartRecord> runs;

  bool found() const { return best_start >= 0; }
};

namespace detail {

// Accepted steps in a row without a strict increase before a run stops.
inline constexpr int kMaxFlatSteps = 50;

inline ComplexVector riemannian_gradient(const Point &z, const ComplexVector &g) {
  return g - z.dot(g).real() * z;
}

inline bool finite(const ObjectiveValue &v) {
  return std::isfinite(v.value) && v.gradient.allFinite();
}

inline StartRecord ascend(const Objective &obj, Point &z, const OptimizerOptions &opt, int index) {
  StartRecord rec;
  rec.index = index;
  ObjectiveValue cur = obj(z);
  if (!finite(cur)) {
    rec.discarded = true;
    rec.note = "non-finite objective at start";
    return rec;
  }
  if (opt.record_trace) rec.trace.push_back(cur.value);
  ComplexVector rg = riemannian_gradient(z, cur.gradient);
  double step = 1.0;
  int it = 0;
  int flat_steps = 0;
  for (; it < opt.max_iterations; ++it) {
    const double gn = rg.norm();
    if (gn < opt.tol) {
      rec.converged = true;
      break;
    }
    bool accepted = false;
    Point trial;
    ObjectiveValue next;
    double t = step;
    for (int halving = 0; halving < 80; ++halving, t *= 0.5) {
      trial = z + t * rg;
      trial /= trial.norm();
      next = obj(trial);
      if (finite(next) && next.value >= cur.value) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      rec.note = "line search stalled";
      break;
    }
    const ComplexVector rg_next = riemannian_gradient(trial, next.gradient);
    // Barzilai-Borwein estimate for the next trial step.
    const ComplexVector s = trial - z;
    const ComplexVector y = rg_next - rg;
    const double sy = s.dot(y).real();
    const double ss = s.squaredNorm();
    step = (std::abs(sy) > 0.0) ? std::clamp(ss / std::abs(sy), 1e-10, 1e10) : 2.0 * t;
    flat_steps = next.value > cur.value ? 0 : flat_steps + 1;
    z = trial;
    cur = next;
    rg = rg_next;
    if (opt.record_trace) rec.trace.push_back(cur.value);
    if (flat_steps >= kMaxFlatSteps) {
      rec.note = "no progress at rounding floor";
      ++it;
      break;
    }
  }
  rec.iterations = it;
  rec.value = cur.value;
  rec.gradient_norm = rg.norm();
  return rec;
}

} // namespace detail

/// Projected gradient ascent on the real 2d-sphere N(z) = 1 from
/// `opt.starts` seeded random starts; returns the best run. Values within
/// 1e-12 * max(1, |best|) of the best count as ties and go to the lowest start
/// index, so the result does not depend on evaluation order or rounding.
inline OptimizationResult maximize_objective(const Objective &obj, Eigen::Index d,
                                             const OptimizerOptions &opt) {
  if (opt.starts < 1) throw PreconditionError("maximize_objective: starts must be >= 1");
  if (!(opt.tol > 0.0)) throw PreconditionError("maximize_objective: tol must be positive");
  OptimizationResult result;
  for (int s = 0; s < opt.starts; ++s) {
    Point z = random_unit_point(d, opt.seed + static_cast<std::uint64_t>(s));
    StartRecord rec = detail::ascend(obj, z, opt, s);
    if (!rec.discarded && rec.value < opt.min_value) {
      rec.discarded = true;
      rec.note = "converged below minimum value";
    }
    result.iterations += rec.iterations;
    if (!rec.discarded) ++result.starts_used;
    rec.point = std::move(z);
    result.runs.push_back(std::move(rec));
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto &r : result.runs)
    if (!r.discarded) best = std::max(best, r.value);
  if (result.starts_used == 0) return result;
  const double tie = 1e-12 * std::max(1.0, std::abs(best));
  for (const auto &r : result.runs) {
    if (r.discarded || r.value < best - tie) continue;
    result.best_start = r.index;
    result.value = r.value;
    result.point = r.point;
    result.gradient_norm = r.gradient_norm;
    result.converged = r.converged;
    break;
  }
  return result;
}

/// Unit norm, first significant coordinate real and positive.
inline Point canonicalize(const Point &z) {
  const double n = z.norm();
  if (!(n > 0.0)) throw PreconditionError("canonicalize: z = 0");
  Point u = z / n;
  const double cut = 1e-8 * u.cwiseAbs().maxCoeff();
  for (Eigen::Index a = 0; a < u.size(); ++a)
    if (std::abs(u(a)) > cut) {
      u *= std::conj(u(a)) / std::abs(u(a));
      u(a) = std::abs(u(a));
      break;
    }
  return u;
}

struct Proportionality {
  cplx k;                 // n F(z) / N(z)
  cplx k_fit;             // least-squares constant, <z*, grad F> / N
  double residual = 0.0;  // |grad F - k z*|
  double gradient_norm = 0.0;

  bool certified(double tol) const {
    return residual < tol * gradient_norm && std::abs(k) > tol;
  }
};

inline Proportionality proportionality_check(const Invariant &inv, const Point &z) {
  const double nz = norm_n(z);
  if (!(nz > 0.0)) throw PreconditionError("proportionality_check: z = 0");
  const ComplexVector g = inv.gradient(z);
  Proportionality p;
  p.k = static_cast<double>(inv.degree()) * inv.evaluate(z) / nz;
  p.k_fit = cplx(g.transpose() * z) / nz;
  p.residual = (g - p.k * z.conjugate()).norm();
  p.gradient_norm = g.norm();
  return p;
}

/// dim {c : (sum_alpha c_alpha T_alpha) z = 0}, from the real rank of the
/// stacked [Re; Im] columns T_alpha z.
inline int stabilizer_dim(const Representation &rep, const Point &z, double tolerance = 1e-8) {
  require_dim(rep, z, "stabilizer_dim");
  if (!(z.norm() > 0.0)) throw PreconditionError("stabilizer_dim: z = 0");
  const Eigen::Index d = rep.dim;
  const auto m = static_cast<Eigen::Index>(rep.generators.size());
  RealMatrix cols(2 * d, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    const ComplexVector tz = rep.generators[static_cast<std::size_t>(a)] * z;
    cols.col(a).head(d) = tz.real();
    cols.col(a).tail(d) = tz.imag();
  }
  return static_cast<int>(m - numerical_rank(cols, tolerance));
}

/// Certified end points of a flat search grouped by (stabilizer_dim, |k|).
struct FlatOrbit {
  int stabilizer_dim = 0;
  double k_abs = 0.0;
  double g_value = 0.0;
  int first_start = 0;
  int count = 0;
};

struct FlatSearchResult {
  Point point; // canonicalized, N = 1
  double g_value = 0.0;
  cplx k;
  cplx k_fit;
  double proportionality_residual = 0.0;
  double gradient_norm = 0.0;
  double d_sup_norm = 0.0;
  int stabilizer_dim = 0;
  int starts_used = 0;
  int iterations = 0;
  bool converged = false;
  bool found = false;
  std::vector<FlatOrbit> orbits; // every distinct certified run end point
  OptimizationResult search;

  bool certified(double tol = 1e-8) const {
    return found && proportionality_residual < tol * gradient_norm && std::abs(k) > tol;
  }
};

/// Groups the certified end points of all kept runs. Two points share an
/// orbit label when their stabilizer dimensions agree and |k| agrees to 1e-6
/// relative; this distinguishes orbits without claiming to enumerate them.
inline std::vector<FlatOrbit> certified_orbits(const Representation &rep, const Invariant &inv,
                                               const OptimizationResult &search, double tol = 1e-8) {
  std::vector<FlatOrbit> out;
  for (const auto &run : search.runs) {
    if (run.discarded) continue;
    const Point z = canonicalize(run.point);
    const Proportionality p = proportionality_check(inv, z);
    if (!p.certified(tol)) continue;
    const int stab = stabilizer_dim(rep, z);
    const double k = std::abs(p.k);
    auto same = [&](const FlatOrbit &o) {
      return o.stabilizer_dim == stab && std::abs(o.k_abs - k) <= 1e-6 * std::max(k, o.k_abs);
    };
    auto it = std::find_if(out.begin(), out.end(), same);
    if (it != out.end()) {
      ++it->count;
      continue;
    }
    out.push_back({stab, k, g_value(inv, z), run.index, 1});
  }
  return out;
}

/// Maximizes G over the unit sphere and certifies the maximizer. Runs that
/// end on the F = 0 stratum (G < 1e-12) are excluded.
inline FlatSearchResult find_flat(const Representation &rep, const Invariant &inv,
                                  OptimizerOptions opt = {}) {
  if (rep.dim != inv.dim())
    throw PreconditionError("find_flat: invariant " + inv.label() + " expects dimension " +
                            std::to_string(inv.dim()) + ", representation has " +
                            std::to_string(rep.dim));
  opt.min_value = std::max(opt.min_value, 1e-12);
  FlatSearchResult r;
  r.search = maximize_objective(g_objective(inv), rep.dim, opt);
  r.starts_used = r.search.starts_used;
  r.iterations = r.search.iterations;
  r.converged = r.search.converged;
  if (!r.search.found()) return r;
  r.found = true;
  r.point = canonicalize(r.search.point);
  r.g_value = g_value(inv, r.point);
  const Proportionality p = proportionality_check(inv, r.point);
  r.k = p.k;
  r.k_fit = p.k_fit;
  r.proportionality_residual = p.residual;
  r.gradient_norm = p.gradient_norm;
  r.d_sup_norm = d_vector(rep, r.point).sup_norm();
  r.stabilizer_dim = stabilizer_dim(rep, r.point);
  r.orbits = certified_orbits(rep, inv, r.search);
  return r;
}

/// Rescales and rephases a point so that k = n F / N becomes 1. Since
/// k(lambda e^{i theta} z) = lambda^{n-2} e^{i n theta} k(z), this needs n != 2.
inline Point scale_to_unit_k(const Invariant &inv, const Point &z) {
  const Proportionality p = proportionality_check(inv, z);
  const int n = inv.degree();
  if (n == 2 || std::abs(p.k) == 0.0)
    throw PreconditionError("scale_to_unit_k: needs degree != 2 and k != 0");
  const double lambda = std::pow(std::abs(p.k), -1.0 / (n - 2));
  const double theta = -std::arg(p.k) / n;
  return lambda * std::polar(1.0, theta) * z;
}

} // namespace dflat
