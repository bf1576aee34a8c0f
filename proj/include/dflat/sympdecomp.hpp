#pragma once

// Casimir isotypic decomposition of Sym^2(V) and of V (x) V*, the quartic
// invariants I_l = |P_l (z (x) z)|^2 and I_adj, fitting of the linear
// relation c1 I_low + c2 I_adj = c3 N^2, and complementarity scans.

#include "dflat/dflatopt.hpp"
#include "dflat/invariants.hpp"
#include "dflat/numcore.hpp"
#include "dflat/repkit.hpp"
#include "dflat/representation.hpp"

#include <array>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace dflat {

struct IsotypicComponent {
  double casimir = 0.0;
  int dim = 0;
  ComplexMatrix basis; // orthonormal columns spanning the component

  ComplexMatrix projector() const { return basis * basis.adjoint(); }
};

struct IsotypicDecomposition {
  std::string space_label; // "sym2" or "operator"
  Eigen::Index space_dim = 0;
  Eigen::Index rep_dim = 0;
  std::vector<IsotypicComponent> components; // ascending Casimir

  std::vector<int> dims() const {
    std::vector<int> out;
    for (const auto &c : components) out.push_back(c.dim);
    return out;
  }
  /// Index of the lowest-dimensional component (first one on ties).
  std::size_t lowest_dim_index() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < components.size(); ++i)
      if (components[i].dim < components[best].dim) best = i;
    return best;
  }
};

/// Quadratic Casimir of T (x) 1 + 1 (x) T on the orthonormal Sym^2 or
/// Lambda^2 basis, summed over all generators of all factors.
inline ComplexMatrix pair_casimir(const Representation &rep, bool symmetric) {
  const Eigen::Index d = rep.dim;
  const Eigen::Index d2 = d * d;
  ComplexMatrix c = ComplexMatrix::Zero(d, d);
  ComplexMatrix k = ComplexMatrix::Zero(d2, d2);
  for (const auto &t : rep.generators) {
    c += t * t;
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index cc = 0; cc < d; ++cc) {
        const cplx tac = t(a, cc);
        if (tac == cplx(0.0)) continue;
        k.block(a * d, cc * d, d, d) += (2.0 * tac) * t;
      }
  }
  for (Eigen::Index a = 0; a < d; ++a) {
    k.block(a * d, a * d, d, d) += c;
    for (Eigen::Index cc = 0; cc < d; ++cc) k.block(a * d, cc * d, d, d).diagonal().array() += c(a, cc);
  }
  // Basis vectors as (flat tensor index, coefficient) terms.
  struct Term {
    Eigen::Index idx;
    double coef;
  };
  std::vector<std::vector<Term>> basis;
  const double s = 1.0 / std::numbers::sqrt2;
  for (const auto &[i, j] : pairs::list(d, symmetric)) {
    if (i == j)
      basis.push_back({{i * d + i, 1.0}});
    else
      basis.push_back({{i * d + j, s}, {j * d + i, symmetric ? s : -s}});
  }
  const auto n = static_cast<Eigen::Index>(basis.size());
  ComplexMatrix out(n, n);
  for (Eigen::Index p = 0; p < n; ++p)
    for (Eigen::Index q = 0; q < n; ++q) {
      cplx v = 0.0;
      for (const Term &x : basis[static_cast<std::size_t>(p)])
        for (const Term &y : basis[static_cast<std::size_t>(q)]) v += x.coef * y.coef * k(x.idx, y.idx);
      out(p, q) = v;
    }
  return 0.5 * (out + out.adjoint());
}

/// Splits a Hermitian Casimir matrix into eigenvalue clusters. Adjacent
/// eigenvalues closer than 0.1 * tol (relative) share a cluster; farther than
/// tol start a new one; anything in between is ambiguous and rejected.
inline std::vector<IsotypicComponent> cluster_casimir(const ComplexMatrix &casimir, double tol) {
  const Spectrum sp = hermitian_eig(casimir);
  const RealVector &w = sp.eigenvalues;
  const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
  std::vector<std::pair<Eigen::Index, Eigen::Index>> ranges; // [begin, end)
  Eigen::Index begin = 0;
  for (Eigen::Index i = 1; i <= w.size(); ++i) {
    if (i < w.size()) {
      const double gap = (w(i) - w(i - 1)) / scale;
      if (gap < 0.1 * tol) continue;
      if (gap < tol)
        throw PreconditionError("sym2_decompose: eigenvalues " + detail::fmt_double(w(i - 1)) +
                                " and " + detail::fmt_double(w(i)) +
                                " are neither clustered nor separated at tolerance " +
                                detail::fmt_double(tol) + "; choose the tolerance manually");
    }
    ranges.push_back({begin, i});
    begin = i;
  }
  std::vector<IsotypicComponent> out;
  for (const auto &[b, e] : ranges) {
    IsotypicComponent comp;
    comp.casimir = w.segment(b, e - b).mean();
    comp.dim = static_cast<int>(e - b);
    comp.basis = sp.eigenvectors.middleCols(b, e - b);
    out.push_back(std::move(comp));
  }
  return out;
}

inline IsotypicDecomposition sym2_decompose(const Representation &rep, double tol = 1e-8) {
  if (rep.dim < 1 || rep.generators.empty())
    throw PreconditionError("sym2_decompose: empty representation");
  IsotypicDecomposition dec;
  dec.space_label = "sym2";
  dec.rep_dim = rep.dim;
  dec.space_dim = pairs::count(rep.dim, true);
  dec.components = cluster_casimir(pair_casimir(rep, true), tol);
  return dec;
}

/// Decomposition of the operator space V (x) V* under X -> [T, X].
/// Basis vectors are column-major vec(X).
inline IsotypicDecomposition operator_decompose(const Representation &rep, double tol = 1e-8) {
  IsotypicDecomposition dec;
  dec.space_label = "operator";
  dec.rep_dim = rep.dim;
  dec.space_dim = rep.dim * rep.dim;
  dec.components = cluster_casimir(operator_space_casimir(rep), tol);
  return dec;
}

/// I_l = |P_l (z (x) z)|^2 in the orthonormal Sym^2 basis.
inline double quartic_invariant(const IsotypicDecomposition &dec, std::size_t component,
                                const Point &z) {
  if (dec.space_label != "sym2") throw PreconditionError("quartic_invariant: needs a sym2 decomposition");
  if (component >= dec.components.size())
    throw PreconditionError("quartic_invariant: component index " + std::to_string(component) +
                            " out of range");
  if (z.size() != dec.rep_dim) throw PreconditionError("quartic_invariant: dimension mismatch");
  return (dec.components[component].basis.adjoint() * pairs::square(z)).squaredNorm();
}

/// Orthogonal projection of z z^dagger onto the real span of the generators:
/// I_adj = b^T G^{-1} b with b_alpha = z^dagger T_alpha z and G the trace Gram
/// matrix. For orthogonal generators this is sum_alpha D_alpha^2 / Tr(T_alpha^2).
class AdjointProjection {
public:
  explicit AdjointProjection(const Representation &rep)
      : gens_(rep.generators), gram_(trace_gram(rep.generators)), dim_(rep.dim) {}

  double value(const Point &z) const {
    const RealVector b = d_terms(z);
    return b.dot(gram_.solve(b));
  }

  /// Packed real gradient (see dflatopt.hpp): 4 sum_alpha (G^{-1} b)_alpha T_alpha z.
  ObjectiveValue value_and_gradient(const Point &z) const {
    const RealVector b = d_terms(z);
    const RealVector c = gram_.solve(b);
    ObjectiveValue out{b.dot(c), ComplexVector::Zero(z.size())};
    for (std::size_t a = 0; a < gens_.size(); ++a)
      out.gradient += (4.0 * c(static_cast<Eigen::Index>(a))) * (gens_[a] * z);
    return out;
  }

  Eigen::Index dim() const { return dim_; }

private:
  RealVector d_terms(const Point &z) const {
    if (z.size() != dim_) throw PreconditionError("adjoint_invariant: dimension mismatch");
    RealVector b(static_cast<Eigen::Index>(gens_.size()));
    for (std::size_t a = 0; a < gens_.size(); ++a)
      b(static_cast<Eigen::Index>(a)) = z.dot(gens_[a] * z).real();
    return b;
  }

  std::vector<ComplexMatrix> gens_;
  Eigen::LDLT<RealMatrix> gram_;
  Eigen::Index dim_;
};

inline double adjoint_invariant(const Representation &rep, const Point &z) {
  return AdjointProjection(rep).value(z);
}

/// I_l / N^2 with its packed gradient.
inline Objective quartic_ratio_objective(const IsotypicDecomposition &dec, std::size_t component) {
  const ComplexMatrix basis = dec.components.at(component).basis;
  const Eigen::Index d = dec.rep_dim;
  return [basis, d](const Point &z) {
    const double nz = norm_n(z);
    const ComplexVector pw = basis * (basis.adjoint() * pairs::square(z));
    const double i = pw.squaredNorm();
    const ComplexMatrix u = pairs::to_tensor(pw, d, true);
    ComplexVector grad = (4.0 / (nz * nz)) * (u * z.conjugate()) - (4.0 * i / (nz * nz * nz)) * z;
    return ObjectiveValue{i / (nz * nz), std::move(grad)};
  };
}

/// I_adj / N^2 with its packed gradient.
inline Objective adjoint_ratio_objective(const Representation &rep) {
  auto proj = std::make_shared<AdjointProjection>(rep);
  return [proj](const Point &z) {
    const double nz = norm_n(z);
    ObjectiveValue v = proj->value_and_gradient(z);
    v.gradient = v.gradient / (nz * nz) - (4.0 * v.value / (nz * nz * nz)) * z;
    v.value /= nz * nz;
    return v;
  };
}

// ---------------------------------------------------------------------------
// Relation fitting
// ---------------------------------------------------------------------------

struct RelationFit {
  std::array<double, 3> coefficients{}; // unit norm, c3 > 0
  std::array<double, 3> ratios{};       // c / c3
  std::optional<std::array<long, 3>> integers;
  int nullity = 0;
  double max_residual = 0.0;
  int samples = 0;
  std::size_t low_component = 0;

  bool found() const { return nullity == 1; }
};

/// Smallest-denominator integer triple proportional to `ratios`
/// (ratios[2] == 1), denominators up to max_den.
inline std::optional<std::array<long, 3>> rationalize(const std::array<double, 3> &ratios,
                                                      long max_den = 1000, double tol = 1e-6) {
  for (long q = 1; q <= max_den; ++q) {
    std::array<long, 3> ints{};
    bool ok = true;
    for (std::size_t i = 0; i < 3 && ok; ++i) {
      const double x = q * ratios[i];
      ints[i] = std::lround(x);
      ok = std::abs(x - static_cast<double>(ints[i])) < tol * std::max(1.0, std::abs(x));
    }
    if (!ok) continue;
    long g = 0;
    for (long v : ints) g = std::gcd(g, std::labs(v));
    if (g > 1)
      for (long &v : ints) v /= g;
    return ints;
  }
  return std::nullopt;
}

inline double relation_residual(const std::array<double, 3> &c, double i_low, double i_adj,
                                double n2) {
  return std::abs(c[0] * i_low + c[1] * i_adj - c[2] * n2) / (c[2] * n2);
}

/// Fits c1 I_low + c2 I_adj = c3 N^2 over random unit points (sample i uses
/// seed + i). The relation exists and is unique when the sample matrix has a
/// one-dimensional nullspace; otherwise the fit carries the nullity and no
/// coefficients.
inline RelationFit fit_relation(const Representation &rep, const IsotypicDecomposition &dec,
                                int samples, std::uint64_t seed) {
  if (dec.components.size() != 2)
    throw PreconditionError("fit_relation: decomposition must have exactly two components, has " +
                            std::to_string(dec.components.size()));
  if (samples < 3) throw PreconditionError("fit_relation: need at least 3 samples");
  RelationFit fit;
  fit.samples = samples;
  fit.low_component = dec.lowest_dim_index();
  const AdjointProjection adj(rep);
  RealMatrix rows(samples, 3);
  for (int s = 0; s < samples; ++s) {
    const Point z = random_unit_point(rep.dim, seed + static_cast<std::uint64_t>(s));
    rows(s, 0) = quartic_invariant(dec, fit.low_component, z);
    rows(s, 1) = adj.value(z);
    rows(s, 2) = norm_n(z) * norm_n(z);
  }
  const RealMatrix null = real_nullspace(rows);
  fit.nullity = static_cast<int>(null.cols());
  if (fit.nullity != 1) return fit;
  RealVector v = null.col(0);
  v(2) = -v(2);
  if (v(2) < 0) v = -v;
  v.normalize();
  for (int i = 0; i < 3; ++i) fit.coefficients[static_cast<std::size_t>(i)] = v(i);
  for (int i = 0; i < 3; ++i) fit.ratios[static_cast<std::size_t>(i)] = v(i) / v(2);
  fit.integers = rationalize(fit.ratios);
  for (int s = 0; s < samples; ++s)
    fit.max_residual =
        std::max(fit.max_residual, relation_residual(fit.coefficients, rows(s, 0), rows(s, 1), rows(s, 2)));
  return fit;
}

/// Max relative residual of a fitted relation over fresh points.
inline double validate_relation(const RelationFit &fit, const Representation &rep,
                                const IsotypicDecomposition &dec, int samples, std::uint64_t seed) {
  if (!fit.found()) throw PreconditionError("validate_relation: no relation was fitted");
  const AdjointProjection adj(rep);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Point z = random_unit_point(rep.dim, seed + static_cast<std::uint64_t>(s));
    const double n = norm_n(z);
    worst = std::max(worst, relation_residual(fit.coefficients, quartic_invariant(dec, fit.low_component, z),
                                              adj.value(z), n * n));
  }
  return worst;
}

/// Largest relative deviation of the fitted ratios c_i / c3 from those of
/// an expected integer triple.
inline double relation_deviation(const RelationFit &fit, const std::array<long, 3> &expected) {
  double worst = 0.0;
  for (std::size_t i = 0; i < 2; ++i) {
    const double e = static_cast<double>(expected[i]) / static_cast<double>(expected[2]);
    worst = std::max(worst, std::abs(fit.ratios[i] - e) / std::abs(e));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Complementarity
// ---------------------------------------------------------------------------

struct ComplementarityReport {
  double low_max = 0.0;          // max of I_low / N^2
  double adj_at_low_max = 0.0;   // I_adj / N^2 at that argmax
  double adj_max = 0.0;          // max of I_adj / N^2
  double low_at_adj_max = 0.0;   // I_low / N^2 at that argmax
  Point argmax_low;
  Point argmax_adj;
  int stabilizer_at_low_max = 0;
  int stabilizer_at_adj_max = 0;
  std::optional<double> g_at_low_max;
  std::optional<double> g_max;
  std::optional<bool> low_max_is_g_max;
};

/// Maximizes I_low / N^2 and I_adj / N^2 separately and evaluates the other
/// term at each argmax. With an invariant, also checks whether the argmax of
/// I_low / N^2 maximizes G.
inline ComplementarityReport complementarity_scan(const Representation &rep,
                                                  const IsotypicDecomposition &dec,
                                                  const std::optional<Invariant> &inv, int starts,
                                                  std::uint64_t seed) {
  if (dec.components.size() != 2)
    throw PreconditionError("complementarity_scan: decomposition must have two components");
  const std::size_t low = dec.lowest_dim_index();
  OptimizerOptions opt;
  opt.starts = starts;
  opt.seed = seed;
  const AdjointProjection adj(rep);

  ComplementarityReport r;
  const auto low_run = maximize_objective(quartic_ratio_objective(dec, low), rep.dim, opt);
  r.argmax_low = canonicalize(low_run.point);
  r.low_max = quartic_invariant(dec, low, r.argmax_low);
  r.adj_at_low_max = adj.value(r.argmax_low);
  r.stabilizer_at_low_max = stabilizer_dim(rep, r.argmax_low);

  const auto adj_run = maximize_objective(adjoint_ratio_objective(rep), rep.dim, opt);
  r.argmax_adj = canonicalize(adj_run.point);
  r.adj_max = adj.value(r.argmax_adj);
  r.low_at_adj_max = quartic_invariant(dec, low, r.argmax_adj);
  r.stabilizer_at_adj_max = stabilizer_dim(rep, r.argmax_adj);

  if (inv) {
    const FlatSearchResult flat = find_flat(rep, *inv, opt);
    r.g_at_low_max = g_value(*inv, r.argmax_low);
    if (flat.found) {
      r.g_max = flat.g_value;
      r.low_max_is_g_max = std::abs(*r.g_at_low_max - flat.g_value) < 1e-8 * flat.g_value;
    }
  }
  return r;
}

} // namespace dflat
