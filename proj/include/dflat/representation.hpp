#pragma once

#include "dflat/numcore.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace dflat {

/// One simple factor of a (possibly product) group: the half-open range of
/// generator indices that belong to it and its gauge coupling.
struct Factor {
  std::string label;
  std::size_t begin = 0;
  std::size_t end = 0;
  double coupling = 1.0;

  std::size_t size() const { return end - begin; }
};

/// A unitary representation given by Hermitian generators T_alpha acting on
/// C^dim. Group elements are exp(i theta T).
struct Representation {
  std::string group_label;
  Eigen::Index dim = 0;
  std::vector<ComplexMatrix> generators;
  std::vector<Factor> factors;

  std::size_t num_generators() const { return generators.size(); }
};

inline std::vector<Factor> single_factor(const std::string &label, std::size_t count) {
  return {Factor{label, 0, count, 1.0}};
}

/// Gram matrix Re Tr(T_a T_b) of a set of Hermitian matrices.
inline RealMatrix trace_gram(const std::vector<ComplexMatrix> &gens) {
  const auto m = static_cast<Eigen::Index>(gens.size());
  RealMatrix g(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = a; b < m; ++b) {
      g(a, b) = trace_inner(gens[a], gens[b]).real();
      g(b, a) = g(a, b);
    }
  return g;
}

/// Symmetric (Loewdin) orthonormalization so that Tr(T_a T_b) = kappa delta_ab.
/// A set that is already orthogonal with uniform traces is only rescaled.
inline std::vector<ComplexMatrix> orthonormalize(const std::vector<ComplexMatrix> &gens,
                                                 double kappa) {
  if (gens.empty()) return {};
  const RealMatrix gram = trace_gram(gens);
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(gram);
  const RealVector &w = es.eigenvalues();
  if (w(0) <= 1e-12 * w(w.size() - 1))
    throw PreconditionError("orthonormalize: generators are linearly dependent");
  const RealMatrix inv_sqrt =
      es.eigenvectors() * w.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
  std::vector<ComplexMatrix> out(gens.size(),
                                 ComplexMatrix::Zero(gens[0].rows(), gens[0].cols()));
  const double s = std::sqrt(kappa);
  for (std::size_t b = 0; b < gens.size(); ++b) {
    for (std::size_t a = 0; a < gens.size(); ++a) {
      const double c = inv_sqrt(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (c != 0.0) out[b] += (s * c) * gens[a];
    }
    out[b] = 0.5 * (out[b] + out[b].adjoint()).eval();
  }
  return out;
}

/// Mean of Tr(T_a T_a) over one factor: the Dynkin index kappa when the
/// factor is orthonormalized.
inline double dynkin_index(const Representation &rep, const Factor &f) {
  double sum = 0.0;
  for (std::size_t a = f.begin; a < f.end; ++a)
    sum += trace_inner(rep.generators[a], rep.generators[a]).real();
  return f.size() == 0 ? 0.0 : sum / static_cast<double>(f.size());
}

/// Re-orthonormalize every factor at its own mean trace. This only rescales
/// generators that are already orthogonal.
inline void orthonormalize_factors(Representation &rep) {
  for (const Factor &f : rep.factors) {
    std::vector<ComplexMatrix> block(rep.generators.begin() + static_cast<long>(f.begin),
                                     rep.generators.begin() + static_cast<long>(f.end));
    const double kappa = dynkin_index(rep, f);
    block = orthonormalize(block, kappa);
    std::copy(block.begin(), block.end(), rep.generators.begin() + static_cast<long>(f.begin));
  }
}

/// Largest closure residual: i[T_a, T_b] is fitted by least squares onto the
/// real span of the generators; the residual is measured relative to
/// |T_a|_F |T_b|_F.
inline double closure_residual(const std::vector<ComplexMatrix> &gens) {
  const auto m = static_cast<Eigen::Index>(gens.size());
  if (m == 0) return 0.0;
  const RealMatrix gram = trace_gram(gens);
  const Eigen::LDLT<RealMatrix> solver(gram);
  RealVector norms(m);
  for (Eigen::Index a = 0; a < m; ++a) norms(a) = std::sqrt(gram(a, a));
  double worst = 0.0;
  RealVector rhs(m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = a + 1; b < m; ++b) {
      const ComplexMatrix comm = cplx(0, 1) * (gens[a] * gens[b] - gens[b] * gens[a]);
      for (Eigen::Index c = 0; c < m; ++c) rhs(c) = trace_inner(gens[c], comm).real();
      const RealVector coef = solver.solve(rhs);
      ComplexMatrix resid = comm;
      for (Eigen::Index c = 0; c < m; ++c)
        if (coef(c) != 0.0) resid -= coef(c) * gens[c];
      worst = std::max(worst, resid.norm() / (norms(a) * norms(b)));
    }
  return worst;
}

/// Quadratic Casimir of the action X -> [T, X] on operators (V (x) V*), as a
/// dim^2 x dim^2 matrix in column-major vec(X) coordinates. Its kernel is the
/// commutant of the generators.
inline ComplexMatrix operator_space_casimir(const Representation &rep) {
  const Eigen::Index d = rep.dim;
  const Eigen::Index d2 = d * d;
  // ad(T) = I (x) T - T^T (x) I is Hermitian for Hermitian T, so
  // sum ad(T)^2 = I (x) C + C^T (x) I - 2 sum T^T (x) T.
  ComplexMatrix casimir = ComplexMatrix::Zero(d, d);
  for (const ComplexMatrix &t : rep.generators) casimir += t * t;
  ComplexMatrix super = ComplexMatrix::Zero(d2, d2);
  for (const ComplexMatrix &t : rep.generators)
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) {
        const cplx tij = t(j, i); // (T^T)_{ij}
        if (tij != cplx(0.0)) super.block(i * d, j * d, d, d) -= 2.0 * tij * t;
      }
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      super.block(i * d, j * d, d, d).diagonal().array() += casimir(j, i);
      if (i == j) super.block(i * d, i * d, d, d) += casimir;
    }
  return 0.5 * (super + super.adjoint());
}

/// Dimension of the commutant {X : [X, T_alpha] = 0 for all alpha}.
/// Returns nullopt when dim is too large for the dense dim^2 x dim^2 problem.
inline std::optional<int> commutant_dimension(const Representation &rep,
                                              Eigen::Index max_dim = 64) {
  if (rep.dim > max_dim) return std::nullopt;
  const ComplexMatrix super = operator_space_casimir(rep);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(super, Eigen::EigenvaluesOnly);
  const RealVector &w = es.eigenvalues();
  const double cut = 1e-8 * std::max(1.0, w(w.size() - 1));
  int count = 0;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (w(i) < cut) ++count;
  return count;
}

struct ValidationCheck {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = true;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  std::optional<int> commutant_dim;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto &c) { return c.pass; });
  }
  const ValidationCheck *find(const std::string &name) const {
    for (const auto &c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const auto &c : checks)
      if (!c.pass) out.push_back(c.name);
    return out;
  }
};

namespace rep_tol {
inline constexpr double hermiticity = 1e-12;
inline constexpr double trace = 1e-12;
inline constexpr double closure = 1e-9;
inline constexpr double orthogonality = 1e-10;
inline constexpr double factor_commutation = 1e-10;
} // namespace rep_tol

/// Checks every structural invariant of a representation. Never throws on a
/// bad representation; failures are carried in the report.
inline ValidationReport validate_rep(const Representation &rep) {
  ValidationReport report;
  auto add = [&](std::string name, double value, double threshold) {
    report.checks.push_back({std::move(name), value, threshold, value < threshold});
  };

  bool shapes_ok = rep.dim > 0 && !rep.generators.empty();
  for (const auto &t : rep.generators)
    shapes_ok = shapes_ok && t.rows() == rep.dim && t.cols() == rep.dim;
  std::size_t covered = 0;
  for (const auto &f : rep.factors) {
    shapes_ok = shapes_ok && f.begin == covered && f.end >= f.begin && f.coupling > 0.0;
    covered = f.end;
  }
  shapes_ok = shapes_ok && covered == rep.generators.size();
  add("shape", shapes_ok ? 0.0 : 1.0, 0.5);
  if (!shapes_ok) return report;

  double herm = 0.0, trace = 0.0;
  for (const auto &t : rep.generators) {
    herm = std::max(herm, max_abs(t - t.adjoint()));
    trace = std::max(trace, std::abs(t.trace()));
  }
  add("hermiticity", herm, rep_tol::hermiticity);
  add("tracelessness", trace, rep_tol::trace);
  add("closure", closure_residual(rep.generators), rep_tol::closure);

  double ortho = 0.0;
  for (const auto &f : rep.factors) {
    for (std::size_t a = f.begin; a < f.end; ++a)
      for (std::size_t b = a + 1; b < f.end; ++b)
        ortho = std::max(ortho, std::abs(trace_inner(rep.generators[a], rep.generators[b])));
  }
  add("factor_orthogonality", ortho, rep_tol::orthogonality);

  double fcomm = 0.0;
  for (std::size_t p = 0; p < rep.factors.size(); ++p)
    for (std::size_t q = p + 1; q < rep.factors.size(); ++q)
      for (std::size_t a = rep.factors[p].begin; a < rep.factors[p].end; ++a)
        for (std::size_t b = rep.factors[q].begin; b < rep.factors[q].end; ++b) {
          const auto &x = rep.generators[a];
          const auto &y = rep.generators[b];
          fcomm = std::max(fcomm, max_abs(ComplexMatrix(x * y - y * x)));
        }
  add("factor_commutation", fcomm, rep_tol::factor_commutation);

  report.commutant_dim = commutant_dimension(rep);
  return report;
}

/// Throws PreconditionError listing the failed checks.
inline void require_valid(const Representation &rep, const std::string &context) {
  const auto report = validate_rep(rep);
  if (report.passed()) return;
  std::string msg = context + ": invalid representation (";
  bool first = true;
  for (const auto &c : report.checks)
    if (!c.pass) {
      msg += (first ? "" : ", ") + c.name + " = " + detail::fmt_double(c.value);
      first = false;
    }
  throw PreconditionError(msg + ")");
}

} // namespace dflat
