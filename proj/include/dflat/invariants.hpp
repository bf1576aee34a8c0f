#pragma once

// Homogeneous invariant polynomials F(z) with analytic holomorphic gradients
// dF/dz_a. Gradients use cofactor / sub-Pfaffian / polarization formulas
// that never divide by F, so they are valid on the F = 0 locus.

#include "dflat/jordan.hpp"
#include "dflat/numcore.hpp"
#include "dflat/repkit.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dflat {

enum class InvariantKind { det_sym3, pfaffian6, jordan_det, bifund_det };

namespace detail {

/// Determinant by Laplace-free LU; exact zero for singular matrices.
inline cplx det(const ComplexMatrix &m) {
  if (m.rows() == 0) return 1.0;
  return m.partialPivLu().determinant();
}

inline ComplexMatrix minor_matrix(const ComplexMatrix &m, Eigen::Index row, Eigen::Index col) {
  const Eigen::Index n = m.rows();
  ComplexMatrix out(n - 1, n - 1);
  for (Eigen::Index i = 0, r = 0; i < n; ++i) {
    if (i == row) continue;
    for (Eigen::Index j = 0, c = 0; j < n; ++j) {
      if (j == col) continue;
      out(r, c++) = m(i, j);
    }
    ++r;
  }
  return out;
}

/// Cofactor matrix, cof_ij = (-1)^{i+j} det(minor_ij) = d det / d m_ij.
inline ComplexMatrix cofactors(const ComplexMatrix &m) {
  const Eigen::Index n = m.rows();
  ComplexMatrix c(n, n);
  if (n == 1) {
    c(0, 0) = 1.0;
    return c;
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      c(i, j) = (((i + j) % 2) ? -1.0 : 1.0) * det(minor_matrix(m, i, j));
  return c;
}

/// Pfaffian by expansion along the first row over the given index set.
inline cplx pfaffian(const ComplexMatrix &a, const std::vector<Eigen::Index> &idx) {
  if (idx.empty()) return 1.0;
  if (idx.size() % 2) return 0.0;
  const Eigen::Index first = idx[0];
  cplx sum = 0.0;
  for (std::size_t k = 1; k < idx.size(); ++k) {
    std::vector<Eigen::Index> rest;
    for (std::size_t l = 1; l < idx.size(); ++l)
      if (l != k) rest.push_back(idx[l]);
    const double sign = (k % 2) ? 1.0 : -1.0;
    sum += sign * a(first, idx[k]) * pfaffian(a, rest);
  }
  return sum;
}

inline std::vector<Eigen::Index> iota(Eigen::Index n) {
  std::vector<Eigen::Index> v(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
  return v;
}

} // namespace detail

inline cplx pfaffian(const ComplexMatrix &a) { return detail::pfaffian(a, detail::iota(a.rows())); }

/// A homogeneous invariant of a fixed representation's coordinates.
class Invariant {
public:
  static Invariant det_sym3() { return Invariant(InvariantKind::det_sym3, 3, 6, "det_sym3"); }
  static Invariant pfaffian6() { return Invariant(InvariantKind::pfaffian6, 3, 15, "pfaffian6"); }
  static Invariant jordan_det() { return Invariant(InvariantKind::jordan_det, 3, 27, "jordan_det"); }
  static Invariant bifund_det(int n) {
    if (n < 2) throw PreconditionError("bifund_det: N must be >= 2");
    return Invariant(InvariantKind::bifund_det, n, n * n, "bifund_det(" + std::to_string(n) + ")");
  }

  /// Parses "det_sym3", "pfaffian6", "jordan_det" or "bifund_det(N)".
  static Invariant from_label(const std::string &label) {
    if (label == "det_sym3") return det_sym3();
    if (label == "pfaffian6") return pfaffian6();
    if (label == "jordan_det") return jordan_det();
    const std::string prefix = "bifund_det(";
    if (label.rfind(prefix, 0) == 0 && label.size() > prefix.size() + 1 && label.back() == ')') {
      const std::string num = label.substr(prefix.size(), label.size() - prefix.size() - 1);
      if (!num.empty() && num.find_first_not_of("0123456789") == std::string::npos && num.size() < 4)
        return bifund_det(std::stoi(num));
    }
    throw PreconditionError("unknown invariant '" + label + "'");
  }

  InvariantKind kind() const { return kind_; }
  int degree() const { return degree_; }
  Eigen::Index dim() const { return dim_; }
  const std::string &label() const { return label_; }

  cplx evaluate(const Point &z) const {
    check_dim(z);
    switch (kind_) {
    case InvariantKind::det_sym3: return detail::det(pairs::to_tensor(z, 3, true));
    case InvariantKind::pfaffian6: return pfaffian(pairs::to_tensor(z, 6, false));
    case InvariantKind::jordan_det: return jordan_det_value(z);
    case InvariantKind::bifund_det: return detail::det(bifundamental_matrix(z, degree_, degree_));
    }
    return 0.0;
  }

  /// Holomorphic gradient dF/dz_a.
  ComplexVector gradient(const Point &z) const {
    check_dim(z);
    switch (kind_) {
    case InvariantKind::det_sym3: {
      const ComplexMatrix cof = detail::cofactors(pairs::to_tensor(z, 3, true));
      // d/dz_ij with S_ij = S_ji = z_ij / sqrt2 gives sqrt2 * cof_ij.
      return pairs::from_tensor(cof, true);
    }
    case InvariantKind::pfaffian6: return pfaffian_gradient(pairs::to_tensor(z, 6, false));
    case InvariantKind::jordan_det: return jordan_det_gradient(z);
    case InvariantKind::bifund_det:
      return bifundamental_coords(detail::cofactors(bifundamental_matrix(z, degree_, degree_)));
    }
    return {};
  }

private:
  Invariant(InvariantKind kind, int degree, Eigen::Index dim, std::string label)
      : kind_(kind), degree_(degree), dim_(dim), label_(std::move(label)) {}

  void check_dim(const Point &z) const {
    if (z.size() != dim_)
      throw PreconditionError(label_ + ": point has dimension " + std::to_string(z.size()) +
                              ", expected " + std::to_string(dim_));
  }

  // A_ij = z_ij / sqrt2; dPf/dA_ij = (-1)^{i+j+1} Pf(A without rows/cols i, j).
  static ComplexVector pfaffian_gradient(const ComplexMatrix &a) {
    const Eigen::Index n = a.rows();
    ComplexVector g(pairs::count(n, false));
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j, ++k) {
        std::vector<Eigen::Index> rest;
        for (Eigen::Index l = 0; l < n; ++l)
          if (l != i && l != j) rest.push_back(l);
        const double sign = ((i + j + 1) % 2) ? -1.0 : 1.0;
        g(k) = sign * detail::pfaffian(a, rest) / std::numbers::sqrt2;
      }
    return g;
  }

  // X = [[x0, c, conj b], [conj c, x1, a], [b, conj a, x2]] with c, a, b in
  // pair slots (0,1), (1,2), (2,0):
  //   det X = x0 x1 x2 - x0 n(a) - x1 n(b) - x2 n(c) + 2 Re(a b c).
  static cplx jordan_det_value(const Point &z) {
    const auto c = jordan::offdiag_entry(z, 0);
    const auto a = jordan::offdiag_entry(z, 1);
    const auto b = jordan::offdiag_entry(z, 2);
    const cplx x0 = z(0), x1 = z(1), x2 = z(2);
    return x0 * x1 * x2 - x0 * a.norm_form() - x1 * b.norm_form() - x2 * c.norm_form() +
           2.0 * ((a * b) * c).real_part();
  }

  // d Re(u w) / d u_k = conj(w)_k, and Re(a b c) is cyclic.
  static ComplexVector jordan_det_gradient(const Point &z) {
    const auto c = jordan::offdiag_entry(z, 0);
    const auto a = jordan::offdiag_entry(z, 1);
    const auto b = jordan::offdiag_entry(z, 2);
    const cplx x0 = z(0), x1 = z(1), x2 = z(2);
    ComplexVector g(jordan::dimension);
    g(0) = x1 * x2 - a.norm_form();
    g(1) = x0 * x2 - b.norm_form();
    g(2) = x0 * x1 - c.norm_form();
    const auto wa = (b * c).conj(); // d/da
    const auto wb = (c * a).conj(); // d/db
    const auto wc = (a * b).conj(); // d/dc
    const double s = 1.0 / std::numbers::sqrt2;
    for (int k = 0; k < 8; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      g(jordan::offdiag_index(0, k)) = s * (-2.0 * x2 * c.c[uk] + 2.0 * wc.c[uk]);
      g(jordan::offdiag_index(1, k)) = s * (-2.0 * x0 * a.c[uk] + 2.0 * wa.c[uk]);
      g(jordan::offdiag_index(2, k)) = s * (-2.0 * x1 * b.c[uk] + 2.0 * wb.c[uk]);
    }
    return g;
  }

  InvariantKind kind_;
  int degree_;
  Eigen::Index dim_;
  std::string label_;
};

struct GradientCheckReport {
  int trials = 0;
  double max_gradient_error = 0.0;   // relative, central differences
  double max_invariance_residual = 0.0; // |sum_a dF/dz_a (i T z)_a| / (|grad F| |z|)
  double max_euler_residual = 0.0;   // |z . grad F - n F| / (|z| |grad F|)
};

/// Compares the analytic gradient with central finite differences (step 1e-6
/// on real and imaginary parts) at random points, and measures infinitesimal
/// invariance under every generator.
inline GradientCheckReport gradient_check(const Invariant &inv, const Representation &rep,
                                          int trials, std::uint64_t seed, double step = 1e-6) {
  if (rep.dim != inv.dim())
    throw PreconditionError("gradient_check: representation dimension " + std::to_string(rep.dim) +
                            " does not match invariant dimension " + std::to_string(inv.dim()));
  GradientCheckReport report;
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const Point z = random_unit_point(rep.dim, seed + static_cast<std::uint64_t>(t));
    const ComplexVector g = inv.gradient(z);
    ComplexVector fd_re(rep.dim), fd_im(rep.dim);
    for (Eigen::Index a = 0; a < rep.dim; ++a) {
      Point zp = z, zm = z;
      zp(a) += step;
      zm(a) -= step;
      fd_re(a) = (inv.evaluate(zp) - inv.evaluate(zm)) / (2.0 * step);
      zp = z;
      zm = z;
      zp(a) += cplx(0, step);
      zm(a) -= cplx(0, step);
      // holomorphic: dF/dy = i dF/dz
      fd_im(a) = cplx(0, -1) * (inv.evaluate(zp) - inv.evaluate(zm)) / (2.0 * step);
    }
    const double gnorm = std::max(g.norm(), 1e-300);
    report.max_gradient_error = std::max(
        {report.max_gradient_error, (fd_re - g).norm() / gnorm, (fd_im - g).norm() / gnorm});
    for (const auto &tgen : rep.generators) {
      const ComplexVector dz = cplx(0, 1) * (tgen * z);
      const cplx r = g.transpose() * dz;
      report.max_invariance_residual =
          std::max(report.max_invariance_residual, std::abs(r) / (gnorm * z.norm()));
    }
    const cplx euler = cplx(g.transpose() * z) - static_cast<double>(inv.degree()) * inv.evaluate(z);
    report.max_euler_residual =
        std::max(report.max_euler_residual, std::abs(euler) / (gnorm * z.norm()));
  }
  return report;
}

// Distinguished points in the coordinates used above.

/// Identity 3 x 3 symmetric matrix in Sym^2(3) coordinates.
inline Point sym3_identity_coords() {
  return pairs::from_tensor(ComplexMatrix::Identity(3, 3), true);
}

/// Canonical symplectic form J (blocks [[0,1],[-1,0]]) in Lambda^2(6) coordinates.
inline Point symplectic_form_coords() {
  ComplexMatrix j = ComplexMatrix::Zero(6, 6);
  for (int k = 0; k < 3; ++k) {
    j(2 * k, 2 * k + 1) = 1.0;
    j(2 * k + 1, 2 * k) = -1.0;
  }
  return pairs::from_tensor(j, false);
}

inline Point jordan_identity_coords() { return jordan::identity_coords().cast<cplx>(); }

inline Point bifund_identity_coords(int n) {
  return bifundamental_coords(ComplexMatrix::Identity(n, n));
}

} // namespace dflat
