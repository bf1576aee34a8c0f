#pragma once

// Explicit Hermitian-generator representations: SU(N) fundamentals and their
// induced squares and conjugates, SU(N) x SU(M) bifundamentals, the chiral 16
// of SO(10) and the 27 of E6.

#include "dflat/jordan.hpp"
#include "dflat/numcore.hpp"
#include "dflat/representation.hpp"

#include <array>
#include <string>
#include <vector>

namespace dflat {

// ---------------------------------------------------------------------------
// Pair bases of Sym^2(C^d) and Lambda^2(C^d).
//
// Pairs are ordered lexicographically: (0,0) (0,1) ... for the symmetric
// square, (0,1) (0,2) ... for the antisymmetric one. Off-diagonal basis
// vectors are (e_i (x) e_j +- e_j (x) e_i) / sqrt(2), so the basis is
// orthonormal and |coords(z (x) z)| = |z|^2.
// ---------------------------------------------------------------------------
namespace pairs {

inline Eigen::Index count(Eigen::Index d, bool symmetric) {
  return symmetric ? d * (d + 1) / 2 : d * (d - 1) / 2;
}

/// Index of the pair (i, j), i <= j (i < j for antisymmetric).
inline Eigen::Index index(Eigen::Index d, Eigen::Index i, Eigen::Index j, bool symmetric) {
  // Rows before i contribute (d - r) or (d - r - 1) pairs each.
  if (symmetric) return i * d - i * (i - 1) / 2 + (j - i);
  return i * (d - 1) - i * (i - 1) / 2 + (j - i - 1);
}

inline std::vector<std::array<Eigen::Index, 2>> list(Eigen::Index d, bool symmetric) {
  std::vector<std::array<Eigen::Index, 2>> out;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = symmetric ? i : i + 1; j < d; ++j) out.push_back({i, j});
  return out;
}

/// d x d tensor whose components represent the given pair-basis coordinates.
inline ComplexMatrix to_tensor(const ComplexVector &coords, Eigen::Index d, bool symmetric) {
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  Eigen::Index k = 0;
  const double s = 1.0 / std::numbers::sqrt2;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = symmetric ? i : i + 1; j < d; ++j, ++k) {
      if (i == j) {
        m(i, i) = coords(k);
      } else {
        m(i, j) = s * coords(k);
        m(j, i) = symmetric ? m(i, j) : -m(i, j);
      }
    }
  return m;
}

/// Pair-basis coordinates of a (anti)symmetric tensor.
inline ComplexVector from_tensor(const ComplexMatrix &m, bool symmetric) {
  const Eigen::Index d = m.rows();
  ComplexVector c(count(d, symmetric));
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = symmetric ? i : i + 1; j < d; ++j, ++k)
      c(k) = (i == j) ? m(i, i) : std::numbers::sqrt2 * m(i, j);
  return c;
}

/// Coordinates of z (x) z in the orthonormal Sym^2 basis.
inline ComplexVector square(const ComplexVector &z) {
  const Eigen::Index d = z.size();
  ComplexVector w(count(d, true));
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i; j < d; ++j, ++k)
      w(k) = (i == j) ? z(i) * z(i) : std::numbers::sqrt2 * z(i) * z(j);
  return w;
}

/// Matrix of T (x) 1 + 1 (x) T on the pair basis.
inline ComplexMatrix induced(const ComplexMatrix &t, bool symmetric) {
  const Eigen::Index d = t.rows();
  const Eigen::Index n = count(d, symmetric);
  ComplexMatrix out(n, n);
  ComplexMatrix r(d, d);
  const double s = 1.0 / std::numbers::sqrt2;
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = symmetric ? i : i + 1; j < d; ++j, ++col) {
      // basis tensor M = alpha e_i e_j^T + beta e_j e_i^T; image T M + M T^T
      r.setZero();
      if (i == j) {
        r.col(i) += t.col(i);
        r.row(i) += t.col(i).transpose();
      } else {
        const double beta = symmetric ? s : -s;
        r.col(j) += s * t.col(i);
        r.col(i) += beta * t.col(j);
        r.row(i) += s * t.col(j).transpose();
        r.row(j) += beta * t.col(i).transpose();
      }
      out.col(col) = from_tensor(r, symmetric);
    }
  return out;
}

} // namespace pairs

// ---------------------------------------------------------------------------

/// Generalized Gell-Mann matrices, Tr(T_a T_b) = delta_ab / 2.
inline Representation su_fundamental(int n) {
  if (n < 2) throw PreconditionError("su_fundamental: N must be >= 2, got " + std::to_string(n));
  std::vector<ComplexMatrix> gens;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      ComplexMatrix a = ComplexMatrix::Zero(n, n);
      a(i, j) = a(j, i) = 0.5;
      gens.push_back(a);
      ComplexMatrix b = ComplexMatrix::Zero(n, n);
      b(i, j) = cplx(0, -0.5);
      b(j, i) = cplx(0, 0.5);
      gens.push_back(b);
    }
  for (int k = 1; k < n; ++k) {
    ComplexMatrix h = ComplexMatrix::Zero(n, n);
    for (int l = 0; l < k; ++l) h(l, l) = 1.0;
    h(k, k) = -static_cast<double>(k);
    gens.push_back(h / std::sqrt(2.0 * k * (k + 1)));
  }
  const std::string label = "SU(" + std::to_string(n) + ")";
  Representation rep{label, n, std::move(gens), {}};
  rep.factors = single_factor(label, rep.generators.size());
  return rep;
}

enum class DerivedMode { sym2, antisym2, conjugate };

inline std::string to_string(DerivedMode m) {
  switch (m) {
  case DerivedMode::sym2: return "sym2";
  case DerivedMode::antisym2: return "antisym2";
  case DerivedMode::conjugate: return "conjugate";
  }
  return "?";
}

/// Symmetric square, antisymmetric square or conjugate of a representation.
/// Induced generators keep the normalization they inherit (the Dynkin index
/// of the induced representation); factors keep their generator ranges.
inline Representation derived_rep(const Representation &rep, DerivedMode mode,
                                  bool validate_input = true) {
  if (validate_input) require_valid(rep, "derived_rep");
  Representation out;
  out.factors = rep.factors;
  out.generators.reserve(rep.generators.size());
  switch (mode) {
  case DerivedMode::conjugate:
    out.group_label = "conj(" + rep.group_label + ")";
    out.dim = rep.dim;
    for (const auto &t : rep.generators) out.generators.push_back(-t.transpose());
    return out;
  case DerivedMode::sym2:
  case DerivedMode::antisym2: {
    const bool sym = mode == DerivedMode::sym2;
    if (!sym && rep.dim < 2) throw PreconditionError("derived_rep: antisym2 needs dim >= 2");
    out.group_label = (sym ? "Sym2(" : "Alt2(") + rep.group_label + ")";
    out.dim = pairs::count(rep.dim, sym);
    for (const auto &t : rep.generators) out.generators.push_back(pairs::induced(t, sym));
    orthonormalize_factors(out);
    return out;
  }
  }
  return out;
}

/// (N, Mbar) of SU(N) x SU(M) on N x M matrices phi, coordinates
/// z_{iM+j} = phi_ij. SU(N) acts as phi -> T phi, SU(M) as phi -> -phi T.
inline Representation bifundamental(int n, int m, double coupling_n = 1.0,
                                    double coupling_m = 1.0) {
  if (n < 2 || m < 2)
    throw PreconditionError("bifundamental: N and M must be >= 2, got (" + std::to_string(n) +
                            ", " + std::to_string(m) + ")");
  const Representation fn = su_fundamental(n);
  const Representation fm = su_fundamental(m);
  Representation rep;
  rep.group_label = "SU(" + std::to_string(n) + ")xSU(" + std::to_string(m) + ")";
  rep.dim = n * m;
  const ComplexMatrix idn = ComplexMatrix::Identity(n, n);
  const ComplexMatrix idm = ComplexMatrix::Identity(m, m);
  auto kron = [](const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j)
        k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return k;
  };
  for (const auto &t : fn.generators) rep.generators.push_back(kron(t, idm));
  for (const auto &t : fm.generators) rep.generators.push_back(kron(idn, -t.transpose()));
  const std::size_t a = fn.generators.size(), b = fm.generators.size();
  rep.factors = {Factor{fn.group_label, 0, a, coupling_n}, Factor{fm.group_label, a, a + b, coupling_m}};
  return rep;
}

/// N x M matrix phi held by bifundamental coordinates.
inline ComplexMatrix bifundamental_matrix(const ComplexVector &z, int n, int m) {
  ComplexMatrix phi(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) phi(i, j) = z(i * m + j);
  return phi;
}

inline ComplexVector bifundamental_coords(const ComplexMatrix &phi) {
  ComplexVector z(phi.size());
  for (Eigen::Index i = 0; i < phi.rows(); ++i)
    for (Eigen::Index j = 0; j < phi.cols(); ++j) z(i * phi.cols() + j) = phi(i, j);
  return z;
}

// ---------------------------------------------------------------------------
// SO(10) spinor
// ---------------------------------------------------------------------------

/// Ten 32 x 32 Hermitian gamma matrices,
///   Gamma_{2k}   = s3^(x)k (x) s1 (x) 1^(x)(4-k)
///   Gamma_{2k+1} = s3^(x)k (x) s2 (x) 1^(x)(4-k),
/// satisfying {Gamma_i, Gamma_j} = 2 delta_ij.
inline std::vector<ComplexMatrix> so10_gamma_matrices() {
  ComplexMatrix s1(2, 2), s2(2, 2), s3(2, 2), id = ComplexMatrix::Identity(2, 2);
  s1 << 0, 1, 1, 0;
  s2 << 0, cplx(0, -1), cplx(0, 1), 0;
  s3 << 1, 0, 0, -1;
  auto kron = [](const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j)
        k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return k;
  };
  std::vector<ComplexMatrix> gammas;
  for (int k = 0; k < 5; ++k)
    for (const ComplexMatrix *s : {&s1, &s2}) {
      ComplexMatrix g = ComplexMatrix::Identity(1, 1);
      for (int slot = 0; slot < 5; ++slot)
        g = kron(g, slot < k ? s3 : (slot == k ? *s : id));
      gammas.push_back(g);
    }
  return gammas;
}

/// Chirality operator i^5 Gamma_1 ... Gamma_10; Hermitian with eigenvalues +-1.
inline ComplexMatrix so10_chirality(const std::vector<ComplexMatrix> &gammas) {
  ComplexMatrix c = ComplexMatrix::Identity(32, 32);
  for (const auto &g : gammas) c = c * g;
  return cplx(0, 1) * cplx(0, 1) * cplx(0, 1) * cplx(0, 1) * cplx(0, 1) * c;
}

/// The chiral 16 of SO(10): Sigma_ij = -(i/4)[Gamma_i, Gamma_j] restricted to
/// the +1 chirality eigenspace, scaled to Tr(T_a T_b) = 2 delta_ab (vector
/// representation normalized to Tr = delta_ab).
inline Representation so10_spinor16() {
  const auto gammas = so10_gamma_matrices();
  const Spectrum chir = hermitian_eig(so10_chirality(gammas));
  int plus = 0;
  for (Eigen::Index i = 0; i < chir.eigenvalues.size(); ++i)
    if (chir.eigenvalues(i) > 0.0) ++plus;
  if (plus != 16)
    throw ConstructionError("so10_spinor16: chirality +1 eigenspace has dimension " +
                            std::to_string(plus));
  const ComplexMatrix iso = chir.eigenvectors.rightCols(16);
  std::vector<ComplexMatrix> gens;
  for (int i = 0; i < 10; ++i)
    for (int j = i + 1; j < 10; ++j) {
      const ComplexMatrix sigma = cplx(0, -0.25) * (gammas[i] * gammas[j] - gammas[j] * gammas[i]);
      gens.push_back(iso.adjoint() * sigma * iso);
    }
  Representation rep{"SO(10)", 16, orthonormalize(gens, 2.0), {}};
  rep.factors = single_factor("SO(10)", rep.generators.size());
  return rep;
}

// ---------------------------------------------------------------------------
// E6 on the complexified exceptional Jordan algebra
// ---------------------------------------------------------------------------

struct E6Construction {
  Representation rep;
  int derivation_dim = 0;
  std::vector<RealMatrix> derivations; // real antisymmetric, orthonormal basis of f4
};

/// Derivations of the Jordan product, as the real nullspace of
/// D(x o y) - D(x) o y - x o D(y) = 0 over antisymmetric 27 x 27 matrices.
inline std::vector<RealMatrix> jordan_derivations() {
  constexpr int n = jordan::dimension;
  const auto &js = jordan::structure();
  std::vector<std::array<int, 2>> params;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) params.push_back({i, j});
  const auto rows = static_cast<Eigen::Index>(n * (n + 1) / 2 * n);
  RealMatrix sys = RealMatrix::Zero(rows, static_cast<Eigen::Index>(params.size()));
  for (std::size_t p = 0; p < params.size(); ++p) {
    const int i = params[p][0], j = params[p][1]; // D_ij = 1, D_ji = -1
    Eigen::Index row = 0;
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b, row += n) {
        auto col = sys.col(static_cast<Eigen::Index>(p)).segment(row, n);
        const RealVector &cab = js.product(a, b);
        col(i) += cab(j);
        col(j) -= cab(i);
        if (a == j) col -= js.product(i, b);
        if (a == i) col += js.product(j, b);
        if (b == j) col -= js.product(a, i);
        if (b == i) col += js.product(a, j);
      }
  }
  const RealMatrix null = real_nullspace(sys);
  std::vector<RealMatrix> out;
  for (Eigen::Index k = 0; k < null.cols(); ++k) {
    RealMatrix d = RealMatrix::Zero(n, n);
    for (std::size_t p = 0; p < params.size(); ++p) {
      d(params[p][0], params[p][1]) = null(static_cast<Eigen::Index>(p), k);
      d(params[p][1], params[p][0]) = -null(static_cast<Eigen::Index>(p), k);
    }
    out.push_back(d);
  }
  return out;
}

/// The 27 of compact E6: -i D for the 52 Jordan derivations plus the 26
/// Jordan multiplications L_X by traceless basis elements, orthonormalized to
/// Tr(T_a T_b) = 3 delta_ab.
inline E6Construction e6_construction() {
  constexpr int n = jordan::dimension;
  E6Construction out;
  out.derivations = jordan_derivations();
  out.derivation_dim = static_cast<int>(out.derivations.size());
  if (out.derivation_dim != 52)
    throw ConstructionError("e6_27: derivation space has dimension " +
                            std::to_string(out.derivation_dim) + ", expected 52");
  std::vector<ComplexMatrix> gens;
  for (const auto &d : out.derivations) gens.push_back(cplx(0, -1) * d.cast<cplx>());
  const auto &js = jordan::structure();
  for (int k = 0; k < 2; ++k) {
    RealVector x = RealVector::Zero(n);
    x(k) = 1.0;
    x(k + 1) = -1.0;
    gens.push_back(js.multiplication_operator(x).cast<cplx>());
  }
  for (int a = 3; a < n; ++a) {
    RealVector x = RealVector::Zero(n);
    x(a) = 1.0;
    gens.push_back(js.multiplication_operator(x).cast<cplx>());
  }
  out.rep = Representation{"E6", n, orthonormalize(gens, 3.0), {}};
  out.rep.factors = single_factor("E6", out.rep.generators.size());
  return out;
}

inline Representation e6_27() { return e6_construction().rep; }

} // namespace dflat
