#pragma once

// Octonions and the exceptional Jordan algebra J3(O) of 3x3 octonionic
// Hermitian matrices, in a fixed orthonormal real basis of 27 elements.
//
// Octonion units e0 = 1, e1..e7 multiply by the oriented Fano triples
//   (1,2,3) (1,4,5) (1,7,6) (2,4,6) (2,5,7) (3,4,7) (3,6,5)
// meaning e_i e_j = e_k for each triple read cyclically, e_j e_i = -e_k, and
// e_i e_i = -1 for i > 0. The full table is written out in README.md.
//
// Jordan basis (coordinate index -> element):
//   0, 1, 2           E_00, E_11, E_22 (diagonal units)
//   3 + 8 p + k       (e_k in slot (i,j), conj(e_k) in slot (j,i)) / sqrt(2)
// with pair p = 0 : (0,1), p = 1 : (1,2), p = 2 : (2,0). This basis is
// orthonormal for <X, Y> = Re Tr(X o Y).

#include "dflat/numcore.hpp"

#include <array>
#include <cmath>
#include <utility>
#include <vector>

namespace dflat::jordan {

inline constexpr std::array<std::array<int, 3>, 7> fano_triples = {{
    {1, 2, 3}, {1, 4, 5}, {1, 7, 6}, {2, 4, 6}, {2, 5, 7}, {3, 4, 7}, {3, 6, 5}}};

/// e_i e_j = sign * e_index.
struct UnitProduct {
  int index = 0;
  int sign = 0;
};

using MultiplicationTable = std::array<std::array<UnitProduct, 8>, 8>;

inline const MultiplicationTable &multiplication_table() {
  static const MultiplicationTable table = [] {
    MultiplicationTable t{};
    for (int i = 0; i < 8; ++i) {
      t[0][i] = {i, 1};
      t[i][0] = {i, 1};
    }
    for (int i = 1; i < 8; ++i) t[i][i] = {0, -1};
    for (const auto &tr : fano_triples)
      for (int r = 0; r < 3; ++r) {
        const int a = tr[r], b = tr[(r + 1) % 3], c = tr[(r + 2) % 3];
        t[a][b] = {c, 1};
        t[b][a] = {c, -1};
      }
    return t;
  }();
  return table;
}

template <typename T>
struct Octonion {
  std::array<T, 8> c{};

  static Octonion unit(int k, T value = T(1)) {
    Octonion o;
    o.c[static_cast<std::size_t>(k)] = value;
    return o;
  }

  Octonion conj() const {
    Octonion o = *this;
    for (std::size_t k = 1; k < 8; ++k) o.c[k] = -o.c[k];
    return o;
  }

  /// Complex-bilinear extension of the norm form sum_k c_k^2.
  T norm_form() const {
    T s{};
    for (const auto &x : c) s += x * x;
    return s;
  }

  T real_part() const { return c[0]; }

  Octonion &operator+=(const Octonion &o) {
    for (std::size_t k = 0; k < 8; ++k) c[k] += o.c[k];
    return *this;
  }
  friend Octonion operator+(Octonion a, const Octonion &b) { return a += b; }
  friend Octonion operator*(const T &s, Octonion a) {
    for (auto &x : a.c) x *= s;
    return a;
  }

  friend Octonion operator*(const Octonion &a, const Octonion &b) {
    const auto &t = multiplication_table();
    Octonion out;
    for (std::size_t i = 0; i < 8; ++i) {
      if (a.c[i] == T{}) continue;
      for (std::size_t j = 0; j < 8; ++j) {
        const UnitProduct p = t[i][j];
        out.c[static_cast<std::size_t>(p.index)] += static_cast<double>(p.sign) * a.c[i] * b.c[j];
      }
    }
    return out;
  }
};

inline constexpr int dimension = 27;

/// Slot (row, col) of each off-diagonal pair p.
inline constexpr std::array<std::pair<int, int>, 3> pair_slots = {{{0, 1}, {1, 2}, {2, 0}}};

inline constexpr int offdiag_index(int pair, int unit) { return 3 + 8 * pair + unit; }

/// A 3x3 matrix of real octonions.
using OctMatrix = std::array<std::array<Octonion<double>, 3>, 3>;

inline OctMatrix basis_element(int a) {
  OctMatrix m{};
  if (a < 3) {
    m[a][a] = Octonion<double>::unit(0);
    return m;
  }
  const int p = (a - 3) / 8, k = (a - 3) % 8;
  const auto [i, j] = pair_slots[static_cast<std::size_t>(p)];
  const auto e = Octonion<double>::unit(k, 1.0 / std::numbers::sqrt2);
  m[i][j] = e;
  m[j][i] = e.conj();
  return m;
}

inline OctMatrix matmul(const OctMatrix &x, const OctMatrix &y) {
  OctMatrix z{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) z[i][j] += x[i][k] * y[k][j];
  return z;
}

/// Re Tr(X Y) for Hermitian X, Y, which equals the sum of entrywise real dot
/// products of the octonion coefficients.
inline double trace_form(const OctMatrix &x, const OctMatrix &y) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 8; ++k) s += x[i][j].c[k] * y[i][j].c[k];
  return s;
}

/// Structure constants of the Jordan product in the fixed basis:
/// e_a o e_b = sum_c product(a, b)[c] e_c.
class Structure {
public:
  Structure() : constants_(dimension * dimension, RealVector::Zero(dimension)) {
    std::vector<OctMatrix> basis;
    for (int a = 0; a < dimension; ++a) basis.push_back(basis_element(a));
    for (int a = 0; a < dimension; ++a)
      for (int b = a; b < dimension; ++b) {
        const OctMatrix xy = matmul(basis[a], basis[b]);
        const OctMatrix yx = matmul(basis[b], basis[a]);
        OctMatrix jp{};
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) jp[i][j] = 0.5 * (xy[i][j] + yx[i][j]);
        RealVector v(dimension);
        for (int c = 0; c < dimension; ++c) v(c) = trace_form(jp, basis[c]);
        constants_[idx(a, b)] = v;
        constants_[idx(b, a)] = v;
      }
  }

  const RealVector &product(int a, int b) const { return constants_[idx(a, b)]; }

  /// Matrix of Jordan multiplication by x: (L_x)_{cb} = sum_a x_a C_ab^c.
  RealMatrix multiplication_operator(const RealVector &x) const {
    RealMatrix l = RealMatrix::Zero(dimension, dimension);
    for (int a = 0; a < dimension; ++a) {
      if (x(a) == 0.0) continue;
      for (int b = 0; b < dimension; ++b) l.col(b) += x(a) * product(a, b);
    }
    return l;
  }

  template <typename Scalar>
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1>
  jordan_product(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> &x,
                 const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> &y) const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out =
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(dimension);
    for (int a = 0; a < dimension; ++a)
      for (int b = 0; b < dimension; ++b) {
        const Scalar w = x(a) * y(b);
        if (w == Scalar(0)) continue;
        out += w * product(a, b).template cast<Scalar>();
      }
    return out;
  }

private:
  static std::size_t idx(int a, int b) { return static_cast<std::size_t>(a * dimension + b); }
  std::vector<RealVector> constants_;
};

inline const Structure &structure() {
  static const Structure s;
  return s;
}

/// Coordinates of the Jordan identity E_00 + E_11 + E_22.
inline RealVector identity_coords() {
  RealVector v = RealVector::Zero(dimension);
  v.head(3).setOnes();
  return v;
}

/// Off-diagonal octonion held in pair slot p, read from complex coordinates.
inline Octonion<cplx> offdiag_entry(const ComplexVector &z, int pair) {
  Octonion<cplx> o;
  for (int k = 0; k < 8; ++k) o.c[static_cast<std::size_t>(k)] = z(offdiag_index(pair, k)) / std::numbers::sqrt2;
  return o;
}

} // namespace dflat::jordan
