#pragma once

// Dense numerical kernels shared by every other module: Hermitian
// eigendecomposition, real nullspaces and seeded sampling on complex spheres.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dflat {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// A complex coefficient vector z_a of a representation space.
using Point = Eigen::VectorXcd;

/// Raised when an input violates a documented precondition.
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a fixed construction does not produce the expected object.
class ConstructionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace tol {
inline constexpr double hermitian = 1e-12;
inline constexpr double eigen_residual = 1e-10;
inline constexpr double nullspace_cut = 1e-8;
} // namespace tol

namespace detail {
inline std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}
} // namespace detail

/// Largest absolute entry.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived> &m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Hermitian inner product Tr(A^dagger B).
inline cplx trace_inner(const ComplexMatrix &a, const ComplexMatrix &b) {
  return (a.conjugate().cwiseProduct(b)).sum();
}

struct Spectrum {
  RealVector eigenvalues;     // ascending
  ComplexMatrix eigenvectors; // columns, unitary
};

/// Full spectrum of a Hermitian matrix. Eigenvectors inside a degenerate
/// cluster are an arbitrary orthonormal basis of the cluster.
inline Spectrum hermitian_eig(const ComplexMatrix &a) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw PreconditionError("hermitian_eig: matrix must be square and non-empty, got " +
                            std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  const double scale = std::max(1.0, max_abs(a));
  const double defect = max_abs(a - a.adjoint());
  if (defect >= tol::hermitian * scale)
    throw PreconditionError("hermitian_eig: |A - A^dagger|_max = " + detail::fmt_double(defect) +
                            " exceeds " + detail::fmt_double(tol::hermitian * scale));
  const ComplexMatrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success)
    throw ConstructionError("hermitian_eig: eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Orthonormal basis (as columns) of {x : M x = 0}. A direction counts as null
/// when its singular value is below tol * sigma_max.
inline RealMatrix real_nullspace(const RealMatrix &m, double tolerance = tol::nullspace_cut) {
  if (!(tolerance > 0.0))
    throw PreconditionError("real_nullspace: tolerance must be positive");
  if (m.rows() == 0 || m.cols() == 0)
    throw PreconditionError("real_nullspace: empty matrix");
  const Eigen::Index n = m.cols();
  // JacobiSVD: BDCSVD in Eigen 3.4.0 can return spurious singular values.
  Eigen::JacobiSVD<RealMatrix, Eigen::ColPivHouseholderQRPreconditioner> svd(m, Eigen::ComputeFullV);
  const RealVector &sv = svd.singularValues();
  const double cut = tolerance * (sv.size() > 0 ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

/// Number of singular values above tol * sigma_max.
inline Eigen::Index numerical_rank(const RealMatrix &m, double tolerance = tol::nullspace_cut) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<RealMatrix, Eigen::ColPivHouseholderQRPreconditioner> svd(m);
  const RealVector &sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tolerance * sv(0)) ++rank;
  return rank;
}

/// Seeded source of standard normal variates.
///
/// Uniforms come from std::mt19937_64 (fully specified by the standard) as
/// (x >> 11) * 2^-53; normals use the Box-Muller transform, consuming two
/// uniforms per pair. std::normal_distribution is avoided because its
/// algorithm is implementation-defined.
class GaussianSource {
public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
  }

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Complex d-vector with i.i.d. standard normal real and imaginary parts,
/// scaled to unit norm. Bit-reproducible for a fixed (d, seed).
inline Point random_unit_point(Eigen::Index d, std::uint64_t seed) {
  if (d <= 0) throw PreconditionError("random_unit_point: dimension must be >= 1");
  GaussianSource rng(seed);
  Point z(d);
  for (;;) {
    for (Eigen::Index a = 0; a < d; ++a) {
      const double re = rng.normal();
      const double im = rng.normal();
      z(a) = cplx(re, im);
    }
    const double n = z.norm();
    if (n > 0.0) return z / n;
  }
}

/// Random Hermitian matrix with i.i.d. normal entries, used by tests.
inline ComplexMatrix random_hermitian(Eigen::Index d, std::uint64_t seed) {
  GaussianSource rng(seed);
  ComplexMatrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      a(i, j) = cplx(re, im);
    }
  return 0.5 * (a + a.adjoint());
}

} // namespace dflat
