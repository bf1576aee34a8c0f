#include "dflat/dflatopt.hpp"

#include <gtest/gtest.h>

using namespace dflat;

namespace {

Representation sym6() { return derived_rep(su_fundamental(3), DerivedMode::sym2); }

// f(z) = <z, H z> / N with gradient 2 H z / N - 2 f z / N.
Objective rayleigh(const ComplexMatrix &h) {
  return [h](const Point &z) {
    const double n = z.squaredNorm();
    const ComplexVector hz = h * z;
    const double f = z.dot(hz).real() / n;
    return ObjectiveValue{f, (2.0 / n) * (hz - f * z)};
  };
}

} // namespace

TEST(DVector, FundamentalIdentity) {
  // sum_a (t_a)_{11}^2 = (1 - 1/N) / 2 for SU(N) generators with Tr = 1/2,
  // and the induced action doubles the diagonal entry at E_11.
  const Representation rep = sym6();
  const DVector d = d_vector(rep, Point::Unit(6, 0));
  EXPECT_NEAR(d.squared(), 4.0 / 3.0, 1e-14);
  EXPECT_EQ(d.components.size(), 8);
}

TEST(DVector, FlatAtIdentity) {
  const Point z = sym3_identity_coords() / std::sqrt(3.0);
  EXPECT_LT(d_vector(sym6(), z).sup_norm(), 1e-15);
}

TEST(DVector, FactorSlices) {
  const Representation rep = bifundamental(3, 2);
  const Point z = random_unit_point(6, 3);
  const DVector d = d_vector(rep, z);
  EXPECT_NEAR(d.factor_squared(0) + d.factor_squared(1), d.squared(), 1e-14);
  EXPECT_EQ(d.slice(1).size(), 3);
}

TEST(GValue, IdentityDirection) {
  const Point z = sym3_identity_coords();
  EXPECT_NEAR(g_value(Invariant::det_sym3(), z), 1.0 / 27.0, 1e-15);
  EXPECT_NEAR(g_value(Invariant::det_sym3(), 2.5 * z), 1.0 / 27.0, 1e-15);
  EXPECT_THROW(g_value(Invariant::det_sym3(), Point::Zero(6)), PreconditionError);
}

TEST(Objectives, GradientsMatchFiniteDifferences) {
  const Representation rep = bifundamental(3, 3);
  const std::vector<Objective> objs = {g_objective(Invariant::bifund_det(3)), neg_d_squared_objective(rep),
                                       neg_d_squared_objective(rep, {1})};
  const Point z = random_unit_point(9, 31);
  const double h = 1e-6;
  for (const auto &obj : objs) {
    const ObjectiveValue v = obj(z);
    for (Eigen::Index a = 0; a < 9; ++a) {
      // df = Re<g, dz>: real direction gives Re g_a, imaginary gives Im g_a.
      Point p = z, m = z;
      p(a) += h;
      m(a) -= h;
      EXPECT_NEAR((obj(p).value - obj(m).value) / (2 * h), v.gradient(a).real(), 1e-7);
      p = z;
      m = z;
      p(a) += cplx(0, h);
      m(a) -= cplx(0, h);
      EXPECT_NEAR((obj(p).value - obj(m).value) / (2 * h), v.gradient(a).imag(), 1e-7);
    }
  }
}

TEST(Maximize, RayleighQuotientFindsTopEigenvalue) {
  const ComplexMatrix h = random_hermitian(8, 13);
  OptimizerOptions opt;
  opt.starts = 4;
  const OptimizationResult r = maximize_objective(rayleigh(h), 8, opt);
  ASSERT_TRUE(r.found());
  // Power iteration on H + c I as an independent reference.
  const double shift = h.cwiseAbs().rowwise().sum().maxCoeff();
  ComplexVector v = ComplexVector::Ones(8);
  for (int i = 0; i < 20000; ++i) {
    v = h * v + shift * v;
    v.normalize();
  }
  EXPECT_NEAR(r.value, v.dot(h * v).real(), 1e-9);
  EXPECT_NEAR(r.point.norm(), 1.0, 1e-12);
}

TEST(Maximize, TraceIsMonotone) {
  OptimizerOptions opt;
  opt.starts = 3;
  opt.record_trace = true;
  const OptimizationResult r = maximize_objective(g_objective(Invariant::det_sym3()), 6, opt);
  ASSERT_EQ(r.runs.size(), 3u);
  for (const auto &run : r.runs) {
    ASSERT_FALSE(run.trace.empty());
    for (std::size_t i = 1; i < run.trace.size(); ++i) EXPECT_GE(run.trace[i], run.trace[i - 1]);
  }
}

TEST(Maximize, Deterministic) {
  OptimizerOptions opt;
  opt.starts = 5;
  opt.seed = 77;
  const auto a = maximize_objective(g_objective(Invariant::pfaffian6()), 15, opt);
  const auto b = maximize_objective(g_objective(Invariant::pfaffian6()), 15, opt);
  EXPECT_EQ(a.point, b.point);
  EXPECT_EQ(a.best_start, b.best_start);
}

TEST(Maximize, DiscardsNonFiniteStarts) {
  const Objective bad = [](const Point &z) {
    return ObjectiveValue{std::numeric_limits<double>::quiet_NaN(), ComplexVector::Zero(z.size())};
  };
  OptimizerOptions opt;
  opt.starts = 2;
  const auto r = maximize_objective(bad, 3, opt);
  EXPECT_FALSE(r.found());
  for (const auto &run : r.runs) EXPECT_TRUE(run.discarded);
}

TEST(Maximize, RejectsBadOptions) {
  OptimizerOptions opt;
  opt.starts = 0;
  EXPECT_THROW(maximize_objective(rayleigh(ComplexMatrix::Identity(2, 2)), 2, opt), PreconditionError);
}

TEST(Canonicalize, UnitNormAndRealLeadingEntry) {
  Point z = random_unit_point(5, 2) * cplx(0.0, 3.0);
  z(0) = 0.0;
  const Point c = canonicalize(z);
  EXPECT_NEAR(c.norm(), 1.0, 1e-15);
  EXPECT_EQ(c(0), cplx(0.0));
  EXPECT_GT(c(1).real(), 0.0);
  EXPECT_EQ(c(1).imag(), 0.0);
  EXPECT_THROW(canonicalize(Point::Zero(3)), PreconditionError);
}

TEST(Proportionality, ExactAtIdentity) {
  const Invariant inv = Invariant::det_sym3();
  const Point z = sym3_identity_coords() / std::sqrt(3.0);
  const Proportionality p = proportionality_check(inv, z);
  // nF/N at z = I/sqrt3: F = 3^{-3/2}, N = 1.
  EXPECT_NEAR(p.k.real(), 3.0 * std::pow(3.0, -1.5), 1e-14);
  EXPECT_LT(p.residual, 1e-14);
  EXPECT_TRUE(p.certified(1e-8));
  EXPECT_FALSE(proportionality_check(inv, random_unit_point(6, 1)).certified(1e-8));
}

TEST(ScaleToUnitK, MakesKOne) {
  const Invariant inv = Invariant::pfaffian6();
  const Point z = symplectic_form_coords() * cplx(0.3, 0.4);
  const Point u = scale_to_unit_k(inv, z);
  EXPECT_LT(std::abs(proportionality_check(inv, u).k - 1.0), 1e-12);
}

TEST(Stabilizer, KnownOrbits) {
  const Representation rep = sym6();
  EXPECT_EQ(stabilizer_dim(rep, sym3_identity_coords()), 3); // so(3)
  EXPECT_EQ(stabilizer_dim(rep, Point::Unit(6, 0)), 3);      // su(2) on e2, e3
  EXPECT_EQ(stabilizer_dim(rep, random_unit_point(6, 8)), 0);
  EXPECT_EQ(stabilizer_dim(bifundamental(3, 3), bifund_identity_coords(3)), 8);
}

TEST(FindFlat, SymmetricSixOfSU3) {
  const FlatSearchResult r = find_flat(sym6(), Invariant::det_sym3());
  ASSERT_TRUE(r.found);
  EXPECT_NEAR(r.g_value, 1.0 / 27.0, 1e-12);
  EXPECT_LT(r.d_sup_norm, 1e-8);
  EXPECT_TRUE(r.certified(1e-8));
  EXPECT_EQ(r.stabilizer_dim, 3);
  EXPECT_NEAR(r.point.norm(), 1.0, 1e-14);
}

TEST(FindFlat, CertifiedOrbitsCoverBestPoint) {
  const FlatSearchResult r = find_flat(bifundamental(3, 3), Invariant::bifund_det(3));
  ASSERT_FALSE(r.orbits.empty());
  int total = 0;
  bool best_listed = false;
  for (const auto &o : r.orbits) {
    total += o.count;
    best_listed = best_listed || (o.stabilizer_dim == r.stabilizer_dim && std::abs(o.k_abs - std::abs(r.k)) < 1e-6);
  }
  EXPECT_TRUE(best_listed);
  EXPECT_LE(total, r.starts_used);
}

TEST(FindFlat, DimensionMismatch) {
  EXPECT_THROW(find_flat(sym6(), Invariant::pfaffian6()), PreconditionError);
}

TEST(MinimizeD2, NoFlatDirectionForThreeTwo) {
  // Minimum of D.D over the unit sphere of the (3, 2bar) is positive.
  OptimizerOptions opt;
  opt.starts = 8;
  const auto r = maximize_objective(neg_d_squared_objective(bifundamental(3, 2)), 6, opt);
  EXPECT_NEAR(-r.value, 1.0 / 12.0, 1e-8);
}
