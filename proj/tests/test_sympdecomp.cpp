#include "dflat/sympdecomp.hpp"

#include <gtest/gtest.h>

using namespace dflat;

namespace {

Representation sym6() { return derived_rep(su_fundamental(3), DerivedMode::sym2); }

void expect_projector_algebra(const IsotypicDecomposition &dec) {
  const Eigen::Index n = dec.space_dim;
  ComplexMatrix total = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < dec.components.size(); ++i) {
    const ComplexMatrix p = dec.components[i].projector();
    EXPECT_LT(max_abs(p * p - p), 1e-10);
    EXPECT_LT(max_abs(p - p.adjoint()), 1e-10);
    for (std::size_t j = i + 1; j < dec.components.size(); ++j)
      EXPECT_LT(max_abs(p * dec.components[j].projector()), 1e-10);
    total += p;
  }
  EXPECT_LT(max_abs(total - ComplexMatrix::Identity(n, n)), 1e-10);
}

} // namespace

TEST(Sym2Decompose, SixOfSU3) {
  const IsotypicDecomposition dec = sym2_decompose(sym6());
  EXPECT_EQ(dec.space_dim, 21);
  EXPECT_EQ(dec.dims(), (std::vector<int>{6, 15}));
  EXPECT_EQ(dec.lowest_dim_index(), 0u);
  expect_projector_algebra(dec);
  // The 6bar has the same Casimir as the 6.
  EXPECT_NEAR(dec.components[0].casimir, 10.0 / 3.0, 1e-10);
}

TEST(Sym2Decompose, QuarticInvariantsSumToNormSquared) {
  const Representation rep = bifundamental(3, 2);
  const IsotypicDecomposition dec = sym2_decompose(rep);
  EXPECT_EQ(dec.dims(), (std::vector<int>{3, 18}));
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Point z = 1.7 * random_unit_point(rep.dim, s);
    double sum = 0.0;
    for (std::size_t i = 0; i < dec.components.size(); ++i) sum += quartic_invariant(dec, i, z);
    EXPECT_NEAR(sum, std::pow(z.squaredNorm(), 2), 1e-12 * std::pow(1.7, 4));
  }
}

TEST(Sym2Decompose, IrreducibleSquareHasConstantRatio) {
  // Sym^2 of the doublet is the irreducible triplet, so I = N^2 everywhere.
  const Representation rep = su_fundamental(2);
  const IsotypicDecomposition dec = sym2_decompose(rep);
  ASSERT_EQ(dec.components.size(), 1u);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Point z = random_unit_point(2, s);
    EXPECT_NEAR(quartic_invariant(dec, 0, z), 1.0, 1e-14);
  }
  EXPECT_THROW(fit_relation(rep, dec, 20, 1), PreconditionError);
}

TEST(OperatorDecompose, FundamentalTimesConjugate) {
  const IsotypicDecomposition dec = operator_decompose(su_fundamental(3));
  EXPECT_EQ(dec.dims(), (std::vector<int>{1, 8}));
  EXPECT_NEAR(dec.components[0].casimir, 0.0, 1e-12);
  EXPECT_NEAR(dec.components[1].casimir, 3.0, 1e-10); // adjoint Casimir = N
  expect_projector_algebra(dec);
}

TEST(ClusterCasimir, AmbiguousGapThrows) {
  RealVector ev(3);
  ev << 1.0, 1.0 + 5e-9, 2.0;
  const ComplexMatrix c = ev.cast<cplx>().asDiagonal();
  EXPECT_THROW(cluster_casimir(c, 1e-8), PreconditionError);
  ev << 1.0, 1.0 + 1e-12, 2.0;
  const ComplexMatrix d = ev.cast<cplx>().asDiagonal();
  EXPECT_EQ(cluster_casimir(d, 1e-8).size(), 2u);
}

TEST(AdjointProjection, EqualsDSquaredOverIndex) {
  // For generators with Tr(T_a T_b) = kappa delta_ab, I_adj = D.D / kappa.
  const Representation rep = sym6();
  const AdjointProjection adj(rep);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Point z = random_unit_point(6, s);
    EXPECT_NEAR(adj.value(z), d_vector(rep, z).squared() / 2.5, 1e-13);
  }
  EXPECT_NEAR(adj.value(Point::Unit(6, 0)), 8.0 / 15.0, 1e-14);
}

TEST(AdjointProjection, MatchesOperatorSpaceProjection) {
  // |P_adj(z z^dagger)|^2 computed from the 3 x 3bar decomposition of the fundamental.
  const Representation rep = su_fundamental(3);
  const IsotypicDecomposition dec = operator_decompose(rep);
  const Point z = random_unit_point(3, 4);
  const ComplexMatrix zz = z * z.adjoint();
  const ComplexVector vec = Eigen::Map<const ComplexVector>(zz.data(), 9);
  const double via_projector = (dec.components[1].projector() * vec).squaredNorm();
  EXPECT_NEAR(AdjointProjection(rep).value(z), via_projector, 1e-13);
}

TEST(AdjointProjection, GradientMatchesFiniteDifferences) {
  const Representation rep = so10_spinor16();
  const AdjointProjection adj(rep);
  const Point z = random_unit_point(16, 9);
  const ObjectiveValue v = adj.value_and_gradient(z);
  const double h = 1e-6;
  for (Eigen::Index a = 0; a < 16; a += 3) {
    Point p = z, m = z;
    p(a) += h;
    m(a) -= h;
    EXPECT_NEAR((adj.value(p) - adj.value(m)) / (2 * h), v.gradient(a).real(), 1e-7);
    p = z;
    m = z;
    p(a) += cplx(0, h);
    m(a) -= cplx(0, h);
    EXPECT_NEAR((adj.value(p) - adj.value(m)) / (2 * h), v.gradient(a).imag(), 1e-7);
  }
}

TEST(Rationalize, SmallTriples) {
  EXPECT_EQ(rationalize({2.25, 1.875, 1.0}).value(), (std::array<long, 3>{18, 15, 8}));
  EXPECT_EQ(rationalize({6.4, 3.2, 1.0}).value(), (std::array<long, 3>{32, 16, 5}));
  EXPECT_FALSE(rationalize({std::numbers::pi, std::numbers::e, 1.0}).has_value());
}

TEST(FitRelation, SixOfSU3AndSeedIndependence) {
  const Representation rep = sym6();
  const IsotypicDecomposition dec = sym2_decompose(rep);
  const RelationFit a = fit_relation(rep, dec, 40, 1);
  const RelationFit b = fit_relation(rep, dec, 40, 999);
  ASSERT_TRUE(a.found());
  ASSERT_TRUE(b.found());
  EXPECT_EQ(a.integers.value(), b.integers.value());
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(a.ratios[i], b.ratios[i], 1e-10);
  EXPECT_LT(validate_relation(a, rep, dec, 30, 5000), 1e-10);
}

TEST(FitRelation, AnalyticCheckAtDistinguishedPoints) {
  // The fitted relation must hold at E_11 (I_6bar = 0, I_adj = 8/15) and at
  // the identity (I_6bar = 4/9, I_adj = 0).
  const Representation rep = sym6();
  const IsotypicDecomposition dec = sym2_decompose(rep);
  const RelationFit fit = fit_relation(rep, dec, 30, 3);
  const Point e11 = Point::Unit(6, 0);
  const Point id = sym3_identity_coords() / std::sqrt(3.0);
  EXPECT_NEAR(quartic_invariant(dec, 0, e11), 0.0, 1e-14);
  EXPECT_NEAR(quartic_invariant(dec, 0, id), 4.0 / 9.0, 1e-14);
  EXPECT_NEAR(adjoint_invariant(rep, id), 0.0, 1e-14);
  EXPECT_NEAR(fit.ratios[1] * 8.0 / 15.0, 1.0, 1e-10);
  EXPECT_NEAR(fit.ratios[0] * 4.0 / 9.0, 1.0, 1e-10);
}

TEST(FitRelation, SampleCountPrecondition) {
  const Representation rep = sym6();
  EXPECT_THROW(fit_relation(rep, sym2_decompose(rep), 2, 1), PreconditionError);
}

TEST(Complementarity, SixOfSU3) {
  const Representation rep = sym6();
  const IsotypicDecomposition dec = sym2_decompose(rep);
  const ComplementarityReport r = complementarity_scan(rep, dec, Invariant::det_sym3(), 6, 42);
  EXPECT_NEAR(r.low_max, 4.0 / 9.0, 1e-10);
  EXPECT_NEAR(r.adj_max, 8.0 / 15.0, 1e-10);
  EXPECT_LT(r.adj_at_low_max, 1e-10);
  EXPECT_LT(r.low_at_adj_max, 1e-10);
  ASSERT_TRUE(r.low_max_is_g_max.has_value());
  EXPECT_TRUE(*r.low_max_is_g_max);
}
