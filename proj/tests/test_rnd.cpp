#include <gtest/gtest.h>

#include "hypkz/suites.hpp"

using namespace hypkz;

TEST(Transforms, InverseAndComposition) {
  ParamPoint P = suites::generic_point(2);
  for (auto& [name, t] : suites::named_transforms()) {
    ParamPoint Q = transform_params(transform_params(P, t), inverse(t));
    for (int a = 0; a < 2; ++a) {
      EXPECT_LT(std::abs(Q.z[a] - P.z[a]), 1e-15) << name;
      EXPECT_LT(std::abs(Q.lambda[a] - P.lambda[a]), 1e-15) << name;
    }
    EXPECT_TRUE(compose(t, inverse(t)).is_identity()) << name;
  }
  // sigma' x sigma with both swaps exchanges the sites
  ParamPoint S = transform_params(P, ParamTransform::swap12(true, true));
  EXPECT_LT(std::abs(S.z[0] - P.z[1]) + std::abs(S.lambda[0] - P.lambda[1]), 1e-15);
}

TEST(Intertwiners, BraidRelation) {
  ParamPoint P = suites::generic_point(3);
  for (auto fl : {Flavor::rational, Flavor::trig}) EXPECT_LT(braid_residual(P, 3, fl), 1e-9) << flavor_name(fl);
}

TEST(Intertwiners, NumeratorDenominatorFactorization) {
  ParamPoint P = suites::generic_point(2);
  for (auto fl : {Flavor::rational, Flavor::trig}) {
    auto r = sigma_pair_matrix(ParamTransform::swap12(true, true), P, 3, fl);
    Mat R = build_intertwiner_pair(PairKind::Rhat, P, 3, fl).matrix;
    EXPECT_LT(rel_diff(r.mat.matrix, R), 1e-10) << flavor_name(fl);
    EXPECT_LT(r.word_independence, 1e-10) << flavor_name(fl);
  }
}

TEST(Intertwiners, SpectralAgreesWithWeightFunctionRoute) {
  ParamPoint P = suites::generic_point(2);
  for (auto fl : {Flavor::rational, Flavor::trig})
    for (auto& [name, t] : suites::named_transforms()) {
      double fit = 1.0;
      Mat W = weight_route_matrix(fl, P, transform_params(P, t), 2, 7, &fit);
      Mat S = sigma_pair_matrix(t, P, 2, fl).mat.matrix;
      EXPECT_LT(fit, 1e-12);
      EXPECT_LT(rel_diff(W, S), 1e-12) << flavor_name(fl) << ' ' << name;
    }
}

TEST(Intertwiners, BlockDiagonalByLevel) {
  ParamPoint P = suites::generic_point(2);
  Mat R = rhat_rational(P, 3);
  Basis B(2, 3);
  for (int i = 0; i < B.size(); ++i)
    for (int j = 0; j < B.size(); ++j) {
      if (B.level[i] == B.level[j]) continue;
      EXPECT_EQ(R(i, j), cplx(0.0));
    }
}

TEST(Intertwiners, SpectralOracleAtHalfWeights) {
  auto r = suites::spectral_oracle();
  ASSERT_EQ(r.size(), 1u);
  EXPECT_LT(r[0].value, 1e-12);
}

TEST(Intertwiners, ContragredientCarriesShapovalovForm) {
  // A^T Sh(dst) C = Sh(src)
  ParamPoint P = suites::generic_point(2);
  Basis B(2, 2);
  for (auto fl : {Flavor::rational, Flavor::trig}) {
    auto t = ParamTransform::swap12(true, false);
    ParamPoint Q = transform_params(P, t);
    Mat A = sigma_pair_matrix(t, P, 2, fl).mat.matrix;
    Mat C = contragredient(A, P, Q, fl, 2);
    Mat lhs = A.transpose() * shapovalov_diag(B, Q, fl).asDiagonal() * C;
    Mat rhs = shapovalov_diag(B, P, fl).asDiagonal();
    EXPECT_LT(rel_diff(lhs, rhs), 1e-12) << flavor_name(fl);
  }
}

TEST(Intertwiners, ResonantPairIsReported) {
  ParamPoint P = suites::generic_point(2);
  P.lambda[0] = 0.5;
  P.lambda[1] = 0.5;
  P.z[1] = P.z[0];  // spectral weight 1/2: R-hat has a pole at level 2
  try {
    build_intertwiner_pair(PairKind::Rhat, P, 2, Flavor::rational);
    FAIL() << "expected a resonance error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Err::ResonantParams);
  }
}

TEST(Resonances, Classification) {
  ParamPoint P = suites::generic_point(2);
  EXPECT_EQ(classify_resonance(P, 6, 2).kind(), "none");
  ParamPoint A = P;
  A.z[1] = A.z[0] + A.lambda[0] + A.lambda[1] - 2.0;  // z1 - z2 + l1 + l2 = 2
  auto ra = classify_resonance(A, 6, 2);
  EXPECT_EQ(ra.rational, "first");
  EXPECT_EQ(ra.trig, "second");
  ParamPoint B = P;
  B.z[0] = B.z[1] + B.lambda[0] + B.lambda[1] - 1.0;  // z2 - z1 + l1 + l2 = 1
  EXPECT_EQ(classify_resonance(B, 6, 2).rational, "second");
  ParamPoint C = P;
  C.z[1] = C.z[0] + C.lambda[0] + C.lambda[1] - 1.0 - C.p;  // trigonometric only
  auto rc = classify_resonance(C, 6, 2);
  EXPECT_EQ(rc.rational, "none");
  EXPECT_NE(rc.trig, "none");
}

TEST(QkzOperators, ExtendedCompatibility) {
  ParamPoint P = suites::generic_point(2);
  const auto& ts = suites::named_transforms();
  for (size_t a = 0; a < ts.size(); ++a)
    for (size_t b = a + 1; b < ts.size(); ++b)
      EXPECT_LT(extended_compatibility(ts[a].second, ts[b].second, P, 3), 1e-9) << ts[a].first << ' ' << ts[b].first;
}

TEST(QkzOperators, OrdinaryCompatibility) {
  // H1(z1, z2 + p) H2(z) = H2(z1 + p, z2) H1(z)
  ParamPoint P = suites::generic_point(2);
  ParamPoint S2 = P, S1 = P;
  S2.z[1] += P.p;
  S1.z[0] += P.p;
  Mat lhs = qkz_operator(0, S2, 3) * qkz_operator(1, P, 3);
  Mat rhs = qkz_operator(1, S1, 3) * qkz_operator(0, P, 3);
  EXPECT_LT(rel_diff(lhs, rhs), 1e-9);
}
