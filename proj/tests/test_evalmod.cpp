#include <gtest/gtest.h>

#include "hypkz/evalmod.hpp"

using namespace hypkz;

namespace {
ParamPoint point(int n) {
  ParamPoint P;
  const CVec z{{-0.3, 0.1}, {0.2, -0.2}, {0.45, 0.05}}, l{{0.31, 0.0}, {0.47, 0.0}, {0.2, 0.3}};
  P.z.assign(z.begin(), z.begin() + n);
  P.lambda.assign(l.begin(), l.begin() + n);
  return P;
}

}  // namespace

TEST(Basis, OrderingAndSizes) {
  Basis B(2, 1);
  ASSERT_EQ(B.size(), 3);
  EXPECT_EQ(B.idx[0], (MultiIndex{0, 0}));
  EXPECT_EQ(B.idx[1], (MultiIndex{1, 0}));
  EXPECT_EQ(B.idx[2], (MultiIndex{0, 1}));
  // binomial(n + L, L)
  EXPECT_EQ(Basis(3, 4).size(), 35);
  EXPECT_EQ(Basis(2, 4).block_size(3), 4);
  Basis C(3, 3);
  for (int k = 0; k < C.size(); ++k) EXPECT_EQ(C.find(C.idx[k]), k);
}

TEST(RMatrices, YangBaxterOnThreeCopies) {
  Mat I2 = Mat::Identity(2, 2);
  Mat Pm = Mat::Zero(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) Pm(2 * b + a, 2 * a + b) = 1.0;
  auto R13 = [&](const Mat& R) { return kron(Pm, I2).transpose() * kron(I2, R) * kron(Pm, I2); };
  cplx x{0.7, 0.2}, y{-0.4, 0.9};
  {
    Mat a = Mat(rational_R(x - y)), b = Mat(rational_R(x)), c = Mat(rational_R(y));
    Mat lhs = kron(a, I2) * R13(b) * kron(I2, c);
    Mat rhs = kron(I2, c) * R13(b) * kron(a, I2);
    EXPECT_LT(rel_diff(lhs, rhs), 1e-14);
  }
  {
    cplx p{-3.21, 0.15};
    cplx X = qpow(2.0 * x, p), Y = qpow(2.0 * y, p);
    Mat a = Mat(trig_R(X / Y, p)), b = Mat(trig_R(X, p)), c = Mat(trig_R(Y, p));
    Mat lhs = kron(a, I2) * R13(b) * kron(I2, c);
    Mat rhs = kron(I2, c) * R13(b) * kron(a, I2);
    EXPECT_LT(rel_diff(lhs, rhs), 1e-13);
  }
}

TEST(EvaluationModules, RTTRelation) {
  SampleRng rng(11);
  for (int n = 1; n <= 3; ++n)
    for (int s = 0; s < 3; ++s) EXPECT_LT(rtt_residual(point(n), 3, rng.in_box(2.0), rng.in_box(2.0)), 1e-10) << n;
}

TEST(EvaluationModules, RLLRelation) {
  SampleRng rng(12);
  for (int n = 1; n <= 3; ++n) {
    ParamPoint P = point(n);
    for (int s1 : {1, -1})
      for (int s2 : {1, -1}) {
        cplx xi = qpow(2.0 * rng.in_box(1.0), P.p), ze = qpow(2.0 * rng.in_box(1.0), P.p);
        EXPECT_LT(rll_residual(P, 3, xi, ze, s1, s2), 1e-10) << n << ' ' << s1 << ' ' << s2;
      }
  }
}

TEST(EvaluationModules, HighestWeightSeries) {
  ParamPoint P = point(3);
  TruncatedModule M(P, 2, ModuleFlavor::yangian);
  cplx u{0.3, 0.7};
  auto hw = highest_weight_series(M, u);
  cplx a = 1.0, d = 1.0;
  for (int k = 0; k < 3; ++k) {
    a *= (u - P.z[k] + P.lambda[k]) / (u - P.z[k]);
    d *= (u - P.z[k] - P.lambda[k]) / (u - P.z[k]);
  }
  EXPECT_LT(std::abs(hw.first - a), 1e-14);
  EXPECT_LT(std::abs(hw.second - d), 1e-14);
  // T21 lowers nothing out of the top vector
  Mat t21 = yangian_generator(M, 1, 0, u);
  EXPECT_LT(t21.col(0).norm(), 1e-15);
}

TEST(EvaluationModules, SpectralPoleAndFlavorMismatch) {
  ParamPoint P = point(2);
  TruncatedModule M(P, 1, ModuleFlavor::yangian);
  EXPECT_THROW(yangian_generator(M, 0, 0, P.z[1]), Error);
  EXPECT_THROW(qaffine_generator(M, 0, 0, 1, 1.0), Error);
}
