#include <gtest/gtest.h>

#include "hypkz/sl2core.hpp"

using namespace hypkz;

namespace {
const cplx kP{-3.21, 0.15};
}

TEST(Shapovalov, RationalMatchesIteratedRaising) {
  // <f^l v, f^l v> is the top entry of e^l f^l v in the slice
  for (cplx lam : {cplx(0.31, 0.0), cplx(-0.7, 0.4), cplx(2.2, -1.3)}) {
    VermaSlice V(lam, 5);
    for (int l = 0; l <= 5; ++l) {
      Vec v = Vec::Zero(6);
      v(0) = 1.0;
      for (int k = 0; k < l; ++k) v = V.f * v;
      for (int k = 0; k < l; ++k) v = V.e * v;
      EXPECT_LT(std::abs(v(0) - shapovalov_rational(lam, l)), 1e-12 * (1.0 + std::abs(v(0))));
    }
  }
}

TEST(Shapovalov, TrigMatchesIteratedRaising) {
  cplx lam{0.47, 0.2};
  QVermaSlice V(lam, kP, 4);
  for (int l = 0; l <= 4; ++l) {
    Vec v = Vec::Zero(5);
    v(0) = 1.0;
    for (int k = 0; k < l; ++k) v = V.f * v;
    for (int k = 0; k < l; ++k) v = V.e * v;
    EXPECT_LT(std::abs(v(0) - shapovalov_trig(lam, l, kP)), 1e-12 * (1.0 + std::abs(v(0))));
  }
}

TEST(Shapovalov, ZeroSetIsHalfIntegers) {
  EXPECT_TRUE(shapovalov_rational_vanishes(0.5, 2));
  EXPECT_TRUE(shapovalov_rational_vanishes(0.0, 1));
  EXPECT_FALSE(shapovalov_rational_vanishes(0.5, 1));
  EXPECT_FALSE(shapovalov_rational_vanishes(cplx(0.5, 1e-3), 3));
  EXPECT_EQ(shapovalov_rational(1.0, 3), cplx(0.0));
  EXPECT_LT(std::abs(shapovalov_trig(1.0, 3, kP)), 1e-14);
}

TEST(Shapovalov, MultiIsProductOfFactors) {
  CVec lam{{0.3, 0.1}, {-0.8, 0.2}};
  cplx v = shapovalov_multi({2, 1}, lam, false, kP);
  EXPECT_LT(std::abs(v - shapovalov_rational(lam[0], 2) * shapovalov_rational(lam[1], 1)), 1e-14);
  cplx w = shapovalov_multi({1, 2}, lam, true, kP);
  EXPECT_LT(std::abs(w - shapovalov_trig(lam[0], 1, kP) * shapovalov_trig(lam[1], 2, kP)), 1e-13);
}

TEST(QNumbers, ClassicalLimitAndSmallValues) {
  cplx big{-4000.0, 0.0};
  // [n]_q = n - n (n^2 - 1) pi^2 / (6 p^2) + O(p^-4)
  for (int n = 1; n <= 5; ++n) {
    double second = n * (n * n - 1.0) * pi * pi / (6.0 * 4000.0 * 4000.0);
    EXPECT_LT(std::abs(q_number(double(n), big) - (double(n) - second)), 1e-11);
  }
  cplx q = qpow(1.0, kP);
  EXPECT_LT(std::abs(q_number(2.0, kP) - (q + 1.0 / q)), 1e-14);
  EXPECT_LT(std::abs(q_factorial(3, kP) - q_number(2.0, kP) * q_number(3.0, kP)), 1e-13);
}

TEST(QNumbers, DegenerateQThrows) {
  EXPECT_THROW(q_factorial(3, cplx(-2.0, 0.0)), Error);
  EXPECT_THROW(q_number(1.0, cplx(1.0, 0.0)), Error);
}

TEST(VermaSlices, CommutationRelations) {
  for (int L : {1, 3, 6}) {
    EXPECT_LT(VermaSlice(cplx(0.37, -0.2), L).commutator_residual(), 1e-13);
    EXPECT_LT(QVermaSlice(cplx(0.37, -0.2), kP, L).commutator_residual(), 1e-12);
  }
}

TEST(SingularVectors, RationalLevelOneClosedForm) {
  cplx l1{0.31, 0.0}, l2{0.47, 0.1};
  auto sv = singular_vector(l1, l2, 1, Flavor::rational);
  ASSERT_EQ(sv.coeffs.size(), 2u);
  // e(a f v1 x v2 + b v1 x f v2) = 2(a l1 + b l2) v1 x v2
  EXPECT_LT(std::abs(sv.coeffs[0] - 1.0 / (2.0 * l1)), 1e-14);
  EXPECT_LT(std::abs(sv.coeffs[1] + 1.0 / (2.0 * l2)), 1e-14);
}

TEST(SingularVectors, AnnihilatedByRaising) {
  cplx l1{0.31, 0.0}, l2{0.2, 0.3};
  for (auto fl : {Flavor::rational, Flavor::trig})
    for (int l = 1; l <= 4; ++l) {
      auto sv = singular_vector(l1, l2, l, fl, kP);
      Vec v = Eigen::Map<Vec>(sv.coeffs.data(), l + 1);
      Mat E = two_factor_e(l1, l2, l, fl, kP);
      EXPECT_LT((E * v).norm() / v.norm(), 1e-12) << flavor_name(fl) << " l=" << l;
      cplx B = fl == Flavor::rational ? shapovalov_rational(l1, l) : shapovalov_trig(l1, l, kP);
      EXPECT_LT(std::abs(sv.coeffs[0] * B - 1.0), 1e-12);
    }
}

TEST(SingularVectors, NormalizationSingularAtZeroOfShapovalov) {
  try {
    singular_vector(0.5, 0.3, 2, Flavor::rational);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Err::NormalizationSingular);
  }
}
