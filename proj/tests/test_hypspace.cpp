#include <gtest/gtest.h>

#include "hypkz/suites.hpp"

using namespace hypkz;

namespace {
ParamPoint two_sites() { return suites::generic_point(2); }
}  // namespace

TEST(WeightFunctions, ExplicitLowLevels) {
  ParamPoint P = two_sites();
  auto w10 = weight_function(Flavor::rational, {1, 0}, P);
  auto w01 = weight_function(Flavor::rational, {0, 1}, P);
  for (cplx t : {cplx(0.1, 0.9), cplx(-1.3, 0.2), cplx(2.0, -0.7)}) {
    cplx a = 1.0 / (t - P.z[0] - P.lambda[0]);
    cplx b = (t - P.z[0] + P.lambda[0]) / ((t - P.z[0] - P.lambda[0]) * (t - P.z[1] - P.lambda[1]));
    EXPECT_LT(std::abs(w10({t}) - a), 1e-14 * std::abs(a));
    EXPECT_LT(std::abs(w01({t}) - b), 1e-14 * std::abs(b));
  }
}

TEST(WeightFunctions, InvariantUnderBracketAction) {
  ParamPoint P = two_sites();
  SampleRng rng(3);
  for (auto fl : {Flavor::rational, Flavor::trig})
    for (MultiIndex m : {MultiIndex{2, 0}, MultiIndex{1, 1}, MultiIndex{2, 1}}) {
      auto w = weight_function(fl, m, P);
      std::vector<int> perm(w.l);
      std::iota(perm.begin(), perm.end(), 0);
      std::reverse(perm.begin(), perm.end());
      Fn g = bracket_action(fl, P.p, w.eval, perm);
      for (int s = 0; s < 5; ++s) {
        CVec t = sample_point(fl, w.l, P, {}, SamplePlan{}, rng);
        EXPECT_LT(rel_diff(g(t), w(t)), 1e-11) << flavor_name(fl);
      }
    }
}

TEST(NuMap, RationalIntertwinesActions) {
  SamplePlan plan;
  plan.count = 6;
  auto r = verify_nu(Flavor::rational, two_sites(), 2, plan);
  EXPECT_GT(r.checks, 0);
  EXPECT_LT(r.max_residual, 1e-9);
}

TEST(NuMap, TrigIntertwinesActions) {
  SamplePlan plan;
  plan.count = 6;
  auto r = verify_nu(Flavor::trig, two_sites(), 2, plan);
  EXPECT_GT(r.checks, 0);
  EXPECT_LT(r.max_residual, 1e-9);
}

TEST(NuMap, ThreeSitesLevelOne) {
  SamplePlan plan;
  plan.count = 4;
  for (auto fl : {Flavor::rational, Flavor::trig})
    EXPECT_LT(verify_nu(fl, suites::generic_point(3), 1, plan).max_residual, 1e-9) << flavor_name(fl);
}

TEST(FactorMap, ConstantAtKEqualsOne) {
  ParamPoint P = two_sites();
  P.lambda[0] = 0.5;
  EXPECT_EQ(factor_constant(Flavor::rational, 1, P), cplx(-0.5));
  EXPECT_EQ(factor_constant(Flavor::rational, 0, P), cplx(1.0));
}

TEST(FactorMap, IntertwiningAndSurjectivity) {
  for (int k : {0, 1}) {
    ParamPoint R = two_sites();
    R.lambda[0] = 0.5 * k;
    for (auto fl : {Flavor::rational, Flavor::trig}) {
      EXPECT_LT(suites::iota_intertwining_residual(fl, R, 2 + k, 9), 1e-8) << flavor_name(fl) << " k=" << k;
      EXPECT_LT(suites::iota_surjectivity_residual(fl, R, 2 + k, 9), 1e-8) << flavor_name(fl) << " k=" << k;
    }
  }
}

TEST(FactorMap, KillsLowLevelsAndRejectsNonResonantPoints) {
  ParamPoint R = two_sites();
  R.lambda[0] = 0.5;
  EXPECT_TRUE(iota_star(nu_map(Flavor::rational, {1, 0}, R)).zero);
  EXPECT_THROW(iota_star(nu_map(Flavor::rational, {1, 0}, two_sites())), Error);
}

TEST(SpanFit, RecoversKnownCombination) {
  ParamPoint P = two_sites();
  auto a = nu_map(Flavor::trig, {2, 0}, P), b = nu_map(Flavor::trig, {1, 1}, P), c = nu_map(Flavor::trig, {0, 2}, P);
  HypFunction f = a;
  f.eval = [a, b](const CVec& t) { return 2.0 * a(t) - cplx(0.0, 3.0) * b(t); };
  SampleRng rng(4);
  auto pts = sample_points(Flavor::trig, 2, P, 12, SamplePlan{}, rng);
  auto fit = fit_in_span({f}, {a, b, c}, pts);
  EXPECT_LT(fit.residual, 1e-12);
  EXPECT_LT(std::abs(fit.coeffs(0, 0) - 2.0), 1e-10);
  EXPECT_LT(std::abs(fit.coeffs(1, 0) + cplx(0.0, 3.0)), 1e-10);
  EXPECT_LT(std::abs(fit.coeffs(2, 0)), 1e-10);
}
