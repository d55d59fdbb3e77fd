#pragma once

#include "qkzmap.hpp"
#include "report.hpp"

namespace hypkz::suites {

inline ParamPoint generic_point(int n) {
  ParamPoint P;
  const CVec z{{-0.3, 0.1}, {0.2, -0.2}, {0.45, 0.05}}, l{{0.31, 0.0}, {0.47, 0.0}, {0.2, 0.3}};
  P.z.assign(z.begin(), z.begin() + n);
  P.lambda.assign(l.begin(), l.begin() + n);
  return P;
}

// in the straight-contour region Re(z_a + lambda_a) < 0 < Re(z_a - lambda_a)
inline ParamPoint integral_point() {
  ParamPoint P;
  P.z = {{1.6, 0.2}, {1.65, -0.3}};
  P.lambda = {{-2.5, 0.1}, {-2.45, -0.15}};
  return P;
}

template <class F>
inline void guarded(std::vector<Record>& out, const std::string& name, const std::string& anchor, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    out.push_back(failed_with(name, anchor, e));
  }
}

// RTT and RLL relations on truncated tensor products, n = 1..nmax
inline std::vector<Record> exchange_relations(int nmax, int L, std::uint64_t seed, double thr = 1e-10) {
  std::vector<Record> out;
  SampleRng rng(seed);
  for (int n = 1; n <= nmax; ++n) {
    ParamPoint P = generic_point(n);
    std::string tag = "n" + std::to_string(n) + "_L" + std::to_string(L);
    guarded(out, "rtt_" + tag, "RTT relation", [&] {
      double w = 0.0;
      for (int s = 0; s < 2; ++s) w = std::max(w, rtt_residual(P, L, rng.in_box(2.0), rng.in_box(2.0)));
      out.push_back(below("rtt_" + tag, "RTT relation", w, thr));
    });
    guarded(out, "rll_" + tag, "RLL relation", [&] {
      double w = 0.0;
      for (int s1 : {1, -1})
        for (int s2 : {1, -1}) {
          cplx xi = qpow(2.0 * rng.in_box(1.0), P.p), ze = qpow(2.0 * rng.in_box(1.0), P.p);
          w = std::max(w, rll_residual(P, L, xi, ze, s1, s2));
        }
      out.push_back(below("rll_" + tag, "RLL relation", w, thr));
    });
  }
  return out;
}

inline std::vector<Record> braid_and_factorization(int L, double thr_braid = 1e-9, double thr_fact = 1e-10) {
  std::vector<Record> out;
  ParamPoint P3 = generic_point(3), P2 = generic_point(2);
  for (auto fl : {Flavor::rational, Flavor::trig}) {
    std::string f = flavor_name(fl);
    guarded(out, "braid_" + f, "Yang-Baxter braid relation", [&] {
      out.push_back(below("braid_" + f, "Yang-Baxter braid relation", braid_residual(P3, L, fl), thr_braid));
    });
    guarded(out, "nd_equals_rhat_" + f, "N D factorization of R-hat", [&] {
      auto r = sigma_pair_matrix(ParamTransform::swap12(true, true), P2, L, fl);
      Mat R = build_intertwiner_pair(PairKind::Rhat, P2, L, fl).matrix;
      out.push_back(below("nd_equals_rhat_" + f, "N D factorization of R-hat", rel_diff(r.mat.matrix, R), thr_fact));
      out.push_back(below("nd_equals_dn_" + f, "N D factorization of R-hat", r.word_independence, thr_fact));
    });
  }
  return out;
}

// At lambda = (1/2, 1/2) the level <= 1 part of R-hat equals P (x + P) / (x + 1) on C^2 x C^2, x = z_1 - z_2.
inline Mat brute_force_rhat_level1(cplx x) {
  Eigen::Matrix4cd Pm = Eigen::Matrix4cd::Zero();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) Pm(2 * b + a, 2 * a + b) = 1.0;
  Eigen::Matrix4cd Rh = Pm * (x * Eigen::Matrix4cd::Identity() + Pm) / (x + 1.0);
  // C^2 basis (v, f v): v x v -> 0, f v x v -> 2, v x f v -> 1; monomial order (0,0), (1,0), (0,1)
  const int map[3] = {0, 2, 1};
  Mat out(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out(i, j) = Rh(map[i], map[j]);
  return out;
}

inline std::vector<Record> spectral_oracle(double thr = 1e-12) {
  std::vector<Record> out;
  guarded(out, "spectral_oracle", "R-hat spectral decomposition", [&] {
    ParamPoint P;
    P.z = {{0.37, 0.21}, {-0.45, 0.6}};
    P.lambda = {0.5, 0.5};
    Mat A = rhat_rational(P, 1);
    Mat B = brute_force_rhat_level1(P.z[0] - P.z[1]);
    out.push_back(below("spectral_oracle", "R-hat spectral decomposition", max_abs(A / A(0, 0) - B / B(0, 0)), thr));
  });
  return out;
}

inline std::vector<Record> nu_homomorphism(int L, int count, std::uint64_t seed, double thr = 1e-9) {
  std::vector<Record> out;
  ParamPoint P = generic_point(2);
  for (auto fl : {Flavor::rational, Flavor::trig}) {
    std::string name = std::string("nu_") + flavor_name(fl);
    guarded(out, name, "nu homomorphism", [&] {
      SamplePlan plan;
      plan.count = count;
      plan.seed = seed;
      NuReport r = verify_nu(fl, P, L, plan);
      out.push_back(below(name, "nu homomorphism", r.max_residual, thr, std::to_string(r.checks) + " evaluations"));
    });
  }
  return out;
}

// iota^* o (action) = (action) o iota^* after rescaling by the action normalizer, on levels 0..L
inline double iota_intertwining_residual(Flavor fl, const ParamPoint& R, int L, std::uint64_t seed) {
  ParamPoint Q = iota_target(R);
  SamplePlan plan;
  SampleRng rng(seed);
  cplx u{0.37, 0.81};
  double dmax = 0.0, vmax = 0.0;
  for (int l = 0; l <= L; ++l)
    for (auto& m : multiindices(R.n(), l)) {
      HypFunction f = nu_map(fl, m, R), jf = iota_star(f);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          HypFunction lhs = iota_star(action_on_F(i, j, u, f)), rhs = action_on_F(i, j, u, jf);
          for (int s = 0; s < 4; ++s) {
            CVec t = sample_point(fl, lhs.l, Q, {u}, plan, rng);
            cplx a = lhs(t) * action_normalizer(fl, R, u);
            cplx b = rhs.zero ? cplx(0.0) : rhs(t) * action_normalizer(fl, Q, u);
            dmax = std::max(dmax, std::abs(a - b));
            vmax = std::max({vmax, std::abs(a), std::abs(b)});
          }
        }
    }
  return vmax > 0 ? dmax / vmax : 0.0;
}

// every target basis function at level l - k - 1 is an exact combination of iota^* images of level l
inline double iota_surjectivity_residual(Flavor fl, const ParamPoint& R, int L, std::uint64_t seed) {
  int k = resonance_k(R);
  ParamPoint Q = iota_target(R);
  SampleRng rng(seed);
  double worst = 0.0;
  for (int l = k + 1; l <= L; ++l) {
    std::vector<HypFunction> imgs, target;
    for (auto& m : multiindices(R.n(), l)) imgs.push_back(iota_star(nu_map(fl, m, R)));
    for (auto& m : multiindices(R.n(), l - k - 1)) target.push_back(nu_map(fl, m, Q));
    auto pts = sample_points(fl, l - k - 1, Q, 3 * int(imgs.size()) + 5, SamplePlan{}, rng);
    worst = std::max(worst, fit_in_span(target, imgs, pts).residual);
  }
  return worst;
}

inline std::vector<Record> iota_suite(int L, std::uint64_t seed, double thr = 1e-8) {
  std::vector<Record> out;
  for (int k = 0; k <= 1; ++k)
    for (auto fl : {Flavor::rational, Flavor::trig}) {
      std::string tag = std::string(flavor_name(fl)) + "_k" + std::to_string(k);
      guarded(out, "iota_intertwining_" + tag, "iota factor map intertwining", [&] {
        ParamPoint R = generic_point(2);
        R.lambda[0] = 0.5 * k;
        out.push_back(below("iota_intertwining_" + tag, "iota factor map intertwining",
                            iota_intertwining_residual(fl, R, L, seed), thr));
        out.push_back(below("iota_surjective_" + tag, "iota factor map surjectivity",
                            iota_surjectivity_residual(fl, R, L, seed), thr));
      });
    }
  guarded(out, "factor_constant_D1", "factor constant D(k)", [&] {
    ParamPoint R = generic_point(2);
    R.lambda[0] = 0.5;
    cplx d = factor_constant(Flavor::rational, 1, R);
    out.push_back(below("factor_constant_D1", "factor constant D(k)", std::abs(d + 0.5), 1e-15, fmt_cplx(d)));
  });
  return out;
}

inline const std::vector<std::pair<std::string, ParamTransform>>& named_transforms() {
  static const std::vector<std::pair<std::string, ParamTransform>> ts = {
      {"id", ParamTransform::identity(2)},
      {"12x12", ParamTransform::swap12(true, true)},
      {"idx12", ParamTransform::swap12(true, false)},
      {"12xid", ParamTransform::swap12(false, true)}};
  return ts;
}

inline std::vector<Record> extended_compatibility_suite(const ParamPoint& P, int L, double thr = 1e-9) {
  std::vector<Record> out;
  const auto& ts = named_transforms();
  for (size_t a = 0; a < ts.size(); ++a)
    for (size_t b = a + 1; b < ts.size(); ++b) {
      std::string name = "compat_" + ts[a].first + "_" + ts[b].first;
      guarded(out, name, "extended qKZ compatibility", [&] {
        out.push_back(below(name, "extended qKZ compatibility", extended_compatibility(ts[a].second, ts[b].second, P, L), thr));
      });
    }
  return out;
}

inline std::vector<Record> algebra_suite(int L, std::uint64_t seed) {
  std::vector<Record> out;
  auto add = [&](const std::vector<Record>& rs) { out.insert(out.end(), rs.begin(), rs.end()); };
  add(exchange_relations(3, L, seed));
  add(braid_and_factorization(L));
  add(spectral_oracle());
  add(nu_homomorphism(std::min(L, 2), 20, seed));
  add(iota_suite(std::min(L, 3), seed));
  add(extended_compatibility_suite(integral_point(), std::min(L, 2)));
  return out;
}

inline std::vector<Record> qkz_suite(const ParamPoint& P, int L, const QuadratureSpec& spec, bool refinement = true,
                                     double thr = 1e-4, int only_m = -1) {
  std::vector<Record> out;
  for (int m = 0; m < P.n(); ++m) {
    if (only_m >= 0 && m != only_m) continue;
    std::string name = "qkz_equation_m" + std::to_string(m + 1);
    guarded(out, name, "qKZ difference equation", [&] {
      auto r = check_qkz_equation(P, L, m, spec);
      Record rec = below(name, "qKZ difference equation", r.residual, thr,
                         "error estimate " + fmt_double(r.error_estimate));
      if (!r.converged && rec.verdict == Verdict::PASS) rec.verdict = Verdict::WARN;
      out.push_back(rec);
    });
  }
  if (refinement) {
    guarded(out, "qkz_refinement_order", "qKZ difference equation", [&] {
      auto st = qkz_refinement_study(P, L, 0, 3, 4.0, 2);
      std::ostringstream d;
      for (size_t k = 0; k < st.residual.size(); ++k) d << "h=" << st.panel[k] << ":" << fmt_double(st.residual[k]) << ' ';
      bool decreasing = true;
      for (size_t k = 1; k < st.residual.size(); ++k) decreasing = decreasing && st.residual[k] < st.residual[k - 1];
      Record rec = at_least("qkz_refinement_order", "qKZ difference equation", st.min_order, 2.0, d.str());
      if (!decreasing) rec.verdict = Verdict::FAIL;
      out.push_back(rec);
    });
  }
  return out;
}

inline std::vector<Record> diagram_suite(const ParamPoint& P, int L, const QuadratureSpec& spec,
                                         const std::vector<std::string>& names) {
  std::vector<Record> out;
  for (auto& nm : names) {
    std::string name = "diagram_" + nm;
    guarded(out, name, "extended monodromy diagram", [&] {
      auto r = check_extended_monodromy(P, L, parse_transform(nm), spec);
      out.push_back(below("phase_invariance_" + nm, "phase function invariance", r.phase_invariance, 1e-12));
      double thr = 10.0 * r.error_estimate;
      Record rec = below(name, "extended monodromy diagram", r.residual, thr,
                         "threshold is 10x the quadrature error estimate");
      if (!r.converged && rec.verdict == Verdict::PASS) rec.verdict = Verdict::WARN;
      out.push_back(rec);
    });
  }
  return out;
}

inline std::vector<Record> extended_qkz_suite(const ParamPoint& P, int L, const QuadratureSpec& spec,
                                              const std::vector<std::string>& names, double thr = 1e-5) {
  std::vector<Record> out;
  for (auto& nm : names) {
    std::string name = "extended_qkz_" + nm;
    guarded(out, name, "extended qKZ equation", [&] {
      auto r = check_extended_qkz(P, L, parse_transform(nm), spec);
      std::ostringstream d;
      d << "Psi(Tx) = H Psi(x) X with diag(X) =";
      for (int k = 0; k < r.column_ratio.rows(); ++k) d << ' ' << fmt_cplx(r.column_ratio(k, k));
      out.push_back(below(name, "extended qKZ equation", r.residual, thr, d.str()));
    });
  }
  return out;
}

inline ParamPoint residue_identity_point(int k) {
  ParamPoint P;
  P.z = {{0.9, 0.1}, {0.2, -0.3}};
  P.lambda = {0.5 * k, {-1.1, 0.1}};
  return P;
}

inline std::vector<Record> residue_identity_suite(const ParamPoint& P, int k, double thr = 1e-4) {
  std::vector<Record> out;
  guarded(out, "residue_identity_C", "residue of the integral at 2 lambda_1 = k", [&] {
    auto r = residue_identity_check(P, k, MultiIndex{k + 1, 0});
    out.push_back(below("residue_identity_C", "residue of the integral at 2 lambda_1 = k", r.rel_plain, thr,
                        "lhs/rhs = " + fmt_cplx(r.ratio)));
    out.push_back(below("residue_identity_corrected_C", "residue of the integral at 2 lambda_1 = k", r.rel_corrected,
                        thr, "(2 pi i)^(k+1) and the constant correction applied"));
  });
  return out;
}

inline std::vector<Record> scan_suite(int L, const QuadratureSpec& spec) {
  std::vector<Record> out;
  guarded(out, "scan", "singularity hyperplanes", [&] {
    auto lines = default_scan_lines();
    auto scans = scan_singularities(lines, L, spec);
    int control = 0;
    for (size_t c = 0; c < scans.size(); ++c) {
      const auto& s = scans[c];
      std::string name = lines[c].control ? "scan_control_" + std::to_string(++control)
                                          : std::string("scan_") + s.predicted;
      std::ostringstream d;
      d << "hyperplane (i,j,m,s)=(" << s.hyperplane.i + 1 << ',' << s.hyperplane.j + 1 << ',' << s.hyperplane.m << ','
        << s.hyperplane.s << ") side=" << s.side << " order=" << s.order;
      if (s.side != "pole")
        d << " sigma_min=" << fmt_double(s.smallest_singular_value) << " fit=" << fmt_double(s.linear_fit_residual);
      bool ok = s.side == s.predicted && !s.ambiguous && (s.side != "pole" || s.order == 1);
      out.push_back(flag(name, "singularity hyperplanes", ok, d.str()));
    }
  });
  return out;
}

inline std::vector<Record> residue_map_suite(int L, const QuadratureSpec& spec, double thr = 1e-3) {
  std::vector<Record> out;
  guarded(out, "residue_map_scalar", "residue map onto the submodule", [&] {
    auto r = residue_map_check(default_scan_lines()[0].base, L, spec);
    out.push_back(flag("residue_map_order", "residue map onto the submodule", r.order == 1 && !r.ambiguous,
                       "pole order " + std::to_string(r.order)));
    out.push_back(below("residue_map_level0", "residue map onto the submodule", r.level0_residual, 1e-6));
    out.push_back(below("residue_map_rank_one", "residue map onto the submodule", r.rank_gap, 1e-6));
    out.push_back(below("residue_map_kernel_angle", "residue map onto the submodule", r.kernel_angle, 1e-5));
    out.push_back(below("residue_map_image_angle", "residue map onto the submodule", r.image_angle, 1e-5));
    out.push_back(below("residue_map_scalar", "residue map onto the submodule", r.scalar_consistency, thr,
                        "scalar " + fmt_cplx(r.scalar)));
  });
  return out;
}

}  // namespace hypkz::suites
