#pragma once

#include <functional>
#include <optional>

#include "hypspace.hpp"

namespace hypkz {

// (sigma' x sigma): 0-based images. z'_a + lambda'_a = z_{sigma(a)} + lambda_{sigma(a)},
// z'_a - lambda'_a = z_{sigma'(a)} - lambda_{sigma'(a)}.
struct ParamTransform {
  std::vector<int> sigma, sigma_prime;

  static ParamTransform identity(int n) {
    ParamTransform t;
    t.sigma.resize(n);
    std::iota(t.sigma.begin(), t.sigma.end(), 0);
    t.sigma_prime = t.sigma;
    return t;
  }
  static ParamTransform swap12(bool sig, bool sigp, int n = 2) {
    ParamTransform t = identity(n);
    if (sig) std::swap(t.sigma[0], t.sigma[1]);
    if (sigp) std::swap(t.sigma_prime[0], t.sigma_prime[1]);
    return t;
  }
  bool is_identity() const {
    for (size_t a = 0; a < sigma.size(); ++a)
      if (sigma[a] != int(a) || sigma_prime[a] != int(a)) return false;
    return true;
  }
};

inline std::vector<int> perm_compose(const std::vector<int>& s, const std::vector<int>& t) {
  std::vector<int> r(t.size());
  for (size_t a = 0; a < t.size(); ++a) r[a] = s[t[a]];
  return r;
}

inline std::vector<int> perm_inverse(const std::vector<int>& s) {
  std::vector<int> r(s.size());
  for (size_t a = 0; a < s.size(); ++a) r[s[a]] = static_cast<int>(a);
  return r;
}

// applying t then u to a point equals applying compose(t, u) = (sigma' tau' x sigma tau)
inline ParamTransform compose(const ParamTransform& t, const ParamTransform& u) {
  return {perm_compose(t.sigma, u.sigma), perm_compose(t.sigma_prime, u.sigma_prime)};
}

inline ParamTransform inverse(const ParamTransform& t) {
  return {perm_inverse(t.sigma), perm_inverse(t.sigma_prime)};
}

inline ParamPoint transform_params(const ParamPoint& P, const ParamTransform& t) {
  ParamPoint Q = P;
  for (int a = 0; a < P.n(); ++a) {
    cplx plus = P.z[t.sigma[a]] + P.lambda[t.sigma[a]];
    cplx minus = P.z[t.sigma_prime[a]] - P.lambda[t.sigma_prime[a]];
    Q.z[a] = 0.5 * (plus + minus);
    Q.lambda[a] = 0.5 * (plus - minus);
  }
  return Q;
}

inline Vec shapovalov_diag(const Basis& B, const ParamPoint& P, Flavor fl) {
  Vec d(B.size());
  for (int k = 0; k < B.size(); ++k) d(k) = shapovalov_multi(B.idx[k], P.lambda, fl == Flavor::trig, P.p);
  return d;
}

// Both parameter labels' poles avoided by the samples.
inline ParamPoint joint_poles(const ParamPoint& a, const ParamPoint& b) {
  ParamPoint j = a;
  j.z.insert(j.z.end(), b.z.begin(), b.z.end());
  j.lambda.insert(j.lambda.end(), b.lambda.begin(), b.lambda.end());
  return j;
}

// Matrix of (sigma' x sigma) obtained from the basis images: nu(src) e*_l = sum_m M_ml nu(dst) e*_m,
// returned as A = Sh(dst)^{-1} M Sh(src).
inline Mat weight_route_matrix(Flavor fl, const ParamPoint& src, const ParamPoint& dst, int L,
                               std::uint64_t seed = 7, double* fit_residual = nullptr) {
  Basis B(src.n(), L);
  Mat A = Mat::Zero(B.size(), B.size());
  SampleRng rng(seed);
  SamplePlan plan;
  plan.box = 1.5;
  ParamPoint jp = joint_poles(src, dst);
  Vec ss = shapovalov_diag(B, src, fl), sd = shapovalov_diag(B, dst, fl);
  double worst = 0.0;
  for (int l = 0; l <= L; ++l) {
    int s0 = B.level_start[l], nb = B.block_size(l);
    std::vector<HypFunction> fs, bs;
    for (int k = 0; k < nb; ++k) {
      fs.push_back(nu_map(fl, B.idx[s0 + k], src));
      bs.push_back(nu_map(fl, B.idx[s0 + k], dst));
    }
    auto pts = sample_points(fl, l, jp, 3 * nb + 5, plan, rng);
    SpanFit fit = fit_in_span(fs, bs, pts);
    worst = std::max(worst, fit.residual);
    for (int a = 0; a < nb; ++a)
      for (int b = 0; b < nb; ++b) A(s0 + a, s0 + b) = ss(s0 + b) * fit.coeffs(a, b) / sd(s0 + a);
  }
  if (fit_residual) *fit_residual = worst;
  return A;
}

// Shapovalov contragredient Sh'^{-1} A^{-T} Sh: the module isomorphism V(src) -> V(dst).
inline Mat contragredient(const Mat& A, const ParamPoint& src, const ParamPoint& dst, Flavor fl, int L) {
  Basis B(src.n(), L);
  Vec ss = shapovalov_diag(B, src, fl), sd = shapovalov_diag(B, dst, fl);
  Mat Ait = A.inverse().transpose();
  return sd.cwiseInverse().asDiagonal() * Ait * ss.asDiagonal();
}

enum class PairKind { Rhat, N, D };

inline const char* pair_kind_name(PairKind k) {
  switch (k) {
    case PairKind::Rhat: return "Rhat";
    case PairKind::N: return "N";
    case PairKind::D: return "D";
  }
  return "?";
}

// Rhat: sigma = sigma' = (12); N: sigma = id, sigma' = (12); D: sigma = (12), sigma' = id
inline ParamTransform pair_transform(PairKind k) {
  switch (k) {
    case PairKind::Rhat: return ParamTransform::swap12(true, true);
    case PairKind::N: return ParamTransform::swap12(false, true);
    case PairKind::D: return ParamTransform::swap12(true, false);
  }
  return ParamTransform::identity(2);
}

// Delta f (rational) or f (x) q^{-h} + q^h (x) f (trig) from level m to m+1 of V(l1) (x) V(l2);
// index j is the power on the second factor.
inline Mat two_factor_f(cplx l1, cplx l2, int m, Flavor fl, cplx p) {
  Mat F = Mat::Zero(m + 2, m + 1);
  for (int j = 0; j <= m; ++j) {
    int a = m - j;
    F(j, j) += fl == Flavor::rational ? cplx(1.0) : qpow(-(l2 - double(j)), p);
    F(j + 1, j) += fl == Flavor::rational ? cplx(1.0) : qpow(l1 - double(a), p);
  }
  return F;
}

// Columns f^{m-l} v_(l1,l2;l), l = 0..m, spanning level m.
inline Mat singular_frame(cplx l1, cplx l2, int m, Flavor fl, cplx p) {
  Mat S(m + 1, m + 1);
  for (int l = 0; l <= m; ++l) {
    SingularVector sv = singular_vector(l1, l2, l, fl, p);
    Vec v = Eigen::Map<Vec>(sv.coeffs.data(), l + 1);
    for (int s = l; s < m; ++s) v = two_factor_f(l1, l2, s, fl, p) * v;
    S.col(l) = v;
  }
  return S;
}

// (lambda^{(12)}_{id})_1 = (z1 - z2 + lambda1 + lambda2)/2
inline cplx spectral_weight(const ParamPoint& P) { return 0.5 * (P.z[0] - P.z[1] + P.lambda[0] + P.lambda[1]); }

// Eigenvalue of the pair intertwiner on the submodule generated by v_(l1,l2;l).
inline cplx pair_eigenvalue(PairKind kind, Flavor fl, const ParamPoint& P, const ParamPoint& Q, int l) {
  cplx p = P.p;
  auto B = [&](cplx x) { return fl == Flavor::rational ? shapovalov_rational(x, l) : shapovalov_trig(x, l, p); };
  cplx num, den;
  switch (kind) {
    case PairKind::Rhat:
      num = B(spectral_weight(Q));
      den = B(spectral_weight(P));
      break;
    case PairKind::D:
      num = B(Q.lambda[0]);
      den = B(P.lambda[0]);
      break;
    case PairKind::N:
      num = B(Q.lambda[1]);
      den = B(P.lambda[1]);
      break;
  }
  if (std::abs(den) < 1e-13)
    throw Error(Err::ResonantParams, std::string(pair_kind_name(kind)) + " has a pole at level " + std::to_string(l));
  cplx v = num / den;
  if (fl == Flavor::trig) v *= qpow(double(l) * (Q.lambda[0] - P.lambda[0]), p);
  return v;
}

struct IntertwinerMatrix {
  std::string kind;
  ParamPoint source, target;
  Flavor flavor;
  Mat matrix;
};

// Spectral construction from the singular-vector decomposition of V(l1) (x) V(l2).
inline IntertwinerMatrix build_intertwiner_pair(PairKind kind, const ParamPoint& P, int L, Flavor fl) {
  if (P.n() != 2) throw Error(Err::ConfigError, "pair intertwiners act on two factors");
  ParamPoint Q = transform_params(P, pair_transform(kind));
  Basis B(2, L);
  Mat A = Mat::Zero(B.size(), B.size());
  for (int m = 0; m <= L; ++m) {
    Mat S, T;
    try {
      S = singular_frame(P.lambda[0], P.lambda[1], m, fl, P.p);
      T = singular_frame(Q.lambda[0], Q.lambda[1], m, fl, P.p);
    } catch (const Error& e) {
      throw Error(Err::ResonantParams, std::string("singular vectors unavailable: ") + e.what());
    }
    Vec ev(m + 1);
    for (int l = 0; l <= m; ++l) ev(l) = pair_eigenvalue(kind, fl, P, Q, l);
    A.block(B.level_start[m], B.level_start[m], m + 1, m + 1) = T * ev.asDiagonal() * S.inverse();
  }
  return {std::string(pair_kind_name(kind)) + (fl == Flavor::trig ? "_q" : ""), P, Q, fl, A};
}

// Embed a two-factor operator on factors (a, a+1) of an n-factor truncation.
inline Mat embed_pair(const Mat& M2, int a, int n, int L) {
  Basis B(n, L), B2(2, L);
  Mat out = Mat::Zero(B.size(), B.size());
  for (int c = 0; c < B.size(); ++c) {
    const MultiIndex& mc = B.idx[c];
    int lc = mc[a] + mc[a + 1];
    for (int r = 0; r < B.size(); ++r) {
      const MultiIndex& mr = B.idx[r];
      bool same = true;
      for (int b = 0; b < n; ++b)
        if (b != a && b != a + 1 && mr[b] != mc[b]) same = false;
      if (!same || mr[a] + mr[a + 1] != lc) continue;
      out(r, c) = M2(B2.find({mr[a], mr[a + 1]}), B2.find({mc[a], mc[a + 1]}));
    }
  }
  return out;
}

inline ParamPoint pair_params(const ParamPoint& P, int a) {
  ParamPoint Q = P;
  Q.z = {P.z[a], P.z[a + 1]};
  Q.lambda = {P.lambda[a], P.lambda[a + 1]};
  return Q;
}

// Transform acting on the pair (a,a+1) only.
inline ParamTransform adjacent(int n, int a, bool sig, bool sigp) {
  ParamTransform t = ParamTransform::identity(n);
  if (sig) std::swap(t.sigma[a], t.sigma[a + 1]);
  if (sigp) std::swap(t.sigma_prime[a], t.sigma_prime[a + 1]);
  return t;
}

// word w with perm = s_{w1} s_{w2} ... (composition, applied left to right as parameter steps);
// from_right picks the rightmost descent first, giving a different reduced word in general
inline std::vector<int> reduced_word(const std::vector<int>& perm, bool from_right = false) {
  std::vector<int> cur = perm, rec;
  int n = static_cast<int>(cur.size());
  for (;;) {
    int found = -1;
    for (int k = 0; k + 1 < n; ++k) {
      int i = from_right ? n - 2 - k : k;
      if (cur[i] > cur[i + 1]) {
        found = i;
        break;
      }
    }
    if (found < 0) break;
    std::swap(cur[found], cur[found + 1]);
    rec.push_back(found);
  }
  std::reverse(rec.begin(), rec.end());
  return rec;
}

struct GeneratorStep {
  PairKind kind;  // N (sigma' step), D (sigma step) or Rhat (both)
  int a;
};

// Product of per-step adjacent N/D matrices along a step sequence, with parameter updates.
inline Mat steps_matrix(const std::vector<GeneratorStep>& steps, const ParamPoint& P, int L, Flavor fl,
                        ParamPoint* end = nullptr) {
  int n = P.n();
  Basis B(n, L);
  Mat M = Mat::Identity(B.size(), B.size());
  ParamPoint cur = P;
  for (auto& s : steps) {
    IntertwinerMatrix pm = build_intertwiner_pair(s.kind, pair_params(cur, s.a), L, fl);
    M = embed_pair(pm.matrix, s.a, n, L) * M;
    cur = transform_params(cur, adjacent(n, s.a, s.kind != PairKind::N, s.kind != PairKind::D));
  }
  if (end) *end = cur;
  return M;
}

inline std::vector<GeneratorStep> default_steps(const ParamTransform& t, bool d_first, bool from_right = false) {
  std::vector<GeneratorStep> ds, ns, out;
  for (int a : reduced_word(t.sigma, from_right)) ds.push_back({PairKind::D, a});
  for (int a : reduced_word(t.sigma_prime, from_right)) ns.push_back({PairKind::N, a});
  if (d_first) {
    out = ds;
    out.insert(out.end(), ns.begin(), ns.end());
  } else {
    out = ns;
    out.insert(out.end(), ds.begin(), ds.end());
  }
  return out;
}

struct SigmaPairResult {
  IntertwinerMatrix mat;
  double word_independence = 0.0;  // relative difference between two step orders
};

inline SigmaPairResult sigma_pair_matrix(const ParamTransform& t, const ParamPoint& P, int L, Flavor fl) {
  ParamPoint Q = transform_params(P, t), e1, e2;
  Mat M1 = steps_matrix(default_steps(t, true), P, L, fl, &e1);
  Mat M2 = steps_matrix(default_steps(t, false, true), P, L, fl, &e2);
  SigmaPairResult r{{"composite", P, Q, fl, M1}, rel_diff(M1, M2)};
  return r;
}

// Rhat_12 Rhat_23 Rhat_12 versus Rhat_23 Rhat_12 Rhat_23 on three factors, with parameter updates
inline double braid_residual(const ParamPoint& P, int L, Flavor fl) {
  if (P.n() != 3) throw Error(Err::ConfigError, "braid check needs n = 3");
  Mat a = steps_matrix({{PairKind::Rhat, 0}, {PairKind::Rhat, 1}, {PairKind::Rhat, 0}}, P, L, fl);
  Mat b = steps_matrix({{PairKind::Rhat, 1}, {PairKind::Rhat, 0}, {PairKind::Rhat, 1}}, P, L, fl);
  return rel_diff(a, b);
}

// Resonances z_a - z_b + lambda_a + lambda_b = k + p s.
struct ResonancePair {
  int a, b, k, s;
};

struct ResonanceReport {
  std::string rational = "none", trig = "none";
  std::vector<ResonancePair> pairs;
  std::string kind() const {
    if (rational == "none" && trig == "none") return "none";
    std::string s;
    if (rational != "none") s += "rational-" + rational;
    if (trig != "none") s += std::string(s.empty() ? "" : ",") + "trig-" + trig;
    return s;
  }
};

inline ResonanceReport classify_resonance(const ParamPoint& P, int kmax, int smax, double tol = 1e-8) {
  ResonanceReport rep;
  int n = P.n(), hits = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      cplx v = P.z[a] - P.z[b] + P.lambda[a] + P.lambda[b];
      bool hit = false;
      for (int k = 0; k <= kmax; ++k)
        for (int s = -smax; s <= smax; ++s)
          if (std::abs(v - double(k) - double(s) * P.p) < tol) {
            rep.pairs.push_back({a, b, k, s});
            hit = true;
            if (s == 0) rep.rational = a <= b ? "first" : "second";
            rep.trig = a >= b ? "first" : "second";
          }
      hits += hit;
    }
  if (hits > 1) throw Error(Err::AmbiguousResonance, "more than one resonant pair");
  return rep;
}

// kappa^{-h_m}: entries exp(-mu (lambda_m - l_m))
inline Mat kappa_h(const ParamPoint& P, int m, int L) {
  Basis B(P.n(), L);
  Vec d(B.size());
  for (int k = 0; k < B.size(); ++k) d(k) = std::exp(-P.mu * (P.lambda[m] - double(B.idx[k][m])));
  return d.asDiagonal();
}

// Flip of the two factors, (l1,l2) -> (l2,l1).
inline Mat flip_matrix(int L) {
  Basis B(2, L);
  Mat F = Mat::Zero(B.size(), B.size());
  for (int k = 0; k < B.size(); ++k) F(B.find({B.idx[k][1], B.idx[k][0]}), k) = 1.0;
  return F;
}

inline Mat rhat_rational(const ParamPoint& P, int L) {
  return build_intertwiner_pair(PairKind::Rhat, P, L, Flavor::rational).matrix;
}

// qKZ operators for n <= 2: H_1 = kappa^{-h_1} (P Rhat(z,lambda))^{-1}, H_2 = P Rhat((z1, z2+p),lambda) kappa^{-h_2}.
inline Mat qkz_operator(int m, const ParamPoint& P, int L) {
  int n = P.n();
  if (n == 1) return kappa_h(P, 0, L);
  if (n != 2) throw Error(Err::Unsupported, "qKZ operators are implemented for n <= 2");
  Mat F = flip_matrix(L);
  if (m == 0) return kappa_h(P, 0, L) * (F * rhat_rational(P, L)).inverse();
  ParamPoint S = P;
  S.z[1] += P.p;
  return F * rhat_rational(S, L) * kappa_h(P, 1, L);
}

// Contragredient of the rational (sigma' x sigma), the module isomorphism V(z,lambda) -> V(z',lambda').
inline Mat sigma_module_map(const ParamTransform& t, const ParamPoint& P, int L) {
  if (t.is_identity()) return Mat::Identity(Basis(P.n(), L).size(), Basis(P.n(), L).size());
  SigmaPairResult r = sigma_pair_matrix(t, P, L, Flavor::rational);
  return contragredient(r.mat.matrix, P, r.mat.target, Flavor::rational, L);
}

// T^{sigma'}_sigma(p) = (sigma'^{-1} x sigma^{-1}) o T(p) o (sigma' x sigma), T(p): z_1 -> z_1 + p
inline ParamPoint extended_shift(const ParamTransform& t, const ParamPoint& P) {
  ParamPoint Q = transform_params(P, t);
  Q.z[0] += P.p;
  return transform_params(Q, inverse(t));
}

// H^{sigma'}_sigma = (sigma'^{-1} x sigma^{-1}) o H_1(z^{sigma'}_sigma, lambda^{sigma'}_sigma) o (sigma' x sigma)
inline Mat extended_operator(const ParamTransform& t, const ParamPoint& P, int L) {
  ParamPoint Q = transform_params(P, t);
  Mat G = sigma_module_map(t, P, L);
  Mat H = qkz_operator(0, Q, L);
  ParamPoint S = Q;
  S.z[0] += P.p;
  Mat Gb = sigma_module_map(inverse(t), S, L);
  return Gb * H * G;
}

// H_a(T_b x) H_b(x) versus H_b(T_a x) H_a(x)
inline double extended_compatibility(const ParamTransform& ta, const ParamTransform& tb, const ParamPoint& P, int L) {
  Mat lhs = extended_operator(ta, extended_shift(tb, P), L) * extended_operator(tb, P, L);
  Mat rhs = extended_operator(tb, extended_shift(ta, P), L) * extended_operator(ta, P, L);
  return rel_diff(lhs, rhs);
}

}  // namespace hypkz
