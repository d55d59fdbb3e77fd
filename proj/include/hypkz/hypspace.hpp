#pragma once

#include <algorithm>
#include <functional>
#include <numeric>

#include "evalmod.hpp"

namespace hypkz {

using Fn = std::function<cplx(const CVec&)>;

// Element of F_l(z,lambda) or F^q_l(z,lambda), held as an evaluator.
struct HypFunction {
  Flavor flavor = Flavor::rational;
  int l = 0;
  ParamPoint point;
  Fn eval;
  bool zero = false;

  cplx operator()(const CVec& t) const { return zero ? cplx(0.0) : eval(t); }
};

inline HypFunction zero_function(Flavor fl, int l, const ParamPoint& pt) {
  return {fl, l, pt, [](const CVec&) { return cplx(0.0); }, true};
}

// Elementary pieces shared by both flavors: d(x) is x or sin(pi x/p), e(x) is 1 or q^x.
struct FlavorOps {
  Flavor fl;
  cplx p;
  cplx d(cplx x) const { return fl == Flavor::rational ? x : sinp(x, p); }
  cplx e(cplx x) const { return fl == Flavor::rational ? cplx(1.0) : qpow(x, p); }
  cplx c1() const { return fl == Flavor::rational ? cplx(1.0) : sinp(1.0, p); }
  cplx bracket(cplx x) const { return d(x - 1.0) / d(x + 1.0); }
  // prod_a d(x - z_a + lambda_a) / d(x - z_a - lambda_a)
  cplx ratio(const ParamPoint& P, cplx x) const {
    cplx v = 1.0;
    for (int a = 0; a < P.n(); ++a) v *= d(x - P.z[a] + P.lambda[a]) / d(x - P.z[a] - P.lambda[a]);
    return v;
  }
};

// [g]_{(i,i+1)}(t) = c(t_i - t_{i+1}) g(..., t_{i+1}, t_i, ...)
inline Fn bracket_simple(Fn g, int i, FlavorOps ops) {
  return [g = std::move(g), i, ops](const CVec& t) {
    CVec s = t;
    std::swap(s[i], s[i + 1]);
    return ops.bracket(t[i] - t[i + 1]) * g(s);
  };
}

// [g]_{s_w1 ... s_wk} = S_w1(S_w2(... S_wk g))
inline Fn apply_word(Fn g, const std::vector<int>& word, FlavorOps ops) {
  for (auto it = word.rbegin(); it != word.rend(); ++it) g = bracket_simple(std::move(g), *it, ops);
  return g;
}

// 0-based transposition (a,b) = s_a s_{a+1} ... s_{b-1} ... s_a
inline std::vector<int> word_for_transposition(int a, int b) {
  if (a == b) return {};
  if (a > b) std::swap(a, b);
  std::vector<int> w;
  for (int i = a; i < b; ++i) w.push_back(i);
  for (int i = b - 2; i >= a; --i) w.push_back(i);
  return w;
}

// bubble-sort word of a permutation given by its images
inline std::vector<int> word_of_perm(std::vector<int> p) {
  std::vector<int> w;
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i + 1 < p.size(); ++i)
      if (p[i] > p[i + 1]) {
        std::swap(p[i], p[i + 1]);
        w.push_back(static_cast<int>(i));
        changed = true;
      }
  }
  return w;
}

// adjacent swaps taking the identity arrangement to arr
inline std::vector<int> word_for_arrangement(const std::vector<int>& arr) {
  std::vector<int> cur(arr.size());
  std::iota(cur.begin(), cur.end(), 0);
  std::vector<int> w;
  for (size_t k = 0; k < arr.size(); ++k) {
    size_t j = std::find(cur.begin(), cur.end(), arr[k]) - cur.begin();
    for (size_t i = j; i-- > k;) {
      std::swap(cur[i], cur[i + 1]);
      w.push_back(static_cast<int>(i));
    }
  }
  return w;
}

inline Fn bracket_action(Flavor fl, cplx p, Fn f, const std::vector<int>& perm) {
  return apply_word(std::move(f), word_of_perm(perm), FlavorOps{fl, p});
}

// Symmetrized weight function: w_lbar (rational) or W_lbar (trig, with the [l_a]_q! normalizer).
inline HypFunction weight_function(Flavor fl, const MultiIndex& lb, const ParamPoint& P) {
  int n = P.n(), l = level_of(lb);
  if (l > 5) throw Error(Err::Unsupported, "symmetrization capped at l = 5");
  FlavorOps ops{fl, P.p};
  std::vector<int> blocks;
  cplx norm = 1.0;
  for (int a = 0; a < n; ++a) {
    for (int k = 0; k < lb[a]; ++k) blocks.push_back(a);
    for (int m = 1; m <= lb[a]; ++m) norm /= fl == Flavor::rational ? cplx(double(m)) : q_number(double(m), P.p);
  }
  Fn base = [blocks, norm, P, ops](const CVec& t) {
    cplx v = norm;
    for (size_t b = 0; b < blocks.size(); ++b) {
      int a = blocks[b];
      v *= ops.e(P.z[a] - t[b]) / ops.d(t[b] - P.z[a] - P.lambda[a]);
      for (int c = 0; c < a; ++c) v *= ops.d(t[b] - P.z[c] + P.lambda[c]) / ops.d(t[b] - P.z[c] - P.lambda[c]);
    }
    return v;
  };
  std::vector<int> perm(l);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Fn> terms;
  do terms.push_back(apply_word(base, word_of_perm(perm), ops));
  while (std::next_permutation(perm.begin(), perm.end()));
  return {fl, l, P, [terms](const CVec& t) {
            cplx s = 0.0;
            for (auto& g : terms) s += g(t);
            return s;
          }};
}

// Basis image of the dual monomial vector: w_lbar, or sin^l(pi/p) prod_a q^{-2 z_a l_a} W_lbar.
inline HypFunction nu_map(Flavor fl, const MultiIndex& lb, const ParamPoint& P) {
  HypFunction w = weight_function(fl, lb, P);
  if (fl == Flavor::rational) return w;
  cplx s = std::pow(sinp(1.0, P.p), level_of(lb));
  for (int a = 0; a < P.n(); ++a) s *= qpow(-2.0 * P.z[a] * double(lb[a]), P.p);
  Fn g = w.eval;
  w.eval = [g, s](const CVec& t) { return s * g(t); };
  return w;
}

namespace detail {
inline CVec with_last(const CVec& t, int keep, cplx u) {
  CVec s(t.begin(), t.begin() + keep);
  s.push_back(u);
  return s;
}
inline CVec with_first(cplx u, const CVec& t, int from, int to) {
  CVec s{u};
  s.insert(s.end(), t.begin() + from, t.begin() + to);
  return s;
}
}  // namespace detail

// The operator formulas on F_l: (i,j) 0-based, u the spectral variable (trig: xi = q^{2u}).
// In the trig flavor the (1,2) entry carries xi^{-1} and the (2,1) entry xi.
inline HypFunction action_on_F(int i, int j, cplx u, const HypFunction& f) {
  const ParamPoint P = f.point;
  FlavorOps ops{f.flavor, P.p};
  int l = f.l;
  Fn F = f.eval;
  cplx xi = f.flavor == Flavor::trig ? qpow(2.0 * u, P.p) : cplx(1.0);
  if (f.zero) return zero_function(f.flavor, l + (i == 0 && j == 1) - (i == 1 && j == 0), P);

  if (i == 0 && j == 0) {
    Fn inner = [F, u, l, ops, P](const CVec& s) {
      cplx sl = s[l - 1];
      return F(detail::with_last(s, l - 1, u)) * ops.e(u - sl) / ops.d(u - sl - 1.0) * ops.ratio(P, sl);
    };
    std::vector<Fn> terms;
    for (int a = 0; a < l; ++a) terms.push_back(apply_word(inner, word_for_transposition(a, l - 1), ops));
    return {f.flavor, l, P, [F, terms, u, l, ops, P](const CVec& t) {
              cplx A = 1.0;
              for (int a = 0; a < l; ++a) A *= ops.d(u - t[a] - 1.0) / ops.d(u - t[a]);
              cplx tot = 0.0;
              for (auto& g : terms) tot += g(t);
              return F(t) * ops.ratio(P, u) * A + ops.c1() * A * tot;
            }};
  }
  if (i == 1 && j == 1) {
    Fn inner = [F, u, l, ops](const CVec& s) {
      return F(detail::with_first(u, s, 1, l)) * ops.e(u - s[0]) / ops.d(u - s[0] + 1.0);
    };
    std::vector<Fn> terms;
    for (int a = 0; a < l; ++a) terms.push_back(apply_word(inner, word_for_transposition(0, a), ops));
    return {f.flavor, l, P, [F, terms, u, l, ops](const CVec& t) {
              cplx A = 1.0;
              for (int a = 0; a < l; ++a) A *= ops.d(u - t[a] + 1.0) / ops.d(u - t[a]);
              cplx tot = 0.0;
              for (auto& g : terms) tot += g(t);
              return F(t) * A - ops.c1() * A * tot;
            }};
  }
  if (i == 1 && j == 0) {
    if (l == 0) return zero_function(f.flavor, 0, P);
    return {f.flavor, l - 1, P, [F, u, l, ops, xi](const CVec& t) {
              cplx A = 1.0;
              for (int a = 0; a < l - 1; ++a) A *= ops.d(u - t[a] - 1.0) / ops.d(u - t[a]);
              return xi * F(detail::with_last(t, l - 1, u)) * A;
            }};
  }
  // (1,2): raises the number of variables to l+1
  Fn first = [F, u, l, ops, P](const CVec& s) {
    CVec rest(s.begin() + 1, s.end());
    cplx fv = F(rest) * ops.e(u - s[0]) / ops.d(u - s[0]);
    cplx A = ops.ratio(P, s[0]), B = ops.ratio(P, u);
    for (int c = 1; c <= l; ++c) {
      A *= ops.d(u - s[c] + 1.0) / ops.d(u - s[c]) * ops.d(s[0] - s[c] - 1.0) / ops.d(s[0] - s[c] + 1.0);
      B *= ops.d(u - s[c] - 1.0) / ops.d(u - s[c]);
    }
    return fv * (A - B);
  };
  Fn second = [F, u, l, ops, P](const CVec& s) {
    return F(detail::with_first(u, s, 1, l)) * ops.e(2.0 * u - s[0] - s[l]) /
           (ops.d(u - s[0] + 1.0) * ops.d(u - s[l] + 1.0)) * ops.ratio(P, s[l]);
  };
  std::vector<Fn> t1, t2;
  for (int a = 0; a <= l; ++a) t1.push_back(apply_word(first, word_for_transposition(0, a), ops));
  if (l > 0)
    for (int a = 0; a <= l; ++a)
      for (int b = 0; b <= l; ++b) {
        if (a == b) continue;
        std::vector<int> arr{a};
        for (int k = 0; k <= l; ++k)
          if (k != a && k != b) arr.push_back(k);
        arr.push_back(b);
        t2.push_back(apply_word(second, word_for_arrangement(arr), ops));
      }
  return {f.flavor, l + 1, P, [t1, t2, u, l, ops, xi](const CVec& t) {
            cplx s1 = 0.0, s2 = 0.0, A = 1.0;
            for (auto& g : t1) s1 += g(t);
            for (auto& g : t2) s2 += g(t);
            for (int a = 0; a <= l; ++a) A *= ops.d(u - t[a] + 1.0) / ops.d(u - t[a]);
            cplx c = ops.c1();
            return (c * s1 - c * c * A * s2) / xi;
          }};
}

inline HypFunction yangian_action_on_F(int i, int j, cplx u, const HypFunction& f) {
  if (f.flavor != Flavor::rational) throw Error(Err::ConfigError, "rational function expected");
  return action_on_F(i, j, u, f);
}

// The formulas do not depend on the sign; xi enters through u with xi = q^{2u}.
inline HypFunction qaffine_action_on_F(int i, int j, int /*sign*/, cplx u, const HypFunction& f) {
  if (f.flavor != Flavor::trig) throw Error(Err::ConfigError, "trigonometric function expected");
  return action_on_F(i, j, u, f);
}

// Random points of C^l kept away from the prefactor and action poles by delta.
struct SamplePlan {
  int count = 20;
  double box = 1.5;
  double delta = 0.1;
  std::uint64_t seed = 1;
};

inline double pole_distance(Flavor fl, cplx x, cplx p) {
  if (fl == Flavor::rational) return std::abs(x);
  double m = 1e300;
  for (int s = -3; s <= 3; ++s) m = std::min(m, std::abs(x - double(s) * p));
  return m;
}

inline CVec sample_point(Flavor fl, int l, const ParamPoint& P, const CVec& extra, const SamplePlan& plan,
                         SampleRng& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    CVec t(l);
    for (auto& x : t) x = rng.in_box(plan.box);
    bool ok = true;
    auto chk = [&](cplx x) { ok = ok && pole_distance(fl, x, P.p) > plan.delta; };
    for (int b = 0; b < l; ++b) {
      for (int a = 0; a < P.n(); ++a) {
        chk(t[b] - P.z[a] - P.lambda[a]);
        chk(t[b] - P.z[a] + P.lambda[a]);
      }
      for (int c = 0; c < l; ++c)
        if (c != b) {
          chk(t[b] - t[c] + 1.0);
          chk(t[b] - t[c]);
        }
      for (cplx u : extra) {
        chk(u - t[b]);
        chk(u - t[b] + 1.0);
        chk(u - t[b] - 1.0);
      }
    }
    if (ok) return t;
  }
  throw Error(Err::PoleAtSample, "no admissible sample point after 1000 draws");
}

struct NuReport {
  double max_residual = 0.0;
  int checks = 0;
};

// nu intertwines the dual module action with the operator formulas on functions.
inline NuReport verify_nu(Flavor fl, const ParamPoint& P, int L, const SamplePlan& plan, cplx u = {0.37, 0.81}) {
  NuReport rep;
  SampleRng rng(plan.seed);
  TruncatedModule M(P, L, fl == Flavor::rational ? ModuleFlavor::yangian : ModuleFlavor::qaffine);
  const Basis& B = M.basis;
  std::vector<HypFunction> nu;
  for (auto& m : B.idx) nu.push_back(nu_map(fl, m, P));
  std::vector<int> signs = fl == Flavor::rational ? std::vector<int>{1} : std::vector<int>{1, -1};
  for (int sg : signs)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        Mat D = fl == Flavor::rational ? yangian_dual_generator(M, i, j, u) : qaffine_dual_generator(M, i, j, sg, u);
        int shift = (i == 0 && j == 1) - (i == 1 && j == 0);
        for (int c = 0; c < B.size(); ++c) {
          int l = B.level[c], lt = l + shift;
          if (lt < 0 || lt > L || (shift > 0 && l > L - 1)) continue;
          HypFunction g = action_on_F(i, j, u, nu[c]);
          for (int s = 0; s < plan.count; ++s) {
            CVec t = sample_point(fl, lt, P, {u}, plan, rng);
            cplx lhs = g(t), rhs = 0.0;
            for (int r = B.level_start[lt]; r < B.level_start[lt + 1]; ++r) rhs += D(r, c) * nu[r](t);
            rep.max_residual = std::max(rep.max_residual, rel_diff(lhs, rhs));
            ++rep.checks;
          }
        }
      }
  return rep;
}

// prod_a d(u - z_a - lambda_a): rescaling the operator formulas by it gives the action
// that the factor map iota^* intertwines
inline cplx action_normalizer(Flavor fl, const ParamPoint& P, cplx u) {
  FlavorOps ops{fl, P.p};
  cplx v = 1.0;
  for (int a = 0; a < P.n(); ++a) v *= ops.d(u - P.z[a] - P.lambda[a]);
  return v;
}

// Second parameter label of the factor map at 2 lambda_1 = k: lambda'_1 = -lambda_1 - 1.
inline ParamPoint iota_target(const ParamPoint& P) {
  ParamPoint Q = P;
  Q.lambda[0] = -P.lambda[0] - 1.0;
  return Q;
}

inline int resonance_k(const ParamPoint& P, double tol = 1e-8) {
  cplx v = 2.0 * P.lambda[0];
  double k = std::round(v.real());
  if (k < 0 || std::abs(v - k) > tol) throw Error(Err::NotAtResonance, "2 lambda_1 is not a nonnegative integer");
  return static_cast<int>(k);
}

// iota^*: substitute the string t_a = z_1 + lambda_1 - a + 1 (a = 1..k+1) into the corrected function.
// The removable singularity at t_1 = z_1 + lambda_1 is resolved by a circle mean in t_1.
inline HypFunction iota_star(const HypFunction& f, double tol = 1e-8, int circle = 32, double radius = 0.05) {
  const ParamPoint& P = f.point;
  int k = resonance_k(P, tol);
  ParamPoint Q = iota_target(P);
  if (f.l <= k) return zero_function(f.flavor, std::max(f.l - k - 1, 0), Q);
  FlavorOps ops{f.flavor, P.p};
  int l = f.l;
  Fn F = f.eval;
  cplx s0 = P.z[0] + P.lambda[0];
  return {f.flavor, l - k - 1, Q, [F, ops, l, k, s0, circle, radius](const CVec& t) {
            CVec s(l);
            for (int a = 0; a <= k; ++a) s[a] = s0 - double(a);
            for (int b = k + 1; b < l; ++b) s[b] = t[b - k - 1];
            cplx tot = 0.0;
            for (int m = 0; m < circle; ++m) {
              s[0] = s0 + radius * std::exp(I * (2.0 * pi * (m + 0.5) / circle));
              cplx v = F(s) * ops.d(s[0] - s0);
              for (int a = 0; a <= k; ++a)
                for (int b = k + 1; b < l; ++b) v *= ops.d(s[a] - s[b] + 1.0) / ops.d(s[a] - s[b] - 1.0);
              tot += v;
            }
            return tot / double(circle);
          }};
}

// D(k) and D_q(k) of the factorization morphism
inline cplx factor_constant(Flavor fl, int k, const ParamPoint& P) {
  FlavorOps ops{fl, P.p};
  cplx s0 = P.z[0] + P.lambda[0];
  std::vector<cplx> t(k + 1);
  for (int a = 0; a <= k; ++a) t[a] = s0 - double(a);
  cplx v = fl == Flavor::rational ? cplx(1.0) : std::pow(sinp(1.0, P.p), k + 1);
  for (int a = 1; a <= k; ++a) v /= ops.d(t[a] - s0);
  for (int a = 0; a <= k; ++a)
    for (int b = a + 1; b <= k; ++b) v *= ops.d(t[a] - t[b]) / ops.d(t[a] - t[b] + 1.0);
  return v;
}

// Least-squares coefficients of functions fs in the span of basis functions bs, from shared samples.
struct SpanFit {
  Mat coeffs;  // bs.size() x fs.size()
  double residual = 0.0;
};

inline SpanFit fit_in_span(const std::vector<HypFunction>& fs, const std::vector<HypFunction>& bs,
                           const std::vector<CVec>& samples) {
  Mat A(samples.size(), bs.size()), Bm(samples.size(), fs.size());
  for (size_t s = 0; s < samples.size(); ++s) {
    for (size_t j = 0; j < bs.size(); ++j) A(s, j) = bs[j](samples[s]);
    for (size_t j = 0; j < fs.size(); ++j) Bm(s, j) = fs[j](samples[s]);
  }
  SpanFit fit;
  fit.coeffs = A.colPivHouseholderQr().solve(Bm);
  double scale = std::max(max_abs(Bm), 1e-300);
  fit.residual = max_abs(A * fit.coeffs - Bm) / scale;
  return fit;
}

inline std::vector<CVec> sample_points(Flavor fl, int l, const ParamPoint& P, int count, const SamplePlan& plan,
                                       SampleRng& rng) {
  std::vector<CVec> out;
  for (int s = 0; s < count; ++s) out.push_back(sample_point(fl, l, P, {}, plan, rng));
  return out;
}

}  // namespace hypkz
