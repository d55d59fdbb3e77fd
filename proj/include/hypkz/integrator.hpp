#pragma once

#include <array>
#include <atomic>
#include <cstdlib>
#include <queue>
#include <thread>

#include "hypspace.hpp"

namespace hypkz {

inline bool near_nonpositive_integer(cplx w, double tol = 1e-13) {
  double r = std::round(w.real());
  return r <= 0 && std::abs(w - r) < tol;
}

// Lanczos (g = 7, 9 terms) with reflection for Re w < 1/2
inline cplx complex_gamma(cplx w) {
  static const double g = 7.0;
  static const std::array<double, 9> c = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                          771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                          -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (near_nonpositive_integer(w)) throw Error(Err::GammaPole, "Gamma at a nonpositive integer");
  if (w.real() < 0.5) return pi / (std::sin(pi * w) * complex_gamma(1.0 - w));
  w -= 1.0;
  cplx x = c[0];
  for (int i = 1; i < 9; ++i) x += c[i] / (w + double(i));
  cplx t = w + g + 0.5;
  return std::sqrt(2.0 * pi) * std::pow(t, w + 0.5) * std::exp(-t) * x;
}

// log sin(pi w), stable for large |Im w|; any branch, only exponentiated differences are used
inline cplx log_sin_pi(cplx w) {
  cplx x = pi * w;
  if (x.imag() > 20.0) return -I * x + std::log(1.0 - std::exp(2.0 * I * x)) - std::log(2.0 * I) + I * pi;
  if (x.imag() < -20.0) return I * x + std::log(1.0 - std::exp(-2.0 * I * x)) - std::log(2.0 * I);
  return std::log(std::sin(x));
}

// log Gamma by upward recurrence and the Stirling series; reflection for Re w < 1/2.
// Independent of the Lanczos path, so it also serves as the oracle for complex_gamma.
inline cplx log_gamma(cplx w) {
  if (near_nonpositive_integer(w)) throw Error(Err::GammaPole, "log Gamma at a nonpositive integer");
  if (w.real() < 0.5) return std::log(pi) - log_sin_pi(w) - log_gamma(1.0 - w);
  cplx prod = 1.0;
  bool shifted = false;
  while (std::abs(w) < 10.0) {
    prod *= w;
    w += 1.0;
    shifted = true;
  }
  static const std::array<double, 8> b = {1.0 / 6,   -1.0 / 30, 1.0 / 42,     -1.0 / 30,
                                          5.0 / 66, -691.0 / 2730, 7.0 / 6, -3617.0 / 510};
  cplx s = (w - 0.5) * std::log(w) - w + 0.5 * std::log(2.0 * pi);
  cplx wp = w, w2 = w * w;
  for (int k = 1; k <= 8; ++k) {
    s += b[k - 1] / (double(2 * k) * double(2 * k - 1) * wp);
    wp *= w2;
  }
  return shifted ? s - std::log(prod) : s;
}

// log Phi_l(t,z,lambda), including -log l! and mu sum t / p
inline cplx log_phase_function(const CVec& t, const ParamPoint& P) {
  int l = static_cast<int>(t.size());
  cplx v = -std::lgamma(double(l + 1));
  for (cplx x : t) v += P.mu * x / P.p;
  for (int a = 0; a < P.n(); ++a)
    for (int b = 0; b < l; ++b)
      v += log_gamma((t[b] - P.z[a] + P.lambda[a]) / P.p) - log_gamma((t[b] - P.z[a] - P.lambda[a]) / P.p);
  for (int a = 0; a < l; ++a)
    for (int b = a + 1; b < l; ++b) v += log_gamma((t[a] - t[b] - 1.0) / P.p) - log_gamma((t[a] - t[b] + 1.0) / P.p);
  return v;
}

inline cplx phase_function(const CVec& t, const ParamPoint& P) { return std::exp(log_phase_function(t, P)); }

enum class IntegralStatus { CONVERGED, TAIL_WARNING, POLE_NEAR_CONTOUR };

inline const char* status_name(IntegralStatus s) {
  switch (s) {
    case IntegralStatus::CONVERGED: return "CONVERGED";
    case IntegralStatus::TAIL_WARNING: return "TAIL_WARNING";
    case IntegralStatus::POLE_NEAR_CONTOUR: return "POLE_NEAR_CONTOUR";
  }
  return "?";
}

// HYPKZ_WORKERS sets the thread count for the outermost quadrature dimension
inline int env_workers() {
  const char* v = std::getenv("HYPKZ_WORKERS");
  if (!v) return 1;
  int n = std::atoi(v);
  return std::clamp(n, 1, 256);
}

struct QuadratureSpec {
  double T = 0.0;        // truncation cap; 0 means 40 |p|
  int nodes = 16;        // Gauss-Legendre nodes per panel
  double panel = 6.0;    // initial panel width
  double tol = 1e-7;     // target relative error
  double delta = 0.05;   // pole margin from the contour
  int max_panels = 4000; // per one-dimensional integral
  bool enforce_region = true;
  int workers = env_workers();
};

struct IntegralResult {
  cplx value = 0.0;
  IntegralStatus status = IntegralStatus::CONVERGED;
  double est_error = 0.0;
  double tail = 0.0;
  double t_minus = 0.0, t_plus = 0.0;
  long evaluations = 0;
};

struct GaussLegendre {
  std::vector<double> x, w;
  explicit GaussLegendre(int m) : x(m), w(m) {
    for (int i = 0; i < m; ++i) {
      double r = std::cos(pi * (i + 0.75) / (m + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = r;
        for (int k = 2; k <= m; ++k) {
          double p2 = ((2 * k - 1) * r * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        double dp = m * (r * p1 - p0) / (r * r - 1.0);
        double dr = p1 / dp;
        r -= dr;
        if (std::abs(dr) < 1e-16) break;
      }
      double p0 = 1.0, p1 = r;
      for (int k = 2; k <= m; ++k) {
        double p2 = ((2 * k - 1) * r * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = m * (r * p1 - p0) / (r * r - 1.0);
      x[i] = r;
      w[i] = 2.0 / ((1.0 - r * r) * dp * dp);
    }
  }
};

// pairwise summation of panel contributions in a fixed order
inline Vec pairwise_sum(const std::vector<Vec>& v, size_t lo, size_t hi) {
  if (hi - lo == 1) return v[lo];
  size_t mid = (lo + hi) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

using VecFn = std::function<Vec(double)>;

struct Adaptive1D {
  Vec value;
  double err = 0.0;
  long evals = 0;
};

// Globally adaptive bisection of Gauss-Legendre panels on [a,b] for a vector integrand.
inline Adaptive1D adaptive_gl(const VecFn& f, double a, double b, double abs_tol, const QuadratureSpec& spec,
                              const GaussLegendre& gl) {
  struct Panel {
    double lo, hi;
    Vec coarse, fine;
    double err;
  };
  Adaptive1D out;
  auto rule = [&](double lo, double hi) {
    double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    size_t m = gl.x.size();
    std::vector<Vec> vals(m);
    auto eval = [&](size_t i) { vals[i] = f(c + h * gl.x[i]) * (gl.w[i] * h); };
    int nw = std::min<int>(spec.workers, static_cast<int>(m));
    if (nw <= 1) {
      for (size_t i = 0; i < m; ++i) eval(i);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < nw; ++w)
        pool.emplace_back([&, w] {
          for (size_t i = w; i < m; i += nw) eval(i);
        });
      for (auto& th : pool) th.join();
    }
    Vec s = vals[0];
    for (size_t i = 1; i < m; ++i) s += vals[i];
    out.evals += static_cast<long>(gl.x.size());
    return s;
  };
  auto make = [&](double lo, double hi, Vec coarse) {
    double mid = 0.5 * (lo + hi);
    Vec fine = rule(lo, mid) + rule(mid, hi);
    double e = (fine - coarse).cwiseAbs().maxCoeff();
    return Panel{lo, hi, std::move(coarse), std::move(fine), e};
  };
  int np = std::max(1, static_cast<int>(std::ceil((b - a) / spec.panel)));
  std::vector<Panel> panels;
  for (int k = 0; k < np; ++k) {
    double lo = a + (b - a) * k / np, hi = a + (b - a) * (k + 1) / np;
    panels.push_back(make(lo, hi, rule(lo, hi)));
  }
  for (;;) {
    double total = 0.0;
    size_t worst = 0;
    for (size_t k = 0; k < panels.size(); ++k) {
      total += panels[k].err;
      if (panels[k].err > panels[worst].err) worst = k;
    }
    if (total <= abs_tol || static_cast<int>(panels.size()) >= spec.max_panels) {
      out.err = total;
      break;
    }
    Panel p = panels[worst];
    double mid = 0.5 * (p.lo + p.hi);
    Vec left = rule(p.lo, mid), right = rule(mid, p.hi);
    panels[worst] = make(p.lo, mid, left);
    panels.insert(panels.begin() + worst + 1, make(mid, p.hi, right));
  }
  std::vector<Vec> parts;
  for (auto& p : panels) parts.push_back(p.fine);
  out.value = pairwise_sum(parts, 0, parts.size());
  return out;
}

// Region Re(z_a + lambda_a) < 0 < Re(z_a - lambda_a); pole families z_a + lambda_a + j p and z_a - lambda_a - j p.
inline IntegralStatus check_contour(const ParamPoint& P, const QuadratureSpec& spec) {
  bool in_region = true, near = false;
  for (int a = 0; a < P.n(); ++a) {
    cplx left = P.z[a] + P.lambda[a], right = P.z[a] - P.lambda[a];
    if (!(left.real() < 0.0 && right.real() > 0.0)) in_region = false;
    for (int j = 0; j < 4; ++j) {
      if (std::abs((left + double(j) * P.p).real()) < spec.delta) near = true;
      if (std::abs((right - double(j) * P.p).real()) < spec.delta) near = true;
    }
  }
  if (!in_region && spec.enforce_region)
    throw Error(Err::RegionViolation, "need Re(z_a + lambda_a) < 0 < Re(z_a - lambda_a)");
  return near ? IntegralStatus::POLE_NEAR_CONTOUR : IntegralStatus::CONVERGED;
}

// One-variable envelope max_k |Phi_1 w_k W_k| on t = i y, used to place the truncation.
inline double envelope(const ParamPoint& P, double y) {
  cplx t = I * y;
  cplx lv = log_phase_function({t}, P);
  double m = 0.0;
  FlavorOps rat{Flavor::rational, P.p}, tr{Flavor::trig, P.p};
  for (int a = 0; a < P.n(); ++a) {
    cplx w = 1.0 / rat.d(t - P.z[a] - P.lambda[a]);
    cplx W = tr.e(P.z[a] - t) / tr.d(t - P.z[a] - P.lambda[a]);
    m = std::max(m, std::abs(std::exp(lv) * w * W));
  }
  return m;
}

struct Truncation {
  double minus, plus, tail;
  bool capped;
};

inline Truncation choose_truncation(const ParamPoint& P, const QuadratureSpec& spec) {
  double cap = spec.T > 0 ? spec.T : 40.0 * std::abs(P.p);
  double peak = 0.0;
  for (double y = -5.0; y <= 5.0; y += 0.25) peak = std::max(peak, envelope(P, y));
  double thr = spec.tol * 1e-3 * peak;
  Truncation tr{cap, cap, 0.0, false};
  for (int side : {-1, 1}) {
    double y = 1.0, last = envelope(P, side * y);
    int below = 0;
    while (y < cap) {
      y += 1.0;
      double e = envelope(P, side * y);
      below = e < thr ? below + 1 : 0;
      if (below >= 3) {
        double rate = std::max(std::log(std::max(last, 1e-300) / std::max(e, 1e-300)), 1e-3);
        tr.tail = std::max(tr.tail, e / rate / std::max(peak, 1e-300));
        break;
      }
      last = e;
    }
    if (y >= cap) {
      y = cap;
      double e = envelope(P, side * cap);
      double rate = std::max(std::log(std::max(envelope(P, side * (cap - 1.0)), 1e-300) / std::max(e, 1e-300)), 1e-3);
      tr.tail = std::max(tr.tail, e / rate / std::max(peak, 1e-300));
      if (e >= thr) tr.capped = true;
    }
    (side < 0 ? tr.minus : tr.plus) = y;
  }
  return tr;
}

// Batch of integrals int Phi_l w W d^l t over Re t_i = 0 for pairs (ws[i], Ws[j]); d t = i d y per variable.
inline std::vector<IntegralResult> integrate_pairs(const std::vector<HypFunction>& ws, const std::vector<HypFunction>& Ws,
                                                   const std::vector<std::pair<int, int>>& pairs, const ParamPoint& P,
                                                   const QuadratureSpec& spec) {
  std::vector<IntegralResult> res(pairs.size());
  if (pairs.empty()) return res;
  int l = ws[pairs[0].first].l;
  for (auto& pr : pairs)
    if (ws[pr.first].l != l || Ws[pr.second].l != l) throw Error(Err::ConfigError, "pairs must share one level");
  if (l == 0) {
    for (size_t k = 0; k < pairs.size(); ++k) res[k].value = ws[pairs[k].first]({}) * Ws[pairs[k].second]({});
    return res;
  }
  if (l > 3) throw Error(Err::Unsupported, "integration dimension capped at 3");
  IntegralStatus st = check_contour(P, spec);
  Truncation tr = choose_truncation(P, spec);
  GaussLegendre gl(spec.nodes);
  size_t np = pairs.size();
  auto integrand = [&](const CVec& t) {
    cplx ph = std::exp(log_phase_function(t, P)) * std::pow(I, l);
    std::vector<cplx> wv(ws.size()), Wv(Ws.size());
    std::vector<char> needw(ws.size(), 0), needW(Ws.size(), 0);
    for (auto& pr : pairs) needw[pr.first] = needW[pr.second] = 1;
    for (size_t i = 0; i < ws.size(); ++i)
      if (needw[i]) wv[i] = ws[i](t);
    for (size_t i = 0; i < Ws.size(); ++i)
      if (needW[i]) Wv[i] = Ws[i](t);
    Vec out(np);
    for (size_t k = 0; k < np; ++k) out(k) = ph * wv[pairs[k].first] * Wv[pairs[k].second];
    return out;
  };
  // coarse pass fixes the absolute scale for the tolerance
  double tol_dim = spec.tol / std::sqrt(double(l));
  // only the outermost dimension runs in parallel; each node works on its own copy of t
  std::atomic<long> evals = 0;
  QuadratureSpec inner_spec = spec;
  inner_spec.workers = 1;
  std::function<Adaptive1D(const CVec&, int, double)> nest = [&](const CVec& t, int dim,
                                                                 double abs_tol) -> Adaptive1D {
    VecFn f = [&, dim, abs_tol](double y) -> Vec {
      CVec tl = t;
      tl[dim] = I * y;
      if (dim + 1 == l) return integrand(tl);
      Adaptive1D inner = nest(tl, dim + 1, abs_tol / (tr.minus + tr.plus));
      evals += inner.evals;
      return inner.value;
    };
    return adaptive_gl(f, -tr.minus, tr.plus, abs_tol, dim == 0 ? spec : inner_spec, gl);
  };
  CVec t(l);
  double scale;
  {
    QuadratureSpec cs = spec;
    cs.panel = std::max(spec.panel, 8.0);
    std::function<Adaptive1D(const CVec&, int)> rough = [&](const CVec& tt, int dim) -> Adaptive1D {
      VecFn f = [&, dim](double y) -> Vec {
        CVec tl = tt;
        tl[dim] = I * y;
        if (dim + 1 == l) return integrand(tl);
        return rough(tl, dim + 1).value;
      };
      QuadratureSpec ds = cs;
      if (dim > 0) ds.workers = 1;
      return adaptive_gl(f, -tr.minus, tr.plus, 1e300, ds, gl);
    };
    Adaptive1D r0 = rough(t, 0);
    scale = std::max(r0.value.cwiseAbs().maxCoeff(), 1e-300);
    evals += r0.evals;
  }
  Adaptive1D r = nest(t, 0, tol_dim * scale);
  evals += r.evals;
  for (size_t k = 0; k < np; ++k) {
    res[k].value = r.value(k);
    res[k].est_error = r.err + tr.tail * scale;
    res[k].tail = tr.tail;
    res[k].t_minus = tr.minus;
    res[k].t_plus = tr.plus;
    res[k].evaluations = evals;
    res[k].status = st;
    if (st == IntegralStatus::CONVERGED && (tr.capped || tr.tail > spec.tol || r.err > 10 * tol_dim * scale))
      res[k].status = IntegralStatus::TAIL_WARNING;
  }
  return res;
}

inline IntegralResult hypergeometric_integral(const HypFunction& w, const HypFunction& W, const ParamPoint& P,
                                              const QuadratureSpec& spec = {}) {
  if (w.l != W.l) return {};
  return integrate_pairs({w}, {W}, {{0, 0}}, P, spec)[0];
}

// C(z,lambda) at 2 lambda_1 = k. The factor Gamma((t_{k+1} - z_1 + lambda_1)/p) = Gamma((2 lambda_1 - k)/p)
// is singular at the resonance; with regularize it is replaced by its residue p in the variable 2 lambda_1.
inline cplx residue_constant_C(const ParamPoint& P, bool regularize = true, double tol = 1e-8) {
  int k = resonance_k(P, tol);
  cplx p = P.p;
  if (k == 0) throw Error(Err::GammaPole, "Gamma(k/p) at k = 0");
  std::vector<cplx> t(k + 1);
  for (int a = 0; a <= k; ++a) t[a] = P.z[0] + P.lambda[0] - double(a);
  double fact = std::tgamma(double(k + 2));
  cplx C = q_factorial(k, p) * q_factorial(k + 1, p) / (std::pow(p, k + 1) * fact) * complex_gamma(double(k) / p);
  cplx s = 0.0;
  for (cplx x : t) s += x;
  C *= std::exp(P.mu * s / p);
  for (int a = 0; a <= k; ++a)
    for (int b = a + 2; b <= k; ++b) C *= complex_gamma((t[a] - t[b] - 1.0) / p) / complex_gamma((t[a] - t[b] + 1.0) / p);
  for (int a = 1; a <= k; ++a) {
    cplx num = (t[a] - P.z[0] + P.lambda[0]) / p;
    if (a == k && regularize) C *= p;
    else C *= complex_gamma(num);
    C /= complex_gamma((t[a] - P.z[0] - P.lambda[0]) / p);
  }
  for (int a = 1; a < P.n(); ++a)
    for (int b = 0; b <= k; ++b)
      C *= complex_gamma((t[b] - P.z[a] + P.lambda[a]) / p) / complex_gamma((t[b] - P.z[a] - P.lambda[a]) / p);
  return C;
}

// Ratio between the constant that makes the residue identity hold and the regularized C above.
inline cplx residue_constant_correction(int k, cplx p) {
  return std::pow(-p, k) * std::pow(p, k + 1) /
         (pi * std::pow(complex_gamma(2.0 / p), k) * q_factorial(k, p) * q_factorial(k + 1, p));
}

struct PoleResult {
  int order = 0;
  Mat residue;
  std::vector<double> coeff_scale;  // |c_{-m}| r^{-m} / max|f|, m = 1..order_probe
  bool ambiguous = false;
};

// Laurent coefficients c_{-m} = mean_k f(x_k) (x_k - c)^m on an N-point circle.
inline PoleResult pole_residue_in_parameter(const std::function<Mat(cplx)>& f, cplx center, double radius,
                                            int order_probe = 3, int npts = 32, double floor = 1e-8) {
  std::vector<Mat> vals;
  std::vector<cplx> d;
  double scale = 0.0;
  for (int k = 0; k < npts; ++k) {
    cplx dx = radius * std::exp(I * (2.0 * pi * (k + 0.5) / npts));
    vals.push_back(f(center + dx));
    d.push_back(dx);
    scale = std::max(scale, max_abs(vals.back()));
  }
  PoleResult r;
  for (int m = 1; m <= order_probe; ++m) {
    Mat c = Mat::Zero(vals[0].rows(), vals[0].cols());
    for (int k = 0; k < npts; ++k) c += vals[k] * std::pow(d[k], m);
    c /= double(npts);
    if (m == 1) r.residue = c;
    double s = max_abs(c) / std::pow(radius, m) / std::max(scale, 1e-300);
    r.coeff_scale.push_back(s);
    if (s > floor) r.order = m;
    else if (s > floor * 1e-2) r.ambiguous = true;  // neither clearly present nor at the noise level
  }
  return r;
}

}  // namespace hypkz
