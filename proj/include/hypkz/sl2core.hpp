#pragma once

#include "core.hpp"

namespace hypkz {

// B_l(lambda) = l! prod_{a<l} (2 lambda - a)
inline cplx shapovalov_rational(cplx lambda, int l) {
  cplx v = 1.0;
  for (int a = 0; a < l; ++a) v *= double(a + 1) * (2.0 * lambda - double(a));
  return v;
}

// exact zero scan: B_l(lambda) = 0 iff 2 lambda is in {0..l-1}
inline bool shapovalov_rational_vanishes(cplx lambda, int l, double tol = 1e-12) {
  for (int a = 0; a < l; ++a)
    if (std::abs(2.0 * lambda - double(a)) < tol) return true;
  return false;
}

inline cplx q_number(cplx x, cplx p) {
  cplx s = std::sin(pi / p);
  if (std::abs(s) < 1e-14) throw Error(Err::DegenerateQ, "sin(pi/p) = 0");
  return std::sin(pi * x / p) / s;
}

inline cplx q_factorial(int l, cplx p) {
  cplx v = 1.0;
  for (int m = 1; m <= l; ++m) {
    cplx f = q_number(double(m), p);
    if (std::abs(f) < 1e-14) throw Error(Err::DegenerateQ, "[m]_q vanishes for m=" + std::to_string(m));
    v *= f;
  }
  return v;
}

// B^q_l(lambda) = [l]_q! prod_{a<l} [2 lambda - a]_q
inline cplx shapovalov_trig(cplx lambda, int l, cplx p) {
  cplx v = q_factorial(l, p);
  for (int a = 0; a < l; ++a) v *= q_number(2.0 * lambda - double(a), p);
  return v;
}

// product over factors, B_lbar(lambda) = prod_a B_{l_a}(lambda_a)
inline cplx shapovalov_multi(const std::vector<int>& lb, const CVec& lambda, bool trig, cplx p) {
  cplx v = 1.0;
  for (size_t a = 0; a < lb.size(); ++a)
    v *= trig ? shapovalov_trig(lambda[a], lb[a], p) : shapovalov_rational(lambda[a], lb[a]);
  return v;
}

// sl2 Verma module on the basis f^l v, l = 0..L
struct VermaSlice {
  cplx lambda;
  int L;
  Mat h, e, f;

  VermaSlice(cplx lam, int lev) : lambda(lam), L(lev) {
    int d = L + 1;
    h = Mat::Zero(d, d);
    e = Mat::Zero(d, d);
    f = Mat::Zero(d, d);
    for (int l = 0; l < d; ++l) h(l, l) = lambda - double(l);
    for (int l = 0; l + 1 < d; ++l) f(l + 1, l) = 1.0;
    for (int l = 1; l < d; ++l) e(l - 1, l) = double(l) * (2.0 * lambda - double(l) + 1.0);
  }

  // [h,e]=e, [h,f]=-f, [e,f]=2h on columns whose f-image stays in the slice
  double commutator_residual() const {
    int d = L + 1;
    Mat r1 = h * e - e * h - e;
    Mat r2 = h * f - f * h + f;
    Mat r3 = e * f - f * e - 2.0 * h;
    double s = 1.0 + max_abs(h) + max_abs(e);
    return std::max({max_abs(r1), max_abs(r2.leftCols(d - 1)), max_abs(r3.leftCols(d - 1))}) / s;
  }
};

// U_q sl2 Verma module on the basis f_q^l v^q; K = q^h
struct QVermaSlice {
  cplx lambda, p;
  int L;
  Mat K, Kinv, e, f;

  QVermaSlice(cplx lam, cplx pp, int lev) : lambda(lam), p(pp), L(lev) {
    int d = L + 1;
    K = Mat::Zero(d, d);
    Kinv = Mat::Zero(d, d);
    e = Mat::Zero(d, d);
    f = Mat::Zero(d, d);
    for (int l = 0; l < d; ++l) {
      K(l, l) = qpow(lambda - double(l), p);
      Kinv(l, l) = 1.0 / K(l, l);
    }
    for (int l = 0; l + 1 < d; ++l) f(l + 1, l) = 1.0;
    for (int l = 1; l < d; ++l)
      e(l - 1, l) = q_number(double(l), p) * q_number(2.0 * lambda - double(l) + 1.0, p);
  }

  double commutator_residual() const {
    int d = L + 1;
    cplx q = qpow(1.0, p);
    Mat r1 = K * e - q * e * K;
    Mat r2 = K * f - (1.0 / q) * f * K;
    Mat r3 = e * f - f * e - (K * K - Kinv * Kinv) / (q - 1.0 / q);
    double s = 1.0 + max_abs(K) + max_abs(e);
    return std::max({max_abs(r1), max_abs(r2.leftCols(d - 1)), max_abs(r3.leftCols(d - 1))}) / s;
  }
};

enum class Flavor { rational, trig };

inline const char* flavor_name(Flavor f) { return f == Flavor::rational ? "rational" : "trig"; }

// coeffs[j] multiplies f^{l-j} v1 (x) f^j v2; coeffs[0] = 1/B_l(lambda1)
struct SingularVector {
  int l = 0;
  CVec coeffs;
};

// e acting from level l to level l-1 of V(lambda1) (x) V(lambda2).
// rational: e (x) 1 + 1 (x) e.  trig: e (x) q^{-h} + q^{h} (x) e, the zero-mode
// coproduct of the matrix-product coproduct used for the L-operators.
inline Mat two_factor_e(cplx l1, cplx l2, int l, Flavor fl, cplx p) {
  Mat E = Mat::Zero(std::max(l, 1), l + 1);
  if (l == 0) return Mat::Zero(0, 1);
  for (int j = 0; j <= l; ++j) {
    int a = l - j;  // power on factor 1
    if (a > 0) {
      cplx c = fl == Flavor::rational
                   ? double(a) * (2.0 * l1 - double(a) + 1.0)
                   : q_number(double(a), p) * q_number(2.0 * l1 - double(a) + 1.0, p) *
                         qpow(-(l2 - double(j)), p);
      E(j, j) += c;  // target (a-1, j) has index j in level l-1
    }
    if (j > 0) {
      cplx c = fl == Flavor::rational
                   ? double(j) * (2.0 * l2 - double(j) + 1.0)
                   : qpow(l1 - double(a), p) * q_number(double(j), p) *
                         q_number(2.0 * l2 - double(j) + 1.0, p);
      E(j - 1, j) += c;  // target (a, j-1)
    }
  }
  return E;
}

inline SingularVector singular_vector(cplx l1, cplx l2, int l, Flavor fl, cplx p = cplx(-3.21, 0.15),
                                      double tol = 1e-10) {
  SingularVector sv;
  sv.l = l;
  if (l == 0) {
    sv.coeffs = {1.0};
    return sv;
  }
  bool bad = fl == Flavor::rational ? shapovalov_rational_vanishes(l1, l)
                                    : std::abs(shapovalov_trig(l1, l, p)) < 1e-12;
  if (bad) throw Error(Err::NormalizationSingular, "B_l(lambda1) = 0");
  Mat E = two_factor_e(l1, l2, l, fl, p);
  Eigen::JacobiSVD<Mat> svd(E, Eigen::ComputeFullV);
  auto sv_vals = svd.singularValues();
  double scale = sv_vals(0) > 0 ? sv_vals(0) : 1.0;
  if (sv_vals(sv_vals.size() - 1) < tol * scale)
    throw Error(Err::ResonantWeights, "kernel of e is not one-dimensional at level " + std::to_string(l));
  Vec v = svd.matrixV().col(l);
  if (std::abs(v(0)) < tol) throw Error(Err::NormalizationSingular, "leading coefficient vanishes");
  cplx B = fl == Flavor::rational ? shapovalov_rational(l1, l) : shapovalov_trig(l1, l, p);
  v /= v(0) * B;
  sv.coeffs.assign(v.data(), v.data() + v.size());
  return sv;
}

}  // namespace hypkz
