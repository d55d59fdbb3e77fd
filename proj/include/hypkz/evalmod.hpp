#pragma once

#include <array>
#include <map>

#include "sl2core.hpp"

namespace hypkz {

using MultiIndex = std::vector<int>;

inline int level_of(const MultiIndex& m) {
  int s = 0;
  for (int x : m) s += x;
  return s;
}

// all multi-indices of level l, first entry descending: (l,0),(l-1,1),...
inline std::vector<MultiIndex> multiindices(int n, int l) {
  if (n == 1) return {{l}};
  std::vector<MultiIndex> out;
  for (int k = l; k >= 0; --k)
    for (auto& r : multiindices(n - 1, l - k)) {
      MultiIndex m{k};
      m.insert(m.end(), r.begin(), r.end());
      out.push_back(m);
    }
  return out;
}

// Monomial basis f^{l_1}v_1 (x) ... (x) f^{l_n}v_n of total level <= L, ordered by level.
struct Basis {
  int n = 0, L = 0;
  std::vector<MultiIndex> idx;
  std::vector<int> level;
  std::vector<int> level_start;  // level_start[l] .. level_start[l+1]-1
  std::map<MultiIndex, int> pos;

  Basis() = default;
  Basis(int n_, int L_) : n(n_), L(L_) {
    for (int l = 0; l <= L; ++l) {
      level_start.push_back(static_cast<int>(idx.size()));
      for (auto& m : multiindices(n, l)) {
        pos[m] = static_cast<int>(idx.size());
        idx.push_back(m);
        level.push_back(l);
      }
    }
    level_start.push_back(static_cast<int>(idx.size()));
  }
  int size() const { return static_cast<int>(idx.size()); }
  int block_size(int l) const { return level_start[l + 1] - level_start[l]; }
  int find(const MultiIndex& m) const {
    auto it = pos.find(m);
    return it == pos.end() ? -1 : it->second;
  }
};

// 2x2 matrix of operators acting on one factor slice
using OpMatrix = std::array<std::array<Mat, 2>, 2>;

inline Mat kron(const Mat& a, const Mat& b) {
  Mat r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

// Entry (i,j) of the coproduct sum_{a_1..a_{n-1}} F1_{i a1} (x) F2_{a1 a2} (x) ... (x) Fn_{a_{n-1} j},
// restricted to the simplex basis; matrix elements of a Kronecker product factor per slot.
inline Mat coproduct_entry(const std::vector<OpMatrix>& factors, int i, int j, const Basis& B) {
  int n = static_cast<int>(factors.size());
  Mat out = Mat::Zero(B.size(), B.size());
  int npaths = 1 << (n - 1);
  for (int path = 0; path < npaths; ++path) {
    std::vector<int> ind(n + 1);
    ind[0] = i;
    ind[n] = j;
    for (int k = 1; k < n; ++k) ind[k] = (path >> (k - 1)) & 1;
    for (int c = 0; c < B.size(); ++c)
      for (int r = 0; r < B.size(); ++r) {
        cplx v = 1.0;
        for (int a = 0; a < n && v != 0.0; ++a) v *= factors[a][ind[a]][ind[a + 1]](B.idx[r][a], B.idx[c][a]);
        out(r, c) += v;
      }
  }
  return out;
}

// T(u) of one Yangian evaluation factor: 1 + h/(u-z), f/(u-z); e/(u-z), 1 - h/(u-z)
inline OpMatrix yangian_factor(cplx z, cplx lambda, cplx u, int L) {
  VermaSlice V(lambda, L);
  Mat Id = Mat::Identity(L + 1, L + 1);
  cplx s = 1.0 / (u - z);
  return {{{Id + s * V.h, s * V.f}, {s * V.e, Id - s * V.h}}};
}

// L^{+-}(xi) of one quantum-affine evaluation factor, x = xi / q^{2z}
inline OpMatrix qaffine_factor(cplx z, cplx lambda, cplx xi, int sign, cplx p, int L) {
  QVermaSlice V(lambda, p, L);
  cplx q = qpow(1.0, p), dq = q - 1.0 / q;
  cplx x = xi / qpow(2.0 * z, p);
  if (sign > 0) return {{{V.Kinv - V.K * x, -dq * x * V.f}, {-dq * V.e, V.K - V.Kinv * x}}};
  return {{{V.K - V.Kinv / x, dq * V.f}, {dq * V.e / x, V.Kinv - V.K / x}}};
}

enum class ModuleFlavor { yangian, qaffine };

// Truncated tensor product of evaluation Verma modules.
struct TruncatedModule {
  ParamPoint point;
  int L;
  Basis basis;
  ModuleFlavor flavor;

  TruncatedModule(const ParamPoint& pt, int L_, ModuleFlavor fl) : point(pt), L(L_), basis(pt.n(), L_), flavor(fl) {}
};

inline Mat yangian_generator(const TruncatedModule& M, int i, int j, cplx u) {
  if (M.flavor != ModuleFlavor::yangian) throw Error(Err::ConfigError, "module is not a Yangian module");
  std::vector<OpMatrix> fs;
  for (int a = 0; a < M.point.n(); ++a) {
    if (std::abs(u - M.point.z[a]) < 1e-12) throw Error(Err::SpectralPole, "u coincides with z_a");
    fs.push_back(yangian_factor(M.point.z[a], M.point.lambda[a], u, M.L));
  }
  return coproduct_entry(fs, i, j, M.basis);
}

inline Mat qaffine_generator(const TruncatedModule& M, int i, int j, int sign, cplx xi) {
  if (M.flavor != ModuleFlavor::qaffine) throw Error(Err::ConfigError, "module is not a quantum affine module");
  std::vector<OpMatrix> fs;
  for (int a = 0; a < M.point.n(); ++a)
    fs.push_back(qaffine_factor(M.point.z[a], M.point.lambda[a], xi, sign, M.point.p, M.L));
  return coproduct_entry(fs, i, j, M.basis);
}

// Eigenvalues of T11(u), T22(u) on the top vector v_1 (x) ... (x) v_n
inline std::pair<cplx, cplx> highest_weight_series(const TruncatedModule& M, cplx u) {
  Mat t11 = yangian_generator(M, 0, 0, u), t22 = yangian_generator(M, 1, 1, u);
  return {t11(0, 0), t22(0, 0)};
}

// Rational R(x) = x + P on C^2 (x) C^2, basis e_i (x) e_j -> 2i+j
inline Eigen::Matrix4cd rational_R(cplx x) {
  Eigen::Matrix4cd R = x * Eigen::Matrix4cd::Identity();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) R(2 * a + b, 2 * b + a) += 1.0;
  return R;
}

// Trigonometric R(x), with the e11(x)e22 + e22(x)e11 term
inline Eigen::Matrix4cd trig_R(cplx x, cplx p) {
  cplx q = qpow(1.0, p), dq = q - 1.0 / q;
  Eigen::Matrix4cd R = Eigen::Matrix4cd::Zero();
  R(0, 0) = R(3, 3) = x * q - 1.0 / q;
  R(1, 1) = R(2, 2) = x - 1.0;
  R(1, 2) = x * dq;  // e12 (x) e21
  R(2, 1) = dq;      // e21 (x) e12
  return R;
}

// Block operator on C^2 (x) C^2 (x) V from a 2x2 family, in aux slot 1 or 2
inline Mat aux_embed(const std::array<std::array<Mat, 2>, 2>& T, int slot) {
  Eigen::Index D = T[0][0].rows();
  Mat out = Mat::Zero(4 * D, 4 * D);
  for (int i1 = 0; i1 < 2; ++i1)
    for (int i2 = 0; i2 < 2; ++i2)
      for (int j1 = 0; j1 < 2; ++j1)
        for (int j2 = 0; j2 < 2; ++j2) {
          bool on = slot == 1 ? (i2 == j2) : (i1 == j1);
          if (!on) continue;
          const Mat& blk = slot == 1 ? T[i1][j1] : T[i2][j2];
          out.block((2 * i1 + i2) * D, (2 * j1 + j2) * D, D, D) = blk;
        }
  return out;
}

inline Mat aux_R(const Eigen::Matrix4cd& R, Eigen::Index D) { return kron(Mat(R), Mat::Identity(D, D)); }

// rows/cols of C^2 (x) C^2 (x) V restricted to levels <= Lkeep
inline std::vector<int> aux_keep(const Basis& B, int Lkeep) {
  std::vector<int> keep;
  for (int k = 0; k < 4; ++k)
    for (int r = 0; r < B.size(); ++r)
      if (B.level[r] <= Lkeep) keep.push_back(k * B.size() + r);
  return keep;
}

inline Mat submatrix(const Mat& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  Mat out(rows.size(), cols.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

// R(x-y) T_(1)(x) T_(2)(y) = T_(2)(y) T_(1)(x) R(x-y), relative residual on levels <= L
inline double rtt_residual(const ParamPoint& pt, int L, cplx x, cplx y) {
  TruncatedModule M(pt, L + 1, ModuleFlavor::yangian);
  std::array<std::array<Mat, 2>, 2> Tx, Ty;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Tx[i][j] = yangian_generator(M, i, j, x);
      Ty[i][j] = yangian_generator(M, i, j, y);
    }
  Mat T1 = aux_embed(Tx, 1), T2 = aux_embed(Ty, 2), R = aux_R(rational_R(x - y), M.basis.size());
  Mat lhs = R * T1 * T2, rhs = T2 * T1 * R;
  auto keep = aux_keep(M.basis, L);
  return rel_diff(submatrix(lhs, keep, keep), submatrix(rhs, keep, keep));
}

// R(xi/zeta) L^{s1}_(1)(xi) L^{s2}_(2)(zeta) = L^{s2}_(2)(zeta) L^{s1}_(1)(xi) R(xi/zeta)
inline double rll_residual(const ParamPoint& pt, int L, cplx xi, cplx zeta, int s1, int s2) {
  TruncatedModule M(pt, L + 1, ModuleFlavor::qaffine);
  std::array<std::array<Mat, 2>, 2> A, B;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      A[i][j] = qaffine_generator(M, i, j, s1, xi);
      B[i][j] = qaffine_generator(M, i, j, s2, zeta);
    }
  Mat L1 = aux_embed(A, 1), L2 = aux_embed(B, 2), R = aux_R(trig_R(xi / zeta, pt.p), M.basis.size());
  Mat lhs = R * L1 * L2, rhs = L2 * L1 * R;
  auto keep = aux_keep(M.basis, L);
  return rel_diff(submatrix(lhs, keep, keep), submatrix(rhs, keep, keep));
}

// Action of T_ij(u) on the dual module V*(z,lambda) in the dual monomial basis:
// (T_ji)^T times prod (u - z_a)/(u - z_a - lambda_a)
inline Mat yangian_dual_generator(const TruncatedModule& M, int i, int j, cplx u) {
  cplx g = 1.0;
  for (int a = 0; a < M.point.n(); ++a) g *= (u - M.point.z[a]) / (u - M.point.z[a] - M.point.lambda[a]);
  return yangian_generator(M, j, i, u).transpose() * g;
}

// Action of L^{+-}_ij(q^{2u}) on V_q*(z,lambda): (L_ji)^T times
// prod (+-i) q^{+-(z_a - u)} / (2 sin(pi (u - z_a - lambda_a)/p))
inline Mat qaffine_dual_generator(const TruncatedModule& M, int i, int j, int sign, cplx u) {
  const ParamPoint& P = M.point;
  cplx g = 1.0;
  for (int a = 0; a < P.n(); ++a)
    g *= double(sign) * I * qpow(double(sign) * (P.z[a] - u), P.p) / (2.0 * sinp(u - P.z[a] - P.lambda[a], P.p));
  return qaffine_generator(M, j, i, sign, qpow(2.0 * u, P.p)).transpose() * g;
}

}  // namespace hypkz
