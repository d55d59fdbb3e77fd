#pragma once

#include <Eigen/SVD>
#include <Eigen/QR>

#include "integrator.hpp"
#include "rnd.hpp"

namespace hypkz {

struct QKZMapMatrix {
  ParamPoint point;
  int L = 0;
  Mat matrix;
  Mat error;  // absolute quadrature error estimate per entry
  std::vector<IntegralStatus> statuses;
  std::vector<double> block_condition;

  bool all_converged() const {
    for (auto s : statuses)
      if (s != IntegralStatus::CONVERGED) return false;
    return true;
  }
};

inline double condition_number(const Mat& A) {
  if (A.size() == 0) return 1.0;
  Eigen::JacobiSVD<Mat> svd(A);
  const auto& s = svd.singularValues();
  return s(0) / std::max(s(s.size() - 1), 1e-300);
}

// entry (m,l) = B^q_l(lambda) * int Phi_l w_m nu_q(e*_l), level by level
inline QKZMapMatrix build_qkz_map(const ParamPoint& P, int L, const QuadratureSpec& spec = {}) {
  Basis B(P.n(), L);
  QKZMapMatrix Q;
  Q.point = P;
  Q.L = L;
  Q.matrix = Mat::Zero(B.size(), B.size());
  Q.error = Mat::Zero(B.size(), B.size());
  Vec bq = shapovalov_diag(B, P, Flavor::trig);
  for (int l = 0; l <= L; ++l) {
    int s0 = B.level_start[l], nb = B.block_size(l);
    std::vector<HypFunction> ws, Ws;
    for (int k = 0; k < nb; ++k) {
      ws.push_back(weight_function(Flavor::rational, B.idx[s0 + k], P));
      Ws.push_back(nu_map(Flavor::trig, B.idx[s0 + k], P));
    }
    std::vector<std::pair<int, int>> pairs;
    for (int r = 0; r < nb; ++r)
      for (int c = 0; c < nb; ++c) pairs.push_back({r, c});
    auto res = integrate_pairs(ws, Ws, pairs, P, spec);
    for (size_t k = 0; k < pairs.size(); ++k) {
      auto [r, c] = pairs[k];
      Q.matrix(s0 + r, s0 + c) = bq(s0 + c) * res[k].value;
      Q.error(s0 + r, s0 + c) = std::abs(bq(s0 + c)) * res[k].est_error;
      Q.statuses.push_back(res[k].status);
    }
    Q.block_condition.push_back(condition_number(Q.matrix.block(s0, s0, nb, nb)));
  }
  return Q;
}

// Psi = exp(-mu sum z_a lambda_a / p) qKZ
inline cplx qkz_gauge(const ParamPoint& P) {
  cplx s = 0.0;
  for (int a = 0; a < P.n(); ++a) s += P.z[a] * P.lambda[a];
  return std::exp(-P.mu * s / P.p);
}

inline ParamPoint shifted(const ParamPoint& P, int m, double times = 1.0) {
  ParamPoint S = P;
  S.z[m] += times * P.p;
  return S;
}

struct QkzEquationReport {
  int m = 0;
  std::vector<double> column_residual;
  double residual = 0.0;
  double error_estimate = 0.0;  // relative, from the per-entry estimates
  bool converged = true;
};

inline double column_norm(const Mat& A, int c) { return A.col(c).norm(); }

// Psi(z + p e_m) = H_m(z) Psi(z), column by column
inline QkzEquationReport check_qkz_equation(const ParamPoint& P, int L, int m, const QuadratureSpec& spec = {}) {
  QKZMapMatrix Q0 = build_qkz_map(P, L, spec);
  ParamPoint S = shifted(P, m);
  QKZMapMatrix Q1 = build_qkz_map(S, L, spec);
  Mat H = qkz_operator(m, P, L);
  cplx g0 = qkz_gauge(P), g1 = qkz_gauge(S);
  Mat lhs = g1 * Q1.matrix, rhs = H * (g0 * Q0.matrix);
  QkzEquationReport r;
  r.m = m;
  for (int c = 0; c < lhs.cols(); ++c) {
    double d = (lhs.col(c) - rhs.col(c)).norm() / std::max(std::abs(g0) * column_norm(Q0.matrix, c), 1e-300);
    r.column_residual.push_back(d);
    r.residual = std::max(r.residual, d);
    double e = (std::abs(g1) * Q1.error.col(c).norm() + (H.cwiseAbs() * Q0.error.col(c)).norm() * std::abs(g0)) /
               std::max(std::abs(g0) * column_norm(Q0.matrix, c), 1e-300);
    r.error_estimate = std::max(r.error_estimate, e);
  }
  r.converged = Q0.all_converged() && Q1.all_converged();
  return r;
}

struct RefinementStudy {
  std::vector<double> panel;
  std::vector<double> residual;
  std::vector<double> order;
  double min_order = 0.0;
};

// Non-adaptive composite Gauss-Legendre on panels h, h/2, h/4, ...; observed order log2(r_h / r_{h/2}).
inline RefinementStudy qkz_refinement_study(const ParamPoint& P, int L, int m, int levels = 3, double h0 = 8.0,
                                            int nodes = 2) {
  RefinementStudy st;
  for (int k = 0; k < levels; ++k) {
    QuadratureSpec s;
    s.panel = h0 / std::pow(2.0, k);
    s.nodes = nodes;
    s.max_panels = 1;
    st.panel.push_back(s.panel);
    st.residual.push_back(check_qkz_equation(P, L, m, s).residual);
  }
  st.min_order = 1e300;
  for (int k = 1; k < levels; ++k) {
    st.order.push_back(std::log2(st.residual[k - 1] / st.residual[k]));
    st.min_order = std::min(st.min_order, st.order.back());
  }
  return st;
}

// Phi_l(t, z, lambda) = Phi_l(t, z', lambda') at random t: the phase only sees the sets {z_a + lambda_a}, {z_a - lambda_a}
inline double phase_invariance_residual(const ParamPoint& P, const ParamTransform& t, int l, std::uint64_t seed,
                                        int samples = 20) {
  ParamPoint Q = transform_params(P, t);
  SampleRng rng(seed);
  SamplePlan plan;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    CVec x = sample_point(Flavor::trig, l, joint_poles(P, Q), {}, plan, rng);
    worst = std::max(worst, rel_diff(phase_function(x, P), phase_function(x, Q)));
  }
  return worst;
}

struct DiagramReport {
  double phase_invariance = 0.0;
  double residual = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
};

// (sigma' x sigma)_rational o qKZ(z,lambda) = qKZ(z',lambda') o (sigma' x sigma)_trig
inline DiagramReport check_extended_monodromy(const ParamPoint& P, int L, const ParamTransform& t,
                                              const QuadratureSpec& spec = {}, std::uint64_t seed = 11) {
  DiagramReport r;
  ParamPoint Pt = transform_params(P, t);
  for (int l = 1; l <= std::min(L, 3); ++l) r.phase_invariance = std::max(r.phase_invariance, phase_invariance_residual(P, t, l, seed));
  QKZMapMatrix Q = build_qkz_map(P, L, spec), Qt = build_qkz_map(Pt, L, spec);
  Mat G = sigma_module_map(t, P, L);
  Mat Aq = t.is_identity() ? Mat::Identity(G.rows(), G.cols()) : sigma_pair_matrix(t, P, L, Flavor::trig).mat.matrix;
  Mat lhs = G * Q.matrix, rhs = Qt.matrix * Aq;
  double scale = std::max(max_abs(lhs), 1e-300);
  r.residual = max_abs(lhs - rhs) / scale;
  r.error_estimate = (max_abs(G.cwiseAbs() * Q.error) + max_abs(Qt.error * Aq.cwiseAbs())) / scale;
  r.converged = Q.all_converged() && Qt.all_converged();
  return r;
}

struct ExtendedQkzReport {
  double residual = 0.0;
  Mat column_ratio;  // Psi(H Psi)^{-1} Psi(T x): identity when the equation holds
  bool converged = true;
};

// Psi(T^{sigma'}_sigma(p) x) = H^{sigma'}_sigma(x) Psi(x)
inline ExtendedQkzReport check_extended_qkz(const ParamPoint& P, int L, const ParamTransform& t,
                                           const QuadratureSpec& spec = {}) {
  ParamPoint S = extended_shift(t, P);
  QKZMapMatrix Q0 = build_qkz_map(P, L, spec), Q1 = build_qkz_map(S, L, spec);
  Mat H = extended_operator(t, P, L);
  Mat lhs = qkz_gauge(S) * Q1.matrix, rhs = H * (qkz_gauge(P) * Q0.matrix);
  ExtendedQkzReport r;
  r.residual = max_abs(lhs - rhs) / std::max(max_abs(lhs), 1e-300);
  r.column_ratio = rhs.partialPivLu().solve(lhs);
  r.converged = Q0.all_converged() && Q1.all_converged();
  return r;
}

// qKZ(z) at points outside the straight-contour region, through the first difference equation:
// side +1: qKZ(z) = g(z)^{-1} H_1(z)^{-1} g(z + p e1) qKZ(z + p e1), side -1: qKZ(z) = g(z)^{-1} H_1(z - p e1) g(z - p e1) qKZ(z - p e1).
inline Mat qkz_continued(const ParamPoint& P, int L, int side, const QuadratureSpec& spec = {}) {
  if (side == 0) return build_qkz_map(P, L, spec).matrix;
  if (P.n() != 2) throw Error(Err::Unsupported, "continuation implemented for n = 2");
  ParamPoint S = shifted(P, 0, double(side));
  Mat QS = qkz_gauge(S) * build_qkz_map(S, L, spec).matrix;
  Mat M;
  if (side > 0) M = flip_matrix(L) * rhat_rational(P, L) * kappa_h(P, 0, L).inverse() * QS;
  else M = qkz_operator(0, S, L) * QS;
  return M / qkz_gauge(P);
}

struct Hyperplane {
  int i = 0, j = 1, m = 0, s = 0;
  // z_i - z_j + lambda_i + lambda_j - (m - p s) for i < j, - (m + p s) for j < i
  cplx value(const ParamPoint& P) const {
    cplx v = P.z[i] - P.z[j] + P.lambda[i] + P.lambda[j];
    return i < j ? v - (double(m) - P.p * double(s)) : v - (double(m) + P.p * double(s));
  }
  const char* predicted() const { return i < j ? "pole" : "kernel"; }
};

// A line z_1 = z_1(base) + x * direction; x = 0 is the crossing point.
struct ScanLine {
  ParamPoint base;
  cplx direction = 1.0;
  int eval_side = 0;  // which continuation reaches the line
  Hyperplane target;
  bool control = false;  // off every hyperplane: regular expected
  ParamPoint at(cplx x) const {
    ParamPoint Q = base;
    Q.z[0] += x * direction;
    return Q;
  }
};

struct SingularityScan {
  Hyperplane hyperplane;
  std::string side;  // pole | kernel | regular
  int order = 0;
  double smallest_singular_value = 0.0;  // relative, at the crossing
  double linear_fit_residual = 0.0;
  bool ambiguous = false;
  std::string predicted;
};

inline double sigma_min(const Mat& A) {
  Eigen::JacobiSVD<Mat> svd(A);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

inline double sigma_max(const Mat& A) { return Eigen::JacobiSVD<Mat>(A).singularValues()(0); }

struct ScanSettings {
  double radius_factor = 1e-2;  // circle radius in units of |p|
  int circle = 32;
  int order_probe = 3;
  double floor = 1e-8;
  double kernel_threshold = 1e-6;
  double fit_tolerance = 0.05;
};

inline SingularityScan scan_crossing(const ScanLine& line, int L, const QuadratureSpec& spec,
                                     const ScanSettings& set = {}) {
  SingularityScan out;
  out.hyperplane = line.target;
  out.predicted = line.control ? "regular" : line.target.predicted();
  double r = set.radius_factor * std::abs(line.base.p);
  auto f = [&](cplx x) { return qkz_continued(line.at(x), L, line.eval_side, spec); };
  PoleResult pr = pole_residue_in_parameter(f, 0.0, r, set.order_probe, set.circle, set.floor);
  out.order = pr.order;
  out.ambiguous = pr.ambiguous;
  if (pr.order > 0) {
    out.side = "pole";
    out.smallest_singular_value = std::nan("");
    return out;
  }
  // smallest singular value along the real line through the crossing, relative to the largest
  double scale = sigma_max(f(0.0));
  out.smallest_singular_value = sigma_min(f(0.0)) / scale;
  std::vector<double> xs, ys;
  for (int k = -3; k <= 3; ++k) {
    if (k == 0) continue;
    double x = k * r;
    xs.push_back(std::abs(x));
    ys.push_back(sigma_min(f(x)) / scale);
  }
  // sigma ~ c |x|: least squares through the origin
  double sxy = 0.0, sxx = 0.0;
  for (size_t k = 0; k < xs.size(); ++k) {
    sxy += xs[k] * ys[k];
    sxx += xs[k] * xs[k];
  }
  double c = sxy / sxx, res = 0.0, ymax = 0.0;
  for (size_t k = 0; k < xs.size(); ++k) {
    res = std::max(res, std::abs(ys[k] - c * xs[k]));
    ymax = std::max(ymax, ys[k]);
  }
  out.linear_fit_residual = res / std::max(ymax, 1e-300);
  bool dip = out.smallest_singular_value < set.kernel_threshold;
  out.side = dip && out.linear_fit_residual < set.fit_tolerance ? "kernel" : "regular";
  return out;
}

inline std::vector<SingularityScan> scan_singularities(const std::vector<ScanLine>& lines, int L,
                                                       const QuadratureSpec& spec, const ScanSettings& set = {}) {
  std::vector<SingularityScan> out;
  for (auto& l : lines) out.push_back(scan_crossing(l, L, spec, set));
  return out;
}

// Default scan family at n = 2: one crossing per hyperplane kind, chosen so that the continuation point
// lies in the straight-contour region, plus generic control crossings.
inline std::vector<ScanLine> default_scan_lines(cplx p = {-3.21, 0.15}, cplx mu = {0.5, 1.2}) {
  std::vector<ScanLine> lines;
  auto mk = [&](cplx z1, cplx l1, cplx l2, bool pole) {
    ParamPoint P;
    P.p = p;
    P.mu = mu;
    P.lambda = {l1, l2};
    P.z = {z1, pole ? z1 + l1 + l2 : z1 - l1 - l2};
    return P;
  };
  ScanLine pole;
  pole.base = mk({2.5, 0.1}, {-1.5, 0.05}, {-1.0, -0.1}, true);
  pole.eval_side = 1;
  pole.target = {0, 1, 0, 0};
  ScanLine ker;
  ker.base = mk({-2.0, 0.1}, {-1.5, 0.05}, {-1.0, -0.1}, false);
  ker.eval_side = -1;
  ker.target = {1, 0, 0, 0};
  lines.push_back(pole);
  lines.push_back(ker);
  for (cplx off : {cplx(0.3, 0.25), cplx(-0.25, 0.3), cplx(0.2, -0.3)}) {
    ScanLine c = pole;
    c.base.z[0] += off;
    c.control = true;
    lines.push_back(c);
  }
  for (cplx off : {cplx(-0.15, 0.3), cplx(0.1, -0.3)}) {
    ScanLine c = ker;
    c.base.z[0] += off;
    c.control = true;
    lines.push_back(c);
  }
  return lines;
}

// Largest principal angle between the column spaces of A and B (equal dimensions)
inline double principal_angle(const Mat& A, const Mat& B) {
  auto orth = [](const Mat& X) {
    Eigen::HouseholderQR<Mat> qr(X);
    return Mat(qr.householderQ() * Mat::Identity(X.rows(), X.cols()));
  };
  Mat qa = orth(A), qb = orth(B);
  // sine form: accurate for small angles
  Mat d = qb - qa * (qa.adjoint() * qb);
  double smax = Eigen::JacobiSVD<Mat>(d).singularValues()(0);
  return std::asin(std::clamp(smax, 0.0, 1.0));
}

// Null space of A from the SVD: right singular vectors with singular value below tol * sigma_max
inline Mat null_space(const Mat& A, double tol = 1e-8) {
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (int k = 0; k < s.size(); ++k)
    if (s(k) > tol * s(0)) ++rank;
  return svd.matrixV().rightCols(A.cols() - rank);
}

struct ResidueMapReport {
  double level0_residual = 0.0;   // |Res level 0| / |Res level 1|
  double rank_gap = 0.0;          // sigma_2 / sigma_1 of the level-1 residue block
  double kernel_angle = 0.0;      // ker Res vs the U_q submodule vector
  double image_angle = 0.0;       // im Res vs the rational singular vector
  double scalar_consistency = 0.0;
  cplx scalar = 0.0;
  int order = 0;
  bool ambiguous = false;
};

// Level-1 vector of the rational submodule: common kernel of T_21(u) (raising) from level 1 to level 0.
inline Vec yangian_singular_level1(const ParamPoint& P, int L) {
  TruncatedModule M(P, L, ModuleFlavor::yangian);
  Basis B(P.n(), L);
  int s1 = B.level_start[1], n1 = B.block_size(1);
  Mat stack(0, n1);
  for (cplx u : {cplx(0.37, 0.81), cplx(-1.3, 0.45), cplx(2.1, -0.7)}) {
    Mat T = yangian_generator(M, 1, 0, u);
    Mat blk = T.block(0, s1, 1, n1);
    Mat next(stack.rows() + 1, n1);
    next << stack, blk;
    stack = next;
  }
  Mat ns = null_space(stack, 1e-8);
  if (ns.cols() != 1) throw Error(Err::ResonantWeights, "rational singular vector is not unique at level 1");
  return ns.col(0);
}

// Level-1 part of the U_q submodule generated by the highest vector, read in the function model:
// images of the constant under the (1,2) formula, expanded in nu_q(e*_l), coordinates x_l = c_l / B^q_l.
inline Vec qaffine_submodule_level1(const ParamPoint& P, int L, std::uint64_t seed = 5) {
  Basis B(P.n(), L);
  int s1 = B.level_start[1], n1 = B.block_size(1);
  std::vector<HypFunction> bs, fs;
  for (int k = 0; k < n1; ++k) bs.push_back(nu_map(Flavor::trig, B.idx[s1 + k], P));
  HypFunction one{Flavor::trig, 0, P, [](const CVec&) { return cplx(1.0); }};
  for (cplx u : {cplx(0.37, 0.81), cplx(-1.3, 0.45), cplx(0.9, -0.2)}) fs.push_back(action_on_F(0, 1, u, one));
  SampleRng rng(seed);
  SpanFit fit = fit_in_span(fs, bs, sample_points(Flavor::trig, 1, P, 4 * n1 + 4, SamplePlan{}, rng));
  Eigen::JacobiSVD<Mat> svd(fit.coeffs, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  if (s.size() > 1 && s(1) > 1e-8 * s(0)) throw Error(Err::ResonantWeights, "U_q level-1 part is not one-dimensional");
  Vec bq = shapovalov_diag(B, P, Flavor::trig);
  Vec x(n1);
  for (int k = 0; k < n1; ++k) x(k) = svd.matrixU()(k, 0) / bq(s1 + k);
  return x.normalized();
}

// Residue of qKZ(z) in z_1 about z_1 - z_2 + lambda_1 + lambda_2 = 0 (k = 0, L = 1): rank one with
// kernel the U_q submodule and image the rational singular vector; entrywise scalar against v phi^T.
inline ResidueMapReport residue_map_check(const ParamPoint& base, int L, const QuadratureSpec& spec,
                                          const ScanSettings& set = {}) {
  if (L != 1 || base.n() != 2) throw Error(Err::Unsupported, "residue map check implemented for n = 2, L = 1");
  ScanLine line;
  line.base = base;
  line.eval_side = 1;
  double r = set.radius_factor * std::abs(base.p);
  auto f = [&](cplx x) { return qkz_continued(line.at(x), L, 1, spec); };
  PoleResult pr = pole_residue_in_parameter(f, 0.0, r, set.order_probe, set.circle, set.floor);
  ResidueMapReport rep;
  rep.order = pr.order;
  rep.ambiguous = pr.ambiguous;
  Basis B(2, L);
  int s1 = B.level_start[1], n1 = B.block_size(1);
  Mat R1 = pr.residue.block(s1, s1, n1, n1);
  double n1norm = std::max(max_abs(R1), 1e-300);
  rep.level0_residual = std::abs(pr.residue(0, 0)) / n1norm;
  Eigen::JacobiSVD<Mat> svd(R1, Eigen::ComputeFullU | Eigen::ComputeFullV);
  rep.rank_gap = svd.singularValues()(1) / svd.singularValues()(0);
  Vec v = yangian_singular_level1(base, L);
  Vec u = qaffine_submodule_level1(base, L);
  rep.kernel_angle = principal_angle(svd.matrixV().col(1), u);
  rep.image_angle = principal_angle(svd.matrixU().col(0), v);
  // phi annihilates u; Res_ij = s v_i phi_j
  Vec phi(2);
  phi << u(1), -u(0);
  std::vector<cplx> ss;
  double wmax = 0.0;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j) wmax = std::max(wmax, std::abs(v(i) * phi(j)));
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j)
      if (std::abs(v(i) * phi(j)) > 1e-3 * wmax) ss.push_back(R1(i, j) / (v(i) * phi(j)));
  cplx mean = 0.0;
  for (cplx s : ss) mean += s;
  mean /= double(ss.size());
  for (cplx s : ss) rep.scalar_consistency = std::max(rep.scalar_consistency, std::abs(s - mean) / std::abs(mean));
  rep.scalar = mean;
  return rep;
}

struct ResidueIdentityReport {
  std::vector<MultiIndex> rows;
  std::vector<cplx> lhs, rhs_plain, rhs_corrected;
  double rel_plain = 0.0, rel_corrected = 0.0;
  cplx ratio = 0.0;  // lhs / rhs_plain on the largest entry
};

namespace detail {
inline cplx circle_residue(const std::function<cplx(cplx)>& f, cplx c, double r, int n = 32) {
  cplx s = 0.0;
  for (int k = 0; k < n; ++k) {
    cplx d = r * std::exp(I * (2.0 * pi * (k + 0.5) / n));
    s += f(c + d) * d;
  }
  return s / double(n);
}
}  // namespace detail

// res_{2 lambda_1 = k} of int Phi w_m nu_q(e*_lb) d^l t with l = k + 1, against C(z,lambda) iota^* w iota_q^* W.
// The continued integral has its lambda_1 pole from the iterated t-residue along the string
// t_1 = z_1 + lambda_1, t_{a+1} = t_a - 1, picked up with (2 pi i)^{k+1} by the contour.
inline ResidueIdentityReport residue_identity_check(const ParamPoint& base, int k, const MultiIndex& lb,
                                                    double t_radius = 1e-3, double lambda_radius = 0.02) {
  int l = k + 1;
  Basis B(base.n(), l);
  ResidueIdentityReport rep;
  ParamPoint R = base;
  R.lambda[0] = 0.5 * k;
  cplx Cp = residue_constant_C(R, true);
  cplx Cc = Cp * residue_constant_correction(k, R.p);
  HypFunction Wn = nu_map(Flavor::trig, lb, R);
  cplx iW = iota_star(Wn)({});
  for (int row = B.level_start[l]; row < B.level_start[l] + B.block_size(l); ++row) {
    MultiIndex mb = B.idx[row];
    auto string_residue = [&](cplx l1) {
      ParamPoint Q = base;
      Q.lambda[0] = l1;
      HypFunction w = weight_function(Flavor::rational, mb, Q), W = nu_map(Flavor::trig, lb, Q);
      CVec t(l);
      std::function<cplx(int)> nest = [&](int a) -> cplx {
        cplx c = a == 0 ? Q.z[0] + Q.lambda[0] : t[a - 1] - 1.0;
        double rad = t_radius * double(l - a);
        return detail::circle_residue(
            [&, a](cplx x) {
              t[a] = x;
              if (a + 1 == l) return phase_function(t, Q) * w(t) * W(t);
              return nest(a + 1);
            },
            c, rad);
      };
      return nest(0);
    };
    cplx lhs = 2.0 * std::pow(2.0 * pi * I, l) * detail::circle_residue(string_residue, 0.5 * k, lambda_radius);
    cplx iw = iota_star(weight_function(Flavor::rational, mb, R))({});
    rep.rows.push_back(mb);
    rep.lhs.push_back(lhs);
    rep.rhs_plain.push_back(Cp * iw * iW);
    rep.rhs_corrected.push_back(std::pow(2.0 * pi * I, l) * Cc * iw * iW);
  }
  double scale = 0.0;
  size_t big = 0;
  for (size_t r = 0; r < rep.lhs.size(); ++r)
    if (std::abs(rep.lhs[r]) > scale) {
      scale = std::abs(rep.lhs[r]);
      big = r;
    }
  scale = std::max(scale, 1e-300);
  for (size_t r = 0; r < rep.lhs.size(); ++r) {
    rep.rel_plain = std::max(rep.rel_plain, std::abs(rep.lhs[r] - rep.rhs_plain[r]) / scale);
    rep.rel_corrected = std::max(rep.rel_corrected, std::abs(rep.lhs[r] - rep.rhs_corrected[r]) / scale);
  }
  rep.ratio = rep.lhs[big] / rep.rhs_plain[big];
  return rep;
}

}  // namespace hypkz
