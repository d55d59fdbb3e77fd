#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hypkz {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using CVec = std::vector<cplx>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx I{0.0, 1.0};

enum class Err {
  DegenerateQ,
  ResonantWeights,
  NormalizationSingular,
  SpectralPole,
  ResonantParams,
  AmbiguousResonance,
  PoleAtSample,
  NotAtResonance,
  GammaPole,
  PoleNearContour,
  RegionViolation,
  NoiseFloorAmbiguous,
  ConfigError,
  Unsupported
};

inline const char* err_name(Err e) {
  switch (e) {
    case Err::DegenerateQ: return "DegenerateQ";
    case Err::ResonantWeights: return "ResonantWeights";
    case Err::NormalizationSingular: return "NormalizationSingular";
    case Err::SpectralPole: return "SpectralPole";
    case Err::ResonantParams: return "ResonantParams";
    case Err::AmbiguousResonance: return "AmbiguousResonance";
    case Err::PoleAtSample: return "PoleAtSample";
    case Err::NotAtResonance: return "NotAtResonance";
    case Err::GammaPole: return "GammaPole";
    case Err::PoleNearContour: return "PoleNearContour";
    case Err::RegionViolation: return "RegionViolation";
    case Err::NoiseFloorAmbiguous: return "NoiseFloorAmbiguous";
    case Err::ConfigError: return "ConfigError";
    case Err::Unsupported: return "Unsupported";
  }
  return "?";
}

class Error : public std::runtime_error {
 public:
  Error(Err c, const std::string& msg)
      : std::runtime_error(std::string(err_name(c)) + ": " + msg), code_(c) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

// q^x := exp(pi i x / p), never a principal power of q
inline cplx qpow(cplx x, cplx p) { return std::exp(I * pi * x / p); }
inline cplx sinp(cplx x, cplx p) { return std::sin(pi * x / p); }

// Full parameter tuple of a tensor product of evaluation modules.
struct ParamPoint {
  CVec z;
  CVec lambda;
  cplx p{-3.21, 0.15};
  cplx mu{0.5, 1.2};

  int n() const { return static_cast<int>(z.size()); }
  cplx q() const { return qpow(1.0, p); }
  cplx kappa() const { return std::exp(mu); }

  bool near_rational_p(double tol = 1e-9, int max_den = 64) const {
    if (std::abs(p.imag()) > tol) return false;
    for (int d = 1; d <= max_den; ++d) {
      double x = p.real() * d;
      if (std::abs(x - std::round(x)) < tol * d) return true;
    }
    return false;
  }

  void validate() const {
    if (z.size() != lambda.size() || z.empty())
      throw Error(Err::ConfigError, "z and lambda must have the same positive length");
    if (!(p.real() < 0)) throw Error(Err::ConfigError, "Re p must be negative");
    if (!(mu.imag() > 0 && mu.imag() < 2 * pi))
      throw Error(Err::ConfigError, "Im mu must lie in (0, 2 pi)");
    if (std::abs(std::sin(pi / p)) < 1e-14) throw Error(Err::DegenerateQ, "q = +-1");
  }
};

// Seeded complex samples in a box, used by every residual check.
struct SampleRng {
  std::mt19937_64 gen;
  explicit SampleRng(std::uint64_t seed) : gen(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen); }
  cplx in_box(double half) { return {uniform(-half, half), uniform(-half, half)}; }
};

inline double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline double rel_diff(const Mat& a, const Mat& b) {
  double s = std::max(max_abs(a), max_abs(b));
  return s > 0 ? max_abs(a - b) / s : 0.0;
}

inline double rel_diff(cplx a, cplx b) {
  double s = std::max(std::abs(a), std::abs(b));
  return s > 0 ? std::abs(a - b) / s : 0.0;
}

}  // namespace hypkz
