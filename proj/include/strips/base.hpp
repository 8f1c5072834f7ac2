#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace strips {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline const Complex kI{0.0, 1.0};

enum class Errc {
  PoleProximity,
  CongruentPoles,
  OrthogonalityViolated,
  NonUnitVector,
  RootFindingFailed,
  ResonantExponents,
  CollidingRho,
  OnBranchCut,
  LineThroughPole,
  AmbiguousRounding,
  NonzeroIndex,
  SingularSystem,
  IterationDiverged,
  PoleOnPath,
  StepBudgetExceeded,
  NonConvergent,
  FitFailed,
  NotPeriodic,
  ExtraPoles,
  SingularResidueSystem,
  ConsistencyCheckFailed,
  NotPositive,
  OrthogonalEigenvectors,
  NoNonzeroEigenvalue,
  DegeneratePair,
  NotEquivalent,
  MoveUndefined,
  SingularFactorization,
  LineHitsSingularity,
  LoopHitsPole,
  ToleranceNotMet,
  NearLatticeZero,
  ConstraintViolated,
  NondiagonalizableMultiplier,
  TruncationInsufficient,
  NewtonFailed,
  OpenSetFailure,
  PeelFailed,
  UsageError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::PoleProximity: return "PoleProximity";
    case Errc::CongruentPoles: return "CongruentPoles";
    case Errc::OrthogonalityViolated: return "OrthogonalityViolated";
    case Errc::NonUnitVector: return "NonUnitVector";
    case Errc::RootFindingFailed: return "RootFindingFailed";
    case Errc::ResonantExponents: return "ResonantExponents";
    case Errc::CollidingRho: return "CollidingRho";
    case Errc::OnBranchCut: return "OnBranchCut";
    case Errc::LineThroughPole: return "LineThroughPole";
    case Errc::AmbiguousRounding: return "AmbiguousRounding";
    case Errc::NonzeroIndex: return "NonzeroIndex";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::IterationDiverged: return "IterationDiverged";
    case Errc::PoleOnPath: return "PoleOnPath";
    case Errc::StepBudgetExceeded: return "StepBudgetExceeded";
    case Errc::NonConvergent: return "NonConvergent";
    case Errc::FitFailed: return "FitFailed";
    case Errc::NotPeriodic: return "NotPeriodic";
    case Errc::ExtraPoles: return "ExtraPoles";
    case Errc::SingularResidueSystem: return "SingularResidueSystem";
    case Errc::ConsistencyCheckFailed: return "ConsistencyCheckFailed";
    case Errc::NotPositive: return "NotPositive";
    case Errc::OrthogonalEigenvectors: return "OrthogonalEigenvectors";
    case Errc::NoNonzeroEigenvalue: return "NoNonzeroEigenvalue";
    case Errc::DegeneratePair: return "DegeneratePair";
    case Errc::NotEquivalent: return "NotEquivalent";
    case Errc::MoveUndefined: return "MoveUndefined";
    case Errc::SingularFactorization: return "SingularFactorization";
    case Errc::LineHitsSingularity: return "LineHitsSingularity";
    case Errc::LoopHitsPole: return "LoopHitsPole";
    case Errc::ToleranceNotMet: return "ToleranceNotMet";
    case Errc::NearLatticeZero: return "NearLatticeZero";
    case Errc::ConstraintViolated: return "ConstraintViolated";
    case Errc::NondiagonalizableMultiplier: return "NondiagonalizableMultiplier";
    case Errc::TruncationInsufficient: return "TruncationInsufficient";
    case Errc::NewtonFailed: return "NewtonFailed";
    case Errc::OpenSetFailure: return "OpenSetFailure";
    case Errc::PeelFailed: return "PeelFailed";
    case Errc::UsageError: return "UsageError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

// ---------------------------------------------------------------------------
// Branch of ln z with the cut along arg z = pi/2 (upward imaginary ray):
// arg in (-3pi/2, pi/2].  Continuous on C minus the upward ray; the positive
// real axis carries arg 0, the negative real axis arg -pi.
inline Complex log_branch(Complex z) {
  double th = std::arg(z);
  if (th > kPi / 2 + 1e-300) th -= 2 * kPi;
  return {std::log(std::abs(z)), th};
}

inline Complex pow_branch(Complex z, Complex k) { return std::exp(k * log_branch(z)); }

inline bool on_branch_cut(Complex z, double tol = 1e-13) {
  return std::abs(z.real()) <= tol * std::max(1.0, std::abs(z.imag())) && z.imag() > 0;
}

// ---------------------------------------------------------------------------
// Scale-split trig factors: cos(pi t) = 0.5 * exp(e) * f and
// sin(pi t) = 0.5 * exp(e) * f with e carrying the growing exponential and
// |f| <= 2.  Keeps strip-kernel evaluation finite at any height.
struct ScaledTrig {
  Complex e;
  Complex f;
};

inline ScaledTrig scaled_cos(Complex t) {
  if (t.imag() >= 0) return {-kI * kPi * t, 1.0 + std::exp(2.0 * kI * kPi * t)};
  return {kI * kPi * t, 1.0 + std::exp(-2.0 * kI * kPi * t)};
}

inline ScaledTrig scaled_sin(Complex t) {
  if (t.imag() >= 0) return {-kI * kPi * t, (std::exp(2.0 * kI * kPi * t) - 1.0) / kI};
  return {kI * kPi * t, (1.0 - std::exp(-2.0 * kI * kPi * t)) / kI};
}

// ---------------------------------------------------------------------------
// Complex log-Gamma, Lanczos g=7 with the standard 9-term coefficient set,
// reflection for Re z < 0.5.  Accuracy ~1e-14 relative over the desk range.
inline Complex log_gamma(Complex z) {
  static const double g = 7.0;
  static const double c[9] = {
      0.99999999999980993,  676.5203681218851,   -1259.1392167224028,
      771.32342877765313,   -176.61502916214059, 12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) {
    // log Gamma(z) = log(pi / sin(pi z)) - log Gamma(1 - z), branch kept
    // continuous by correcting with the winding of sin(pi z).
    Complex s = std::sin(kPi * z);
    if (std::abs(s) == 0.0) fail(Errc::PoleProximity, "log_gamma at a pole");
    // use the scaled form to avoid overflow for large |Im z|
    ScaledTrig st = scaled_sin(z);
    Complex logsin = std::log(0.5 * st.f) + st.e;
    return std::log(kPi) - logsin - log_gamma(1.0 - z);
  }
  z -= 1.0;
  Complex x = c[0];
  for (int i = 1; i < 9; ++i) x += c[i] / (z + double(i));
  Complex t = z + g + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

inline Complex gamma_fn(Complex z) { return std::exp(log_gamma(z)); }

// ---------------------------------------------------------------------------
// Deterministic RNG for generic fixtures: splitmix-style over a 64-bit state,
// identical across platforms (no libstdc++ distribution objects).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform() {  // [0, 1)
    return double(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  Complex complex_in_disk(double radius) {
    // rejection sampling keeps the stream platform-independent
    for (;;) {
      double a = uniform(-1.0, 1.0), b = uniform(-1.0, 1.0);
      if (a * a + b * b <= 1.0) return radius * Complex(a, b);
    }
  }

  Matrix complex_matrix(int r, double scale) {
    Matrix m(r, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) m(i, j) = scale * Complex(uniform(-1, 1), uniform(-1, 1));
    return m;
  }

 private:
  std::uint64_t state_;
};

// ---------------------------------------------------------------------------
inline double frac_dist_to_integer(double x) {
  return std::abs(x - std::round(x));
}

inline bool congruent_mod1(Complex a, Complex b, double tol = 1e-9) {
  Complex d = a - b;
  return frac_dist_to_integer(d.real()) < tol && std::abs(d.imag()) < tol;
}

inline double mat_norm(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

inline Matrix identity_like(int r) { return Matrix::Identity(r, r); }

// Smallest singular value via a few inverse power iterations on A^H A using a
// cached LU; adequate for conditioning diagnostics without a full SVD.
inline double smallest_singular_value(const Matrix& a, int iters = 12) {
  Eigen::PartialPivLU<Matrix> lu(a);
  Eigen::PartialPivLU<Matrix> luh(a.adjoint());
  Vector v = Vector::Ones(a.cols());
  v.normalize();
  double sigma = 0.0;
  for (int it = 0; it < iters; ++it) {
    Vector w = lu.solve(v);        // w = A^{-1} v
    Vector u = luh.solve(w);       // u = (A A^H)^{-1}-type power step
    double n = u.norm();
    if (!std::isfinite(n) || n == 0.0) return 0.0;
    sigma = 1.0 / std::sqrt(n);
    v = u / n;
  }
  return sigma;
}

}  // namespace strips
