#pragma once

#include "strips/base.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <optional>

namespace strips {

enum class CoeffClass { RegularSingular, MildReal, Birkhoff, NonMild };

inline const char* coeff_class_name(CoeffClass c) {
  switch (c) {
    case CoeffClass::RegularSingular: return "RegularSingular";
    case CoeffClass::MildReal: return "MildReal";
    case CoeffClass::Birkhoff: return "Birkhoff";
    case CoeffClass::NonMild: return "NonMild";
  }
  return "?";
}

// A(z) = A_0 + sum_m A_m / (z - z_m) with A_0 = diag(rho), det A_0 = 1.
struct RationalCoefficient {
  int r = 1;
  Vector rho;                   // diagonal of A_0
  std::vector<Complex> poles;   // z_m, pairwise non-congruent
  std::vector<Matrix> residues; // A_m

  int n_poles() const { return int(poles.size()); }

  Matrix leading() const {
    Matrix a0 = Matrix::Zero(r, r);
    for (int i = 0; i < r; ++i) a0(i, i) = rho(i);
    return a0;
  }

  // K = sum_m A_m restricted to the diagonal (gauge res_inf A dz diagonal).
  Vector exponent_diag() const {
    Vector k = Vector::Zero(r);
    for (const Matrix& am : residues) k += am.diagonal();
    return k;
  }

  Matrix residue_sum() const {
    Matrix s = Matrix::Zero(r, r);
    for (const Matrix& am : residues) s += am;
    return s;
  }
};

inline double pole_proximity_tol() { return 1e-12; }

// [OP] evaluate
inline Matrix evaluate(const RationalCoefficient& a, Complex z) {
  for (Complex zm : a.poles)
    if (std::abs(z - zm) <= pole_proximity_tol())
      fail(Errc::PoleProximity, "evaluation point within tolerance of a pole");
  Matrix v = a.leading();
  for (size_t m = 0; m < a.poles.size(); ++m) v += a.residues[m] / (z - a.poles[m]);
  return v;
}

// [OP] classify
inline CoeffClass classify(const RationalCoefficient& a) {
  const double tol = 1e-12;
  bool regular_singular = true;
  for (int i = 0; i < a.r; ++i)
    if (std::abs(a.rho(i) - 1.0) > 1e-9) regular_singular = false;
  if (regular_singular) return CoeffClass::RegularSingular;

  for (int i = 0; i < a.r; ++i)
    if (std::abs(a.rho(i)) < tol) return CoeffClass::NonMild;

  bool real_distinct = true;
  for (int i = 0; i < a.r && real_distinct; ++i) {
    if (std::abs(a.rho(i).imag()) > 1e-12) real_distinct = false;
    for (int j = i + 1; j < a.r; ++j)
      if (std::abs(a.rho(i) - a.rho(j)) < 1e-12) real_distinct = false;
  }
  if (real_distinct) return CoeffClass::MildReal;

  // nu_i = Im(ln rho_i) on the branch (-pi, pi]
  std::vector<double> nu(a.r);
  for (int i = 0; i < a.r; ++i) nu[i] = std::arg(a.rho(i));
  bool birkhoff = true;
  for (int i = 0; i < a.r && birkhoff; ++i) {
    if (std::abs(nu[i]) < 1e-12) birkhoff = false;
    for (int j = i + 1; j < a.r; ++j)
      if (std::abs(nu[i] - nu[j]) < 1e-12) birkhoff = false;
  }
  if (birkhoff) return CoeffClass::Birkhoff;
  return CoeffClass::NonMild;
}

// Birkhoff ordering: indices sorted by nu_i = Im ln rho_i descending.
// For MildReal the same ordering sorts rho descending.
inline std::vector<int> exponent_order(const RationalCoefficient& a) {
  std::vector<int> idx(a.r);
  for (int i = 0; i < a.r; ++i) idx[i] = i;
  std::vector<double> key(a.r);
  bool real_case = classify(a) == CoeffClass::MildReal;
  for (int i = 0; i < a.r; ++i)
    key[i] = real_case ? a.rho(i).real() : std::arg(a.rho(i));
  std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) { return key[i] > key[j]; });
  return idx;
}

struct Violation {
  std::string what;
  double residual;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// [OP] validate
inline ValidationReport validate(const RationalCoefficient& a, bool check_diagonal_gauge = false,
                                 double tol = 1e-9) {
  ValidationReport rep;
  if (a.r < 1 || a.rho.size() != a.r) rep.violations.push_back({"BadOrder", double(a.r)});
  Complex det_a0 = 1.0;
  for (int i = 0; i < a.r; ++i) det_a0 *= a.rho(i);
  if (std::abs(det_a0 - 1.0) > tol)
    rep.violations.push_back({"DetLeading", std::abs(det_a0 - 1.0)});

  Complex tr = 0.0;
  for (const Matrix& am : a.residues) tr += am.trace();
  if (std::abs(tr) > tol) rep.violations.push_back({"TraceCondition", std::abs(tr)});

  for (size_t l = 0; l < a.poles.size(); ++l)
    for (size_t m = l + 1; m < a.poles.size(); ++m)
      if (congruent_mod1(a.poles[l], a.poles[m], tol))
        rep.violations.push_back({"CongruentPoles", std::abs(a.poles[l] - a.poles[m])});

  if (check_diagonal_gauge) {
    Matrix s = a.residue_sum();
    double off = 0.0;
    for (int i = 0; i < a.r; ++i)
      for (int j = 0; j < a.r; ++j)
        if (i != j) off = std::max(off, std::abs(s(i, j)));
    if (off > tol) rep.violations.push_back({"ResidueSumNotDiagonal", off});
  }

  for (const Matrix& am : a.residues)
    if (!am.allFinite()) rep.violations.push_back({"NonFiniteResidue", 0.0});
  return rep;
}

struct DeterminantProfile {
  std::vector<Complex> zeros;   // zeta_alpha, N = sum h_m of them
  std::vector<int> pole_ranks;  // h_m = rank A_m
  Complex leading = 1.0;        // limit of det A at infinity
};

namespace detail {

// Roots of a monic-izable polynomial via the companion matrix.
inline std::vector<Complex> poly_roots(const std::vector<Complex>& coeff /* c0 + c1 z + ... */) {
  int deg = int(coeff.size()) - 1;
  while (deg > 0 && std::abs(coeff[deg]) < 1e-13) --deg;
  if (deg <= 0) return {};
  Matrix comp = Matrix::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -coeff[i] / coeff[deg];
  Eigen::ComplexEigenSolver<Matrix> es(comp);
  if (es.info() != Eigen::Success) fail(Errc::RootFindingFailed, "companion eigensolve diverged");
  std::vector<Complex> roots(deg);
  for (int i = 0; i < deg; ++i) roots[i] = es.eigenvalues()(i);
  return roots;
}

inline int matrix_rank(const Matrix& m, double rel_tol = 1e-10) {
  Eigen::JacobiSVD<Matrix> svd(m);
  double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  if (smax == 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > rel_tol * smax) ++rank;
  return rank;
}

}  // namespace detail

// [OP] determinant_profile: zeros of det A and ranks h_m.
// p(z) = det A(z) * prod (z - z_m)^{h_m} is a polynomial of degree N = sum h_m
// (leading coefficient det A_0); coefficients recovered by interpolation on a
// circle, roots from the companion matrix.
inline DeterminantProfile determinant_profile(const RationalCoefficient& a) {
  DeterminantProfile prof;
  int n = a.n_poles();
  int bign = 0;
  for (int m = 0; m < n; ++m) {
    prof.pole_ranks.push_back(detail::matrix_rank(a.residues[m]));
    bign += prof.pole_ranks.back();
  }
  Complex det_a0 = 1.0;
  for (int i = 0; i < a.r; ++i) det_a0 *= a.rho(i);
  prof.leading = det_a0;
  if (bign == 0) return prof;

  double rad = 1.0;
  for (Complex zm : a.poles) rad = std::max(rad, std::abs(zm) + 2.0);
  int samples = std::max(2 * bign + 8, 16);
  Matrix vda(samples, bign + 1);
  Vector rhs(samples);
  for (int s = 0; s < samples; ++s) {
    Complex z = rad * std::exp(2.0 * kI * kPi * double(s) / double(samples));
    Complex p = evaluate(a, z).determinant();
    for (int m = 0; m < n; ++m) p *= std::pow(z - a.poles[m], prof.pole_ranks[m]);
    Complex zp = 1.0;
    for (int j = 0; j <= bign; ++j) {
      vda(s, j) = zp;
      zp *= z;
    }
    rhs(s) = p;
  }
  Vector coeff = vda.colPivHouseholderQr().solve(rhs);
  std::vector<Complex> cv(bign + 1);
  for (int j = 0; j <= bign; ++j) cv[j] = coeff(j);
  prof.zeros = detail::poly_roots(cv);
  if (int(prof.zeros.size()) != bign)
    fail(Errc::RootFindingFailed, "degree of det-polynomial does not match sum of ranks");
  return prof;
}

inline Complex zero_sum_residual(const RationalCoefficient& a, const DeterminantProfile& p) {
  Complex s = 0.0;
  for (Complex z : p.zeros) s += z;
  for (size_t m = 0; m < a.poles.size(); ++m) s -= double(p.pole_ranks[m]) * a.poles[m];
  return s;
}

// Ordered multiplicative data for the special class (A1):
// A = A_0 (1 + a_n b_n^T/(z - z_n)) ... (1 + a_1 b_1^T/(z - z_1)), b_k^T a_k = 0.
struct SpecialFactorization {
  Vector rho;  // diagonal of A_0; identity for the regular singular subclass
  std::vector<Complex> poles;
  std::vector<Vector> a_vecs;
  std::vector<Vector> b_vecs;

  int order() const { return int(rho.size()); }

  Matrix factor(int k, Complex z) const {
    return identity_like(order()) + (a_vecs[k] * b_vecs[k].transpose()) / (z - poles[k]);
  }

  Matrix eval(Complex z) const {
    int r = order();
    Matrix m = Matrix::Zero(r, r);
    for (int i = 0; i < r; ++i) m(i, i) = rho(i);
    for (int k = int(poles.size()) - 1; k >= 0; --k) m *= factor(k, z);
    return m;
  }
};

// [OP] build_special: expand the product (A1) into the additive form (aj).
inline RationalCoefficient build_special(const SpecialFactorization& f) {
  int n = int(f.poles.size());
  int r = f.order();
  for (int k = 0; k < n; ++k) {
    Complex ba = f.b_vecs[k].transpose() * f.a_vecs[k];
    if (std::abs(ba) > 1e-10 * f.a_vecs[k].norm() * f.b_vecs[k].norm())
      fail(Errc::OrthogonalityViolated, "b_k^T a_k != 0");
  }
  for (int l = 0; l < n; ++l)
    for (int m = l + 1; m < n; ++m)
      if (congruent_mod1(f.poles[l], f.poles[m]))
        fail(Errc::CongruentPoles, "factor poles congruent");

  RationalCoefficient a;
  a.r = r;
  a.rho = f.rho;
  a.poles = f.poles;
  a.residues.resize(n);
  Matrix a0 = Matrix::Zero(r, r);
  for (int i = 0; i < r; ++i) a0(i, i) = f.rho(i);
  for (int k = 0; k < n; ++k) {
    // res_{z_k} A = A_0 F_n(z_k) ... F_{k+1}(z_k) (a_k b_k^T) F_{k-1}(z_k) ... F_1(z_k)
    Matrix left = a0;
    for (int j = n - 1; j > k; --j) left *= f.factor(j, f.poles[k]);
    Matrix right = identity_like(r);
    for (int j = k - 1; j >= 0; --j) right *= f.factor(j, f.poles[k]);
    a.residues[k] = left * (f.a_vecs[k] * f.b_vecs[k].transpose()) * right;
  }
  return a;
}

// [OP] build_unitary: A = prod (1 + a_k a_k^+ (z_k - conj z_k)/(z - z_k)),
// |a_k| = 1, factors ordered with indices increasing right to left.
inline RationalCoefficient build_unitary(const std::vector<Vector>& a_vecs,
                                         const std::vector<Complex>& poles) {
  int n = int(poles.size());
  if (n == 0) fail(Errc::UsageError, "empty unitary data");
  int r = int(a_vecs[0].size());
  for (const Vector& v : a_vecs)
    if (std::abs(v.norm() - 1.0) > 1e-10) fail(Errc::NonUnitVector, "|a_k| != 1");
  for (Complex zk : poles)
    if (std::abs(zk.imag()) < 1e-12) fail(Errc::UsageError, "unitary pole must be off the real axis");
  for (int l = 0; l < n; ++l)
    for (int m = l + 1; m < n; ++m)
      if (congruent_mod1(poles[l], poles[m])) fail(Errc::CongruentPoles, "poles congruent");

  auto factor = [&](int k, Complex z) -> Matrix {
    Complex c = (poles[k] - std::conj(poles[k])) / (z - poles[k]);
    return identity_like(r) + c * (a_vecs[k] * a_vecs[k].adjoint());
  };
  RationalCoefficient a;
  a.r = r;
  a.rho = Vector::Ones(r);
  a.poles = poles;
  a.residues.resize(n);
  for (int k = 0; k < n; ++k) {
    Matrix left = identity_like(r);
    for (int j = n - 1; j > k; --j) left *= factor(j, poles[k]);
    Matrix right = identity_like(r);
    for (int j = k - 1; j >= 0; --j) right *= factor(j, poles[k]);
    Complex c = poles[k] - std::conj(poles[k]);
    a.residues[k] = left * (c * (a_vecs[k] * a_vecs[k].adjoint())) * right;
  }
  return a;
}

// Gauge rotation by a constant invertible g: A -> g A g^{-1}.
inline RationalCoefficient gauge_conjugate(const RationalCoefficient& a, const Matrix& g) {
  RationalCoefficient out = a;
  Matrix gi = g.inverse();
  Matrix a0 = g * a.leading() * gi;
  out.rho = a0.diagonal();
  for (size_t m = 0; m < a.residues.size(); ++m) out.residues[m] = g * a.residues[m] * gi;
  return out;
}

// Unitary gauge that diagonalizes the residue at infinity of a unitary-built
// coefficient (eq. resc); K' = sum (z_k - conj z_k) a_k a_k^+ is i x hermitian.
inline Matrix unitary_residue_gauge(const std::vector<Vector>& a_vecs,
                                    const std::vector<Complex>& poles) {
  int r = int(a_vecs[0].size());
  Matrix h = Matrix::Zero(r, r);
  for (size_t k = 0; k < poles.size(); ++k)
    h += 2.0 * poles[k].imag() * (a_vecs[k] * a_vecs[k].adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  return es.eigenvectors().adjoint();
}

}  // namespace strips
