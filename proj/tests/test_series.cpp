#include <catch2/catch_amalgamated.hpp>

#include "strips/series.hpp"

using namespace strips;

namespace {

RationalCoefficient gamma_like(Complex kappa) {
  RationalCoefficient a;  // a(z) = 1 + kappa/z
  a.r = 1;
  a.rho = Vector::Ones(1);
  a.poles = {Complex(0, 0)};
  a.residues = {Matrix::Constant(1, 1, kappa)};
  return a;
}

}  // namespace

TEST_CASE("formal solution: constant coefficient") {
  RationalCoefficient a;
  a.r = 2;
  a.rho.resize(2);
  a.rho << 2.0, 0.5;
  FormalSolution y = compute_formal(a, 6);
  CHECK(y.k_diag.norm() < 1e-14);
  for (int s = 1; s <= 6; ++s) CHECK(mat_norm(y.chi[s]) < 1e-14);
  // Y = e^{z ln A_0}
  Complex z(3.0, -1.0);
  Matrix v = eval_partial(y, z);
  CHECK(std::abs(v(0, 0) - std::exp(z * std::log(2.0))) < 1e-12);
}

TEST_CASE("formal solution: scalar regular singular, Stirling oracle") {
  // a = 1 + kappa/z, psi_r = Gamma(z + kappa)/Gamma(z) ~ z^kappa (1 + chi_1/z + ...)
  // Stirling gives chi_1 = kappa (kappa - 1)/2.
  Complex kappa(0.37, 0.21);
  FormalSolution y = compute_formal(gamma_like(kappa), 6);
  REQUIRE(y.depth() >= 2);
  CHECK(std::abs(y.k_diag(0) - kappa) < 1e-13);
  CHECK(std::abs(y.chi[1](0, 0) - kappa * (kappa - 1.0) / 2.0) < 1e-12);

  // direct comparison with the Gamma ratio at large |z|
  for (Complex z : {Complex(80.0, 5.0), Complex(40.0, -60.0)}) {
    Complex exact = std::exp(log_gamma(z + kappa) - log_gamma(z));
    Complex approx = eval_partial(y, z)(0, 0);
    CHECK(std::abs(approx / exact - 1.0) < 1e-10);
  }
}

TEST_CASE("formal solution: substitution residual decay order") {
  Rng rng(5);
  RationalCoefficient a;
  a.r = 2;
  a.rho = Vector::Ones(2);
  a.poles = {Complex(0.3, 0.2), Complex(1.4, -0.3)};
  Matrix m1 = rng.complex_matrix(2, 0.3);
  Matrix m2 = rng.complex_matrix(2, 0.3);
  // enforce the diagonal gauge: off-diagonal parts of the residue sum cancel
  m2(0, 1) = -m1(0, 1);
  m2(1, 0) = -m1(1, 0);
  m2(1, 1) = -(m1(0, 0) + m1(1, 1) + m2(0, 0));  // trace condition
  a.residues = {m1, m2};
  REQUIRE(validate(a).ok());

  const int M = 2;  // keeps the residual above double precision across the fit range
  FormalSolution y = compute_formal(a, M);
  double kap = y.kappa();

  // residual on circles |z| = R decays like R^{-M-1+kappa};
  // fitted slope must beat M - kappa - 0.2 (eq. am1 with the margin)
  std::vector<double> lr, le;
  for (double R : {1e2, 3e2, 1e3, 3e3, 1e4}) {
    double worst = 0;
    for (int q = 0; q < 8; ++q) {
      Complex z = R * std::exp(kI * (2.0 * kPi * q / 8.0 + 0.13));
      if (on_branch_cut(z) || on_branch_cut(z + 1.0)) continue;
      worst = std::max(worst, formal_residual(a, y, z));
    }
    lr.push_back(std::log(R));
    le.push_back(std::log(worst));
  }
  double n = lr.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < lr.size(); ++i) {
    sx += lr[i];
    sy += le[i];
    sxx += lr[i] * lr[i];
    sxy += lr[i] * le[i];
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(-slope >= M - kap - 0.2);
}

TEST_CASE("formal solution: determinism") {
  RationalCoefficient a = gamma_like(Complex(0.3, -0.1));
  FormalSolution y1 = compute_formal(a, 8);
  FormalSolution y2 = compute_formal(a, 8);
  for (int s = 0; s <= 8; ++s) {
    CHECK(y1.chi[s] == y2.chi[s]);
  }
}

TEST_CASE("formal solution: off-diagonal first order (regular singular r=2)") {
  RationalCoefficient a;
  a.r = 2;
  a.rho = Vector::Ones(2);
  a.poles = {Complex(0.4, 0.0)};
  Matrix m(2, 2);
  m << Complex(0.3, 0.0), Complex(0.2, 0.1), Complex(-0.1, 0.05), Complex(-0.3, 0.0);
  a.residues = {m};
  // diagonal gauge violated (off-diagonal residue sum nonzero): recursion must
  // reject rather than silently produce a wrong series
  CHECK_THROWS(compute_formal(a, 4));

  Matrix g1 = m;
  g1(0, 1) = 0;
  g1(1, 0) = 0;
  a.residues = {g1};
  FormalSolution y = compute_formal(a, 5);
  for (Complex z : {Complex(200.0, 10.0), Complex(-150.0, -20.0)}) {
    CHECK(formal_residual(a, y, z) < 1e-10);
  }
}

TEST_CASE("mild exponents: k_i = residue-sum diagonal over rho_i") {
  RationalCoefficient a;
  a.r = 2;
  a.rho.resize(2);
  a.rho << 2.0, 0.5;
  a.poles = {Complex(0.3, 0.0)};
  Matrix m(2, 2);
  m << Complex(0.4, 0.1), Complex(0.2, 0.0), Complex(0.1, 0.0), Complex(-0.4, -0.1);
  a.residues = {m};
  FormalSolution y = compute_formal(a, 6);
  CHECK(std::abs(y.k_diag(0) - m(0, 0) / 2.0) < 1e-13);
  CHECK(std::abs(y.k_diag(1) - m(1, 1) * 2.0) < 1e-13);
  for (Complex z : {Complex(300.0, 20.0), Complex(-250.0, -10.0)}) {
    CHECK(formal_residual(a, y, z) < 1e-10);
  }
}

TEST_CASE("branch behaviour across the cut") {
  Complex kappa(0.4, -0.15);
  FormalSolution y = compute_formal(gamma_like(kappa), 4);
  double T = 300.0;
  // points just right and just left of the upward cut
  Complex zr(1e-3, T), zl(-1e-3, T);
  Complex vr = eval_partial(y, zr)(0, 0);
  Complex vl = eval_partial(y, zl)(0, 0);
  // crossing left -> right multiplies z^K by e^{2 pi i K}
  CHECK(std::abs(vr / vl / std::exp(2.0 * kI * kPi * kappa) - 1.0) < 1e-5);
  CHECK_THROWS_AS(eval_partial(y, Complex(0.0, 2.0)), Error);
}

TEST_CASE("shifted partial sum agrees to high order") {
  Complex kappa(0.35, 0.2);
  RationalCoefficient a = gamma_like(kappa);
  const int M = 2;  // larger M would push the ratio error below double precision
  FormalSolution y = compute_formal(a, M);
  const double x0 = -2.0;
  ShiftedFormal s = shifted_partial(y, x0);

  // chi~_1 = chi_1 + kappa x0 through the congruence
  CHECK(std::abs(s.chi_shift[1](0, 0) - (y.chi[1](0, 0) + kappa * x0)) < 1e-13);

  // ratio - 1 ~ C |z|^{-M-1}: fitted slope on |z| = 1e2 .. 1e4
  std::vector<double> lr, le;
  for (double R : {1e2, 1e3, 1e4}) {
    Complex z(R * 0.7071, -R * 0.7071);
    double err = std::abs(s.eval(z)(0, 0) / eval_partial(y, z)(0, 0) - 1.0);
    lr.push_back(std::log(R));
    le.push_back(std::log(err));
  }
  double slope = (le.back() - le.front()) / (lr.back() - lr.front());
  CHECK(slope <= -(M + 1) + 0.1);

  // trivial case: chi = 0, K = 0 -> constant 1
  RationalCoefficient c;
  c.r = 1;
  c.rho = Vector::Ones(1);
  FormalSolution y0 = compute_formal(c, 3);
  ShiftedFormal s0 = shifted_partial(y0, -2.0);
  CHECK(std::abs(s0.eval(Complex(0.3, 0.1))(0, 0) - 1.0) < 1e-14);
}
