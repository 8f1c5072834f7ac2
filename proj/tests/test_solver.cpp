#include <catch2/catch_amalgamated.hpp>

#include "strips/solver.hpp"

using namespace strips;

namespace {

RationalCoefficient scalar_coeff(Complex zero, Complex pole) {
  RationalCoefficient a;
  a.r = 1;
  a.rho = Vector::Ones(1);
  a.poles = {pole};
  a.residues = {Matrix::Constant(1, 1, pole - zero)};
  return a;
}

RationalCoefficient small_norm_r2(std::uint64_t seed, double scale,
                                  std::vector<Complex> poles) {
  Rng rng(seed);
  RationalCoefficient a;
  a.r = 2;
  a.rho = Vector::Ones(2);
  a.poles = poles;
  Matrix sum = Matrix::Zero(2, 2);
  for (size_t m = 0; m < poles.size(); ++m) {
    Matrix res = rng.complex_matrix(2, scale);
    a.residues.push_back(res);
    sum += res;
  }
  // diagonal gauge + trace condition, corrections on the last residue
  a.residues.back()(0, 1) -= sum(0, 1);
  a.residues.back()(1, 0) -= sum(1, 0);
  a.residues.back()(1, 1) -= sum.trace();
  return a;
}

}  // namespace

TEST_CASE("index: scalar winding and unimodular classes") {
  Complex zero(0.9, -0.2), pole(0.2, 0.1);
  RationalCoefficient a = scalar_coeff(zero, pole);
  CHECK(index(a, 0.5) == -1);   // Re pole < x < Re zero
  CHECK(index(a, -1.0) == 0);
  CHECK(index(a, 2.0) == 0);
  CHECK_THROWS_AS(index(a, 0.2), Error);

  // unitary class: index vanishes on any admissible line
  Vector u1(2), u2(2);
  u1 << Complex(0.6, 0.2), Complex(-0.4, 0.66);
  u1.normalize();
  u2 << Complex(0.1, -0.9), Complex(0.4, 0.1);
  u2.normalize();
  RationalCoefficient au = build_unitary({u1, u2}, {Complex(0.4, 0.9), Complex(1.5, -0.6)});
  for (double x : {-0.8, 0.9, 2.3}) CHECK(index(au, x) == 0);
}

TEST_CASE("scalar gamma oracle is a solution and fixes the connection") {
  Complex zero(0.9, -0.2), pole(0.4, 0.1);
  ScalarGammaPair g = scalar_gamma({zero}, {pole});
  RationalCoefficient a = scalar_coeff(zero, pole);
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    Complex z = rng.complex_in_disk(5.0);
    if (std::abs(z - pole) < 0.3 || std::abs(z - zero) < 0.3) continue;
    if (on_branch_cut(z) || on_branch_cut(z + 1.0)) continue;
    Complex lhs = g.right(z + 1.0) / g.right(z);
    CHECK(std::abs(lhs - evaluate(a, z)(0, 0)) < 1e-12 * std::abs(lhs));
    Complex lhl = g.left(z + 1.0) / g.left(z);
    CHECK(std::abs(lhl - evaluate(a, z)(0, 0)) < 1e-12 * std::abs(lhl));
  }
  // S(-i inf) = 1 and S(+i inf) = e^{-2 pi i K}
  Complex k = g.k_exponent();
  CHECK(std::abs(g.connection(Complex(0.25, -50.0)) - 1.0) < 1e-10);
  CHECK(std::abs(g.connection(Complex(0.25, 50.0)) - std::exp(-2.0 * kI * kPi * k)) < 1e-10
        * std::abs(std::exp(-2.0 * kI * kPi * k)));
}

TEST_CASE("solve_strip matches the Gamma oracle (right region)") {
  Complex zero(0.9, -0.2), pole(0.4, 0.1);
  RationalCoefficient a = scalar_coeff(zero, pole);
  ScalarGammaPair g = scalar_gamma({zero}, {pole});
  SolverConfig cfg;
  cfg.nodes = 400;
  StripSolution s = solve_strip(a, 1.6, cfg);
  CHECK(s.boundary_residual < 1e-7);
  for (Complex z : {Complex(2.1, 0.3), Complex(2.1, -5.0), Complex(1.9, 2.0), Complex(2.4, 12.0)}) {
    Complex v = s.value(z)(0, 0);
    CHECK(std::abs(v / g.right(z) - 1.0) < 1e-7);
  }
  // transfer matrix trivial in the regular singular right region
  CHECK(mat_norm(s.transfer() - Matrix::Identity(1, 1)) < 1e-7);
}

TEST_CASE("solve_strip matches the Gamma oracle (left region, shifted series)") {
  Complex zero(0.9, -0.2), pole(0.4, 0.1);
  RationalCoefficient a = scalar_coeff(zero, pole);
  ScalarGammaPair g = scalar_gamma({zero}, {pole});
  SolverConfig cfg;
  cfg.nodes = 640;
  cfg.series_depth = 8;
  StripSolution s = solve_strip(a, -1.2, cfg);
  REQUIRE(s.ym->shifted());
  for (Complex z : {Complex(-0.7, 0.3), Complex(-0.7, -5.0), Complex(-0.9, 7.0)}) {
    Complex v = s.value(z)(0, 0);
    CHECK(std::abs(v / g.left(z) - 1.0) < 2e-6);
  }
  CHECK(mat_norm(s.transfer() - Matrix::Identity(1, 1)) < 2e-6);
}

TEST_CASE("extension recursion and pole structure") {
  Complex zero(0.9, -0.2), pole(0.4, 0.1);
  RationalCoefficient a = scalar_coeff(zero, pole);
  SolverConfig cfg;
  cfg.nodes = 320;
  StripSolution s = solve_strip(a, 1.6, cfg);
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    Complex z(rng.uniform(-4.0, 5.0), rng.uniform(-3.0, 3.0));
    bool bad = false;
    for (int l = -10; l <= 10; ++l) {
      if (std::abs(z - (pole + double(l))) < 0.25) bad = true;
      if (std::abs(z - (zero + double(l))) < 0.25) bad = true;
    }
    if (bad) continue;
    Matrix lhs = s.value(z + 1.0);
    Matrix rhs = evaluate(a, z) * s.value(z);
    CHECK(mat_norm(lhs - rhs) <= 1e-10 * std::max(1.0, mat_norm(rhs)));
  }
}

TEST_CASE("product solution agrees with strip solve and the oracle") {
  Complex zero(0.9, -0.2), pole(0.4, 0.1);
  RationalCoefficient a = scalar_coeff(zero, pole);
  ScalarGammaPair g = scalar_gamma({zero}, {pole});
  ProductSolution pr = product_solution(a, true, 500, 6);
  ProductSolution pl = product_solution(a, false, 500, 6);
  for (Complex z : {Complex(1.9, 0.4), Complex(2.5, -2.0)}) {
    CHECK(std::abs(pr.value(z)(0, 0) / g.right(z) - 1.0) < 1e-8);
  }
  for (Complex z : {Complex(-1.3, 0.4), Complex(-0.8, -2.0)}) {
    CHECK(std::abs(pl.value(z)(0, 0) / g.left(z) - 1.0) < 1e-8);
  }

  // r=2 regular singular: cross-validation of the two independent methods
  RationalCoefficient b = small_norm_r2(17, 0.15, {Complex(0.3, 0.15), Complex(1.2, -0.25)});
  SolverConfig cfg;
  cfg.nodes = 400;
  StripSolution s = solve_strip(b, 2.4, cfg);
  ProductSolution p2 = product_solution(b, true, 500, 6);
  for (Complex z : {Complex(2.9, 0.0), Complex(2.6, 1.5), Complex(2.8, -3.0)}) {
    Matrix v1 = s.value(z), v2 = p2.value(z);
    CHECK(mat_norm(v1 - v2) < 1e-6 * std::max(1.0, mat_norm(v2)));
  }
}

TEST_CASE("iteration mode converges for small-norm coefficients") {
  RationalCoefficient b = small_norm_r2(23, 0.04, {Complex(0.3, 0.15), Complex(1.2, -0.25)});
  SolverConfig cfg;
  cfg.nodes = 320;
  cfg.mode = SolveMode::Iteration;
  StripSolution si = solve_strip(b, 2.4, cfg);
  cfg.mode = SolveMode::Collocation;
  StripSolution sc = solve_strip(b, 2.4, cfg);
  for (Complex z : {Complex(2.9, 0.4), Complex(2.6, -1.5)}) {
    CHECK(mat_norm(si.value(z) - sc.value(z)) < 1e-9);
  }
}

TEST_CASE("uniqueness: solves on different grids agree after normalization") {
  RationalCoefficient b = small_norm_r2(31, 0.12, {Complex(0.3, 0.15), Complex(1.2, -0.25)});
  SolverConfig c1, c2;
  c1.nodes = 320;
  c2.nodes = 640;
  c2.ymax = 50.0;
  StripSolution s1 = solve_strip(b, 2.4, c1);
  StripSolution s2 = solve_strip(b, 2.4, c2);
  for (Complex z : {Complex(2.9, 0.7), Complex(2.5, -4.0), Complex(2.7, 9.0)}) {
    CHECK(mat_norm(s1.value(z) - s2.value(z)) < 5e-6);
  }
}

TEST_CASE("x-local constancy between poles") {
  RationalCoefficient b = small_norm_r2(43, 0.1, {Complex(0.3, 0.15), Complex(3.2, -0.25)});
  SolverConfig cfg;
  cfg.nodes = 400;
  StripSolution s1 = solve_strip(b, 1.3, cfg);
  StripSolution s2 = solve_strip(b, 2.0, cfg);
  for (Complex z : {Complex(2.2, 0.6), Complex(2.4, -2.0)}) {
    CHECK(mat_norm(s1.value(z) - s2.value(z)) < 1e-6);
  }
}

TEST_CASE("det Phi does not vanish on the strip") {
  RationalCoefficient b = small_norm_r2(47, 0.15, {Complex(0.4, 0.1)});
  SolverConfig cfg;
  cfg.nodes = 320;
  StripSolution s = solve_strip(b, 1.5, cfg);
  double mind = 1e300;
  for (double yy : {-8.0, -2.0, -0.3, 0.0, 1.1, 4.0, 16.0})
    mind = std::min(mind, std::abs(s.eval_in_strip(Complex(1.95, yy)).determinant()));
  CHECK(mind > 1e-6);
}

TEST_CASE("asymptotic factor quadrature matches interior limits") {
  // g^+ and g^- reproduce the value of phi(z) at large |Im z|
  RationalCoefficient b = small_norm_r2(53, 0.1, {Complex(0.4, 0.1)});
  SolverConfig cfg;
  cfg.nodes = 400;
  StripSolution s = solve_strip(b, 1.5, cfg);
  FormalSolution y = compute_formal(b, cfg.series_depth > 0 ? cfg.series_depth : 5);
  Complex ztop(1.9, 30.0), zbot(1.9, -30.0);
  Matrix top = eval_partial(y, ztop).inverse() * s.value(ztop);
  Matrix bot = eval_partial(y, zbot).inverse() * s.value(zbot);
  CHECK(mat_norm(top - s.g_plus) < 1e-5);
  CHECK(mat_norm(bot - Matrix::Identity(2, 2)) < 1e-5);
}

TEST_CASE("dual check: positive for identity and unitary, dips when degenerate") {
  RationalCoefficient id;
  id.r = 2;
  id.rho = Vector::Ones(2);
  SolverConfig cfg;
  cfg.nodes = 160;
  CHECK(dual_check(id, 0.35, cfg) > 1e-3);

  Vector u1(2);
  u1 << Complex(0.6, 0.2), Complex(-0.4, 0.66);
  u1.normalize();
  RationalCoefficient au = build_unitary({u1}, {Complex(0.4, 0.9)});
  au = gauge_conjugate(au, unitary_residue_gauge({u1}, {Complex(0.4, 0.9)}));
  CHECK(dual_check(au, 1.2, cfg) > 1e-4);

  // reducible triangular coefficient with scalar indices -1 and +1:
  // Problem I has no nondegenerate solution, the dual system collapses
  Complex z1(0.2, 0.0), zeta1(0.8, 0.0);
  Complex z2(0.75, 0.0), zeta2(0.15, 0.0);
  auto make_t = [&](double off) {
    RationalCoefficient t;
    t.r = 2;
    t.rho = Vector::Ones(2);
    t.poles = {z1, z2};
    Matrix r1 = Matrix::Zero(2, 2), r2 = Matrix::Zero(2, 2);
    r1(0, 0) = z1 - zeta1;
    r1(0, 1) = 0.21;
    r1(1, 0) = off;       // symmetric perturbation keeps the diagonal gauge
    r2(1, 1) = z2 - zeta2;
    r2(0, 1) = -0.21;
    r2(1, 0) = -off;
    return t.residues = {r1, r2}, t;
  };
  double degenerate = dual_check(make_t(0.0), 0.5, cfg);
  double nearby1 = dual_check(make_t(0.35), 0.5, cfg);
  double nearby2 = dual_check(make_t(-0.35), 0.5, cfg);
  CHECK(std::min(nearby1, nearby2) / degenerate >= 1e3);
}
