#pragma once

#include "strips/grid.hpp"
#include "strips/series.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <functional>
#include <memory>

namespace strips {

enum class SolveMode { Collocation, Iteration };

struct SolverConfig {
  double ymax = 40.0;
  int nodes = 400;
  int series_depth = -1;     // -1: ceil(kappa) + 4
  double grading = 4.0;
  SolveMode mode = SolveMode::Collocation;
  double residual_tol = 1e-7;
  double shift_gap = 3.0;    // |x0 - strip| when the shifted series is needed
  double min_abs_z = 4.0;    // use the plain partial sum when |z| >= this on the strip
  double cond_limit = 1e12;
  int max_sweeps = 200;
};

// Comparison function used inside a strip.  The truncated partial sum of Y
// carries a ring of spurious zeros (divergent tail), and every vertical
// strip crosses any such ring; instead the series factor is kept in
// exponential form  exp(sum eta_s (z-x0)^{-s}),  which matches Y to the same
// order and is invertible everywhere.  x0 = 0 when the strip is far enough
// from the origin, otherwise the shifted expansion (CY) is used.
class StripComparison {
 public:
  StripComparison(const FormalSolution& y, double x, const SolverConfig& cfg) : y_(y) {
    double closest = std::min(std::abs(x), std::abs(x + 2.0));
    shifted_ = closest < cfg.min_abs_z;
    double d = cfg.shift_gap;
    for (int attempt = 0; attempt < 3; ++attempt) {
      x0_ = shifted_ ? x - d : 0.0;
      std::vector<Matrix> coeffs = shifted_ ? shifted_partial(y, x0_).chi_shift : y.chi;
      eta_ = series_log(coeffs);
      // keep the exponent moderate on the strip; back off in distance if not
      double dist = shifted_ ? d : closest;
      double norm = 0.0, up = 1.0;
      for (int s = 1; s < int(eta_.size()); ++s) {
        up /= std::max(dist, 1.0);
        norm += mat_norm(eta_[s]) * up;
      }
      if (norm < 3.0 || !shifted_) break;
      d += 2.0;
    }
  }

  Matrix eval(Complex z) const {
    int r = y_.order();
    Complex u = 1.0 / (z - x0_);
    Matrix p = Matrix::Zero(r, r);
    Complex up = 1.0;
    for (int s = 1; s < int(eta_.size()); ++s) {
      up *= u;
      p += eta_[s] * up;
    }
    Matrix series = p.exp();
    Complex lz = log_branch(z - x0_);
    Matrix diag = Matrix::Zero(r, r);
    for (int i = 0; i < r; ++i)
      diag(i, i) = std::exp(z * std::log(y_.rho(i)) + y_.k_diag(i) * lz);
    return series * diag;
  }

  bool shifted() const { return shifted_; }
  double x0() const { return x0_; }

  // Diagonal conversion  lim_{Im z -> +-inf} Y_true(z)^{-1} Y_used(z)  inside
  // the strip; the identity unless the shifted branch point and the origin
  // sit on opposite sides of the strip at +i inf.
  Matrix branch_factor(double x, int sign) const {
    int r = y_.order();
    Matrix f = identity_like(r);
    if (x0_ == 0.0) return f;
    Complex z(x + 0.5, sign > 0 ? 1e9 : -1e9);
    Complex d = log_branch(z - x0_) - log_branch(z);
    for (int i = 0; i < r; ++i) f(i, i) = std::exp(y_.k_diag(i) * d);
    return f;
  }

  const FormalSolution& formal() const { return y_; }

 private:
  FormalSolution y_;
  bool shifted_ = false;
  double x0_ = 0.0;
  std::vector<Matrix> eta_;
};

// [OP] index: winding number of det A along Re z = x, adaptively refined.
inline int index(const RationalCoefficient& a, double x, double* gap_out = nullptr) {
  for (Complex zm : a.poles)
    if (std::abs(x - zm.real()) < 1e-9) fail(Errc::LineThroughPole, "line passes through a pole");
  double ymax = 40.0;
  for (Complex zm : a.poles) ymax = std::max(ymax, std::abs(zm.imag()) + 30.0);
  std::vector<double> ys;
  int n0 = 2048;
  for (int j = 0; j <= n0; ++j) ys.push_back(-ymax + 2.0 * ymax * j / n0);
  std::vector<Complex> dets(ys.size());
  for (size_t j = 0; j < ys.size(); ++j) dets[j] = evaluate(a, Complex(x, ys[j])).determinant();

  double winding = 0.0;
  for (size_t j = 0; j + 1 < ys.size(); ++j) {
    Complex d0 = dets[j], d1 = dets[j + 1];
    double lo = ys[j], hi = ys[j + 1];
    int guard = 0;
    // refine until the principal argument increment is small
    std::function<double(double, Complex, double, Complex)> seg =
        [&](double a0, Complex v0, double a1, Complex v1) -> double {
      double da = std::arg(v1 / v0);
      if (std::abs(da) < 1.0 || ++guard > 60) return da;
      double mid = 0.5 * (a0 + a1);
      Complex vm = evaluate(a, Complex(x, mid)).determinant();
      return seg(a0, v0, mid, vm) + seg(mid, vm, a1, v1);
    };
    winding += seg(lo, d0, hi, d1);
  }
  // close the contour through det -> det(A_0) at both infinities
  winding += std::arg(dets.front() / Complex(1.0));
  winding += std::arg(Complex(1.0) / dets.back());
  double ind = winding / (2.0 * kPi);
  double gap = std::abs(ind - std::round(ind));
  if (gap_out) *gap_out = gap;
  if (gap > 0.1) fail(Errc::AmbiguousRounding, "index quadrature gap " + std::to_string(gap));
  return int(std::lround(ind));
}

// Canonical strip solution Psi_x. phi holds the solved density; the
// evaluator produces values of Psi normalized so that g^- = 1.
struct StripSolution {
  double x = 0.0;
  RationalCoefficient coeff;
  std::shared_ptr<StripComparison> ym;
  LineGrid grid;
  std::vector<Matrix> phi;   // density at the nodes
  Matrix g0;                 // constant term in the ansatz (I, or Birkhoff g)
  Matrix g_plus, g_minus;    // asymptotic factors w.r.t. the true Y, post-normalization
  Matrix norm;               // right factor applied to raw Phi
  double boundary_residual = 0.0;

  int order() const { return coeff.r; }

  // raw ansatz value Y_m(z) (g0 + sum w k phi); valid inside the strip
  Matrix eval_raw(Complex z) const {
    int n = grid.size();
    int r = order();
    Matrix acc = g0;
    double dist = std::min(z.real() - x, x + 1.0 - z.real());
    if (dist > 0.2) {
      for (int l = 0; l < n; ++l) acc += grid.w(l) * strip_kernel(z, grid.xi(l), x) * phi[l];
    } else {
      // singularity-subtracted evaluation close to an edge
      int idx[LineGrid::kInterp];
      double wt[LineGrid::kInterp];
      grid.interp_stencil(z.imag(), idx, wt);
      Matrix near = Matrix::Zero(r, r);
      for (int k = 0; k < LineGrid::kInterp; ++k) near += wt[k] * phi[idx[k]];
      for (int l = 0; l < n; ++l)
        acc += grid.w(l) * strip_kernel(z, grid.xi(l), x) * (phi[l] - near);
      acc += kernel_interior_integral(z, x) * near;
    }
    return ym->eval(z) * acc;
  }

  // normalized value inside the strip
  Matrix eval_in_strip(Complex z) const { return eval_raw(z) * norm; }

  // [OP] extend: meromorphic continuation by the difference equation
  Matrix value(Complex z) const {
    double lo = x + 0.05, hi = x + 0.95;
    int steps = 0;
    if (z.real() >= lo && z.real() <= hi) return eval_in_strip(z);
    if (z.real() > hi) {
      Complex zc = z;
      Matrix acc = identity_like(order());
      while (zc.real() > hi) {
        zc -= 1.0;
        if (++steps > 10000) fail(Errc::StepBudgetExceeded, "extension too far right");
        for (Complex zm : coeff.poles)
          if (std::abs(zc - zm) < 1e-8) fail(Errc::PoleOnPath, "extension hits a pole of A");
        acc = acc * evaluate(coeff, zc);
      }
      return acc * eval_in_strip(zc);
    }
    Complex zc = z;
    Matrix acc = identity_like(order());
    while (zc.real() < lo) {
      if (++steps > 10000) fail(Errc::StepBudgetExceeded, "extension too far left");
      Matrix av = evaluate(coeff, zc);
      if (std::abs(av.determinant()) < 1e-10)
        fail(Errc::PoleOnPath, "extension hits a zero of det A");
      acc = acc * av.inverse();
      zc += 1.0;
    }
    return acc * eval_in_strip(zc);
  }

  Matrix transfer() const { return g_plus; }  // g_x = g^+ (g^-)^{-1}, g^- = I
};

namespace detail {

inline void check_strip_preconditions(const RationalCoefficient& a, double x) {
  for (Complex zm : a.poles)
    if (std::abs(x - zm.real()) < 0.05)
      fail(Errc::LineThroughPole, "strip abscissa within 0.05 of a pole");
}

inline int auto_depth(const FormalSolution& y) {
  // Ymax^{-(M-kappa-1)} tail mass below 1e-8 at the default Ymax = 40
  return int(std::ceil(y.kappa())) + 6;
}

struct AssembledSystem {
  LineGrid grid;
  std::vector<Matrix> atil;       // \tilde A at the nodes
  Eigen::MatrixXcd pv;            // scalar pv quadrature matrix
};

inline AssembledSystem assemble(const RationalCoefficient& a, const StripComparison& ym,
                                double x, const SolverConfig& cfg) {
  AssembledSystem s{LineGrid::make(x, cfg.nodes, cfg.ymax, cfg.grading), {}, {}};
  s.atil.resize(cfg.nodes);
  for (int j = 0; j < cfg.nodes; ++j) {
    Complex xi = s.grid.xi(j);
    s.atil[j] = ym.eval(xi + 1.0).inverse() * evaluate(a, xi) * ym.eval(xi);
  }
  s.pv = pv_matrix(s.grid);
  return s;
}

// Residual of (R1) at off-grid midpoints, relative scale.
inline double boundary_residual(const RationalCoefficient& a, const StripSolution& sol) {
  const LineGrid& g = sol.grid;
  double worst = 0.0;
  int n = g.size();
  for (int j = n / 8; j < n - n / 8; j += std::max(1, n / 37)) {
    double yq = 0.5 * (g.y(j) + g.y(j + 1));
    Complex xiq(g.x, yq);
    int idx[LineGrid::kInterp];
    double wt[LineGrid::kInterp];
    g.interp_stencil(yq, idx, wt);
    Matrix phiq = Matrix::Zero(sol.order(), sol.order());
    for (int k = 0; k < LineGrid::kInterp; ++k) phiq += wt[k] * sol.phi[idx[k]];
    Matrix iq = Matrix::Zero(sol.order(), sol.order());
    for (int l = 0; l < n; ++l)
      iq += g.w(l) * strip_kernel(xiq, g.xi(l), g.x) * (sol.phi[l] - phiq);
    iq += kernel_pv_integral(yq) * phiq;
    Matrix base = sol.g0 + iq;
    Matrix lhs = sol.ym->eval(xiq + 1.0) * (base + 0.5 * phiq);
    Matrix rhs = evaluate(a, xiq) * sol.ym->eval(xiq) * (base - 0.5 * phiq);
    double scale = std::max(1.0, mat_norm(rhs));
    worst = std::max(worst, mat_norm(lhs - rhs) / scale);
  }
  return worst;
}

}  // namespace detail

// [OP] solve_strip: Problem I by Nystrom collocation (or iteration) of the
// singular integral equation (K).
inline StripSolution solve_strip(const RationalCoefficient& a, double x, SolverConfig cfg = {}) {
  detail::check_strip_preconditions(a, x);
  CoeffClass cls = classify(a);
  if (cls != CoeffClass::RegularSingular && cls != CoeffClass::MildReal)
    fail(Errc::UsageError, "solve_strip handles regular singular and real-exponent classes");
  if (index(a, x) != 0) fail(Errc::NonzeroIndex, "index nonzero along the strip line");

  FormalSolution y = compute_formal(a, cfg.series_depth > 0 ? cfg.series_depth
                                                            : detail::auto_depth(compute_formal(a, 1)));
  auto ym = std::make_shared<StripComparison>(y, x, cfg);
  detail::AssembledSystem sys = detail::assemble(a, *ym, x, cfg);

  int n = cfg.nodes, r = a.r;
  StripSolution sol;
  sol.x = x;
  sol.coeff = a;
  sol.ym = ym;
  sol.grid = sys.grid;
  sol.g0 = identity_like(r);
  sol.phi.assign(n, Matrix::Zero(r, r));

  if (cfg.mode == SolveMode::Iteration) {
    double small = 0.0;
    for (const Matrix& at : sys.atil) small = std::max(small, mat_norm(at - identity_like(r)));
    if (small > 0.3) fail(Errc::IterationDiverged, "iteration mode needs ||A~ - 1|| <= 0.3");
    std::vector<Matrix> cur(n, Matrix::Zero(r, r)), nxt(n);
    double prev_diff = 1e300;
    for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
      double diff = 0.0;
      for (int j = 0; j < n; ++j) {
        Matrix iph = Matrix::Zero(r, r);
        for (int l = 0; l < n; ++l) iph += sys.pv(j, l) * cur[l];
        Matrix rhs = 2.0 * (sys.atil[j] - identity_like(r)) * (identity_like(r) + iph);
        nxt[j] = (sys.atil[j] + identity_like(r)).partialPivLu().solve(rhs);
        diff = std::max(diff, mat_norm(nxt[j] - cur[j]));
      }
      cur.swap(nxt);
      if (diff < 1e-14) break;
      if (sweep > 4 && diff > prev_diff) fail(Errc::IterationDiverged, "sweep differences grew");
      prev_diff = diff;
    }
    sol.phi = cur;
  } else {
    // one (n r) x (n r) factorization serves all r columns
    Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(n * r, n * r);
    Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(n * r, r);
    for (int j = 0; j < n; ++j) {
      Matrix ap = sys.atil[j] + identity_like(r);
      Matrix am = 2.0 * (sys.atil[j] - identity_like(r));
      big.block(j * r, j * r, r, r) += ap;
      for (int l = 0; l < n; ++l) big.block(j * r, l * r, r, r) -= sys.pv(j, l) * am;
      rhs.block(j * r, 0, r, r) = am;
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(big);
    double rc = lu.rcond();
    if (!(rc > 1.0 / cfg.cond_limit))
      fail(Errc::SingularSystem, "collocation matrix near singular; run dual_check");
    Eigen::MatrixXcd sols = lu.solve(rhs);
    for (int j = 0; j < n; ++j) sol.phi[j] = sols.block(j * r, 0, r, r);
  }

  // asymptotic factors and canonical normalization g^- = 1
  Matrix gp = identity_like(r), gm = identity_like(r);
  for (int l = 0; l < n; ++l) {
    gp += sys.grid.w(l) * kernel_limit_plus(sys.grid.y(l)) * sol.phi[l];
    gm += sys.grid.w(l) * kernel_limit_minus(sys.grid.y(l)) * sol.phi[l];
  }
  Matrix fp = ym->branch_factor(x, +1), fm = ym->branch_factor(x, -1);
  gp = fp * gp;  // asymptotic factors w.r.t. the true Y branch
  gm = fm * gm;
  sol.norm = gm.inverse();
  sol.g_minus = identity_like(r);
  sol.g_plus = gp * gm.inverse();
  sol.boundary_residual = detail::boundary_residual(a, sol);
  if (sol.boundary_residual > cfg.residual_tol)
    fail(Errc::ToleranceNotMet,
         "boundary residual " + std::to_string(sol.boundary_residual) + " above tolerance");
  return sol;
}

// [OP] solve_strip_birkhoff: coupled system for the density and the constant
// matrix g (unit diagonal); off-diagonal g pinned by the decay-class
// conditions g^{ij} + int k_{-sgn nu_ij} phi^{ij} = 0.
inline StripSolution solve_strip_birkhoff(const RationalCoefficient& a, double x,
                                          SolverConfig cfg = {}) {
  detail::check_strip_preconditions(a, x);
  if (classify(a) != CoeffClass::Birkhoff) fail(Errc::UsageError, "not a Birkhoff-class coefficient");
  if (index(a, x) != 0) fail(Errc::NonzeroIndex, "index nonzero along the strip line");

  FormalSolution y = compute_formal(a, cfg.series_depth > 0 ? cfg.series_depth
                                                            : detail::auto_depth(compute_formal(a, 1)));
  auto ym = std::make_shared<StripComparison>(y, x, cfg);
  detail::AssembledSystem sys = detail::assemble(a, *ym, x, cfg);

  int n = cfg.nodes, r = a.r;
  std::vector<double> nu(r);
  for (int i = 0; i < r; ++i) nu[i] = std::arg(a.rho(i));

  // unknowns per column c: phi^{(c)} at all nodes plus g^{ic}, i != c
  int nc = n * r + (r - 1);
  Eigen::MatrixXcd sols(n * r + r, r);  // reuse: top n*r = phi column, then g col entries
  StripSolution sol;
  sol.x = x;
  sol.coeff = a;
  sol.ym = ym;
  sol.grid = sys.grid;
  sol.phi.assign(n, Matrix::Zero(r, r));
  Matrix g = identity_like(r);

  for (int c = 0; c < r; ++c) {
    Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(nc, nc);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(nc);
    auto gcol_index = [&](int i) {  // position of g^{ic} among the r-1 extras
      return n * r + (i < c ? i : i - 1);
    };
    for (int j = 0; j < n; ++j) {
      Matrix ap = sys.atil[j] + identity_like(r);
      Matrix am = 2.0 * (sys.atil[j] - identity_like(r));
      for (int q = 0; q < r; ++q) {
        int row = j * r + q;
        for (int p = 0; p < r; ++p) {
          big(row, j * r + p) += ap(q, p);
          for (int l = 0; l < n; ++l) big(row, l * r + p) -= sys.pv(j, l) * am(q, p);
          if (p != c) big(row, gcol_index(p)) -= am(q, p);
        }
        rhs(row) = am(q, c);  // g^{cc} = 1 contribution
      }
    }
    // decay-class rows: g^{ic} + int k_s phi^{ic} = 0, s = -sgn(nu_i - nu_c)
    for (int i = 0; i < r; ++i) {
      if (i == c) continue;
      int row = gcol_index(i);
      big(row, row) += 1.0;
      bool plus = nu[i] - nu[c] < 0;
      for (int l = 0; l < n; ++l) {
        double klim = plus ? kernel_limit_plus(sys.grid.y(l)) : kernel_limit_minus(sys.grid.y(l));
        big(row, l * r + i) += sys.grid.w(l) * klim;
      }
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(big);
    Eigen::VectorXcd colsol = lu.solve(rhs);
    if (!colsol.allFinite()) fail(Errc::SingularSystem, "Birkhoff collocation singular");
    for (int j = 0; j < n; ++j)
      for (int q = 0; q < r; ++q) sol.phi[j](q, c) = colsol(j * r + q);
    for (int i = 0; i < r; ++i)
      if (i != c) g(i, c) = colsol(gcol_index(i));
  }
  sol.g0 = g;

  // diagonal limits v^+- (off-diagonal limits have no invariant meaning here)
  Matrix vp = g, vm = g;
  for (int l = 0; l < n; ++l) {
    vp += sys.grid.w(l) * kernel_limit_plus(sys.grid.y(l)) * sol.phi[l];
    vm += sys.grid.w(l) * kernel_limit_minus(sys.grid.y(l)) * sol.phi[l];
  }
  Matrix fp = ym->branch_factor(x, +1), fm = ym->branch_factor(x, -1);
  Matrix vdp = Matrix::Zero(r, r), vdm = Matrix::Zero(r, r);
  for (int i = 0; i < r; ++i) {
    vdp(i, i) = fp(i, i) * vp(i, i);
    vdm(i, i) = fm(i, i) * vm(i, i);
  }
  sol.norm = vdm.inverse();
  sol.g_minus = identity_like(r);
  sol.g_plus = vdp * vdm.inverse();
  sol.boundary_residual = detail::boundary_residual(a, sol);
  if (sol.boundary_residual > cfg.residual_tol)
    fail(Errc::ToleranceNotMet,
         "boundary residual " + std::to_string(sol.boundary_residual) + " above tolerance");
  return sol;
}

// [OP] dual_check: smallest singular value of the adjoint homogeneous system
// (Kd); a collapse signals a non-generic coefficient.
inline double dual_check(const RationalCoefficient& a, double x, SolverConfig cfg = {}) {
  FormalSolution y = compute_formal(a, cfg.series_depth > 0 ? cfg.series_depth
                                                            : detail::auto_depth(compute_formal(a, 1)));
  StripComparison ym(y, x, cfg);
  detail::AssembledSystem sys = detail::assemble(a, ym, x, cfg);
  int n = cfg.nodes, r = a.r;
  // rows of f stacked; adjoint pv via k(xi', xi) = -k(xi, xi') + sigma
  Eigen::MatrixXcd pvT = -sys.pv;
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      pvT(j, l) += sys.grid.w(l) * kernel_symmetric_part(sys.grid.y(j), sys.grid.y(l));
  Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(n * r, n * r);
  for (int j = 0; j < n; ++j) {
    Matrix ap = sys.atil[j] + identity_like(r);
    Matrix am = 2.0 * (sys.atil[j] - identity_like(r));
    // row-vector equation f (A~+1) - 2 I'_f (A~-1) = 0, transposed
    big.block(j * r, j * r, r, r) += ap.transpose();
    for (int l = 0; l < n; ++l) big.block(j * r, l * r, r, r) -= pvT(j, l) * am.transpose();
  }
  return smallest_singular_value(big, 16);
}

// [OP] product_solution: truncated canonical products, an oracle independent
// of the integral-equation path.
struct ProductSolution {
  RationalCoefficient coeff;
  FormalSolution y;
  bool right = true;
  int trunc = 500;
  double error_estimate = 0.0;

  Matrix value(Complex z) const {
    int r = coeff.r;
    Matrix acc = identity_like(r);
    if (right) {
      for (int k = 0; k < trunc; ++k) acc = acc * evaluate(coeff, z + double(k)).inverse();
      return acc * eval_partial(y, z + double(trunc));
    }
    for (int k = 1; k <= trunc; ++k) acc = acc * evaluate(coeff, z - double(k));
    return acc * eval_partial(y, z - double(trunc));
  }
};

inline ProductSolution product_solution(const RationalCoefficient& a, bool right, int trunc,
                                        int depth) {
  ProductSolution p;
  p.coeff = a;
  p.y = compute_formal(a, depth);
  p.right = right;
  p.trunc = trunc;
  // error estimate: successive-truncation difference at a probe point
  Complex probe(right ? 1.7 : -1.3, 0.9);
  for (Complex zm : a.poles) {
    while (std::abs(probe.real() - zm.real()) < 0.2) probe += 0.37;
  }
  ProductSolution half = p;
  half.trunc = std::max(8, trunc / 2);
  Matrix full = p.value(probe), part = half.value(probe);
  p.error_estimate = mat_norm(full - part);
  if (trunc >= 64 && p.error_estimate > 1e-3)
    fail(Errc::NonConvergent, "product truncation not converging");
  return p;
}

// [OP] scalar_gamma: closed-form canonical pair for r = 1,
//   psi_r = rho^z prod Gamma(z - zeta_a) / prod Gamma(z - z_m),
//   psi_l = e^{-i pi K} rho^z prod Gamma(1 + z_m - z) / prod Gamma(1 + zeta_a - z),
// both solving psi(z+1) = a(z) psi(z); the left normalizer matches the branch
// cut along arg z = pi/2.
struct ScalarGammaPair {
  std::vector<Complex> zeros, poles;
  Complex rho = 1.0;

  Complex k_exponent() const {
    Complex k = 0.0;
    for (Complex zm : poles) k += zm;
    for (Complex zt : zeros) k -= zt;
    return k;
  }

  Complex right(Complex z) const {
    Complex lg = z * std::log(rho);
    for (Complex zt : zeros) lg += log_gamma(z - zt);
    for (Complex zm : poles) lg -= log_gamma(z - zm);
    return std::exp(lg);
  }

  Complex left(Complex z) const {
    Complex lg = z * std::log(rho) - kI * kPi * k_exponent();
    for (Complex zm : poles) lg += log_gamma(1.0 + zm - z);
    for (Complex zt : zeros) lg -= log_gamma(1.0 + zt - z);
    return std::exp(lg);
  }

  // connection scalar S = psi_r^{-1} psi_l = e^{-i pi K} prod sin(pi(z-zeta)) / sin(pi(z-z_m))
  Complex connection(Complex z) const {
    Complex lg = -kI * kPi * k_exponent();
    for (Complex zt : zeros) {
      ScaledTrig s = scaled_sin(z - zt);
      lg += s.e + std::log(0.5 * s.f);
    }
    for (Complex zm : poles) {
      ScaledTrig s = scaled_sin(z - zm);
      lg -= s.e + std::log(0.5 * s.f);
    }
    return std::exp(lg);
  }
};

inline ScalarGammaPair scalar_gamma(std::vector<Complex> zeros, std::vector<Complex> poles,
                                    Complex rho = 1.0) {
  ScalarGammaPair p;
  p.zeros = std::move(zeros);
  p.poles = std::move(poles);
  p.rho = rho;
  return p;
}

}  // namespace strips
