#pragma once

#include "strips/coefficient.hpp"

namespace strips {

// Formal solution Y = (1 + sum_{s>=1} chi_s z^{-s}) e^{z ln A_0} z^K of
// Psi(z+1) = A(z) Psi(z), truncated at depth M.  The branch of ln z is fixed
// by the cut along arg z = pi/2 throughout.
struct FormalSolution {
  Vector k_diag;             // diagonal of K
  std::vector<Matrix> chi;   // chi[0] = I, chi[1..M]
  Vector rho;                // copy of the exponents
  int depth() const { return int(chi.size()) - 1; }
  int order() const { return int(k_diag.size()); }

  double kappa() const {  // max |k_i - k_j|
    double k = 0.0;
    for (int i = 0; i < order(); ++i)
      for (int j = 0; j < order(); ++j) k = std::max(k, std::abs(k_diag(i) - k_diag(j)));
    return k;
  }
};

namespace detail {

inline Complex binom(Complex a, int j) {
  Complex b = 1.0;
  for (int i = 0; i < j; ++i) b *= (a - double(i)) / double(i + 1);
  return b;
}

// Coefficient of z^{-t} in  (1 + sum chi_u (z+1)^{-u}) A_0 ((z+1)/z)^K
//                        -  A(z) (1 + sum chi_u z^{-u}).
// chi-list indexed from 0 (chi[0] = I); entries beyond the list are zero.
inline Matrix formal_eq_coeff(const RationalCoefficient& a, const Vector& k_diag,
                              const std::vector<Matrix>& chi, int t) {
  int r = a.r;
  Matrix a0 = a.leading();
  auto chi_at = [&](int u) -> Matrix {
    if (u < int(chi.size())) return chi[u];
    return Matrix::Zero(r, r);
  };
  Matrix lhs = Matrix::Zero(r, r);
  for (int u = 0; u <= t; ++u) {
    Matrix cu = chi_at(u);
    if (cu.isZero(0.0) && u > 0) continue;
    for (int j = 0; u + j <= t; ++j) {
      int l = t - u - j;
      Complex bj = binom(Complex(-u, 0), j);
      Matrix kl = Matrix::Zero(r, r);
      for (int i = 0; i < r; ++i) kl(i, i) = binom(k_diag(i), l);
      lhs += cu * bj * a0 * kl;
    }
  }
  Matrix rhs = Matrix::Zero(r, r);
  for (int l = 0; l <= t; ++l) {
    Matrix cl;
    if (l == 0) {
      cl = a0;
    } else {
      cl = Matrix::Zero(r, r);
      for (size_t m = 0; m < a.poles.size(); ++m)
        cl += a.residues[m] * std::pow(a.poles[m], l - 1);
    }
    rhs += cl * chi_at(t - l);
  }
  return lhs - rhs;
}

}  // namespace detail

// [OP] compute_formal.  Marches the substitution identity order by order;
// each step is a dense r^2 x (#unknowns) solve built by probing, so no
// hand-expanded index bookkeeping is involved.
inline FormalSolution compute_formal(const RationalCoefficient& a, int depth) {
  int r = a.r;
  CoeffClass cls = classify(a);
  if (cls == CoeffClass::NonMild) fail(Errc::CollidingRho, "leading coefficient not mild");

  FormalSolution y;
  y.rho = a.rho;
  y.k_diag = Vector::Zero(r);
  for (int i = 0; i < r; ++i) {
    Complex ki = 0.0;
    for (const Matrix& am : a.residues) ki += am(i, i);
    y.k_diag(i) = ki / a.rho(i);
  }
  y.chi.assign(depth + 2, Matrix::Zero(r, r));
  y.chi[0] = identity_like(r);

  if (cls == CoeffClass::RegularSingular) {
    // requires the diagonal gauge (res): the order-1 identity is
    // chi-independent here and must already hold
    Matrix e1 = detail::formal_eq_coeff(a, y.k_diag, y.chi, 1);
    if (mat_norm(e1) > 1e-9)
      fail(Errc::UsageError, "residue sum not diagonal: apply the diagonal gauge first");
    // order t determines chi_{t-1} in full
    for (int t = 2; t <= depth + 2; ++t) {
      int s = t - 1;
      Matrix base = detail::formal_eq_coeff(a, y.k_diag, y.chi, t);
      Matrix sys(r * r, r * r);
      for (int p = 0; p < r * r; ++p) {
        std::vector<Matrix> probe = y.chi;
        probe[s](p / r, p % r) += 1.0;
        Matrix dd = detail::formal_eq_coeff(a, y.k_diag, probe, t) - base;
        for (int q = 0; q < r * r; ++q) sys(q, p) = dd(q / r, q % r);
      }
      Vector rhs(r * r);
      for (int q = 0; q < r * r; ++q) rhs(q) = -base(q / r, q % r);
      Vector sol = sys.fullPivLu().solve(rhs);
      // resonance k_i - k_j in Z makes the step operator singular; a residual
      // here is exactly the paper's excluded case
      if ((sys * sol - rhs).norm() > 1e-8 * std::max(1.0, rhs.norm()))
        fail(Errc::ResonantExponents, "k_i - k_j in Z obstructs order " + std::to_string(s));
      for (int p = 0; p < r * r; ++p) y.chi[s](p / r, p % r) = sol(p);
      if (s >= depth + 1) break;
    }
  } else {
    // mild: order t determines diag(chi_{t-1}) and offdiag(chi_t)
    for (int i = 0; i < r; ++i)
      for (int j = i + 1; j < r; ++j)
        if (std::abs(a.rho(i) - a.rho(j)) < 1e-12)
          fail(Errc::CollidingRho, "rho_i = rho_j");
    for (int t = 1; t <= depth + 1; ++t) {
      Matrix base = detail::formal_eq_coeff(a, y.k_diag, y.chi, t);
      int n_off = r * (r - 1);
      int n_diag = (t >= 2) ? r : 0;
      int nu = n_off + n_diag;
      Matrix sys(r * r, nu);
      int col = 0;
      auto probe_entry = [&](int s, int pi, int pj) {
        std::vector<Matrix> probe = y.chi;
        probe[s](pi, pj) += 1.0;
        Matrix dd = detail::formal_eq_coeff(a, y.k_diag, probe, t) - base;
        for (int q = 0; q < r * r; ++q) sys(q, col) = dd(q / r, q % r);
        ++col;
      };
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
          if (i != j) probe_entry(t, i, j);
      for (int i = 0; i < r && t >= 2; ++i) probe_entry(t - 1, i, i);
      Vector rhs(r * r);
      for (int q = 0; q < r * r; ++q) rhs(q) = -base(q / r, q % r);
      Vector sol = sys.colPivHouseholderQr().solve(rhs);
      double resid = (sys * sol - rhs).norm();
      if (resid > 1e-8 * std::max(1.0, rhs.norm()))
        fail(Errc::CollidingRho, "formal recursion inconsistent at order " + std::to_string(t));
      col = 0;
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
          if (i != j) y.chi[t](i, j) = sol(col++);
      for (int i = 0; i < r && t >= 2; ++i) y.chi[t - 1](i, i) = sol(col++);
    }
  }
  y.chi.resize(depth + 1);
  return y;
}

// [OP] eval_partial: (1 + sum_{s<=Mp} chi_s z^{-s}) e^{z ln A_0} z^K.
inline Matrix eval_partial(const FormalSolution& y, Complex z, int order = -1) {
  if (on_branch_cut(z)) fail(Errc::OnBranchCut, "z on the cut arg z = pi/2");
  if (order < 0 || order > y.depth()) order = y.depth();
  int r = y.order();
  Matrix s = identity_like(r);
  Complex zi = 1.0;
  for (int t = 1; t <= order; ++t) {
    zi /= z;
    s += y.chi[t] * zi;
  }
  Complex lz = log_branch(z);
  Matrix d = Matrix::Zero(r, r);
  for (int i = 0; i < r; ++i) d(i, i) = std::exp(z * std::log(y.rho(i)) + y.k_diag(i) * lz);
  return s * d;
}

// Shifted partial sum (eqs. C, CY): holomorphic on strips near the origin.
struct ShiftedFormal {
  Vector k_diag;
  Vector rho;
  std::vector<Matrix> chi_shift;
  double x0 = 0.0;

  int order() const { return int(k_diag.size()); }
  int depth() const { return int(chi_shift.size()) - 1; }

  Matrix eval(Complex z) const {
    int r = order();
    Matrix s = identity_like(r);
    Complex zi = 1.0;
    for (int t = 1; t <= depth(); ++t) {
      zi /= (z - x0);
      s += chi_shift[t] * zi;
    }
    Complex lz = log_branch(z - x0);
    Matrix d = Matrix::Zero(r, r);
    for (int i = 0; i < r; ++i) d(i, i) = std::exp(z * std::log(rho(i)) + k_diag(i) * lz);
    return s * d;
  }
};

// [OP] shifted_partial: chi~ solve the congruence (CY),
// (1 + sum chi~ (z-x0)^{-s}) = (1 + sum chi z^{-s}) (1 - x0/z)^{-K} + O(z^{-M-1}).
inline ShiftedFormal shifted_partial(const FormalSolution& y, double x0) {
  int r = y.order();
  int M = y.depth();
  int n = M + 1;
  // right-multiply the chi series by the diagonal formal series (1 - x0/z)^{-K}
  std::vector<Matrix> prod(n, Matrix::Zero(r, r));
  std::vector<Vector> binm(n, Vector::Zero(r));
  for (int i = 0; i < r; ++i) {
    Complex b = 1.0;
    binm[0](i) = 1.0;
    for (int j = 1; j < n; ++j) {
      b *= (-y.k_diag(i) - double(j - 1)) / double(j) * (-x0);
      binm[j](i) = b;
    }
  }
  for (int u = 0; u < n; ++u)
    for (int j = 0; u + j < n; ++j) {
      Matrix term = y.chi[u];
      for (int col = 0; col < r; ++col) term.col(col) *= binm[j](col);
      prod[u + j] += term;
    }
  // re-expand sum prod_s z^{-s} in powers of (z - x0)^{-1}:
  // z^{-s} = sum_j binom(-s, j) x0^j (z - x0)^{-s-j}
  ShiftedFormal out;
  out.k_diag = y.k_diag;
  out.rho = y.rho;
  out.x0 = x0;
  out.chi_shift.assign(n, Matrix::Zero(r, r));
  for (int s = 0; s < n; ++s) {
    Complex b = 1.0;
    out.chi_shift[s] += prod[s];
    for (int j = 1; s + j < n; ++j) {
      b *= Complex(-s - j + 1) / double(j) * x0;
      out.chi_shift[s + j] += prod[s] * b;
    }
  }
  return out;
}

// Truncated formal logarithm of 1 + sum_{s>=1} chi_s u^s (noncommutative,
// plain truncated-series composition): exp of the result reproduces the
// series to order M but never vanishes.
inline std::vector<Matrix> series_log(const std::vector<Matrix>& chi) {
  int m = int(chi.size()) - 1;
  int r = int(chi[0].rows());
  std::vector<Matrix> eta(m + 1, Matrix::Zero(r, r));
  std::vector<Matrix> xpow(m + 1, Matrix::Zero(r, r));  // X^k accumulator
  for (int s = 1; s <= m; ++s) xpow[s] = chi[s];
  double sign = 1.0;
  for (int k = 1; k <= m; ++k) {
    for (int s = k; s <= m; ++s) eta[s] += (sign / double(k)) * xpow[s];
    if (k == m) break;
    std::vector<Matrix> nxt(m + 1, Matrix::Zero(r, r));
    for (int s = k; s <= m; ++s)
      for (int t = 1; s + t <= m; ++t) nxt[s + t] += xpow[s] * chi[t];
    xpow = nxt;
    sign = -sign;
  }
  return eta;
}

// Residual of the defining relation ||Y(z+1) - A(z) Y(z)|| at a point.
inline double formal_residual(const RationalCoefficient& a, const FormalSolution& y, Complex z,
                              int order = -1) {
  Matrix lhs = eval_partial(y, z + 1.0, order);
  Matrix rhs = evaluate(a, z) * eval_partial(y, z, order);
  return mat_norm(lhs - rhs) / std::max(1.0, mat_norm(rhs));
}

}  // namespace strips
