#pragma once

#include "strips/base.hpp"

namespace strips {

// Quadrature line L: Re z = x, nodes sinh-graded toward y = 0 with tail
// cutoff at ymax.  Weights are exact-map trapezoid weights (the map
// derivative evaluated analytically; differenced weights cost ~1e-4 here).
struct LineGrid {
  double x = 0.0;
  double ymax = 40.0;
  double grading = 4.0;
  RealVector y;      // imaginary parts, increasing
  RealVector dydt;   // map derivative at nodes
  double ht = 0.0;   // uniform spacing in the t parameter
  Vector xi;         // nodes x + i y
  Vector w;          // complex weights, w_j ~ i * y'(t_j) * ht

  static LineGrid make(double x, int n, double ymax = 40.0, double c = 4.0) {
    LineGrid g;
    g.x = x;
    g.ymax = ymax;
    g.grading = c;
    g.y.resize(n);
    g.dydt.resize(n);
    g.xi.resize(n);
    g.w.resize(n);
    g.ht = 2.0 / double(n - 1);
    double sh = std::sinh(c);
    for (int j = 0; j < n; ++j) {
      double t = -1.0 + g.ht * j;
      g.y(j) = ymax * std::sinh(c * t) / sh;
      g.dydt(j) = ymax * c * std::cosh(c * t) / sh;
      g.xi(j) = Complex(x, g.y(j));
      g.w(j) = kI * g.dydt(j) * g.ht;
    }
    g.w(0) *= 0.5;
    g.w(n - 1) *= 0.5;
    return g;
  }

  int size() const { return int(y.size()); }

  // 6-point Lagrange interpolation weights in the uniform t parameter for a
  // target height yq; returns node indices and weights.
  static constexpr int kInterp = 6;
  void interp_stencil(double yq, int idx[kInterp], double wt[kInterp]) const {
    double c = grading, sh = std::sinh(c);
    double tq = std::asinh(yq * sh / ymax) / c;
    int n = size();
    int j0 = int(std::floor((tq + 1.0) / ht)) - kInterp / 2 + 1;
    j0 = std::max(0, std::min(n - kInterp, j0));
    double tj[kInterp];
    for (int k = 0; k < kInterp; ++k) {
      idx[k] = j0 + k;
      tj[k] = -1.0 + ht * (j0 + k);
    }
    for (int k = 0; k < kInterp; ++k) {
      double p = 1.0;
      for (int l = 0; l < kInterp; ++l)
        if (l != k) p *= (tq - tj[l]) / (tj[k] - tj[l]);
      wt[k] = p;
    }
  }
};

// ---------------------------------------------------------------------------
// Strip kernel (Problem I), scale-split so it stays finite at any height:
//   k(z, xi) = cos(pi(z-x)) / (2i cos(pi(xi-x)) sin(pi(xi-z))).
// 1-periodic in both arguments; residue 1/(2 pi i) at xi = z.
inline Complex strip_kernel(Complex z, Complex xi, double x) {
  Complex u = z - x, v = xi - x, d = v - u;
  ScaledTrig cu = scaled_cos(u), cv = scaled_cos(v), sd = scaled_sin(d);
  Complex ex = cu.e - cv.e - sd.e;
  if (ex.real() > 650.0) fail(Errc::PoleProximity, "strip kernel overflow (xi ~ z)");
  return std::exp(ex) * cu.f / (cv.f * sd.f) / kI;
}

// Limits of the kernel as Im z -> +-inf:  k_pm(xi) = (tanh(pi y) +- 1)/2.
inline double kernel_limit_plus(double y) { return 0.5 * (std::tanh(kPi * y) + 1.0); }
inline double kernel_limit_minus(double y) { return 0.5 * (std::tanh(kPi * y) - 1.0); }

// p.v. integral of the kernel over the whole line: int_L k(xi, xi') dxi' = i y.
inline Complex kernel_pv_integral(double y) { return Complex(0.0, y); }

// Interior integral of the kernel: int_L k(z, xi) dxi = (z - x) - 1/2 for z
// strictly inside the strip x < Re z < x+1.
inline Complex kernel_interior_integral(Complex z, double x) { return (z - x) - 0.5; }

// Symmetrized smooth part sigma(a, b) = k(a, b) + k(b, a) on the line
// (used for the adjoint system): real and bounded by 1.
inline double kernel_symmetric_part(double ya, double yb) {
  double s = ya + yb;
  // sinh(pi s) / (2 cosh(pi ya) cosh(pi yb)), evaluated in log scale
  double m = kPi * (std::abs(s) - std::abs(ya) - std::abs(yb));
  double num = (1.0 - std::exp(-2.0 * kPi * std::abs(s))) * (s >= 0 ? 1.0 : -1.0);
  double den = (1.0 + std::exp(-2.0 * kPi * std::abs(ya))) * (1.0 + std::exp(-2.0 * kPi * std::abs(yb)));
  return std::exp(m) * num / den;
}

// Principal-value Nystrom matrix for I_phi(xi_j) = p.v. int_L phi k(xi_j, .) dxi.
// Diagonal handled by singularity subtraction against the exact line integral
// plus a 4th-order derivative stencil in the t parameter.
inline Eigen::MatrixXcd pv_matrix(const LineGrid& g) {
  int n = g.size();
  Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    Complex rowsum = 0.0;
    for (int l = 0; l < n; ++l) {
      if (l == j) continue;
      Complex kv = g.w(l) * strip_kernel(g.xi(j), g.xi(l), g.x);
      K(j, l) += kv;
      rowsum += kv;
    }
    K(j, j) += kernel_pv_integral(g.y(j)) - rowsum;
    // derivative term: w_j phi'(xi_j) / (2 pi i)
    const double c1 = 1.0 / 12.0, c2 = 8.0 / 12.0;
    Complex fac = g.w(j) / (2.0 * kI * kPi) / (kI * g.dydt(j)) / g.ht;
    if (j >= 2 && j < n - 2) {
      K(j, j - 2) += fac * c1;
      K(j, j - 1) += -fac * c2;
      K(j, j + 1) += fac * c2;
      K(j, j + 2) += -fac * c1;
    } else if (j < 2) {
      K(j, j) += fac * (-1.5);
      K(j, j + 1) += fac * 2.0;
      K(j, j + 2) += fac * (-0.5);
    } else {
      K(j, j) += fac * 1.5;
      K(j, j - 1) += fac * (-2.0);
      K(j, j - 2) += fac * 0.5;
    }
  }
  return K;
}

}  // namespace strips
