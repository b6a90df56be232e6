#pragma once

// Shared helpers for the unit tests: seeded random generators for twisted
// loops in the various subgroups and an independent naive convolution used
// as the multiplication oracle.
//
// Group-valued loops are built as products of elementary factors that are
// *exactly* in the group at finite truncation (hyperbolic rotations
// [[a, b l^m], [conj(b) l^-m, conj(a)]] with |a|^2 - |b|^2 = 1 and odd m,
// constant diagonal phases, monomial diagonal windings, unipotent
// plus-loops).  Power-series exponentials would leak determinant mass into
// the clipped tail and are avoided.

#include <cmath>
#include <numbers>
#include <random>

#include "minkcmc/loop_algebra.hpp"
#include "minkcmc/types.hpp"

namespace minkcmc::testing {

using Rng = std::mt19937_64;

inline cplx rand_cplx(Rng& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  double re = u(rng);
  double im = u(rng);
  return {re, im};
}

// Random twisted trace-free Lie-algebra-shaped loop with modes in
// [-deg, deg]; no group constraint, used for raw algebra tests.
inline LoopMatrix random_lie_loop(Rng& rng, int deg, double scale, int trunc) {
  LoopMatrix x(trunc);
  for (int k = -deg; k <= deg; ++k) {
    Mat2 m = Mat2::Zero();
    if ((k & 1) == 0) {
      cplx d = rand_cplx(rng, scale);
      m(0, 0) = d;
      m(1, 1) = -d;
    } else {
      m(0, 1) = rand_cplx(rng, scale);
      m(1, 0) = rand_cplx(rng, scale);
    }
    x.set_coeff(k, m);
  }
  return x;
}

// [[a, b l^m], [conj(b) l^-m, conj(a)]] with |a|^2 - |b|^2 = 1, m odd:
// exactly in the identity branch of the real form, determinant exactly 1.
inline LoopMatrix hyperbolic_factor(cplx a, cplx b, int m, int trunc) {
  LoopMatrix g(trunc);
  Mat2 diag = Mat2::Zero(), up = Mat2::Zero(), dn = Mat2::Zero();
  diag(0, 0) = a;
  diag(1, 1) = std::conj(a);
  up(0, 1) = b;
  dn(1, 0) = std::conj(b);
  g.set_coeff(0, diag);
  g.set_coeff(m, up);
  g.set_coeff(-m, dn);
  return g;
}

// diag(c l^{2k}, conj(c) l^{-2k}) with |c| = 1: a winding diagonal element
// of the real form.
inline LoopMatrix winding_factor(cplx c, int k, int trunc) {
  LoopMatrix g(trunc);
  Mat2 up = Mat2::Zero(), dn = Mat2::Zero();
  up(0, 0) = c;
  dn(1, 1) = std::conj(c);
  g.set_coeff(2 * k, up);
  g.set_coeff(-2 * k, dn);
  return g;
}

// Random element of the identity branch: product of a few hyperbolic
// factors and a phase, exactly unitary and determinant-one at truncation.
inline LoopMatrix random_unitary_loop(Rng& rng, int n_factors, double scale, int trunc,
                                      bool allow_winding = false) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_int_distribution<int> mode(0, 1);
  double psi = 2.0 * u01(rng) - 1.0;
  LoopMatrix f(trunc);
  Mat2 d = Mat2::Zero();
  d(0, 0) = std::exp(kI * psi);
  d(1, 1) = std::exp(-kI * psi);
  f.set_coeff(0, d);
  for (int j = 0; j < n_factors; ++j) {
    double r = scale * u01(rng);
    double pa = 2.0 * std::numbers::pi * u01(rng);
    double pb = 2.0 * std::numbers::pi * u01(rng);
    cplx a = std::cosh(r) * std::exp(kI * pa);
    cplx b = std::sinh(r) * std::exp(kI * pb);
    int m = mode(rng) ? 1 : 3;
    f = loop_mul(f, hyperbolic_factor(a, b, m, trunc));
  }
  if (allow_winding) {
    double pc = 2.0 * std::numbers::pi * u01(rng);
    f = loop_mul(f, winding_factor(std::exp(kI * pc), 1, trunc));
  }
  return f;
}

// The off-branch representative: [[0, i lambda], [i/lambda, 0]].
inline LoopMatrix branch_swap_loop(int trunc) {
  LoopMatrix w(trunc);
  Mat2 up = Mat2::Zero(), dn = Mat2::Zero();
  up(0, 1) = kI;
  dn(1, 0) = kI;
  w.set_coeff(1, up);
  w.set_coeff(-1, dn);
  return w;
}

// I + c E12 l^m or I + c E21 l^m for odd m > 0: unipotent plus-loops with
// determinant exactly 1.
inline LoopMatrix unipotent_plus_factor(cplx c, int m, bool upper, int trunc) {
  LoopMatrix g = LoopMatrix::identity(trunc);
  Mat2 e = Mat2::Zero();
  if (upper) {
    e(0, 1) = c;
  } else {
    e(1, 0) = c;
  }
  g.set_coeff(m, e);
  return g;
}

// Random normalized plus-loop: diag(rho, 1/rho) times a handful of
// unipotent factors at positive odd modes.  B(0) = diag(rho, 1/rho) with
// rho > 0, determinant exactly 1 as long as total degree fits.
inline LoopMatrix random_plus_loop(Rng& rng, int n_factors, double scale, int trunc,
                                   double* rho_out = nullptr) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::uniform_int_distribution<int> mode(0, 1);
  double rho = std::exp(u(rng));
  if (rho_out) *rho_out = rho;
  LoopMatrix b(trunc);
  Mat2 d = Mat2::Zero();
  d(0, 0) = rho;
  d(1, 1) = 1.0 / rho;
  b.set_coeff(0, d);
  for (int j = 0; j < n_factors; ++j) {
    int m = mode(rng) ? 1 : 3;
    b = loop_mul(b, unipotent_plus_factor(rand_cplx(rng, scale), m, mode(rng) == 1, trunc));
  }
  return b;
}

// Independent multiplication oracle: plain double loop over mode pairs,
// written without reference to loop_mul's internals.
inline LoopMatrix convolve_oracle(const LoopMatrix& a, const LoopMatrix& b) {
  const int n = std::max(a.trunc(), b.trunc());
  LoopMatrix out(n);
  for (int m = -n; m <= n; ++m) {
    Mat2 acc = Mat2::Zero();
    for (int j = -a.trunc(); j <= a.trunc(); ++j) {
      int k = m - j;
      if (k < -b.trunc() || k > b.trunc()) continue;
      acc += a.coeff(j) * b.coeff(k);
    }
    out.set_coeff(m, acc);
  }
  return out;
}

inline double max_coeff_diff(const LoopMatrix& a, const LoopMatrix& b) {
  const int n = std::max(a.trunc(), b.trunc());
  double worst = 0.0;
  for (int k = -n; k <= n; ++k) {
    Mat2 ca = (std::abs(k) <= a.trunc()) ? a.coeff(k) : Mat2::Zero();
    Mat2 cb = (std::abs(k) <= b.trunc()) ? b.coeff(k) : Mat2::Zero();
    worst = std::max(worst, frob(Mat2(ca - cb)));
  }
  return worst;
}

}  // namespace minkcmc::testing
