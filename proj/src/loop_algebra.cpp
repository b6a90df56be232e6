#include "minkcmc/loop_algebra.hpp"

#include <cmath>
#include <numbers>

namespace minkcmc {

double frob(const Mat2& m) { return m.norm(); }

LoopMatrix::LoopMatrix(int trunc_degree) : n_(trunc_degree) {
  if (trunc_degree < 0) throw std::invalid_argument("LoopMatrix: negative truncation degree");
  c_.assign(2 * n_ + 1, Mat2::Zero());
}

LoopMatrix LoopMatrix::identity(int trunc_degree) {
  LoopMatrix a(trunc_degree);
  a.c_[trunc_degree] = Mat2::Identity();
  return a;
}

LoopMatrix LoopMatrix::constant(const Mat2& m, int trunc_degree) {
  LoopMatrix a(trunc_degree);
  a.c_[trunc_degree] = m;
  return a;
}

const Mat2& LoopMatrix::coeff(int k) const {
  if (k < -n_ || k > n_) throw std::invalid_argument("LoopMatrix::coeff: mode out of range");
  return c_[k + n_];
}

void LoopMatrix::set_coeff(int k, const Mat2& m) {
  if (k < -n_ || k > n_) throw std::invalid_argument("LoopMatrix::set_coeff: mode out of range");
  c_[k + n_] = m;
}

void LoopMatrix::add_coeff(int k, const Mat2& m) {
  if (k < -n_ || k > n_) throw std::invalid_argument("LoopMatrix::add_coeff: mode out of range");
  c_[k + n_] += m;
}

double LoopMatrix::max_coeff_norm() const {
  double best = 0.0;
  for (const Mat2& m : c_) best = std::max(best, frob(m));
  return best;
}

double LoopMatrix::mass_outside(int k_min, int k_max) const {
  double mass = 0.0;
  for (int k = -n_; k <= n_; ++k)
    if (k < k_min || k > k_max) mass += frob(c_[k + n_]);
  return mass;
}

double LoopMatrix::twist_violation() const {
  double mass = 0.0;
  for (int k = -n_; k <= n_; ++k) {
    const Mat2& m = c_[k + n_];
    if ((k & 1) == 0) {
      mass += std::abs(m(0, 1)) + std::abs(m(1, 0));
    } else {
      mass += std::abs(m(0, 0)) + std::abs(m(1, 1));
    }
  }
  return mass;
}

CircleSampling CircleSampling::uniform(int m) {
  if (m < 1) throw std::invalid_argument("CircleSampling: need at least one point");
  CircleSampling s;
  s.points.reserve(m);
  for (int j = 0; j < m; ++j) {
    double t = 2.0 * std::numbers::pi * j / m;
    s.points.emplace_back(std::cos(t), std::sin(t));
  }
  return s;
}

CircleSampling CircleSampling::for_trunc(int n) { return uniform(4 * n + 4); }

LoopMatrix loop_mul(const LoopMatrix& a, const LoopMatrix& b) {
  const int n_out = std::max(a.n_, b.n_);
  const int n_full = a.n_ + b.n_;
  // Full convolution, then clip to [-n_out, n_out].
  std::vector<Mat2> full(2 * n_full + 1, Mat2::Zero());
  for (int j = -a.n_; j <= a.n_; ++j) {
    const Mat2& aj = a.c_[j + a.n_];
    if (aj.isZero(0.0)) continue;
    for (int k = -b.n_; k <= b.n_; ++k) {
      const Mat2& bk = b.c_[k + b.n_];
      if (bk.isZero(0.0)) continue;
      full[j + k + n_full].noalias() += aj * bk;
    }
  }
  LoopMatrix out(n_out);
  double dropped = a.dropped_ + b.dropped_;
  for (int k = -n_full; k <= n_full; ++k) {
    if (k < -n_out || k > n_out) {
      dropped += frob(full[k + n_full]);
    } else {
      out.c_[k + n_out] = full[k + n_full];
    }
  }
  out.dropped_ = dropped;
  return out;
}

LoopMatrix loop_add(const LoopMatrix& a, const LoopMatrix& b) {
  const int n = std::max(a.trunc(), b.trunc());
  LoopMatrix out(n);
  for (int k = -n; k <= n; ++k) {
    Mat2 m = Mat2::Zero();
    if (std::abs(k) <= a.trunc()) m += a.coeff(k);
    if (std::abs(k) <= b.trunc()) m += b.coeff(k);
    out.set_coeff(k, m);
  }
  out.add_dropped_mass(a.dropped_mass() + b.dropped_mass());
  return out;
}

LoopMatrix loop_sub(const LoopMatrix& a, const LoopMatrix& b) {
  return loop_add(a, loop_scale(-1.0, b));
}

LoopMatrix loop_scale(const cplx& s, const LoopMatrix& a) {
  LoopMatrix out(a.trunc());
  for (int k = -a.trunc(); k <= a.trunc(); ++k) out.set_coeff(k, s * a.coeff(k));
  out.add_dropped_mass(a.dropped_mass());
  return out;
}

void loop_axpy(LoopMatrix& y, const cplx& s, const LoopMatrix& x) {
  if (y.trunc() != x.trunc()) throw std::invalid_argument("loop_axpy: truncation mismatch");
  for (int k = -x.trunc(); k <= x.trunc(); ++k) y.add_coeff(k, s * x.coeff(k));
  y.add_dropped_mass(x.dropped_mass());
}

LoopMatrix loop_inverse(const LoopMatrix& a) {
  LoopMatrix out(a.trunc());
  for (int k = -a.trunc(); k <= a.trunc(); ++k) {
    const Mat2& m = a.coeff(k);
    Mat2 adj;
    adj << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    out.set_coeff(k, adj);
  }
  out.add_dropped_mass(a.dropped_mass());
  return out;
}

Mat2 loop_eval(const LoopMatrix& a, const cplx& lambda) {
  if (lambda == cplx(0.0, 0.0))
    throw std::invalid_argument("loop_eval: lambda must be nonzero");
  const int n = a.trunc();
  // Horner on the non-negative part in lambda and the negative part in 1/lambda.
  Mat2 plus = a.coeff(n);
  for (int k = n - 1; k >= 0; --k) plus = plus * lambda + a.coeff(k);
  if (n == 0) return plus;
  const cplx mu = 1.0 / lambda;
  Mat2 minus = a.coeff(-n);
  for (int k = n - 1; k >= 1; --k) minus = minus * mu + a.coeff(-k);
  return plus + minus * mu;
}

LoopMatrix lambda_scaled_derivative(const LoopMatrix& a) {
  LoopMatrix out(a.trunc());
  for (int k = -a.trunc(); k <= a.trunc(); ++k)
    out.set_coeff(k, static_cast<double>(k) * a.coeff(k));
  out.add_dropped_mass(a.dropped_mass());
  return out;
}

LoopMatrix circle_adjoint(const LoopMatrix& a) {
  LoopMatrix out(a.trunc());
  for (int k = -a.trunc(); k <= a.trunc(); ++k) out.set_coeff(k, a.coeff(-k).adjoint());
  out.add_dropped_mass(a.dropped_mass());
  return out;
}

LoopMatrix loop_truncate(const LoopMatrix& a, int new_trunc) {
  LoopMatrix out(new_trunc);
  double clipped = 0.0;
  for (int k = -a.trunc(); k <= a.trunc(); ++k) {
    if (std::abs(k) <= new_trunc) {
      out.set_coeff(k, a.coeff(k));
    } else {
      clipped += frob(a.coeff(k));
    }
  }
  out.add_dropped_mass(a.dropped_mass() + clipped);
  return out;
}

RealityResult reality_residual(const LoopMatrix& f, const CircleSampling& s) {
  const Mat2 s3 = sigma3();
  double worst_plus = 0.0, worst_minus = 0.0;
  for (const cplx& lambda : s.points) {
    Mat2 v = loop_eval(f, lambda);
    Mat2 q = v.adjoint() * s3 * v;
    worst_plus = std::max(worst_plus, frob(Mat2(q - s3)));
    worst_minus = std::max(worst_minus, frob(Mat2(q + s3)));
  }
  if (worst_plus <= worst_minus) return {worst_plus, +1};
  return {worst_minus, -1};
}

double lie_reality_residual(const LoopMatrix& x) {
  const Mat2 s3 = sigma3();
  double worst = 0.0;
  for (int k = 0; k <= x.trunc(); ++k) {
    Mat2 lhs = x.coeff(-k).adjoint();
    Mat2 rhs = -s3 * x.coeff(k) * s3;
    worst = std::max(worst, frob(Mat2(lhs - rhs)));
  }
  return worst;
}

double det_residual(const LoopMatrix& f, const CircleSampling& s) {
  double worst = 0.0;
  for (const cplx& lambda : s.points) {
    Mat2 v = loop_eval(f, lambda);
    worst = std::max(worst, std::abs(v.determinant() - 1.0));
  }
  return worst;
}

LoopMatrix make_omega(int m, int trunc_degree) {
  if (m < 1) throw std::invalid_argument("make_omega: m must be >= 1");
  const int mode = (m % 2 == 1) ? -m : 1 - m;
  if (-mode > trunc_degree)
    throw std::invalid_argument("make_omega: truncation degree too small for requested m");
  LoopMatrix out = LoopMatrix::identity(trunc_degree);
  Mat2 e = Mat2::Zero();
  if (m % 2 == 1) {
    e(1, 0) = 1.0;
  } else {
    e(0, 1) = 1.0;
  }
  out.set_coeff(mode, e);
  return out;
}

}  // namespace minkcmc
