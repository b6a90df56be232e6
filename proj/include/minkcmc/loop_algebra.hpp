#pragma once

#include <vector>

#include "minkcmc/types.hpp"

namespace minkcmc {

// A 2x2 matrix-valued Laurent polynomial in the loop parameter lambda,
// truncated to modes [-N, N].  Every loop handled by this library is
// "twisted": diagonal entries live on even powers of lambda, off-diagonal
// entries on odd powers.  All algebraic operations preserve that pattern
// exactly (structurally absent entries stay exact zeros), so there is no
// drift to police -- twist_violation() exists for tests and assertions.
//
// Multiplication truncates back to the operand degree.  The Frobenius mass
// of coefficients discarded by truncation is accumulated into the result's
// dropped_mass(), giving an upper bound on the truncation error inherited
// through an object's entire history.
class LoopMatrix {
 public:
  LoopMatrix() : LoopMatrix(0) {}
  explicit LoopMatrix(int trunc_degree);

  static LoopMatrix identity(int trunc_degree);
  // Places m at mode 0.
  static LoopMatrix constant(const Mat2& m, int trunc_degree);

  int trunc() const { return n_; }

  // Coefficient of lambda^k, k in [-trunc(), trunc()].
  const Mat2& coeff(int k) const;
  void set_coeff(int k, const Mat2& m);
  void add_coeff(int k, const Mat2& m);

  double dropped_mass() const { return dropped_; }
  void add_dropped_mass(double d) { dropped_ += d; }

  // Largest Frobenius norm over all stored coefficients.
  double max_coeff_norm() const;
  // Total Frobenius mass of modes k < k_min or k > k_max.
  double mass_outside(int k_min, int k_max) const;
  // Mass sitting in entries forbidden by the twist (diagonal at odd modes,
  // off-diagonal at even modes).  Exactly zero for anything produced here.
  double twist_violation() const;

 private:
  int n_;
  std::vector<Mat2> c_;  // index k + n_
  double dropped_ = 0.0;

  friend LoopMatrix loop_mul(const LoopMatrix&, const LoopMatrix&);
};

// Unit-circle sample set used for residual checks.
struct CircleSampling {
  std::vector<cplx> points;
  static CircleSampling uniform(int m);
  // Default sampling for loops of truncation degree n: 4n + 4 points.
  static CircleSampling for_trunc(int n);
};

// Product truncated to max of the operand degrees; discarded coefficient
// mass is added to the result's dropped_mass().
LoopMatrix loop_mul(const LoopMatrix& a, const LoopMatrix& b);

LoopMatrix loop_add(const LoopMatrix& a, const LoopMatrix& b);
LoopMatrix loop_sub(const LoopMatrix& a, const LoopMatrix& b);
LoopMatrix loop_scale(const cplx& s, const LoopMatrix& a);
// y += s * x, in place; truncation degrees must match.
void loop_axpy(LoopMatrix& y, const cplx& s, const LoopMatrix& x);

// Coefficientwise adjugate [[d,-b],[-c,a]]: the exact inverse whenever
// det A(lambda) == 1 identically.
LoopMatrix loop_inverse(const LoopMatrix& a);

// Evaluate at a nonzero point of the lambda-plane (Horner in lambda and
// 1/lambda separately).
Mat2 loop_eval(const LoopMatrix& a, const cplx& lambda);

// lambda * d/dlambda, i.e. mode k scaled by k.
LoopMatrix lambda_scaled_derivative(const LoopMatrix& a);

// A ↦ A(1/conj(lambda))^dagger: the adjoint with respect to reflection
// across the unit circle.  Coefficientwise, mode k of the result is the
// Hermitian transpose of mode -k of the input.
LoopMatrix circle_adjoint(const LoopMatrix& a);

// Change truncation degree; clipped mass is recorded on the result.
LoopMatrix loop_truncate(const LoopMatrix& a, int new_trunc);

// Distance of F, evaluated on the sampled unit circle, from the real form:
// residual = min over branch eps of max_lambda ||F^dagger s3 F - eps*s3||_F,
// together with the minimizing branch.
struct RealityResult {
  double residual;
  int eps;  // +1 or -1
};
RealityResult reality_residual(const LoopMatrix& f, const CircleSampling& s);

// max over the sampled circle of |det F(lambda) - 1|.
double det_residual(const LoopMatrix& f, const CircleSampling& s);

// Lie-algebra-level reality defect on the identity branch: for x in the
// algebra of the real form, x_{-k}^dagger = -s3 x_k s3 for every mode k.
// Returns the max Frobenius violation.
double lie_reality_residual(const LoopMatrix& x);

// The lower/upper triangular unipotent loops marking the small cells:
//   m odd:  I + E21 * lambda^-m
//   m even: I + E12 * lambda^(1-m)
LoopMatrix make_omega(int m, int trunc_degree);

double frob(const Mat2& m);

}  // namespace minkcmc
