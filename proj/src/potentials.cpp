#include "minkcmc/potentials.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace minkcmc {

SingularPotential SingularPotential::make(AnalyticFunction a, AnalyticFunction b,
                                          AnalyticFunction r) {
  if (r.imag_coeff_mass() > 1e-14 * std::max(1.0, r.max_coeff_norm()))
    throw std::invalid_argument("SingularPotential: r must have real coefficients");
  SingularPotential p;
  p.a_refl = a.conj_reflect();
  p.b_refl = b.conj_reflect();
  p.a = std::move(a);
  p.b = std::move(b);
  p.r = std::move(r);
  return p;
}

LoopMatrix eval_singular_potential(const SingularPotential& p, const cplx& z, int trunc) {
  if (trunc < 3)
    throw std::invalid_argument("eval_singular_potential: truncation degree must be >= 3");
  const cplx a = p.a(z), b = p.b(z), r = p.r(z);
  const cplx ar = p.a_refl(z), br = p.b_refl(z);
  LoopMatrix x(trunc);
  Mat2 m;
  m = Mat2::Zero();
  m(1, 0) = -a;
  x.set_coeff(-3, m);
  m = Mat2::Zero();
  m(0, 0) = -a;
  m(1, 1) = a;
  x.set_coeff(-2, m);
  m = Mat2::Zero();
  m(0, 1) = a;
  m(1, 0) = b;
  x.set_coeff(-1, m);
  m = Mat2::Zero();
  m(0, 0) = kI * r;
  m(1, 1) = -kI * r;
  x.set_coeff(0, m);
  m = Mat2::Zero();
  m(0, 1) = br;
  m(1, 0) = ar;
  x.set_coeff(1, m);
  m = Mat2::Zero();
  m(0, 0) = ar;
  m(1, 1) = -ar;
  x.set_coeff(2, m);
  m = Mat2::Zero();
  m(0, 1) = -ar;
  x.set_coeff(3, m);
  return x;
}

StandardPotential translate_to_standard(const SingularPotential& p) { return {p}; }

LoopMatrix eval_standard_potential(const StandardPotential& p, const cplx& z, int trunc) {
  if (trunc < 3)
    throw std::invalid_argument("eval_standard_potential: truncation degree must be >= 3");
  const SingularPotential& s = p.source;
  const cplx a = s.a(z), b = s.b(z), r = s.r(z);
  const cplx ar = s.a_refl(z), br = s.b_refl(z);
  const cplx diag = kI * r + br;
  LoopMatrix x(trunc);
  Mat2 m;
  m = Mat2::Zero();
  m(0, 1) = a;
  m(1, 0) = b - br - 2.0 * kI * r;
  x.set_coeff(-1, m);
  m = Mat2::Zero();
  m(0, 0) = diag;
  m(1, 1) = -diag;
  x.set_coeff(0, m);
  m = Mat2::Zero();
  m(0, 1) = br;
  x.set_coeff(1, m);
  m = Mat2::Zero();
  m(0, 1) = -ar;
  x.set_coeff(3, m);
  return x;
}

StandardValidation validate_standard(const StandardPotential& p,
                                     const std::vector<cplx>& samples) {
  if (samples.empty())
    throw std::invalid_argument("validate_standard: empty sample set");
  StandardValidation v{std::numeric_limits<double>::infinity(), samples.front(), false};
  for (const cplx& z : samples) {
    double m = std::abs(p.source.a(z));
    if (m < v.min_abs_a) {
      v.min_abs_a = m;
      v.argmin_z = z;
    }
  }
  v.ok = v.min_abs_a > 0.0;
  return v;
}

LoopPotentialFn potential_fn(const SingularPotential& p, int trunc) {
  return [p, trunc](const cplx& z) { return eval_singular_potential(p, z, trunc); };
}

LoopPotentialFn potential_fn(const StandardPotential& p, int trunc) {
  return [p, trunc](const cplx& z) { return eval_standard_potential(p, z, trunc); };
}

namespace {

LoopMatrix rk4_segment(const LoopPotentialFn& xi, const cplx& z_from, const LoopMatrix& phi0,
                       const cplx& z_to, int steps) {
  const cplx delta = z_to - z_from;
  const cplx step = delta / static_cast<double>(steps);
  LoopMatrix phi = phi0;
  // B(z) = xi(z) * step so the classical tableau applies with unit stride.
  LoopMatrix b_right = loop_scale(step, xi(z_from));
  for (int i = 0; i < steps; ++i) {
    const cplx z0 = z_from + delta * (static_cast<double>(i) / steps);
    LoopMatrix b1 = std::move(b_right);
    LoopMatrix b2 = loop_scale(step, xi(z0 + 0.5 * step));
    LoopMatrix b3 = loop_scale(step, xi(z0 + step));

    LoopMatrix k1 = loop_mul(phi, b1);
    LoopMatrix s = phi;
    loop_axpy(s, 0.5, k1);
    LoopMatrix k2 = loop_mul(s, b2);
    s = phi;
    loop_axpy(s, 0.5, k2);
    LoopMatrix k3 = loop_mul(s, b2);
    s = phi;
    loop_axpy(s, 1.0, k3);
    LoopMatrix k4 = loop_mul(s, b3);

    loop_axpy(phi, 1.0 / 6.0, k1);
    loop_axpy(phi, 2.0 / 6.0, k2);
    loop_axpy(phi, 2.0 / 6.0, k3);
    loop_axpy(phi, 1.0 / 6.0, k4);
    b_right = std::move(b3);
  }
  return phi;
}

}  // namespace

FrameResult integrate_frame(const LoopPotentialFn& xi, const cplx& z_from, const LoopMatrix& phi0,
                            const cplx& z_to, const FrameIntegrationOptions& opt) {
  if (opt.trunc < 3) throw std::invalid_argument("integrate_frame: truncation degree must be >= 3");
  LoopMatrix start = (phi0.trunc() == opt.trunc) ? phi0 : loop_truncate(phi0, opt.trunc);
  const double len = std::abs(z_to - z_from);
  if (len == 0.0) return {start, 0.0, 0, false};

  int steps;
  if (opt.fixed_steps > 0) {
    steps = opt.fixed_steps;
  } else {
    if (!(opt.h_step > 0.0)) throw std::invalid_argument("integrate_frame: h_step must be positive");
    steps = std::max(1, static_cast<int>(std::ceil(len / opt.h_step)));
  }

  const CircleSampling probe = CircleSampling::uniform(8);
  LoopMatrix phi = rk4_segment(xi, z_from, start, z_to, steps);
  double drift = det_residual(phi, probe);
  bool restepped = false;
  if (opt.fixed_steps == 0) {
    for (int attempt = 0; attempt < 2 && drift > opt.tol_det; ++attempt) {
      steps *= 2;
      phi = rk4_segment(xi, z_from, start, z_to, steps);
      drift = det_residual(phi, probe);
      restepped = true;
    }
  }
  return {std::move(phi), drift, steps, restepped};
}

}  // namespace minkcmc
