#pragma once

#include <functional>

#include "minkcmc/analytic.hpp"
#include "minkcmc/loop_algebra.hpp"

namespace minkcmc {

// Holomorphic potential with a third-order pole in the loop parameter,
// determined by three analytic functions (a, b, r).  r must have real
// coefficients so that it is real on the real axis.  The reflections
// a~(z) = conj(a(conj z)), b~(z) = conj(b(conj z)) are cached.
//
// Mode layout of the dz-coefficient (trunc >= 3):
//   -3: [[0, 0], [-a, 0]]       0: [[ir, 0], [0, -ir]]
//   -2: [[-a, 0], [0, a]]       1: [[0, b~], [a~, 0]]
//   -1: [[0, a], [b, 0]]        2: [[a~, 0], [0, -a~]]
//                               3: [[0, -a~], [0, 0]]
// On the real axis this is valued in the real form's Lie algebra.
struct SingularPotential {
  AnalyticFunction a, b, r;
  AnalyticFunction a_refl, b_refl;

  static SingularPotential make(AnalyticFunction a, AnalyticFunction b, AnalyticFunction r);
};

LoopMatrix eval_singular_potential(const SingularPotential& p, const cplx& z, int trunc);

// The same potential conjugated by the first small-cell unipotent
// omega_1 = I + E21/lambda.  Modes collapse to [-1, 3]:
//   (1,1) = (ir + b~) at lambda^0,            (2,2) = -(1,1)
//   (1,2) = a/lambda + b~ lambda - a~ lambda^3
//   (2,1) = (b - b~ - 2ir)/lambda
// The lambda^-1 coefficient's (1,2) entry is a(z); it must be nonvanishing
// for the loop-group construction to apply.
struct StandardPotential {
  SingularPotential source;
};

StandardPotential translate_to_standard(const SingularPotential& p);

LoopMatrix eval_standard_potential(const StandardPotential& p, const cplx& z, int trunc);

// Checks the nonvanishing of the lambda^-1 upper-right coefficient over a
// sample set; passes iff the minimum modulus is strictly positive.
struct StandardValidation {
  double min_abs_a;
  cplx argmin_z;
  bool ok;
};
StandardValidation validate_standard(const StandardPotential& p, const std::vector<cplx>& samples);

// z -> loop-valued coefficient of dz.
using LoopPotentialFn = std::function<LoopMatrix(const cplx&)>;

LoopPotentialFn potential_fn(const SingularPotential& p, int trunc);
LoopPotentialFn potential_fn(const StandardPotential& p, int trunc);

struct FrameIntegrationOptions {
  int trunc = 24;
  double h_step = 0.005;   // target path length per RK4 step
  double tol_det = 1e-6;   // determinant drift triggering a halved-step retry
  int fixed_steps = 0;     // if > 0, use exactly this many steps (no retry)
};

struct FrameResult {
  LoopMatrix phi;
  double det_drift;  // max |det - 1| over a coarse circle sampling at the endpoint
  int steps;
  bool restepped;
};

// Solve d(Phi) = Phi xi(z) dz along the straight segment from z_from to
// z_to with initial value phi0, by classical fourth-order Runge-Kutta.
// The determinant drift at the endpoint is measured; if it exceeds
// tol_det the segment is re-integrated with doubled step counts (twice at
// most) before giving up and returning the best result.
FrameResult integrate_frame(const LoopPotentialFn& xi, const cplx& z_from, const LoopMatrix& phi0,
                            const cplx& z_to, const FrameIntegrationOptions& opt);

}  // namespace minkcmc
