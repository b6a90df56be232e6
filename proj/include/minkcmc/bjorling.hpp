#pragma once

#include <string_view>
#include <vector>

#include "minkcmc/potentials.hpp"

namespace minkcmc {

struct Interval {
  double lo = -1.0;
  double hi = 1.0;
  bool contains(double x) const { return lo <= x && x <= hi; }
  double length() const { return hi - lo; }
};

// Data for the singular Bjorling problem: the surface to be constructed
// contains a prescribed curve f0 along which it is singular, with
//   df0/dx = s(x) [cos theta(x), sin theta(x), 1]^T
// and a second prescribed null field v = t(x) [cos theta, sin theta, 1]^T
// spanning the degenerate tangent plane.  s, t, theta are real polynomials
// on the interval J (which must contain 0); s and t may vanish separately
// but never simultaneously.  H is the constant mean curvature.
struct BjorlingData {
  AnalyticFunction s, t, theta;
  double H = 1.0;
  Interval J;

  // Validates H > 0, 0 in J, J nonempty, and that s and t have no
  // simultaneous zero on a sample grid over J.
  static BjorlingData make(const std::vector<double>& s_coeffs,
                           const std::vector<double>& t_coeffs,
                           const std::vector<double>& theta_coeffs, double H,
                           Interval J);

  // max(sup_J |s|, sup_J |t|, 1) over a fixed sample grid; the reference
  // scale for every zero test below.
  double data_scale() const;

  // theta shifted by a constant so that theta(0) = -pi/2.  In this gauge
  // the curve frame at x = 0 is the identity and the constructed surface
  // comes out of the loop-group machinery in a normalized position.
  AnalyticFunction theta_normalized() const;

  // Rotation angle about e3 carrying the normalized gauge back to the
  // user's frame: theta(0) + pi/2.
  double frame_rotation_angle() const;
};

enum class SingularityType {
  CuspidalEdge,
  Swallowtail,
  CuspidalCrossCap,
  Degenerate,
  ConePointCandidate,
  Unclassified,
};

std::string_view to_string(SingularityType t);

// The holomorphic potential generating the surface through the data:
//   a = H(-s + it)/4,  b = iHt/2,  r = (theta' + Ht)/2,
// extended off the real axis coefficientwise.  Because s and t never
// vanish together, a is nonvanishing on J.
SingularPotential data_to_singular_potential(const BjorlingData& d);

// Local diffeomorphism type of the surface at the curve point x0, decided
// by zero tests on the data (threshold 1e-10 relative to data_scale()):
//   theta'(x0) = 0                        -> Degenerate
//   s identically zero on J               -> ConePointCandidate
//   s(x0) != 0 and t(x0) != 0             -> CuspidalEdge
//   s(x0) = 0, t(x0) != 0, s'(x0) != 0    -> Swallowtail
//   t(x0) = 0, s(x0) != 0, t'(x0) != 0    -> CuspidalCrossCap
//   anything else                         -> Unclassified
// The Degenerate test comes first: the edge/swallowtail/cross-cap
// criteria are only meaningful where the singular curve is
// non-degenerate.  ConePointCandidate marks data whose curve collapses
// to a single point; no local model is claimed for it.
SingularityType classify_singularity(const BjorlingData& d, double x0);

// Kernel direction of df at a singular point, as (dx, dy) components:
// (t(x), -s(x)).  Nonzero under the data invariant.
Eigen::Vector2d null_direction(const BjorlingData& d, double x);

// Curve frame F0(x) = diag(e^{i(2 theta~ + pi)/4}, e^{-i(2 theta~ + pi)/4})
// with theta~ the normalized angle function: the rotation about the
// timelike axis taking [cos theta~, sin theta~, 0] to -e2.  F0(0) = I.
Mat2 singular_frame_on_curve(const BjorlingData& d, double x);

// The prescribed curve f0(x) = int_0^x s(u) [cos theta(u), sin theta(u), 1] du
// with f0(0) = 0, in the user's (un-normalized) gauge.  Composite
// Gauss-Legendre quadrature; for the polynomial data accepted here the
// result is accurate to machine precision.
Vec3 reconstruct_curve(const BjorlingData& d, double x);

}  // namespace minkcmc
