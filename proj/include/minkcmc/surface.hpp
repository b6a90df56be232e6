#pragma once

#include <utility>
#include <vector>

#include "minkcmc/iwasawa.hpp"
#include "minkcmc/potentials.hpp"

namespace minkcmc {

// Vectors in Lorentz 3-space are Vec3 components (v1, v2, v3) in the basis
// (e1, e2, e3), identified with trace-free 2x2 matrices v1 e1 + v2 e2 + v3 e3.
// The inner product <X, Y> = tr(XY)/2 has signature (+, +, -).
Mat2 to_matrix(const Vec3& v);
Vec3 from_matrix(const Mat2& m);

double minkowski_inner(const Vec3& u, const Vec3& v);
// Complex-bilinear extension, for derivatives taken in z = x + iy.
cplx minkowski_inner(const Eigen::Vector3cd& u, const Eigen::Vector3cd& v);

// Euclidean cross product of the components; in matrix form
// A x B = -(1/2) Ad_{e3} [A, B].
Vec3 euclidean_cross(const Vec3& u, const Vec3& v);
// Minkowski cross product -(1/2)[A, B]; satisfies <u x v, u> = <u x v, v> = 0.
Vec3 lorentz_cross(const Vec3& u, const Vec3& v);

// S(F) = -(1/2H) (F e3 F^-1 + 2 i lambda dF/dlambda F^-1) evaluated at
// lambda0 on the unit circle.  The lambda-derivative is taken exactly on
// the Fourier coefficients.  Invariant under right multiplication by
// lambda-independent diagonal unitaries.  S(identity) = [0, 0, -1/(2H)].
Vec3 sym_bobenko(const LoopMatrix& f, const cplx& lambda0, double H);

// Signed conformal factor g = eps chi^2 |a| / H of the induced metric
// ds^2 = 4 g^2 (dx^2 + dy^2), with chi^2 = | |mu+rho|^2 - rho^-2 | = |h|/rho^2
// read off the normalized plus factor of the singular frame.
double metric_g(const PlusFactor& b, const cplx& a_val, double H, int eps);

// Hopf differential coefficient Q = (2a/H)(b - b~ - 2ir), where b~ is the
// conjugate reflection of b.  Holomorphic in z.
cplx hopf_Q(const SingularPotential& xi, const cplx& z, double H);

// Ingredients of the Euclidean normal direction near the singular curve:
// Z1 = 2/sqrt(h^2+8h+8), Z2 = h/sqrt(h^2+8h+8), and the unit vector
// Y = (Im(mu) rho Z1, -(Re(mu)+rho) rho Z1, Z1+Z2), all real analytic
// across h = 0 where they take the values 1/sqrt2, 0, (-e2+e3)/sqrt2.
struct NormalProbe {
  double Z1 = 0.0;
  double Z2 = 0.0;
  Vec3 Y = Vec3::Zero();
};

// Euclidean unit normal n_E = unit( Ad_{e3} (F_omega Y F_omega^-1) ),
// where F_omega is the singular frame evaluated at the loop parameter and
// Y is built from the plus factor as above.  At F_omega = I, B_omega = I
// this gives (e2+e3)/sqrt2.
std::pair<Vec3, NormalProbe> euclidean_normal(const Mat2& f_omega, const PlusFactor& b);

// Signed Euclidean area density psi = eps * ||f_x x f_y||_E; vanishes
// exactly where the surface fails to immerse.
double psi_signed(const Vec3& f_x, const Vec3& f_y, int eps);

struct GridSpec {
  double x_lo = -1.0, x_hi = 1.0;
  double y_lo = -0.3, y_hi = 0.3;
  int nx = 2, ny = 2;

  double dx() const { return nx > 1 ? (x_hi - x_lo) / (nx - 1) : 0.0; }
  double dy() const { return ny > 1 ? (y_hi - y_lo) / (ny - 1) : 0.0; }
  double x(int ix) const { return nx > 1 ? x_lo + ix * dx() : x_lo; }
  double y(int iy) const { return ny > 1 ? y_lo + iy * dy() : y_lo; }
};

struct SurfaceSample {
  cplx z;
  Vec3 f = Vec3::Zero();
  CellTag tag = CellTag::Unknown;
  double g = 0.0;        // signed conformal factor
  cplx Q = 0.0;          // Hopf coefficient
  Vec3 n_E = Vec3::Zero();
  double psi = 0.0;      // signed Euclidean area density
  bool valid = false;
  // Diagnostics.
  double h = 0.0;        // big-cell probe value of the plus factor
  int eps = 0;           // sign of the big-cell branch (0 if not applicable)
  double residual = 0.0; // factorization circle residual
};

struct SurfaceGrid {
  GridSpec spec;
  double H = 1.0;
  cplx lambda0 = 1.0;
  std::vector<SurfaceSample> samples;  // row-major, ix + iy * nx
  bool degenerate = false;  // the singular curve fails the non-degeneracy test

  SurfaceSample& at(int ix, int iy) { return samples[ix + static_cast<size_t>(iy) * spec.nx]; }
  const SurfaceSample& at(int ix, int iy) const {
    return samples[ix + static_cast<size_t>(iy) * spec.nx];
  }
};

struct BuildOptions {
  double H = 1.0;
  cplx lambda0 = 1.0;
  int trunc = 24;
  int circle_samples = 0;   // factorization residual sampling; 0 -> 4*trunc+4
  double h_step = 0.0;      // integration step; 0 selects min(dx, dy)/4
  double eps_iwa = 1e-9;
  double delta_cell = 1e-7;
  double tol_det = 1e-6;
  int threads = 1;
  // Isometry positioning the surface on the prescribed curve: rotation
  // about e3 followed by a translation.
  double rotation_angle = 0.0;
  Vec3 translation = Vec3::Zero();
};

// Assembles the surface over the grid.  Per point: integrate the singular
// frame from the origin, factor it, and tag the cell.  Points inside the
// gradient-scaled band |h| <= delta_cell * max(1, |h_y|) are on the
// singular curve (tag P1, g = psi = 0, limit normal); other big-cell
// points get the closed-form metric, Hopf coefficient, normal and area
// density.  Where the singular frame itself leaves the big cell the
// factorization is retried on Phi omega_1 (same surface by the
// translation invariance of the Sym map); P2/Higher points are marked
// invalid.  Never throws on per-sample failures.
SurfaceGrid build_surface(const SingularPotential& xi, const GridSpec& grid,
                          const BuildOptions& opt);

// Independent check of the construction: discrete first/second fundamental
// forms from finite differences of f on the completed grid, with the
// orientation-corrected Lorentz normal, against the target curvature and
// the per-sample Hopf coefficient and Euclidean normal.
struct OracleStats {
  int points = 0;
  double h_mean_err = 0.0;  // mean |H_est - H|
  double h_max_err = 0.0;
  double q_mean_err = 0.0;  // mean |Q_est - Q_sample|
  double q_max_err = 0.0;
  double normal_max_dev = 0.0;  // Euclidean-normal cross-product check
};

// Uses every interior point whose 3x3 neighbourhood is valid and entirely
// in one big cell, i.e. the grid must contain at least one 5x5 regular
// window.  Throws if fewer than 9 such points exist.  The second-order
// stencils lose accuracy like (spacing/y)^2 toward the singular curve
// because the conformal metric degenerates there; min_abs_y excludes rows
// with |y| at or below it from the statistics so callers can restrict to
// the regular subgrid.
OracleStats mean_curvature_oracle(const SurfaceGrid& grid, double min_abs_y = 0.0);

}  // namespace minkcmc
