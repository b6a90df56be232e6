#pragma once

#include <limits>

#include "minkcmc/loop_algebra.hpp"

namespace minkcmc {

// Where a loop sits in the Birkhoff-Iwasawa stratification of the twisted
// loop group: the open dense big cell (split into the two branches of the
// real form reached by the unitary factor), the first two boundary strata,
// deeper strata, or undecidable.
enum class CellTag { BigCellPlus, BigCellMinus, P1, P2, Higher, Unknown };

const char* to_string(CellTag tag);

// Normalized plus factor: holomorphic at lambda = 0 with
// B(0) = diag(rho, 1/rho), rho > 0.  mu and nu are the lambda^1
// off-diagonal coefficients, the data entering the boundary probes.
struct PlusFactor {
  LoopMatrix b;
  double rho = 1.0;
  cplx mu{};
  cplx nu{};
};

// Extract (rho, mu, nu) from a plus loop, checking shape: no mass at
// negative modes beyond tol, diagonal value at 0 real with positive (1,1).
PlusFactor plus_factor_from_loop(const LoopMatrix& b, double tol = 1e-8);

struct IwasawaOptions {
  double eps_iwa = 1e-9;  // required reconstruction residual on the circle
  int max_refine = 2;
  bool always_refine = false;  // run one refinement pass even if converged
  int circle_samples = 0;      // residual sampling density; 0 -> 4*trunc+4
};

struct IwasawaResult {
  bool ok = false;
  int eps = +1;  // branch of the real form reached by the unitary factor
  LoopMatrix f;
  PlusFactor b;
  double residual = std::numeric_limits<double>::infinity();   // max ||Phi - F B|| on circle
  double reality = std::numeric_limits<double>::infinity();    // unitarity defect of F
  double ls_residual = std::numeric_limits<double>::infinity();  // mode-solve defect
  double cond = 0.0;  // rough condition estimate of the mode solve
};

// Factor Phi = F B with F in the real form and B a normalized plus loop.
//
// Method: the loop M := s3 Phi^* s3 Phi (with Phi^* the circle adjoint)
// equals eps s3 B^* s3 B whenever the factorization exists, so its
// normalized Birkhoff minus factor L — a polynomial in 1/lambda, found by
// a least-squares mode solve that decouples row-by-row thanks to the
// twisted parity — yields P := L M with P(0) = eps diag(rho^2, 1/rho^2).
// From there B := eps diag(1/rho, rho) P, F := Phi B^{-1}; a refinement
// pass re-factors the defect F^{-1} Phi B^{-1} when needed.  Any validity
// check failing marks the loop as outside the big cell (ok = false).
IwasawaResult iwasawa_factor(const LoopMatrix& phi, const IwasawaOptions& opt = {});

// Boundary distance probe: h = |mu + rho|^2 rho^2 - 1.  Zero exactly on
// the first boundary stratum crossings; its sign is the sign of the
// induced metric factor on the adjacent big-cell sheets.
double h_probe(const PlusFactor& b);

// Exact factorization of B * omega_1 as X * B' with X a constant-plus-
// monomial loop in the real form (or the unipotent boundary loop when
// |mu + rho| rho is within delta_cell of 1) and B' a plus loop.
struct SwitchResult {
  enum class Case { HPositive, HNegative, Boundary } kase;
  LoopMatrix x;
  LoopMatrix b_prime;
  cplx u{}, v{};       // big-cell cases: X = [[u, v l],[eps conj(v)/l, eps conj(u)]]
  double theta = 0.0;  // boundary case: X = I + e^{i theta} E21 / l
  int eps = +1;        // sign of h in the big-cell cases
};
SwitchResult switch_factor(const PlusFactor& b, double delta_cell = 1e-7);

// Full stratum classification: direct factorization, then the probe
// ladder Phi * omega_m^{-1} for m = 1..6 (P1, P2, Higher), else Unknown.
CellTag cell_classify(const LoopMatrix& phi, const IwasawaOptions& opt = {});

}  // namespace minkcmc
