#pragma once

#include <limits>
#include <vector>

#include "minkcmc/types.hpp"

namespace minkcmc {

// Entire or disc-convergent analytic function represented by its Taylor
// coefficients about 0.  Everything the surface pipeline needs (Bjorling
// strip data, potential entries) is polynomial, so the radius is usually
// infinite; it is tracked anyway and evaluation outside it throws.
class AnalyticFunction {
 public:
  AnalyticFunction() = default;  // identically zero
  explicit AnalyticFunction(std::vector<cplx> coeffs,
                            double radius = std::numeric_limits<double>::infinity());

  cplx operator()(const cplx& z) const;

  AnalyticFunction derivative() const;

  // z -> conj(f(conj z)); for a Taylor series this conjugates the
  // coefficients.  Functions real on the real axis are fixed points.
  AnalyticFunction conj_reflect() const;

  bool is_zero(double tol = 0.0) const;
  // Max |Im c_k| over the coefficients.
  double imag_coeff_mass() const;
  double max_coeff_norm() const;

  const std::vector<cplx>& coeffs() const { return c_; }
  double radius() const { return radius_; }

 private:
  std::vector<cplx> c_;
  double radius_ = std::numeric_limits<double>::infinity();
};

}  // namespace minkcmc
