#include "minkcmc/analytic.hpp"

#include <cmath>

namespace minkcmc {

AnalyticFunction::AnalyticFunction(std::vector<cplx> coeffs, double radius)
    : c_(std::move(coeffs)), radius_(radius) {
  if (!(radius_ > 0.0))
    throw std::invalid_argument("AnalyticFunction: radius must be positive");
}

cplx AnalyticFunction::operator()(const cplx& z) const {
  if (!(std::abs(z) < radius_))
    throw std::invalid_argument("AnalyticFunction: evaluation outside radius of convergence");
  cplx acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

AnalyticFunction AnalyticFunction::derivative() const {
  if (c_.size() <= 1) return AnalyticFunction({}, radius_);
  std::vector<cplx> d(c_.size() - 1);
  for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return AnalyticFunction(std::move(d), radius_);
}

AnalyticFunction AnalyticFunction::conj_reflect() const {
  std::vector<cplx> d(c_.size());
  for (size_t k = 0; k < c_.size(); ++k) d[k] = std::conj(c_[k]);
  return AnalyticFunction(std::move(d), radius_);
}

bool AnalyticFunction::is_zero(double tol) const {
  for (const cplx& v : c_)
    if (std::abs(v) > tol) return false;
  return true;
}

double AnalyticFunction::imag_coeff_mass() const {
  double worst = 0.0;
  for (const cplx& v : c_) worst = std::max(worst, std::abs(v.imag()));
  return worst;
}

double AnalyticFunction::max_coeff_norm() const {
  double worst = 0.0;
  for (const cplx& v : c_) worst = std::max(worst, std::abs(v));
  return worst;
}

}  // namespace minkcmc
