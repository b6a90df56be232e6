#include "minkcmc/bjorling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace minkcmc {

namespace {

constexpr int kSampleCount = 129;
constexpr double kRelTol = 1e-10;

AnalyticFunction real_poly(const std::vector<double>& coeffs) {
  std::vector<cplx> c(coeffs.begin(), coeffs.end());
  return AnalyticFunction(std::move(c));
}

double sup_on(const AnalyticFunction& f, const Interval& J) {
  double m = 0.0;
  for (int k = 0; k < kSampleCount; ++k) {
    double x = J.lo + J.length() * k / (kSampleCount - 1);
    m = std::max(m, std::abs(f(x)));
  }
  return m;
}

void require_in_interval(const Interval& J, double x, const char* who) {
  if (!J.contains(x)) throw std::domain_error(std::string(who) + ": point outside the data interval");
}

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
// computed once by Newton iteration on the Legendre polynomial.
struct QuadRule {
  std::vector<double> node, weight;
};

QuadRule legendre_rule(int n) {
  QuadRule q;
  q.node.resize(n);
  q.weight.resize(n);
  for (int k = 0; k < (n + 1) / 2; ++k) {
    double x = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    q.node[k] = -x;
    q.node[n - 1 - k] = x;
    q.weight[k] = q.weight[n - 1 - k] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return q;
}

const QuadRule& panel_rule() {
  static const QuadRule q = legendre_rule(16);
  return q;
}

}  // namespace

BjorlingData BjorlingData::make(const std::vector<double>& s_coeffs,
                                const std::vector<double>& t_coeffs,
                                const std::vector<double>& theta_coeffs, double H,
                                Interval J) {
  if (!(H > 0.0)) throw std::invalid_argument("BjorlingData: H must be positive");
  if (!(J.lo < J.hi)) throw std::invalid_argument("BjorlingData: empty interval");
  if (!J.contains(0.0)) throw std::invalid_argument("BjorlingData: interval must contain 0");
  BjorlingData d;
  d.s = real_poly(s_coeffs);
  d.t = real_poly(t_coeffs);
  d.theta = real_poly(theta_coeffs);
  d.H = H;
  d.J = J;
  const double tol = kRelTol * d.data_scale();
  for (int k = 0; k < kSampleCount; ++k) {
    double x = J.lo + J.length() * k / (kSampleCount - 1);
    if (std::abs(d.s(x)) <= tol && std::abs(d.t(x)) <= tol)
      throw std::invalid_argument("BjorlingData: s and t vanish simultaneously on the interval");
  }
  return d;
}

double BjorlingData::data_scale() const {
  return std::max({sup_on(s, J), sup_on(t, J), 1.0});
}

AnalyticFunction BjorlingData::theta_normalized() const {
  std::vector<cplx> c = theta.coeffs();
  if (c.empty()) c.emplace_back(0.0);
  c[0] -= theta(0.0) + std::numbers::pi / 2;
  return AnalyticFunction(std::move(c));
}

double BjorlingData::frame_rotation_angle() const {
  return theta(0.0).real() + std::numbers::pi / 2;
}

std::string_view to_string(SingularityType t) {
  switch (t) {
    case SingularityType::CuspidalEdge: return "CuspidalEdge";
    case SingularityType::Swallowtail: return "Swallowtail";
    case SingularityType::CuspidalCrossCap: return "CuspidalCrossCap";
    case SingularityType::Degenerate: return "Degenerate";
    case SingularityType::ConePointCandidate: return "ConePointCandidate";
    case SingularityType::Unclassified: return "Unclassified";
  }
  return "Unclassified";
}

SingularPotential data_to_singular_potential(const BjorlingData& d) {
  const double tol = kRelTol * d.data_scale();
  for (int k = 0; k < kSampleCount; ++k) {
    double x = d.J.lo + d.J.length() * k / (kSampleCount - 1);
    if (std::abs(d.s(x)) <= tol && std::abs(d.t(x)) <= tol)
      throw std::invalid_argument(
          "data_to_singular_potential: s and t vanish simultaneously on the interval");
  }
  const std::vector<cplx>& sc = d.s.coeffs();
  const std::vector<cplx>& tc = d.t.coeffs();
  std::vector<cplx> thp = d.theta.derivative().coeffs();
  size_t n = std::max({sc.size(), tc.size(), thp.size(), size_t{1}});
  std::vector<cplx> ac(n, 0.0), bc(n, 0.0), rc(n, 0.0);
  for (size_t k = 0; k < n; ++k) {
    cplx sk = k < sc.size() ? sc[k] : 0.0;
    cplx tk = k < tc.size() ? tc[k] : 0.0;
    cplx pk = k < thp.size() ? thp[k] : 0.0;
    ac[k] = d.H * (-sk + kI * tk) / 4.0;
    bc[k] = kI * d.H * tk / 2.0;
    rc[k] = (pk + d.H * tk) / 2.0;
  }
  return SingularPotential::make(AnalyticFunction(std::move(ac)),
                                 AnalyticFunction(std::move(bc)),
                                 AnalyticFunction(std::move(rc)));
}

SingularityType classify_singularity(const BjorlingData& d, double x0) {
  require_in_interval(d.J, x0, "classify_singularity");
  const double tol = kRelTol * d.data_scale();
  if (std::abs(d.theta.derivative()(x0)) <= tol) return SingularityType::Degenerate;
  if (sup_on(d.s, d.J) <= tol) return SingularityType::ConePointCandidate;
  const double sv = std::abs(d.s(x0));
  const double tv = std::abs(d.t(x0));
  if (sv > tol && tv > tol) return SingularityType::CuspidalEdge;
  if (sv <= tol && tv > tol && std::abs(d.s.derivative()(x0)) > tol)
    return SingularityType::Swallowtail;
  if (tv <= tol && sv > tol && std::abs(d.t.derivative()(x0)) > tol)
    return SingularityType::CuspidalCrossCap;
  return SingularityType::Unclassified;
}

Eigen::Vector2d null_direction(const BjorlingData& d, double x) {
  require_in_interval(d.J, x, "null_direction");
  return Eigen::Vector2d(d.t(x).real(), -d.s(x).real());
}

Mat2 singular_frame_on_curve(const BjorlingData& d, double x) {
  require_in_interval(d.J, x, "singular_frame_on_curve");
  const AnalyticFunction th = d.theta_normalized();
  const double phase = (2.0 * th(x).real() + std::numbers::pi) / 4.0;
  Mat2 f = Mat2::Zero();
  f(0, 0) = std::exp(kI * phase);
  f(1, 1) = std::exp(-kI * phase);
  return f;
}

Vec3 reconstruct_curve(const BjorlingData& d, double x) {
  require_in_interval(d.J, x, "reconstruct_curve");
  const QuadRule& q = panel_rule();
  const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(x) / 0.25)));
  Vec3 acc = Vec3::Zero();
  for (int p = 0; p < panels; ++p) {
    const double a = x * p / panels;
    const double b = x * (p + 1) / panels;
    const double mid = (a + b) / 2, half = (b - a) / 2;
    for (size_t k = 0; k < q.node.size(); ++k) {
      const double u = mid + half * q.node[k];
      const double sv = d.s(u).real();
      const double th = d.theta(u).real();
      acc += (q.weight[k] * half * sv) * Vec3(std::cos(th), std::sin(th), 1.0);
    }
  }
  return acc;
}

}  // namespace minkcmc
