#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/LU>

namespace minkcmc {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Vec3 = Eigen::Vector3d;

inline constexpr cplx kI{0.0, 1.0};

// Pauli-type basis of the ambient Lie algebra.  A vector [v1, v2, v3] in
// Minkowski 3-space (signature +,+,-) is identified with the matrix
// v1*E1 + v2*E2 + v3*E3 where <X,Y> = (1/2) tr(XY).
inline Mat2 basis_e1() {
  Mat2 m;
  m << 0, 1, 1, 0;
  return m;
}
inline Mat2 basis_e2() {
  Mat2 m;
  m << 0, kI, -kI, 0;
  return m;
}
inline Mat2 basis_e3() {
  Mat2 m;
  m << kI, 0, 0, -kI;
  return m;
}
inline Mat2 sigma3() {
  Mat2 m;
  m << 1, 0, 0, -1;
  return m;
}

// Thrown when an input file or configuration is malformed.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a numerical routine cannot meet its accuracy contract.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace minkcmc
