#pragma once

#include <complex>

#include <Eigen/Dense>

namespace dicke {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

enum class Axis { X, Y, Z };

inline constexpr double kPi = 3.14159265358979323846;

inline char axis_name(Axis a) {
  switch (a) {
  case Axis::X:
    return 'x';
  case Axis::Y:
    return 'y';
  case Axis::Z:
    return 'z';
  }
  return '?';
}

} // namespace dicke
