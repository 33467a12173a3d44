#pragma once

#include <complex>
#include <Eigen/Dense>

namespace slspec {

using Real = double;
using Complex = std::complex<Real>;

using Vector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr Real kPi = 3.14159265358979323846264338327950288;

/// Square root with the branch fixed so that arg(result) lies in (-pi/2, pi/2].
/// For real nonnegative input this is the usual root; for negative real input
/// the result is +i*sqrt(|x|).
inline Complex principal_sqrt(Complex z) {
  Complex r = std::sqrt(z);
  // std::sqrt maps arg into (-pi/2, pi/2] except for arg(z) == -pi exactly,
  // where it returns -i*sqrt(|z|); flip that edge onto the +i axis.
  if (r.real() == 0.0 && r.imag() < 0.0) return -r;
  if (r.real() < 0.0) return -r;
  return r;
}

}  // namespace slspec
