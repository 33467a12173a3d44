#pragma once

#include "slspec/asymptotics.hpp"
#include "slspec/prufer.hpp"
#include "slspec/types.hpp"

namespace slspec {

enum class Normalization { shooting, unit_l2 };

/// Shooting eigenfunction on a uniform grid, with the quasi-derivative
/// y^{[1]} = y' - sigma y alongside. unit_l2 scales to int y^2 = pi/2 with
/// y'(0) > 0 (the norm of sin kx, so the sin-comparison is well-posed).
struct Eigenfunction {
  int index = 0;
  Complex lambda;
  Vector grid_x;
  Vector y;
  Vector y_quasi;
  Real l2_square = 0.0;  // int_0^pi y^2 dx for the stored normalization
  Normalization normalization = Normalization::shooting;
};

/// Integrate the quasi-derivative system at the given eigenvalue.
Eigenfunction eigenfunction_at(const SpectralProblem& p, int k, Real lambda,
                               Normalization norm = Normalization::unit_l2,
                               int grid_n = 2049);

/// Convenience: solves the spectrum up to k first.
Eigenfunction eigenfunction(const SpectralProblem& p, int k,
                            Normalization norm = Normalization::unit_l2,
                            int grid_n = 2049);

/// Frechet derivative of lambda_k with respect to sigma in the direction h:
/// d lambda_k [h] = -2 (y' y, h) / (y^2, 1), plus the induced remainder
/// derivative d s_{2k} = (1/2) lambda^{-1/2} d lambda_k. Real sigma, h.
struct EigenvalueDerivative {
  Real dlambda = 0.0;
  Real ds = 0.0;
  Real lambda = 0.0;
  Real denom = 0.0;  // int y^2
};

EigenvalueDerivative eigenvalue_derivative(const PotentialSpec& sigma,
                                           const PotentialSpec& h, int k,
                                           Bc bc = Bc::dirichlet,
                                           Real abs_tol = 1e-12,
                                           Real rel_tol = 1e-12);

/// Central finite-difference validation at step t:
/// |dlambda[h] - (lambda(sigma+th) - lambda(sigma-th))/(2t)| / max(1,|dlambda|).
Real fd_check(const PotentialSpec& sigma, const PotentialSpec& h, int k, Real t,
              Bc bc = Bc::dirichlet);

/// max_x |y_k - sin(k x)| (or sin((k-1/2)x) for DN) under unit_l2
/// normalization, for each requested k.
std::vector<Real> asymptotic_gap(const SpectralProblem& p,
                                 const std::vector<int>& k_list,
                                 int grid_n = 4097);

/// Linear combination a*f + b*g of two fourier potentials (coefficient-wise).
PotentialSpec linear_combination(Complex a, const PotentialSpec& f, Complex b,
                                 const PotentialSpec& g);

}  // namespace slspec
