#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slspec/potential.hpp"
#include "slspec/types.hpp"

namespace slspec {

enum class Bc { dirichlet, dirichlet_neumann };

inline const char* bc_name(Bc bc) {
  return bc == Bc::dirichlet ? "dirichlet" : "dirichlet_neumann";
}

struct SpectralProblem {
  PotentialSpec sigma;
  Bc bc = Bc::dirichlet;
  Real abs_tol = 1e-11;
  Real rel_tol = 1e-11;
};

/// Ordered eigenvalue list. rho_n = sqrt(lambda_n) with arg in (-pi/2, pi/2].
struct Spectrum {
  std::vector<int> indices;  // consecutive from 1
  CVector rho;
  CVector lambda;
  Vector residuals;
  std::string method;  // prufer | quasi_derivative | galerkin
  Bc bc = Bc::dirichlet;
  int galerkin_N = 0;  // truncation actually used (galerkin method only)
};

/// Modified Prufer angle along [0, pi] at a fixed rho, with the polar
/// log-amplitude.
struct PruferAngle {
  Complex rho;
  Vector grid_x;
  CVector theta_values;
  CVector log_r_values;
};

/// Integrate theta' = rho + sigma sin 2theta + sigma^2 (1 - cos 2theta)/(2 rho),
/// theta(0) = 0, recording theta and log r on a uniform grid of grid_n points.
/// Real sigma, real rho != 0.
PruferAngle prufer_integrate(const PotentialSpec& sigma, Real rho,
                             Real abs_tol = 1e-11, Real rel_tol = 1e-11,
                             int grid_n = 513);

/// The smallness functional gating the contraction: max-of-prefix-integral
/// terms plus R^2 (1 + kappa + R kappa^2)/(2|rho|), kappa = cosh(2 pi nu).
/// Maxima are taken on a grid of >= 512 points, doubled until stable to 1e-8.
Real upsilon(const PotentialSpec& sigma, Complex rho, Real nu, Real R);

/// Admissibility threshold of Lemma-style contraction: eps (1+64 R^2 k^2)^{-2}
/// with eps = 2^{-7} exactly.
Real admissibility_bound(Real nu, Real R);

struct FixedPointOptions {
  Real stop_tol = 1e-12;
  int max_iter = 200;
  /// Run the iteration even when the admissibility inequality fails (the
  /// conservative bound is often violated while the iteration still
  /// contracts); non-convergence is still an error.
  bool force = false;
  int min_grid = 4097;
};

/// Successive-approximation solution theta = rho x + f of the angle integral
/// equation, iterating f_k = Phi(f_{k-1}) with Phi = Phi0+Phi1+Phi2+Phi3 and
/// f_0 = 0; stops when the sup change drops below stop_tol.
PruferAngle fixed_point_theta(const PotentialSpec& sigma, Complex rho, Real nu,
                              Real R, const FixedPointOptions& opt = {});

/// Quasi-derivative shooting: u' = sigma u + v, v' = -(lambda + sigma^2) u -
/// sigma v, u(0)=0, v(0)=1. Returns (u(pi), v(pi)): the Dirichlet and
/// Dirichlet-Neumann characteristic values.
std::pair<Real, Real> quasi_derivative_solve(const PotentialSpec& sigma, Real lambda,
                                             Real abs_tol = 1e-11,
                                             Real rel_tol = 1e-11);

/// Eigenvalues by modified-Prufer shooting (primary path; real sigma).
/// Solves theta(pi, rho_n) = pi n (Dirichlet) or pi (n - 1/2) (DN), bracketing
/// near the unperturbed index and widening outward; indices with lambda <= 0
/// fall back to characteristic-function root finding.
Spectrum eigenvalues(const SpectralProblem& p, int n_max, int jobs = 1);

/// Independent check: root-finding on the characteristic function u(pi,
/// lambda) (Dirichlet) or v(pi, lambda) (DN) by scanning and bisection.
Spectrum characteristic_spectrum(const SpectralProblem& p, int n_max, int jobs = 1);

/// True iff every sqrt-eigenvalue satisfies |Im rho| < 4 e^{2 pi R}.
bool strip_check(const Spectrum& s, Real R);

/// F(rho) = int_0^pi sigma(x) e^{i rho x} dx (closed form).
Complex fourier_F(const PotentialSpec& sigma, Complex rho);

}  // namespace slspec
