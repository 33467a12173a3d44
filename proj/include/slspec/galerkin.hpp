#pragma once

#include "slspec/prufer.hpp"
#include "slspec/types.hpp"

namespace slspec {

/// Sine-basis truncation of the quadratic form t[y] = int y'^2 - int sigma
/// (y^2)', which realizes the operator without pointwise values of q.
/// Basis: sqrt(2/pi) sin(kx) (Dirichlet) or sqrt(2/pi) sin((k-1/2)x) (DN).
struct GalerkinMatrix {
  int N = 0;
  CMatrix entries;
  Bc bc = Bc::dirichlet;
  bool is_real = true;
};

/// A_{jk} = omega_j^2 delta_{jk} - int_0^pi sigma (phi_j phi_k)' dx, closed
/// form for fourier sigma, adaptive quadrature (<= 1e-11) otherwise.
GalerkinMatrix assemble(const SpectralProblem& p, int N);

/// Lowest n_keep eigenvalues (ascending by real part); requires n_keep <= N/2
/// (the upper half is truncation-polluted and discarded).
Spectrum eigen_solve(const GalerkinMatrix& m, int n_keep);

/// Doubles N from max(64, 4 n_max) until the first n_max eigenvalues move by
/// less than tol (relative to max(1,|lambda|)); N cap 4096.
Spectrum oracle_spectrum(const SpectralProblem& p, int n_max, Real tol,
                         int n_cap = 4096);

}  // namespace slspec
