#pragma once

#include <vector>

#include "slspec/potential.hpp"
#include "slspec/types.hpp"

namespace slspec {

/// Prefix of a weighted-l2 sequence: entries x_k for k = 1..K with
/// ||x||^2 = sum k^{2 theta} |x_k|^2 over the stored prefix.
struct WeightedSeq {
  CVector values;  // index k = i+1
  Real theta = 0.0;
};

/// Slowly decaying extension basis: e^{2s-1}_k = k^{-(2s-1)},
/// e^{2s}_k = (-1)^k k^{-(2s-1)}.
struct BasisSeq {
  int j = 1;
  Complex value_at(int k) const;
};

/// Element of the extended space: an l2^theta part plus coefficients on
/// e^1..e^{2m}, with ||.||^2 = ||l2_part||_theta^2 + sum |alpha|^2.
struct HatElement {
  WeightedSeq l2_part;
  CVector alphas;  // size 2m
  Real theta = 0.0;
  int m = 0;
};

/// 0 for theta < 1/2, else the unique m >= 1 with 2m - 3/2 <= theta < 2m + 1/2.
int m_of_theta(Real theta);

/// Smoothing gain of the remainder map: 2*theta for theta <= 1, theta + 1 above.
Real tau_of_theta(Real theta);

Real weighted_norm(const WeightedSeq& s);

/// First K sine coefficients b_k = (2/pi) int_0^pi sigma(x) sin(kx) dx.
/// Closed form for fourier specs, adaptive quadrature (<= 1e-10 per
/// coefficient) for piecewise ones.
WeightedSeq apply_T(const PotentialSpec& sigma, int K, Real theta = 0.0);

/// Cosine companion: a_k = (2/pi) int_0^pi sigma(x) cos(kx) dx, k >= 1.
CVector apply_cos_T(const PotentialSpec& sigma, int K);

/// Split a finite sequence into l2^theta part + span{e^1..e^{2m}} by weighted
/// least squares (weights k^{2 theta}) over the window [fit_lo, fit_hi].
HatElement hat_decompose(const CVector& s, Real theta, int fit_lo, int fit_hi);

/// Default fit window used when the caller does not choose one.
std::pair<int, int> default_fit_window(int K);

Real hat_norm(const HatElement& h);

/// Pointwise sine synthesis sum b_k sin(kx) (inverse of apply_T on sine
/// polynomials), used by the isomorphism tests.
Complex sine_synthesis(const CVector& b, Real x);

}  // namespace slspec
