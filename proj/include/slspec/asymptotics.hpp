#pragma once

#include <vector>

#include "slspec/exp_sum.hpp"
#include "slspec/prufer.hpp"
#include "slspec/sequence_space.hpp"
#include "slspec/types.hpp"

namespace slspec {

/// Interleaved remainder sequence of the two boundary-condition spectra:
/// s_{2j} = rho_j(D) - j, s_{2j-1} = rho_j(DN) - (j - 1/2), k = 1..2n.
struct RemainderSeq {
  CVector s_values;
  Real theta = 0.0;
};

RemainderSeq remainders(const Spectrum& specD, const Spectrum& specDN, Real theta);

/// Phi_k = s_k + (1/2) b_k: the nonlinear remainder of F(sigma) = -(1/2) T
/// sigma + Phi(sigma), evaluated coordinatewise on the stored prefix.
CVector phi_of_sigma(const PotentialSpec& sigma, const RemainderSeq& r);

struct PhiHatResult {
  Real norm = 0.0;
  Real tau = 0.0;
  int fit_lo = 0, fit_hi = 0;
  HatElement element;
};

/// hat-space norm of Phi at the smoothed index tau(theta); the least-squares
/// window used for the decomposition is part of the result.
PhiHatResult phi_hat_norm(const PotentialSpec& sigma, const RemainderSeq& r,
                          Real theta);

/// Residuals of the first-order expansion: alpha_{2k} = k^2 (s_{2k} - h1/(2k)
/// + a_{2k}/(4k)) and alpha_{2k-1} = k^2 (s_{2k-1} - g1/(2k-1) +
/// a_{2k-1}/(2(2k-1))), h1 = (sigma(pi)-sigma(0))/pi, g1 =
/// (-sigma(0)-sigma(pi))/pi, a_p = (2/pi) int q cos(pt). Interleaved output.
CVector thm41_alphas(const PotentialSpec& sigma, const Spectrum& specD,
                     const Spectrum& specDN);

/// S_n(pi, rho) of the successive-approximation series, by grid quadrature of
/// the sigma-rewritten layer recursion (each layer integrated by parts so only
/// sigma appears; boundary terms vanish). n <= 6.
Real S_quadrature(const PotentialSpec& sigma, Real rho, int n);

/// sign pattern: -1 for j = 0,1 (mod 4), +1 for j = 2,3 (mod 4).
inline int sign_pm(int j) { return (j % 4 == 0 || j % 4 == 1) ? -1 : 1; }

/// nu_{2s} = (2 rho)^{-2s} sin(rho x), nu_{2s+1} = (2 rho)^{-(2s+1)} cos(rho x).
Complex nu_eval(int j, Real x, Complex rho);

/// Symbolic f_{p,j} tables built from the integration-by-parts recurrence;
/// f[p][j] valid for 1 <= p <= m+1, 1 <= j <= m+1 (the j = m+1 column carries
/// the boundary coefficients the generic-rho expansion needs). Entry [1][j]
/// follows the closed form (sign_pm(j)) (sigma^{(j-1)}(x) -
/// (-1)^{j-1} sigma^{(j-1)}(0)); higher p by
/// f_{p,j} = (-1)^j int_0^x q f_{p-1,j-1}
///           - sum_{s=1}^{j-2} (+-)_s (+-)_j ([q f_{p-1,s}]^{(j-s-2)}(x)
///                                  - (-1)^{j-1} [q f_{p-1,s}]^{(j-s-2)}(0)).
std::vector<std::vector<ExpSum>> f_symbolic(const PotentialSpec& sigma, int m);

/// Grid tables of f_{p,j} for 1 <= p <= m+1, 1 <= j <= m.
struct FTable {
  int m = 0;
  Vector grid_x;
  std::vector<std::vector<Vector>> values;  // values[p-1][j-1] over grid
};

FTable f_recurrence(const PotentialSpec& sigma, int m, int grid_n = 257);

/// Evaluates sum_{p=1}^{m+1} S_p(pi, rho) through the nu_j f_{p,j} expansion
/// plus the explicit integral tails; error O(rho^{-m-2}).
Complex S_expansion(const PotentialSpec& sigma, Complex rho, int m);

struct RateFit {
  Real slope = 0.0;
  Real intercept = 0.0;
  int points = 0;
};

/// Least squares of log|x_k| against log k over k in [k_lo, k_hi] (1-based),
/// zero entries excluded.
RateFit rate_fit(const CVector& seq, int k_lo, int k_hi);

/// Expansion coefficients of the higher-order eigenvalue formulas.
struct ExpansionCoeffs {
  Vector h, g;        // fitted h_j, g_j, j = 0..s
  CVector a_l, b_l;   // trig coefficients of q^{(m-1)}
  int m = 0;
};

struct Thm51Report {
  int m = 0, s = 0;
  ExpansionCoeffs coeffs;
  Vector h_linear_validated, h_linear_printed;  // per j = 0..s
  Vector g_linear_validated, g_linear_printed;
  CVector alpha_even, alpha_odd;  // scaled residuals k^{m+1} * (...)
  Real alpha_even_incr_lo = 0.0, alpha_even_incr_hi = 0.0;  // l2 window increments
  Real alpha_odd_incr_lo = 0.0, alpha_odd_incr_hi = 0.0;
  bool residual_trend_ok = false;
  bool sign_flipped_vs_printed = true;
  int fit_lo = 0, fit_hi = 0;
};

/// Fits h_j, g_j by weighted least squares against the computed spectra after
/// subtracting the explicit trig term of the order-m formula; reports the
/// exact linear parts in both sign conventions and the scaled residuals.
Thm51Report thm51_check(const PotentialSpec& sigma, const Spectrum& specD,
                        const Spectrum& specDN, int m, int fit_lo = 10,
                        int fit_hi = 0);

/// sum_{k in [lo, hi]} k^{2 theta} |x_k|^2 (1-based, clamped to seq length).
Real weighted_window_sum(const CVector& seq, Real theta, int lo, int hi);

}  // namespace slspec
