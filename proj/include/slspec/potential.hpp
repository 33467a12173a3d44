#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slspec/exp_sum.hpp"
#include "slspec/types.hpp"

namespace slspec {

/// theta >= 0 indexing the Sobolev scale: sigma in W_2^theta, q = sigma' in
/// W_2^{theta-1}.
struct SobolevIndex {
  Real theta = 0.0;
};

/// The antiderivative sigma of the potential (q = sigma' may be a
/// distribution and is never stored pointwise). Either a finite trigonometric
/// series c0 + sum c_k cos kx + sum d_k sin kx, or a piecewise-linear table.
/// Piecewise knots are non-decreasing; a repeated abscissa encodes a jump of
/// sigma (a delta component of q), and evaluation at the jump returns the
/// right limit.
class PotentialSpec {
 public:
  enum class Kind { fourier, piecewise_linear };

  PotentialSpec() : kind_(Kind::fourier), c0_(0.0) {}

  static PotentialSpec zero() { return PotentialSpec(); }

  static PotentialSpec fourier(Complex c0, std::vector<Complex> cos_coeffs,
                               std::vector<Complex> sin_coeffs = {});
  /// Convenience: a single cosine / sine term  c * cos(kx),  c * sin(kx).
  static PotentialSpec cosine_term(int k, Complex c);
  static PotentialSpec sine_term(int k, Complex c);
  static PotentialSpec piecewise_linear(std::vector<Real> knots_x,
                                        std::vector<Complex> knots_y);
  /// sigma(x) = x - pi, the antiderivative of q = 1 with sigma(pi) = 0.
  static PotentialSpec linear_ramp(Real slope = 1.0);
  /// sigma = c * Heaviside(x - x0): q = c * delta_{x0}.
  static PotentialSpec heaviside_jump(Real x0, Complex c);

  Kind kind() const { return kind_; }
  bool is_fourier() const { return kind_ == Kind::fourier; }
  bool complex_valued() const { return complex_valued_; }

  Complex c0() const { return c0_; }
  const std::vector<Complex>& cos_coeffs() const { return cos_; }
  const std::vector<Complex>& sin_coeffs() const { return sin_; }
  const std::vector<Real>& knots_x() const { return kx_; }
  const std::vector<Complex>& knots_y() const { return ky_; }

  /// Interior breakpoints (piecewise knots) that integrators must not step
  /// across. Empty for fourier specs.
  std::vector<Real> breakpoints() const;

  Complex eval(Real x) const;
  Real eval_real(Real x) const;

  /// sigma as an exponential sum (fourier kind only).
  ExpSum to_exp_sum() const;

  /// L2(0,pi) norm of sigma.
  Real l2_norm() const;

  bool operator==(const PotentialSpec& o) const = default;

 private:
  Kind kind_;
  bool complex_valued_ = false;
  Complex c0_{0.0};
  std::vector<Complex> cos_, sin_;
  std::vector<Real> kx_;
  std::vector<Complex> ky_;

  void refresh_complex_flag();
};

/// sigma(x); errors if x is outside [0, pi].
Complex eval_sigma(const PotentialSpec& p, Real x);

/// Declared norm convention: sqrt(|c0|^2 + sum_k (1 + k^{2 theta}) (|c_k|^2 +
/// |d_k|^2)). Fourier kind only.
Real sobolev_norm(const PotentialSpec& p, SobolevIndex theta);

/// Termwise spectral derivative of order n >= 1 (fourier kind only).
PotentialSpec differentiate(const PotentialSpec& p, int n);

/// Draw sigma from the ball ||sigma||_theta <= R: cosine coefficients
/// g_k k^{-theta-1/2-decay_margin} with g_k uniform in [-1,1], rescaled so the
/// norm equals R*u with u uniform in (1/2, 1]. Deterministic in seed.
PotentialSpec sample_ball(SobolevIndex theta, Real R, Real decay_margin, int K,
                          std::uint64_t seed);

/// (sigma(0), sigma(pi)).
std::pair<Complex, Complex> endpoints(const PotentialSpec& p);

/// int_0^x sigma(t) e^{mu t} dt, exact for both kinds (per-segment closed
/// forms for piecewise sigma).
Complex sigma_exp_integral(const PotentialSpec& p, Complex mu, Real x);

/// Same for sigma^2.
Complex sigma2_exp_integral(const PotentialSpec& p, Complex mu, Real x);

/// Fast pointwise evaluator for the real-valued case (used in ODE right-hand
/// sides). Falls back to complex evaluation being invalid; callers must check
/// complex_valued() first.
class RealPotentialEvaluator {
 public:
  explicit RealPotentialEvaluator(const PotentialSpec& p);
  Real operator()(Real x) const;

 private:
  bool fourier_;
  Real c0_ = 0.0;
  std::vector<Complex> w_;  // c_k - i d_k; sigma = c0 + sum Re(w_k e^{ikx})
  std::vector<Real> kx_;
  std::vector<Real> ky_;
};

}  // namespace slspec
