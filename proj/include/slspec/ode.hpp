#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "slspec/types.hpp"

namespace slspec {

/// Adaptive embedded Runge-Kutta-Fehlberg 7(8). Thirteen stages, classical
/// rational tableau; the convergence order is asserted by a test against a
/// closed-form solution.
struct OdeOptions {
  Real abs_tol = 1e-11;
  Real rel_tol = 1e-11;
  Real initial_step = 1e-2;
  Real min_step = 1e-14;
  long max_steps = 200000000;
};

namespace rkf78 {
inline constexpr int kStages = 13;
inline constexpr Real kC[kStages] = {
    0.0, 2.0 / 27.0, 1.0 / 9.0, 1.0 / 6.0, 5.0 / 12.0, 1.0 / 2.0, 5.0 / 6.0,
    1.0 / 6.0, 2.0 / 3.0, 1.0 / 3.0, 1.0, 0.0, 1.0};
// Lower-triangular A, row i holds i entries.
inline const std::vector<std::vector<Real>>& coeffs() {
  static const std::vector<std::vector<Real>> a = {
      {},
      {2.0 / 27.0},
      {1.0 / 36.0, 1.0 / 12.0},
      {1.0 / 24.0, 0.0, 1.0 / 8.0},
      {5.0 / 12.0, 0.0, -25.0 / 16.0, 25.0 / 16.0},
      {1.0 / 20.0, 0.0, 0.0, 1.0 / 4.0, 1.0 / 5.0},
      {-25.0 / 108.0, 0.0, 0.0, 125.0 / 108.0, -65.0 / 27.0, 125.0 / 54.0},
      {31.0 / 300.0, 0.0, 0.0, 0.0, 61.0 / 225.0, -2.0 / 9.0, 13.0 / 900.0},
      {2.0, 0.0, 0.0, -53.0 / 6.0, 704.0 / 45.0, -107.0 / 9.0, 67.0 / 90.0, 3.0},
      {-91.0 / 108.0, 0.0, 0.0, 23.0 / 108.0, -976.0 / 135.0, 311.0 / 54.0,
       -19.0 / 60.0, 17.0 / 6.0, -1.0 / 12.0},
      {2383.0 / 4100.0, 0.0, 0.0, -341.0 / 164.0, 4496.0 / 1025.0, -301.0 / 82.0,
       2133.0 / 4100.0, 45.0 / 82.0, 45.0 / 164.0, 18.0 / 41.0},
      {3.0 / 205.0, 0.0, 0.0, 0.0, 0.0, -6.0 / 41.0, -3.0 / 205.0, -3.0 / 41.0,
       3.0 / 41.0, 6.0 / 41.0, 0.0},
      {-1777.0 / 4100.0, 0.0, 0.0, -341.0 / 164.0, 4496.0 / 1025.0, -289.0 / 82.0,
       2193.0 / 4100.0, 51.0 / 82.0, 33.0 / 164.0, 12.0 / 41.0, 0.0, 1.0}};
  return a;
}
// Eighth-order solution weights.
inline constexpr Real kB8[kStages] = {
    0.0, 0.0, 0.0, 0.0, 0.0, 34.0 / 105.0, 9.0 / 35.0, 9.0 / 35.0,
    9.0 / 280.0, 9.0 / 280.0, 0.0, 41.0 / 840.0, 41.0 / 840.0};
// Error estimate: y8 - y7 = (41/840) h (k0 + k10 - k11 - k12).
}  // namespace rkf78

/// Integrate y' = f(x, y) from x0 to x1 (x1 > x0). State must support
/// Eigen-style arithmetic plus a norm via cwise abs; we use fixed-size Eigen
/// vectors and plain doubles through the Traits below.
template <typename State>
struct OdeTraits {
  static Real error_norm(const State& err, const State& y0, const State& y1,
                         Real atol, Real rtol) {
    Real m = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
      Real sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
      m = std::max(m, std::abs(err[i]) / sc);
    }
    return m;
  }
};

template <>
struct OdeTraits<Real> {
  static Real error_norm(Real err, Real y0, Real y1, Real atol, Real rtol) {
    return std::abs(err) / (atol + rtol * std::max(std::abs(y0), std::abs(y1)));
  }
};

template <typename State, typename RHS>
class Rkf78Integrator {
 public:
  Rkf78Integrator(RHS rhs, OdeOptions opt = {}) : rhs_(std::move(rhs)), opt_(opt) {}

  /// Integrate from (x, y) to x_end, mutating (x, y). Breakpoints inside the
  /// interval are honored as hard step boundaries (integrand kinks).
  void integrate(Real& x, State& y, Real x_end,
                 const std::vector<Real>& breaks = {}) const {
    Real lo = x;
    for (Real s : breaks) {
      if (s <= lo + 1e-15 || s >= x_end - 1e-15) continue;
      integrate_smooth(x, y, s);
      lo = s;
    }
    integrate_smooth(x, y, x_end);
  }

  /// Integrate and record the state at each requested point (sorted ascending,
  /// all >= x). Returns states aligned with points.
  std::vector<State> integrate_to_points(Real x, State y,
                                         const std::vector<Real>& points,
                                         const std::vector<Real>& breaks = {}) const {
    std::vector<State> out;
    out.reserve(points.size());
    for (Real p : points) {
      if (p > x) integrate(x, y, p, breaks);
      out.push_back(y);
    }
    return out;
  }

 private:
  // One RKF78 step from (x, y) with size h: fills the 8th-order result and
  // the embedded 7th-vs-8th error difference.
  void step(Real x, const State& y, Real h, State& y8, State& err) const {
    const auto& A = rkf78::coeffs();
    State k[rkf78::kStages];
    k[0] = rhs_(x, y);
    for (int i = 1; i < rkf78::kStages; ++i) {
      State yi = y;
      for (int j = 0; j < i; ++j)
        if (A[i][j] != 0.0) yi += (h * A[i][j]) * k[j];
      k[i] = rhs_(x + rkf78::kC[i] * h, yi);
    }
    y8 = y;
    for (int i = 0; i < rkf78::kStages; ++i)
      if (rkf78::kB8[i] != 0.0) y8 += (h * rkf78::kB8[i]) * k[i];
    err = (h * (41.0 / 840.0)) * (k[0] + k[10] - k[11] - k[12]);
  }

  // The Fehlberg embedded estimate cancels identically for right-hand sides
  // with weak y-dependence (pure-quadrature limit), so every acceptance is
  // verified by step doubling; the fine solution is the one propagated.
  void integrate_smooth(Real& x, State& y, Real x_end) const {
    if (x_end <= x) return;
    Real h = std::min(opt_.initial_step, x_end - x);
    long steps = 0;
    while (x < x_end - 1e-15 * (1.0 + std::abs(x_end))) {
      if (++steps > opt_.max_steps)
        throw std::runtime_error("ode: step budget exhausted");
      h = std::min(h, x_end - x);
      State y8, err;
      step(x, y, h, y8, err);
      Real en = OdeTraits<State>::error_norm(err, y, y8, opt_.abs_tol, opt_.rel_tol);
      if (en > 1.0) {
        h *= std::max(0.2, 0.9 * std::pow(en, -1.0 / 8.0));
        if (h < opt_.min_step) throw std::runtime_error("ode: step underflow");
        continue;
      }
      State ymid, yfine, e2;
      step(x, y, 0.5 * h, ymid, e2);
      step(x + 0.5 * h, ymid, 0.5 * h, yfine, e2);
      State rich = y8 - yfine;
      Real en2 =
          OdeTraits<State>::error_norm(rich, y, yfine, opt_.abs_tol, opt_.rel_tol);
      en = std::max(en, en2 * (256.0 / 255.0));
      if (en <= 1.0) {
        x += h;
        y = yfine;
        Real grow = (en > 0.0) ? 0.9 * std::pow(en, -1.0 / 8.0) : 5.0;
        h *= std::clamp(grow, 0.2, 5.0);
      } else {
        h *= std::max(0.2, 0.9 * std::pow(en, -1.0 / 8.0));
        if (h < opt_.min_step) throw std::runtime_error("ode: step underflow");
      }
    }
    x = x_end;
  }

  RHS rhs_;
  OdeOptions opt_;
};

template <typename State, typename RHS>
void ode_integrate(RHS rhs, Real& x, State& y, Real x_end, const OdeOptions& opt = {},
                   const std::vector<Real>& breaks = {}) {
  Rkf78Integrator<State, RHS> integ(std::move(rhs), opt);
  integ.integrate(x, y, x_end, breaks);
}

}  // namespace slspec
