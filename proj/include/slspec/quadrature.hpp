#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "slspec/types.hpp"

namespace slspec {

/// Adaptive Gauss-Kronrod 7/15 quadrature. Serves as the independent
/// numerical route wherever a closed form exists, and as the primary route
/// for piecewise potentials.
struct QuadratureOptions {
  Real abs_tol = 1e-12;
  Real rel_tol = 1e-12;
  int max_depth = 40;
};

namespace detail {
// 15-point Kronrod nodes on [-1,1] (symmetric; nonnegative half) and weights,
// with the embedded 7-point Gauss weights.
inline constexpr Real kKronrodNodes[8] = {
    0.0,
    0.2077849550078984676006894037732449,
    0.4058451513773971669066064120769615,
    0.5860872354676911302941448382587296,
    0.7415311855993944398638647732807884,
    0.8648644233597690727897127886409262,
    0.9491079123427585245261896840478513,
    0.9914553711208126392068546975263285};
inline constexpr Real kKronrodWeights[8] = {
    0.2094821410847278280129991748917143,
    0.2044329400752988924141619992346491,
    0.1903505780647854099132564024210137,
    0.1690047266392679028265834265985503,
    0.1406532597155259187451895905102379,
    0.1047900103222501838398763225415180,
    0.0630920926299785532907006631892043,
    0.0229353220105292249637320080589695};
inline constexpr Real kGaussWeights[4] = {
    0.4179591836734693877551020408163265,
    0.3818300505051189449503697754889751,
    0.2797053914892766679014677714237796,
    0.1294849661688696932706114326790820};
}  // namespace detail

template <typename F>
std::pair<Complex, Real> gauss_kronrod_panel(const F& f, Real a, Real b) {
  const Real h = 0.5 * (b - a), c = 0.5 * (a + b);
  Complex fc = f(c);
  Complex kron = detail::kKronrodWeights[0] * fc;
  Complex gauss = detail::kGaussWeights[0] * fc;
  for (int i = 1; i < 8; ++i) {
    Complex fp = f(c + h * detail::kKronrodNodes[i]);
    Complex fm = f(c - h * detail::kKronrodNodes[i]);
    kron += detail::kKronrodWeights[i] * (fp + fm);
    if (i % 2 == 0) gauss += detail::kGaussWeights[i / 2] * (fp + fm);
  }
  kron *= h;
  gauss *= h;
  return {kron, std::abs(kron - gauss)};
}

template <typename F>
Complex integrate_adaptive(const F& f, Real a, Real b,
                           const QuadratureOptions& opt = {}) {
  struct Panel { Real a, b; int depth; };
  std::vector<Panel> stack{{a, b, 0}};
  Complex total = 0.0;
  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    auto [val, err] = gauss_kronrod_panel(f, p.a, p.b);
    Real scale = (p.b - p.a) / (b - a);
    if (err <= opt.abs_tol * scale + opt.rel_tol * std::abs(val) ||
        p.depth >= opt.max_depth) {
      if (p.depth >= opt.max_depth && err > 1e4 * (opt.abs_tol * scale + opt.rel_tol * std::abs(val)))
        throw std::runtime_error("integrate_adaptive: panel refinement exhausted");
      total += val;
      continue;
    }
    Real m = 0.5 * (p.a + p.b);
    stack.push_back({p.a, m, p.depth + 1});
    stack.push_back({m, p.b, p.depth + 1});
  }
  return total;
}

/// Adaptive integration split at the given interior breakpoints (integrand
/// kinks/jumps land on panel boundaries, keeping the panel rule's order).
template <typename F>
Complex integrate_adaptive_split(const F& f, Real a, Real b,
                                 const std::vector<Real>& breaks,
                                 const QuadratureOptions& opt = {}) {
  Complex total = 0.0;
  Real lo = a;
  for (Real s : breaks) {
    if (s <= lo || s >= b) continue;
    total += integrate_adaptive(f, lo, s, opt);
    lo = s;
  }
  total += integrate_adaptive(f, lo, b, opt);
  return total;
}

/// Cumulative integral of samples y_i on a uniform grid: returns C with
/// C[0] = 0, C[i] ~= int_{x0}^{x0+i*h} y. Fourth order (cubic Newton-Cotes
/// across each step, one-sided cubics at the ends).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> cumulative_integral(
    const Eigen::MatrixBase<Derived>& y, Real h) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = y.size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> c(n);
  if (n < 4) throw std::invalid_argument("cumulative_integral: need >= 4 samples");
  c[0] = Scalar(0);
  c[1] = c[0] + (h / 24.0) * (9.0 * y[0] + 19.0 * y[1] - 5.0 * y[2] + y[3]);
  for (Eigen::Index i = 1; i + 2 < n; ++i)
    c[i + 1] = c[i] + (h / 24.0) * (-y[i - 1] + 13.0 * y[i] + 13.0 * y[i + 1] - y[i + 2]);
  c[n - 1] = c[n - 2] +
             (h / 24.0) * (9.0 * y[n - 1] + 19.0 * y[n - 2] - 5.0 * y[n - 3] + y[n - 4]);
  return c;
}

}  // namespace slspec
