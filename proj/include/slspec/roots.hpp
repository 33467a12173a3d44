#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "slspec/types.hpp"

namespace slspec {

struct RootResult {
  Real x = 0.0;
  Real fx = 0.0;
  int evals = 0;
};

/// Brent's method on a bracketing interval [a,b] with f(a)*f(b) <= 0.
/// Iterates until the interval collapses to xtol (absolute + relative) or
/// |f| <= ftol; always safe-guarded by bisection.
template <typename F>
RootResult brent(F f, Real a, Real b, Real fa, Real fb, Real xtol = 1e-14,
                 Real ftol = 0.0, int max_iter = 200) {
  if (fa == 0.0) return {a, fa, 0};
  if (fb == 0.0) return {b, fb, 0};
  if ((fa > 0) == (fb > 0))
    throw std::invalid_argument("brent: endpoints do not bracket a root");
  Real c = a, fc = fa, d = b - a, e = d;
  int evals = 0;
  for (int it = 0; it < max_iter; ++it) {
    if ((fb > 0) == (fc > 0)) { c = a; fc = fa; d = b - a; e = d; }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    Real tol1 = 2.0 * 1.1e-16 * std::abs(b) + 0.5 * xtol;
    Real xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0 || std::abs(fb) <= ftol)
      return {b, fb, evals};
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      Real s = fb / fa, p, q;
      if (a == c) {  // secant
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {  // inverse quadratic
        Real qq = fa / fc, r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm; e = d;
      }
    } else {
      d = xm; e = d;
    }
    a = b; fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
    fb = f(b);
    ++evals;
  }
  return {b, fb, evals};
}

/// Expand a bracket around x0 by widening symmetric windows; returns
/// (a, b, fa, fb) with a sign change, or throws after exhausting the scan.
template <typename F>
std::tuple<Real, Real, Real, Real> bracket_around(F f, Real x0, Real half_width,
                                                  Real lo_limit, Real hi_limit,
                                                  int max_expand = 60) {
  Real a = std::max(lo_limit, x0 - half_width);
  Real b = std::min(hi_limit, x0 + half_width);
  Real fa = f(a), fb = f(b);
  for (int i = 0; i < max_expand; ++i) {
    if ((fa > 0) != (fb > 0)) return {a, b, fa, fb};
    // scan outward, alternating, doubling the window
    Real w = (b - a);
    Real a2 = std::max(lo_limit, a - w);
    Real b2 = std::min(hi_limit, b + w);
    if (a2 == a && b2 == b) break;
    if (a2 < a) {
      Real fa2 = f(a2);
      if ((fa2 > 0) != (fa > 0)) return {a2, a, fa2, fa};
      a = a2; fa = fa2;
    }
    if (b2 > b) {
      Real fb2 = f(b2);
      if ((fb > 0) != (fb2 > 0)) return {b, b2, fb, fb2};
      b = b2; fb = fb2;
    }
  }
  throw std::runtime_error("bracket_around: no sign change found in scan range");
}

}  // namespace slspec
