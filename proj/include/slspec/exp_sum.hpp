#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "slspec/types.hpp"

namespace slspec {

/// Finite sums  f(x) = sum_i  c_i * x^{p_i} * exp(mu_i * x)  with complex
/// coefficients and exponents. Closed under products, differentiation and
/// (for exponents bounded away from zero) antidifferentiation, which makes
/// them an exact calculus for products of trigonometric polynomials with
/// oscillatory kernels exp(i*rho*x) on [0, pi].
class ExpSum {
 public:
  struct Term {
    Complex coeff;
    int pow = 0;      // nonnegative
    Complex mu;       // exponent: c * x^pow * exp(mu * x)
  };

  ExpSum() = default;
  explicit ExpSum(std::vector<Term> terms) : terms_(std::move(terms)) { normalize(); }

  static ExpSum zero() { return ExpSum(); }
  static ExpSum constant(Complex c) {
    if (c == Complex(0.0)) return ExpSum();
    return ExpSum({Term{c, 0, Complex(0.0)}});
  }
  /// c * exp(mu x)
  static ExpSum exponential(Complex c, Complex mu) { return ExpSum({Term{c, 0, mu}}); }
  /// cos(w x) = (e^{iwx} + e^{-iwx})/2
  static ExpSum cosine(Real w) {
    const Complex i(0.0, 1.0);
    return ExpSum({Term{0.5, 0, i * w}, Term{0.5, 0, -i * w}});
  }
  /// sin(w x) = (e^{iwx} - e^{-iwx})/(2i)
  static ExpSum sine(Real w) {
    const Complex i(0.0, 1.0);
    return ExpSum({Term{Complex(0.0, -0.5), 0, i * w}, Term{Complex(0.0, 0.5), 0, -i * w}});
  }
  /// cos(w x + phase), sin(w x + phase) for complex frequency w.
  static ExpSum cosine(Complex w, Complex phase = 0.0) {
    const Complex i(0.0, 1.0);
    return ExpSum({Term{0.5 * std::exp(i * phase), 0, i * w},
                   Term{0.5 * std::exp(-i * phase), 0, -i * w}});
  }
  static ExpSum sine(Complex w, Complex phase = 0.0) {
    const Complex i(0.0, 1.0);
    return ExpSum({Term{Complex(0.0, -0.5) * std::exp(i * phase), 0, i * w},
                   Term{Complex(0.0, 0.5) * std::exp(-i * phase), 0, -i * w}});
  }
  /// x^p
  static ExpSum monomial(Complex c, int p) {
    if (c == Complex(0.0)) return ExpSum();
    return ExpSum({Term{c, p, Complex(0.0)}});
  }

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Complex eval(Real x) const {
    Complex s = 0.0;
    for (const Term& t : terms_) s += t.coeff * powi(x, t.pow) * std::exp(t.mu * x);
    return s;
  }

  ExpSum& operator+=(const ExpSum& o) {
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    normalize();
    return *this;
  }
  ExpSum& operator-=(const ExpSum& o) { return *this += (o * Complex(-1.0)); }
  ExpSum operator+(const ExpSum& o) const { ExpSum r = *this; r += o; return r; }
  ExpSum operator-(const ExpSum& o) const { ExpSum r = *this; r -= o; return r; }
  ExpSum operator*(Complex c) const {
    ExpSum r = *this;
    for (Term& t : r.terms_) t.coeff *= c;
    r.normalize();
    return r;
  }
  ExpSum operator*(const ExpSum& o) const {
    std::vector<Term> out;
    out.reserve(terms_.size() * o.terms_.size());
    for (const Term& a : terms_)
      for (const Term& b : o.terms_)
        out.push_back(Term{a.coeff * b.coeff, a.pow + b.pow, a.mu + b.mu});
    return ExpSum(std::move(out));
  }

  ExpSum derivative() const {
    std::vector<Term> out;
    out.reserve(2 * terms_.size());
    for (const Term& t : terms_) {
      if (t.pow > 0) out.push_back(Term{t.coeff * Real(t.pow), t.pow - 1, t.mu});
      if (t.mu != Complex(0.0)) out.push_back(Term{t.coeff * t.mu, t.pow, t.mu});
    }
    return ExpSum(std::move(out));
  }

  ExpSum derivative(int n) const {
    ExpSum r = *this;
    for (int i = 0; i < n; ++i) r = r.derivative();
    return r;
  }

  /// F(x) = int_0^x f(t) dt as an ExpSum. Requires every nonzero exponent to
  /// satisfy |mu| >= 0.5: the closed form carries 1/mu coefficients that
  /// cancel against the constant term, so small nonzero exponents must go
  /// through prefix_integral() instead (it has a series branch).
  ExpSum antiderivative() const {
    std::vector<Term> out;
    for (const Term& t : terms_) {
      if (t.mu == Complex(0.0)) {
        out.push_back(Term{t.coeff / Real(t.pow + 1), t.pow + 1, Complex(0.0)});
        continue;
      }
      if (std::abs(t.mu) < 0.5)
        throw std::domain_error("ExpSum::antiderivative: exponent too close to zero; "
                                "use prefix_integral");
      // int_0^x t^p e^{mu t} dt = x^p e^{mu x}/mu - (p/mu) * I_{p-1}
      Complex c = t.coeff;
      Complex accum_const = 0.0;  // value of the antiderivative pieces at 0
      int p = t.pow;
      while (true) {
        out.push_back(Term{c / t.mu, p, t.mu});
        if (p == 0) { accum_const += c / t.mu; break; }
        c *= -Real(p) / t.mu;
        --p;
      }
      out.push_back(Term{-accum_const, 0, Complex(0.0)});
    }
    return ExpSum(std::move(out));
  }

  /// int_0^x f(t) dt evaluated at a point, robust for all exponents
  /// (series branch when |mu*x| is small).
  Complex prefix_integral(Real x) const {
    Complex s = 0.0;
    for (const Term& t : terms_) s += t.coeff * term_prefix_integral(t.pow, t.mu, x);
    return s;
  }

  /// int_0^{pi} f(t) dt
  Complex integral_0_pi() const { return prefix_integral(kPi); }

  Real max_abs_coeff() const {
    Real m = 0.0;
    for (const Term& t : terms_) m = std::max(m, std::abs(t.coeff));
    return m;
  }

  /// int_0^x t^p e^{mu t} dt for a single term.
  static Complex term_prefix_integral(int p, Complex mu, Real x) {
    if (mu == Complex(0.0)) return powi(x, p + 1) / Real(p + 1);
    if (std::abs(mu) * std::abs(x) < 0.5) {
      // x^{p+1} * sum_n (mu x)^n / (n! (p+n+1))
      Complex z = mu * x, zn = 1.0;
      Complex s = 0.0;
      Real fact = 1.0;
      for (int n = 0; n < 30; ++n) {
        if (n > 0) { fact *= Real(n); zn *= z; }
        Complex add = zn / (fact * Real(p + n + 1));
        s += add;
        if (std::abs(add) < 1e-20 * (1.0 + std::abs(s))) break;
      }
      return powi(x, p + 1) * s;
    }
    // downward recurrence I_p = x^p e^{mu x}/mu - (p/mu) I_{p-1}
    Complex e = std::exp(mu * x);
    Complex I = (e - 1.0) / mu;
    for (int q = 1; q <= p; ++q) I = powi(x, q) * e / mu - Real(q) * I / mu;
    return I;
  }

 private:
  static Complex powi(Real x, int p) {
    Complex r = 1.0;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
  }

  void normalize() {
    if (terms_.empty()) return;
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
      if (a.pow != b.pow) return a.pow < b.pow;
      if (a.mu.real() != b.mu.real()) return a.mu.real() < b.mu.real();
      return a.mu.imag() < b.mu.imag();
    });
    std::vector<Term> merged;
    merged.reserve(terms_.size());
    for (const Term& t : terms_) {
      if (!merged.empty()) {
        Term& last = merged.back();
        if (last.pow == t.pow &&
            std::abs(last.mu - t.mu) <= 1e-12 * (1.0 + std::abs(t.mu))) {
          last.coeff += t.coeff;
          continue;
        }
      }
      merged.push_back(t);
    }
    std::vector<Term> pruned;
    pruned.reserve(merged.size());
    for (const Term& t : merged)
      if (std::abs(t.coeff) > 1e-300) pruned.push_back(t);
    terms_ = std::move(pruned);
  }

  std::vector<Term> terms_;
};

inline ExpSum operator*(Complex c, const ExpSum& s) { return s * c; }

}  // namespace slspec
