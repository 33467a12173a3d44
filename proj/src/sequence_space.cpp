#include "slspec/sequence_space.hpp"

#include <cmath>
#include <stdexcept>

#include "slspec/quadrature.hpp"

namespace slspec {

Complex BasisSeq::value_at(int k) const {
  int s = (j + 1) / 2;           // e^{2s-1} or e^{2s}
  Real v = std::pow(Real(k), -Real(2 * s - 1));
  if (j % 2 == 0 && k % 2 == 1) v = -v;  // (-1)^k factor
  return v;
}

int m_of_theta(Real theta) {
  if (theta < 0.0) throw std::invalid_argument("m_of_theta: theta >= 0 required");
  if (theta < 0.5) return 0;
  // unique m >= 1 with 2m - 3/2 <= theta < 2m + 1/2
  int m = static_cast<int>(std::floor((theta + 1.5) / 2.0));
  if (!(2 * m - 1.5 <= theta && theta < 2 * m + 0.5)) {
    if (theta >= 2 * m + 0.5) ++m;
    else --m;
  }
  return m;
}

Real tau_of_theta(Real theta) {
  if (theta < 0.0) throw std::invalid_argument("tau_of_theta: theta >= 0 required");
  return theta <= 1.0 ? 2.0 * theta : theta + 1.0;
}

Real weighted_norm(const WeightedSeq& s) {
  Real sum = 0.0;
  for (Eigen::Index i = 0; i < s.values.size(); ++i)
    sum += std::pow(Real(i + 1), 2.0 * s.theta) * std::norm(s.values[i]);
  return std::sqrt(sum);
}

namespace {
// int_0^pi cos(j x) sin(k x) dx, j >= 0, k >= 1.
Real cos_sin_integral(int j, int k) {
  if (j == k) return 0.0;
  if (((j + k) % 2) == 0) return 0.0;
  return 2.0 * Real(k) / (Real(k) * Real(k) - Real(j) * Real(j));
}
// int_0^pi sin(j x) cos(k x) dx, j >= 1, k >= 0.
Real sin_cos_integral(int j, int k) { return cos_sin_integral(k, j); }
}  // namespace

WeightedSeq apply_T(const PotentialSpec& sigma, int K, Real theta) {
  if (K < 1) throw std::invalid_argument("apply_T: K >= 1 required");
  WeightedSeq out;
  out.theta = theta;
  out.values.resize(K);
  if (sigma.is_fourier()) {
    const auto& c = sigma.cos_coeffs();
    const auto& d = sigma.sin_coeffs();
    for (int k = 1; k <= K; ++k) {
      Complex b = sigma.c0() * cos_sin_integral(0, k);
      for (std::size_t j = 1; j <= c.size(); ++j)
        b += c[j - 1] * cos_sin_integral(static_cast<int>(j), k);
      if (k <= static_cast<int>(d.size())) b += d[k - 1] * (kPi / 2.0);
      out.values[k - 1] = b * (2.0 / kPi);
    }
    return out;
  }
  QuadratureOptions q;
  q.abs_tol = 1e-11;
  q.rel_tol = 1e-12;
  auto breaks = sigma.breakpoints();
  for (int k = 1; k <= K; ++k) {
    auto f = [&sigma, k](Real x) { return sigma.eval(x) * std::sin(Real(k) * x); };
    out.values[k - 1] = (2.0 / kPi) * integrate_adaptive_split(f, 0.0, kPi, breaks, q);
  }
  return out;
}

CVector apply_cos_T(const PotentialSpec& sigma, int K) {
  if (K < 1) throw std::invalid_argument("apply_cos_T: K >= 1 required");
  CVector out(K);
  if (sigma.is_fourier()) {
    const auto& c = sigma.cos_coeffs();
    const auto& d = sigma.sin_coeffs();
    for (int k = 1; k <= K; ++k) {
      Complex a = 0.0;
      if (k <= static_cast<int>(c.size())) a += c[k - 1] * (kPi / 2.0);
      for (std::size_t j = 1; j <= d.size(); ++j)
        a += d[j - 1] * sin_cos_integral(static_cast<int>(j), k);
      out[k - 1] = a * (2.0 / kPi);
    }
    return out;
  }
  QuadratureOptions q;
  q.abs_tol = 1e-11;
  q.rel_tol = 1e-12;
  auto breaks = sigma.breakpoints();
  for (int k = 1; k <= K; ++k) {
    auto f = [&sigma, k](Real x) { return sigma.eval(x) * std::cos(Real(k) * x); };
    out[k - 1] = (2.0 / kPi) * integrate_adaptive_split(f, 0.0, kPi, breaks, q);
  }
  return out;
}

std::pair<int, int> default_fit_window(int K) {
  return {std::max(10, K / 4), K};
}

HatElement hat_decompose(const CVector& s, Real theta, int fit_lo, int fit_hi) {
  const int K = static_cast<int>(s.size());
  const int m = m_of_theta(theta);
  HatElement out;
  out.theta = theta;
  out.m = m;
  out.alphas = CVector::Zero(2 * m);
  if (m == 0) {
    out.l2_part = WeightedSeq{s, theta};
    return out;
  }
  if (!(1 <= fit_lo && fit_lo < fit_hi && fit_hi <= K))
    throw std::invalid_argument("hat_decompose: bad fit window");
  if (fit_hi - fit_lo + 1 < 2 * m)
    throw std::invalid_argument("hat_decompose: window smaller than unknown count");
  const int rows = fit_hi - fit_lo + 1;
  CMatrix A(rows, 2 * m);
  CVector rhs(rows);
  for (int r = 0; r < rows; ++r) {
    int k = fit_lo + r;
    Real w = std::pow(Real(k), theta);  // sqrt of weight k^{2 theta}
    for (int j = 1; j <= 2 * m; ++j)
      A(r, j - 1) = w * BasisSeq{j}.value_at(k);
    rhs[r] = w * s[k - 1];
  }
  CVector alpha = (A.adjoint() * A).ldlt().solve(A.adjoint() * rhs);
  out.alphas = alpha;
  CVector resid = s;
  for (int k = 1; k <= K; ++k)
    for (int j = 1; j <= 2 * m; ++j)
      resid[k - 1] -= alpha[j - 1] * BasisSeq{j}.value_at(k);
  out.l2_part = WeightedSeq{resid, theta};
  return out;
}

Real hat_norm(const HatElement& h) {
  Real s = weighted_norm(h.l2_part);
  return std::sqrt(s * s + h.alphas.squaredNorm());
}

Complex sine_synthesis(const CVector& b, Real x) {
  Complex s = 0.0;
  for (Eigen::Index k = 0; k < b.size(); ++k)
    s += b[k] * std::sin(Real(k + 1) * x);
  return s;
}

}  // namespace slspec
