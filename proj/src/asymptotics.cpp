#include "slspec/asymptotics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "slspec/quadrature.hpp"

namespace slspec {

RemainderSeq remainders(const Spectrum& specD, const Spectrum& specDN, Real theta) {
  if (specD.rho.size() != specDN.rho.size())
    throw std::invalid_argument("remainders: spectra must have equal length");
  const int n = static_cast<int>(specD.rho.size());
  RemainderSeq r;
  r.theta = theta;
  r.s_values.resize(2 * n);
  for (int j = 1; j <= n; ++j) {
    r.s_values[2 * j - 2] = specDN.rho[j - 1] - (Real(j) - 0.5);  // s_{2j-1}
    r.s_values[2 * j - 1] = specD.rho[j - 1] - Real(j);           // s_{2j}
  }
  return r;
}

CVector phi_of_sigma(const PotentialSpec& sigma, const RemainderSeq& r) {
  const int K = static_cast<int>(r.s_values.size());
  CVector b = apply_T(sigma, K).values;
  return r.s_values + 0.5 * b;
}

PhiHatResult phi_hat_norm(const PotentialSpec& sigma, const RemainderSeq& r,
                          Real theta) {
  PhiHatResult out;
  out.tau = tau_of_theta(theta);
  CVector phi = phi_of_sigma(sigma, r);
  auto [lo, hi] = default_fit_window(static_cast<int>(phi.size()));
  out.fit_lo = lo;
  out.fit_hi = hi;
  out.element = hat_decompose(phi, out.tau, lo, hi);
  out.norm = hat_norm(out.element);
  return out;
}

namespace {

// A piecewise spec with a single straight segment is sigma(x) = y0 + slope x:
// smooth, so the order-m machinery extends to it (q = 1 lives here).
bool is_single_segment(const PotentialSpec& p) {
  return !p.is_fourier() && p.knots_x().size() == 2;
}

Complex linear_slope(const PotentialSpec& p) {
  return (p.knots_y()[1] - p.knots_y()[0]) / kPi;
}

void require_smooth(const PotentialSpec& p, const char* who) {
  if (!p.is_fourier() && !is_single_segment(p))
    throw std::domain_error(std::string(who) +
                            ": fourier (or single-segment linear) sigma required");
}

// cosine / sine coefficients of sigma^{(order)}, order >= 1
CVector der_cos_coeffs(const PotentialSpec& sigma, int order, int K) {
  if (sigma.is_fourier()) return apply_cos_T(differentiate(sigma, order), K);
  CVector out = CVector::Zero(K);  // constant derivative: all cosine moments vanish
  return out;
}

CVector der_sin_coeffs(const PotentialSpec& sigma, int order, int K) {
  if (sigma.is_fourier()) return apply_T(differentiate(sigma, order), K).values;
  CVector out = CVector::Zero(K);
  if (order == 1) {
    Complex slope = linear_slope(sigma);
    for (int p = 1; p <= K; ++p)
      if (p % 2 == 1) out[p - 1] = slope * 4.0 / (kPi * Real(p));
  }
  return out;
}

std::pair<Complex, Complex> der_endpoints(const PotentialSpec& sigma, int order) {
  if (order == 0) return endpoints(sigma);
  if (sigma.is_fourier()) return endpoints(differentiate(sigma, order));
  if (order == 1) {
    Complex s = linear_slope(sigma);
    return {s, s};
  }
  return {Complex(0.0), Complex(0.0)};
}

ExpSum sigma_exp_sum_extended(const PotentialSpec& sigma) {
  if (sigma.is_fourier()) return sigma.to_exp_sum();
  return ExpSum::constant(sigma.knots_y()[0]) +
         ExpSum::monomial(linear_slope(sigma), 1);
}

}  // namespace

CVector thm41_alphas(const PotentialSpec& sigma, const Spectrum& specD,
                     const Spectrum& specDN) {
  require_smooth(sigma, "thm41_alphas");
  RemainderSeq r = remainders(specD, specDN, 1.0);
  const int n = static_cast<int>(specD.rho.size());
  CVector a = der_cos_coeffs(sigma, 1, 2 * n);
  auto [s0, spi] = endpoints(sigma);
  Complex h1 = (spi - s0) / kPi;
  Complex g1 = (-s0 - spi) / kPi;
  CVector alpha(2 * n);
  for (int k = 1; k <= n; ++k) {
    Real kk = Real(k) * Real(k);
    alpha[2 * k - 1] = kk * (r.s_values[2 * k - 1] - h1 / (2.0 * k) +
                             a[2 * k - 1] / (4.0 * k));
    alpha[2 * k - 2] = kk * (r.s_values[2 * k - 2] - g1 / (2.0 * k - 1.0) +
                             a[2 * k - 2] / (2.0 * (2.0 * k - 1.0)));
  }
  return alpha;
}

Real S_quadrature(const PotentialSpec& sigma, Real rho, int n) {
  if (n < 0 || n > 6) throw std::invalid_argument("S_quadrature: 0 <= n <= 6");
  if (n == 0) return std::sin(rho * kPi);
  if (sigma.complex_valued())
    throw std::domain_error("S_quadrature: real sigma required");
  Real kmax = 0.0;
  if (sigma.is_fourier())
    kmax = Real(std::max(sigma.cos_coeffs().size(), sigma.sin_coeffs().size()));
  Real prev = 0.0;
  bool have_prev = false;
  int N0 = 1;
  while (N0 + 1 < std::max(2048.0, 8.0 * (2.0 * std::abs(rho) + kmax))) N0 *= 2;
  for (int N = N0; N <= (1 << 21); N *= 2) {
    const int pts = N + 1;
    const Real h = kPi / Real(N);
    Eigen::ArrayXd x(pts), sig(pts), sn(pts), cs(pts);
    for (int i = 0; i < pts; ++i) {
      x[i] = h * i;
      sig[i] = sigma.eval(x[i]).real();
      sn[i] = std::sin(rho * x[i]);
      cs[i] = std::cos(rho * x[i]);
    }
    Eigen::ArrayXd S = sn, C = rho * cs;
    for (int level = 1; level <= n; ++level) {
      Eigen::ArrayXd p1 = cumulative_integral((sig * cs * S).matrix().eval(), h).array();
      Eigen::ArrayXd p2 = cumulative_integral((sig * sn * S).matrix().eval(), h).array();
      Eigen::ArrayXd q1 = cumulative_integral((sig * cs * C).matrix().eval(), h).array();
      Eigen::ArrayXd q2 = cumulative_integral((sig * sn * C).matrix().eval(), h).array();
      Eigen::ArrayXd Snew = cs * p1 + sn * p2 - (sn * q1 - cs * q2) / rho;
      Eigen::ArrayXd Cnew =
          sig * S - rho * (sn * p1 - cs * p2) - (cs * q1 + sn * q2);
      S = std::move(Snew);
      C = std::move(Cnew);
    }
    Real val = S[pts - 1];
    if (have_prev && std::abs(val - prev) <= 1e-11 + 1e-10 * std::abs(val))
      return val;
    prev = val;
    have_prev = true;
  }
  throw std::runtime_error("S_quadrature: grid refinement exhausted");
}

Complex nu_eval(int j, Real x, Complex rho) {
  const int s = j / 2;
  Complex scale = std::pow(2.0 * rho, -Real(j));
  if (j % 2 == 0) return scale * std::sin(rho * x);
  (void)s;
  return scale * std::cos(rho * x);
}

std::vector<std::vector<ExpSum>> f_symbolic(const PotentialSpec& sigma, int m) {
  require_smooth(sigma, "f_symbolic");
  if (m < 1) throw std::invalid_argument("f_symbolic: m >= 1 required");
  ExpSum sig = sigma_exp_sum_extended(sigma);
  ExpSum q = sig.derivative();
  // f[p][j], 1-based, p = 1..m+1, j = 1..m+1
  std::vector<std::vector<ExpSum>> f(m + 2, std::vector<ExpSum>(m + 2));
  for (int j = 1; j <= m + 1; ++j) {
    ExpSum d = sig.derivative(j - 1);
    ExpSum shifted = d - ExpSum::constant(Real(j % 2 == 1 ? 1 : -1) * d.eval(0.0));
    f[1][j] = Real(sign_pm(j)) * shifted;  // (-1)^{j-1} d(0) sign folded in
  }
  for (int p = 2; p <= m + 1; ++p) {
    for (int j = 1; j <= m + 1; ++j) {
      ExpSum acc;
      if (j >= 2) {
        ExpSum integrand = q * f[p - 1][j - 1];
        acc += Real(j % 2 == 0 ? 1 : -1) * integrand.antiderivative();
      }
      for (int s = 1; s <= j - 2; ++s) {
        ExpSum der = (q * f[p - 1][s]).derivative(j - s - 2);
        Complex at0 = der.eval(0.0);
        Real sgn = Real(sign_pm(s) * sign_pm(j));
        Real inner = Real(j % 2 == 1 ? 1 : -1);  // (-1)^{j-1}
        acc -= sgn * (der - ExpSum::constant(inner * at0));
      }
      f[p][j] = acc;
    }
  }
  return f;
}

FTable f_recurrence(const PotentialSpec& sigma, int m, int grid_n) {
  auto f = f_symbolic(sigma, m);
  FTable t;
  t.m = m;
  t.grid_x.resize(grid_n);
  for (int i = 0; i < grid_n; ++i) t.grid_x[i] = kPi * Real(i) / Real(grid_n - 1);
  t.values.assign(m + 1, std::vector<Vector>(m));
  for (int p = 1; p <= m + 1; ++p)
    for (int j = 1; j <= m; ++j) {
      Vector col(grid_n);
      for (int i = 0; i < grid_n; ++i) col[i] = f[p][j].eval(t.grid_x[i]).real();
      t.values[p - 1][j - 1] = col;
    }
  return t;
}

Complex S_expansion(const PotentialSpec& sigma, Complex rho, int m) {
  require_smooth(sigma, "S_expansion");
  auto f = f_symbolic(sigma, m);
  ExpSum sig = sigma_exp_sum_extended(sigma);
  ExpSum q = sig.derivative();
  Complex total = 0.0;
  // p = 1: nu_j f_{1,j}, j <= m, plus the exact integral tail with q^{(m-1)}
  for (int j = 1; j <= m; ++j) total += nu_eval(j, kPi, rho) * f[1][j].eval(kPi);
  {
    ExpSum qm1 = sig.derivative(m);  // q^{(m-1)} = sigma^{(m)}
    // nu_m(pi - 2t): frequency -2 rho, phase rho pi
    ExpSum kernel = (m % 2 == 0) ? ExpSum::sine(-2.0 * rho, rho * kPi)
                                 : ExpSum::cosine(-2.0 * rho, rho * kPi);
    Complex scale = std::pow(2.0 * rho, -Real(m));
    Complex tail = (kernel * qm1).prefix_integral(kPi) * scale;
    total += Real(sign_pm(m + 1)) * tail;
  }
  // p = 2..m+1: nu_j f_{p,j}, j <= m+1 (f_{p,1} vanishes for p >= 2)
  for (int p = 2; p <= m + 1; ++p)
    for (int j = 2; j <= m + 1; ++j)
      total += nu_eval(j, kPi, rho) * f[p][j].eval(kPi);
  // p = 2 integral tail: sum over s of the nu_{m+1}(x-2t) pieces
  {
    ExpSum kernel = ((m + 1) % 2 == 0) ? ExpSum::sine(-2.0 * rho, rho * kPi)
                                       : ExpSum::cosine(-2.0 * rho, rho * kPi);
    Complex scale = std::pow(2.0 * rho, -Real(m + 1));
    for (int s = 1; s <= m; ++s) {
      ExpSum g = (q * f[1][s]).derivative(m - s);
      Complex tail = (kernel * g).prefix_integral(kPi) * scale;
      total -= Real(sign_pm(s) * sign_pm(m + 2)) * tail;
    }
  }
  return total;
}

RateFit rate_fit(const CVector& seq, int k_lo, int k_hi) {
  if (k_hi - k_lo < 10) throw std::invalid_argument("rate_fit: k_hi - k_lo >= 10");
  k_hi = std::min<int>(k_hi, static_cast<int>(seq.size()));
  std::vector<Real> lx, ly;
  for (int k = k_lo; k <= k_hi; ++k) {
    Real a = std::abs(seq[k - 1]);
    if (a < 1e-300) continue;
    lx.push_back(std::log(Real(k)));
    ly.push_back(std::log(a));
  }
  if (lx.size() < 10)
    throw std::runtime_error("rate_fit: too few nonzero entries in window");
  const int n = static_cast<int>(lx.size());
  Real sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  RateFit r;
  r.points = n;
  Real denom = n * sxx - sx * sx;
  r.slope = (n * sxy - sx * sy) / denom;
  r.intercept = (sy - r.slope * sx) / n;
  return r;
}

Real weighted_window_sum(const CVector& seq, Real theta, int lo, int hi) {
  Real s = 0.0;
  hi = std::min<int>(hi, static_cast<int>(seq.size()));
  for (int k = std::max(1, lo); k <= hi; ++k)
    s += std::pow(Real(k), 2.0 * theta) * std::norm(seq[k - 1]);
  return s;
}

namespace {

Vector fit_expansion(const CVector& svals, const CVector& trig, int s_order,
                     bool even_side, int fit_lo, int fit_hi, int m,
                     CVector& alpha_out) {
  // rows weighted by k^{m+1} so the residual alpha is homoscedastic
  const int n = static_cast<int>(svals.size());
  fit_hi = std::min(fit_hi, n);
  std::vector<int> ks;
  for (int k = fit_lo; k <= fit_hi; ++k) ks.push_back(k);
  const int rows = static_cast<int>(ks.size());
  const int cols = s_order + 1;
  if (rows < cols + 2) throw std::runtime_error("thm51_check: fit window too small");
  Matrix A(rows, cols);
  Vector rhs(rows);
  for (int r = 0; r < rows; ++r) {
    int k = ks[r];
    Real base = even_side ? 2.0 * Real(k) : 2.0 * Real(k) - 1.0;
    Real w = std::pow(Real(k), Real(m + 1));
    for (int j = 0; j <= s_order; ++j)
      A(r, j) = w * std::pow(base, -Real(2 * j + 1));
    rhs[r] = w * (svals[k - 1].real() - trig[k - 1].real());
  }
  Vector h = A.colPivHouseholderQr().solve(rhs);
  alpha_out.resize(n);
  for (int k = 1; k <= n; ++k) {
    Real base = even_side ? 2.0 * Real(k) : 2.0 * Real(k) - 1.0;
    Complex fit = 0.0;
    for (int j = 0; j <= s_order; ++j) fit += h[j] * std::pow(base, -Real(2 * j + 1));
    alpha_out[k - 1] =
        (svals[k - 1] - trig[k - 1] - fit) * std::pow(Real(k), Real(m + 1));
  }
  return h;
}

}  // namespace

Thm51Report thm51_check(const PotentialSpec& sigma, const Spectrum& specD,
                        const Spectrum& specDN, int m, int fit_lo, int fit_hi) {
  require_smooth(sigma, "thm51_check");
  if (m < 1) throw std::invalid_argument("thm51_check: m >= 1 required");
  const int n = static_cast<int>(specD.rho.size());
  if (fit_hi <= 0) fit_hi = n;
  Thm51Report rep;
  rep.m = m;
  rep.s = m / 2;
  rep.fit_lo = fit_lo;
  rep.fit_hi = fit_hi;
  const int s = rep.s;
  const bool odd_m = (m % 2 == 1);

  RemainderSeq r = remainders(specD, specDN, Real(m));
  CVector sD(n), sDN(n);
  for (int k = 1; k <= n; ++k) {
    sD[k - 1] = r.s_values[2 * k - 1];
    sDN[k - 1] = r.s_values[2 * k - 2];
  }

  CVector a = der_cos_coeffs(sigma, m, 2 * n);  // coefficients of q^{(m-1)}
  CVector b = der_sin_coeffs(sigma, m, 2 * n);
  rep.coeffs.m = m;
  rep.coeffs.a_l = a;
  rep.coeffs.b_l = b;

  // explicit trig terms of (n23)/(n24), subtracted before the fit
  CVector trigD(n), trigDN(n);
  Real sgn = Real(s % 2 == 0 ? 1 : -1);  // (-1)^s
  for (int k = 1; k <= n; ++k) {
    Real dD = 2.0 * Real(k), dDN = 2.0 * Real(k) - 1.0;
    if (odd_m) {
      trigD[k - 1] = -sgn * a[2 * k - 1] / (2.0 * std::pow(dD, Real(2 * s + 1)));
      trigDN[k - 1] = -sgn * a[2 * k - 2] / (2.0 * std::pow(dDN, Real(2 * s + 1)));
    } else {
      trigD[k - 1] = -sgn * b[2 * k - 1] / (2.0 * std::pow(dD, Real(2 * s)));
      trigDN[k - 1] = -sgn * b[2 * k - 2] / (2.0 * std::pow(dDN, Real(2 * s)));
    }
  }

  rep.coeffs.h = fit_expansion(sD, trigD, s, true, fit_lo, fit_hi, m, rep.alpha_even);
  rep.coeffs.g = fit_expansion(sDN, trigDN, s, false, fit_lo, fit_hi, m, rep.alpha_odd);

  // linear parts, validated sign vs paper-printed sign
  rep.h_linear_validated.resize(s + 1);
  rep.h_linear_printed.resize(s + 1);
  rep.g_linear_validated.resize(s + 1);
  rep.g_linear_printed.resize(s + 1);
  for (int j = 0; j <= s; ++j) {
    auto [e0, epi] = der_endpoints(sigma, 2 * j);
    Real sj = Real(j % 2 == 0 ? 1 : -1);  // (-1)^j
    Real hv = sj * (epi - e0).real() / kPi;
    Real gv = -sj * (epi + e0).real() / kPi;
    bool vanishes = (!odd_m && j == s);  // h_s^0 = g_s^0 = 0 for even m
    rep.h_linear_validated[j] = vanishes ? 0.0 : hv;
    rep.g_linear_validated[j] = vanishes ? 0.0 : gv;
    rep.h_linear_printed[j] = vanishes ? 0.0 : -hv;
    rep.g_linear_printed[j] = vanishes ? 0.0 : -gv;
  }

  const int mid = fit_lo + (fit_hi - fit_lo) / 2;
  rep.alpha_even_incr_lo = weighted_window_sum(rep.alpha_even, 0.0, fit_lo, mid);
  rep.alpha_even_incr_hi = weighted_window_sum(rep.alpha_even, 0.0, mid + 1, fit_hi);
  rep.alpha_odd_incr_lo = weighted_window_sum(rep.alpha_odd, 0.0, fit_lo, mid);
  rep.alpha_odd_incr_hi = weighted_window_sum(rep.alpha_odd, 0.0, mid + 1, fit_hi);
  rep.residual_trend_ok = (rep.alpha_even_incr_hi <= rep.alpha_even_incr_lo * 1.5) &&
                          (rep.alpha_odd_incr_hi <= rep.alpha_odd_incr_lo * 1.5);
  return rep;
}

}  // namespace slspec
