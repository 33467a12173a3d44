#include "slspec/potential.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace slspec {

namespace {
bool all_real(const std::vector<Complex>& v) {
  for (const Complex& c : v)
    if (c.imag() != 0.0) return false;
  return true;
}
}  // namespace

void PotentialSpec::refresh_complex_flag() {
  complex_valued_ = !(c0_.imag() == 0.0 && all_real(cos_) && all_real(sin_) &&
                      all_real(ky_));
}

PotentialSpec PotentialSpec::fourier(Complex c0, std::vector<Complex> cos_coeffs,
                                     std::vector<Complex> sin_coeffs) {
  PotentialSpec p;
  p.kind_ = Kind::fourier;
  p.c0_ = c0;
  p.cos_ = std::move(cos_coeffs);
  p.sin_ = std::move(sin_coeffs);
  p.refresh_complex_flag();
  return p;
}

PotentialSpec PotentialSpec::cosine_term(int k, Complex c) {
  std::vector<Complex> cc(static_cast<std::size_t>(k), Complex(0.0));
  cc[k - 1] = c;
  return fourier(0.0, std::move(cc));
}

PotentialSpec PotentialSpec::sine_term(int k, Complex c) {
  std::vector<Complex> ss(static_cast<std::size_t>(k), Complex(0.0));
  ss[k - 1] = c;
  return fourier(0.0, {}, std::move(ss));
}

PotentialSpec PotentialSpec::piecewise_linear(std::vector<Real> knots_x,
                                              std::vector<Complex> knots_y) {
  if (knots_x.size() != knots_y.size() || knots_x.size() < 2)
    throw std::invalid_argument("piecewise_linear: need matching lists, >= 2 knots");
  if (knots_x.front() != 0.0 || std::abs(knots_x.back() - kPi) > 1e-14)
    throw std::invalid_argument("piecewise_linear: knots must span [0, pi]");
  for (std::size_t i = 1; i < knots_x.size(); ++i)
    if (knots_x[i] < knots_x[i - 1])
      throw std::invalid_argument("piecewise_linear: knots_x must be non-decreasing");
  PotentialSpec p;
  p.kind_ = Kind::piecewise_linear;
  p.kx_ = std::move(knots_x);
  p.ky_ = std::move(knots_y);
  p.kx_.back() = kPi;
  p.refresh_complex_flag();
  return p;
}

PotentialSpec PotentialSpec::linear_ramp(Real slope) {
  return piecewise_linear({0.0, kPi}, {Complex(-slope * kPi), Complex(0.0)});
}

PotentialSpec PotentialSpec::heaviside_jump(Real x0, Complex c) {
  return piecewise_linear({0.0, x0, x0, kPi}, {Complex(0.0), Complex(0.0), c, c});
}

std::vector<Real> PotentialSpec::breakpoints() const {
  if (kind_ == Kind::fourier) return {};
  std::vector<Real> b;
  for (std::size_t i = 1; i + 1 < kx_.size(); ++i)
    if (b.empty() || kx_[i] > b.back()) b.push_back(kx_[i]);
  return b;
}

Complex PotentialSpec::eval(Real x) const {
  if (kind_ == Kind::fourier) {
    Complex s = c0_;
    for (std::size_t k = 0; k < cos_.size(); ++k)
      s += cos_[k] * std::cos(Real(k + 1) * x);
    for (std::size_t k = 0; k < sin_.size(); ++k)
      s += sin_[k] * std::sin(Real(k + 1) * x);
    return s;
  }
  // right-continuous at jump knots
  std::size_t i = 0;
  while (i + 2 < kx_.size() && x >= kx_[i + 1]) ++i;
  while (i + 2 < kx_.size() && kx_[i + 1] == kx_[i] && x >= kx_[i]) ++i;
  Real x0 = kx_[i], x1 = kx_[i + 1];
  if (x1 == x0) return ky_[i + 1];
  Real t = (x - x0) / (x1 - x0);
  return ky_[i] + (ky_[i + 1] - ky_[i]) * t;
}

Real PotentialSpec::eval_real(Real x) const { return eval(x).real(); }

ExpSum PotentialSpec::to_exp_sum() const {
  if (kind_ != Kind::fourier)
    throw std::domain_error("to_exp_sum: fourier kind required");
  ExpSum s = ExpSum::constant(c0_);
  for (std::size_t k = 0; k < cos_.size(); ++k)
    if (cos_[k] != Complex(0.0)) s += ExpSum::cosine(Real(k + 1)) * cos_[k];
  for (std::size_t k = 0; k < sin_.size(); ++k)
    if (sin_[k] != Complex(0.0)) s += ExpSum::sine(Real(k + 1)) * sin_[k];
  return s;
}

Real PotentialSpec::l2_norm() const {
  if (kind_ == Kind::fourier) {
    Real s = kPi * std::norm(c0_);
    for (const Complex& c : cos_) s += 0.5 * kPi * std::norm(c);
    for (const Complex& c : sin_) s += 0.5 * kPi * std::norm(c);
    return std::sqrt(s);
  }
  // piecewise: exact integral of |linear|^2 per segment
  Real s = 0.0;
  for (std::size_t i = 0; i + 1 < kx_.size(); ++i) {
    Real h = kx_[i + 1] - kx_[i];
    if (h == 0.0) continue;
    Complex a = ky_[i], b = ky_[i + 1];
    s += h / 3.0 * (std::norm(a) + std::real(a * std::conj(b)) + std::norm(b));
  }
  return std::sqrt(s);
}

Complex eval_sigma(const PotentialSpec& p, Real x) {
  if (x < -1e-12 || x > kPi + 1e-12)
    throw std::domain_error("eval_sigma: x outside [0, pi]");
  return p.eval(std::clamp(x, 0.0, kPi));
}

Real sobolev_norm(const PotentialSpec& p, SobolevIndex theta) {
  if (!p.is_fourier())
    throw std::domain_error(
        "sobolev_norm: piecewise spec; project to a fourier series first");
  Real s = std::norm(p.c0());
  const auto& c = p.cos_coeffs();
  const auto& d = p.sin_coeffs();
  for (std::size_t k = 0; k < c.size(); ++k)
    s += (1.0 + std::pow(Real(k + 1), 2.0 * theta.theta)) * std::norm(c[k]);
  for (std::size_t k = 0; k < d.size(); ++k)
    s += (1.0 + std::pow(Real(k + 1), 2.0 * theta.theta)) * std::norm(d[k]);
  return std::sqrt(s);
}

PotentialSpec differentiate(const PotentialSpec& p, int n) {
  if (!p.is_fourier())
    throw std::domain_error("differentiate: piecewise spec is not differentiable here");
  if (n < 1) throw std::invalid_argument("differentiate: n >= 1 required");
  std::vector<Complex> c = p.cos_coeffs(), d = p.sin_coeffs();
  std::size_t K = std::max(c.size(), d.size());
  c.resize(K, 0.0);
  d.resize(K, 0.0);
  for (int r = 0; r < n; ++r) {
    // cos kx -> -k sin kx ; sin kx -> k cos kx
    std::vector<Complex> nc(K), nd(K);
    for (std::size_t k = 0; k < K; ++k) {
      Real w = Real(k + 1);
      nc[k] = w * d[k];
      nd[k] = -w * c[k];
    }
    c = std::move(nc);
    d = std::move(nd);
  }
  return PotentialSpec::fourier(0.0, std::move(c), std::move(d));
}

PotentialSpec sample_ball(SobolevIndex theta, Real R, Real decay_margin, int K,
                          std::uint64_t seed) {
  if (R < 0.0) throw std::invalid_argument("sample_ball: R >= 0 required");
  if (K < 1) throw std::invalid_argument("sample_ball: K >= 1 required");
  if (decay_margin <= 0.0)
    throw std::invalid_argument("sample_ball: decay_margin > 0 required");
  std::mt19937_64 rng(seed);
  // platform-independent uniforms: 53 mantissa bits of each draw
  auto uniform01 = [&rng]() { return Real(rng() >> 11) * 0x1.0p-53; };
  std::vector<Complex> c(static_cast<std::size_t>(K));
  for (int k = 1; k <= K; ++k)
    c[k - 1] = (2.0 * uniform01() - 1.0) *
               std::pow(Real(k), -theta.theta - 0.5 - decay_margin);
  Real u = 0.5 + 0.5 * uniform01();
  PotentialSpec raw = PotentialSpec::fourier(0.0, c);
  Real n0 = sobolev_norm(raw, theta);
  if (R == 0.0 || n0 == 0.0) return PotentialSpec::zero();
  Real scale = R * u / n0;
  for (Complex& ck : c) ck *= scale;
  PotentialSpec out = PotentialSpec::fourier(0.0, std::move(c));
  if (sobolev_norm(out, theta) > R * (1.0 + 1e-12))
    throw std::logic_error("sample_ball: norm exceeds R after rescale");
  return out;
}

std::pair<Complex, Complex> endpoints(const PotentialSpec& p) {
  if (p.is_fourier()) {
    Complex a = p.c0(), b = p.c0();
    const auto& c = p.cos_coeffs();
    for (std::size_t k = 0; k < c.size(); ++k) {
      a += c[k];
      b += (k % 2 == 0 ? -c[k] : c[k]);  // cos(k pi) = (-1)^k, k = index+1
    }
    return {a, b};
  }
  return {p.knots_y().front(), p.knots_y().back()};
}

namespace {
// int_a^b (alpha + beta t) e^{mu t} dt via the robust single-term primitive.
Complex segment_linear_exp(Complex alpha, Complex beta, Complex mu, Real a, Real b) {
  Complex i0 = ExpSum::term_prefix_integral(0, mu, b) -
               ExpSum::term_prefix_integral(0, mu, a);
  Complex i1 = ExpSum::term_prefix_integral(1, mu, b) -
               ExpSum::term_prefix_integral(1, mu, a);
  return alpha * i0 + beta * i1;
}
Complex segment_quadratic_exp(Complex a0, Complex a1, Complex a2, Complex mu,
                              Real a, Real b) {
  Complex i0 = ExpSum::term_prefix_integral(0, mu, b) -
               ExpSum::term_prefix_integral(0, mu, a);
  Complex i1 = ExpSum::term_prefix_integral(1, mu, b) -
               ExpSum::term_prefix_integral(1, mu, a);
  Complex i2 = ExpSum::term_prefix_integral(2, mu, b) -
               ExpSum::term_prefix_integral(2, mu, a);
  return a0 * i0 + a1 * i1 + a2 * i2;
}
}  // namespace

Complex sigma_exp_integral(const PotentialSpec& p, Complex mu, Real x) {
  if (p.is_fourier()) {
    ExpSum f = p.to_exp_sum() * ExpSum::exponential(1.0, mu);
    return f.prefix_integral(x);
  }
  Complex total = 0.0;
  const auto& kx = p.knots_x();
  const auto& ky = p.knots_y();
  for (std::size_t i = 0; i + 1 < kx.size(); ++i) {
    Real a = kx[i], b = std::min(kx[i + 1], x);
    if (b <= a) continue;
    Complex ya = ky[i], yb = ky[i + 1];
    Real h = kx[i + 1] - kx[i];
    Complex slope = (yb - ya) / h;
    // sigma(t) = ya + slope (t - a)  ==  (ya - slope a) + slope t
    total += segment_linear_exp(ya - slope * a, slope, mu, a, b);
    if (b >= x) break;
  }
  return total;
}

Complex sigma2_exp_integral(const PotentialSpec& p, Complex mu, Real x) {
  if (p.is_fourier()) {
    ExpSum s = p.to_exp_sum();
    ExpSum f = s * s * ExpSum::exponential(1.0, mu);
    return f.prefix_integral(x);
  }
  Complex total = 0.0;
  const auto& kx = p.knots_x();
  const auto& ky = p.knots_y();
  for (std::size_t i = 0; i + 1 < kx.size(); ++i) {
    Real a = kx[i], b = std::min(kx[i + 1], x);
    if (b <= a) continue;
    Real h = kx[i + 1] - kx[i];
    Complex ya = ky[i];
    Complex slope = (ky[i + 1] - ya) / h;
    Complex p0 = ya - slope * a, p1 = slope;  // sigma = p0 + p1 t on [a,b]
    total += segment_quadratic_exp(p0 * p0, 2.0 * p0 * p1, p1 * p1, mu, a, b);
    if (b >= x) break;
  }
  return total;
}

RealPotentialEvaluator::RealPotentialEvaluator(const PotentialSpec& p)
    : fourier_(p.is_fourier()) {
  if (p.complex_valued())
    throw std::domain_error("RealPotentialEvaluator: potential must be real");
  if (fourier_) {
    c0_ = p.c0().real();
    std::size_t K = std::max(p.cos_coeffs().size(), p.sin_coeffs().size());
    w_.resize(K, Complex(0.0));
    for (std::size_t k = 0; k < p.cos_coeffs().size(); ++k)
      w_[k] += Complex(p.cos_coeffs()[k].real(), 0.0);
    for (std::size_t k = 0; k < p.sin_coeffs().size(); ++k)
      w_[k] += Complex(0.0, -p.sin_coeffs()[k].real());
  } else {
    kx_ = p.knots_x();
    ky_.reserve(p.knots_y().size());
    for (const Complex& y : p.knots_y()) ky_.push_back(y.real());
  }
}

Real RealPotentialEvaluator::operator()(Real x) const {
  if (fourier_) {
    // sigma = c0 + sum Re(w_k z^k), z = e^{ix}
    Real s = c0_;
    if (!w_.empty()) {
      Complex z(std::cos(x), std::sin(x));
      Complex zk = 1.0;
      for (const Complex& w : w_) {
        zk *= z;
        s += w.real() * zk.real() - w.imag() * zk.imag();
      }
    }
    return s;
  }
  // binary search for the segment; right-continuous at jumps
  std::size_t lo = 0, hi = kx_.size() - 1;
  while (hi - lo > 1) {
    std::size_t mid = (lo + hi) / 2;
    if (kx_[mid] <= x) lo = mid; else hi = mid;
  }
  while (lo + 2 < kx_.size() && kx_[lo + 1] == kx_[lo]) ++lo;
  Real x0 = kx_[lo], x1 = kx_[lo + 1];
  if (x1 == x0) return ky_[lo + 1];
  Real t = (x - x0) / (x1 - x0);
  return ky_[lo] + (ky_[lo + 1] - ky_[lo]) * t;
}

}  // namespace slspec
