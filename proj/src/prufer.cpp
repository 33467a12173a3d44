#include "slspec/prufer.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <stdexcept>

#include "slspec/ode.hpp"
#include "slspec/parallel.hpp"
#include "slspec/quadrature.hpp"
#include "slspec/roots.hpp"
#include "slspec/sequence_space.hpp"

namespace slspec {

namespace {

std::vector<Real> uniform_grid(int n) {
  std::vector<Real> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = kPi * Real(i) / Real(n - 1);
  xs.back() = kPi;
  return xs;
}

struct PruferRhs {
  const RealPotentialEvaluator* sigma;
  Real rho;
  Eigen::Vector2d operator()(Real x, const Eigen::Vector2d& y) const {
    Real s = (*sigma)(x);
    Real s2 = s * s;
    Real sin2t = std::sin(2.0 * y[0]);
    Real cos2t = std::cos(2.0 * y[0]);
    Eigen::Vector2d d;
    d[0] = rho + s * sin2t + s2 * (1.0 - cos2t) / (2.0 * rho);
    d[1] = -s * cos2t - s2 * sin2t / (2.0 * rho);
    return d;
  }
};

Real prufer_theta_pi(const RealPotentialEvaluator& sigma, Real rho,
                     const std::vector<Real>& breaks, const OdeOptions& opt) {
  PruferRhs rhs{&sigma, rho};
  Eigen::Vector2d y(0.0, 0.0);
  Real x = 0.0;
  ode_integrate(rhs, x, y, kPi, opt, breaks);
  return y[0];
}

}  // namespace

PruferAngle prufer_integrate(const PotentialSpec& sigma, Real rho, Real abs_tol,
                             Real rel_tol, int grid_n) {
  if (rho == 0.0) throw std::domain_error("prufer_integrate: rho != 0 required");
  if (sigma.complex_valued())
    throw std::domain_error("prufer_integrate: real sigma required");
  RealPotentialEvaluator ev(sigma);
  PruferRhs rhs{&ev, rho};
  OdeOptions opt;
  opt.abs_tol = abs_tol;
  opt.rel_tol = rel_tol;
  auto breaks = sigma.breakpoints();
  auto xs = uniform_grid(grid_n);
  Rkf78Integrator<Eigen::Vector2d, PruferRhs> integ(rhs, opt);
  auto states = integ.integrate_to_points(0.0, Eigen::Vector2d(0.0, 0.0), xs, breaks);
  PruferAngle out;
  out.rho = rho;
  out.grid_x = Eigen::Map<const Vector>(xs.data(), grid_n);
  out.theta_values.resize(grid_n);
  out.log_r_values.resize(grid_n);
  for (int i = 0; i < grid_n; ++i) {
    out.theta_values[i] = states[i][0];
    out.log_r_values[i] = states[i][1];
  }
  return out;
}

Real admissibility_bound(Real nu, Real R) {
  Real kappa = std::cosh(2.0 * kPi * nu);
  Real d = 1.0 + 64.0 * R * R * kappa * kappa;
  return std::pow(2.0, -7.0) / (d * d);
}

Real upsilon(const PotentialSpec& sigma, Complex rho, Real nu, Real R) {
  if (std::abs(rho.imag()) > nu + 1e-12)
    throw std::domain_error("upsilon: |Im rho| <= nu required");
  const Complex i(0.0, 1.0);
  // prefix integrals G+-(x) = int_0^x sigma e^{+-2 i rho t} dt on a refining grid
  std::optional<ExpSum> fplus, fminus;
  if (sigma.is_fourier()) {
    ExpSum s = sigma.to_exp_sum();
    fplus = s * ExpSum::exponential(1.0, 2.0 * i * rho);
    fminus = s * ExpSum::exponential(1.0, -2.0 * i * rho);
  }
  auto prefix = [&](Real x) -> std::pair<Complex, Complex> {
    if (fplus)
      return {fplus->prefix_integral(x), fminus->prefix_integral(x)};
    return {sigma_exp_integral(sigma, 2.0 * i * rho, x),
            sigma_exp_integral(sigma, -2.0 * i * rho, x)};
  };
  Real prev = -1.0;
  Real max_sin = 0.0, max_cos = 0.0;
  for (int n = 512; n <= 1 << 16; n *= 2) {
    max_sin = 0.0;
    max_cos = 0.0;
    for (int j = 1; j <= n; ++j) {
      Real x = kPi * Real(j) / Real(n);
      auto [gp, gm] = prefix(x);
      max_sin = std::max(max_sin, std::abs((gp - gm) / (2.0 * i)));
      max_cos = std::max(max_cos, std::abs((gp + gm) / 2.0));
    }
    Real cur = max_sin + max_cos;
    if (prev >= 0.0 && std::abs(cur - prev) <= 1e-8) break;
    prev = cur;
  }
  Real kappa = std::cosh(2.0 * kPi * nu);
  return max_sin + max_cos +
         R * R * (1.0 + kappa + R * kappa * kappa) / (2.0 * std::abs(rho));
}

namespace {

template <typename S>
struct FixedPointWorkspace {
  using Arr = Eigen::Array<S, Eigen::Dynamic, 1>;
  Real h;
  Eigen::ArrayXd x;
  Eigen::ArrayXd sig, sig2;
  Arr sin2rt, cos2rt;          // sin/cos(2 rho t)
  Arr A, B, C2, D;             // sigma sin, sigma cos, sigma^2 cos, sigma^2 sin
  Arr phi0;
  S inv2rho;
};

template <typename S>
Eigen::Array<S, Eigen::Dynamic, 1> cumulative(
    const Eigen::Array<S, Eigen::Dynamic, 1>& y, Real h) {
  Eigen::Matrix<S, Eigen::Dynamic, 1> v = y.matrix();
  return cumulative_integral(v, h).array();
}

template <typename S>
FixedPointWorkspace<S> make_workspace(const PotentialSpec& sigma, Complex rho,
                                      int n) {
  FixedPointWorkspace<S> w;
  w.h = kPi / Real(n - 1);
  w.x.resize(n);
  for (int j = 0; j < n; ++j) w.x[j] = kPi * Real(j) / Real(n - 1);
  w.sig.resize(n);
  for (int j = 0; j < n; ++j) w.sig[j] = sigma.eval(w.x[j]).real();
  w.sig2 = w.sig * w.sig;
  w.sin2rt.resize(n);
  w.cos2rt.resize(n);
  for (int j = 0; j < n; ++j) {
    Complex s = std::sin(2.0 * rho * w.x[j]);
    Complex c = std::cos(2.0 * rho * w.x[j]);
    if constexpr (std::is_same_v<S, Real>) {
      w.sin2rt[j] = s.real();
      w.cos2rt[j] = c.real();
    } else {
      w.sin2rt[j] = s;
      w.cos2rt[j] = c;
    }
  }
  w.A = w.sig.template cast<S>() * w.sin2rt;
  w.B = w.sig.template cast<S>() * w.cos2rt;
  w.C2 = w.sig2.template cast<S>() * w.cos2rt;
  w.D = w.sig2.template cast<S>() * w.sin2rt;
  if constexpr (std::is_same_v<S, Real>)
    w.inv2rho = 1.0 / (2.0 * rho.real());
  else
    w.inv2rho = Complex(1.0) / (2.0 * rho);
  // Phi0 = int sigma sin(2 rho t) + (1/2rho) int sigma^2 (1 - cos(2 rho t))
  w.phi0 = cumulative<S>(w.A, w.h) +
           w.inv2rho * (cumulative<S>(w.sig2.template cast<S>().eval(), w.h) -
                        cumulative<S>(w.C2, w.h));
  return w;
}

template <typename S>
std::pair<Eigen::Array<S, Eigen::Dynamic, 1>, int> iterate_fixed_point(
    const FixedPointWorkspace<S>& w, const FixedPointOptions& opt) {
  using Arr = Eigen::Array<S, Eigen::Dynamic, 1>;
  const int n = static_cast<int>(w.x.size());
  Arr f = Arr::Zero(n), fn(n);
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    Arr sin2f = Eigen::sin(2.0 * f);
    Arr cos2f = Eigen::cos(2.0 * f);
    Arr phi1 = 2.0 * cumulative<S>((f * w.B).eval(), w.h);
    Arr phi2 = cumulative<S>((w.B * (sin2f - 2.0 * f)).eval(), w.h) -
               cumulative<S>((w.A * (1.0 - cos2f)).eval(), w.h);
    Arr phi3 = w.inv2rho * (cumulative<S>((w.C2 * (1.0 - cos2f)).eval(), w.h) +
                            cumulative<S>((w.D * sin2f).eval(), w.h));
    fn = w.phi0 + phi1 + phi2 + phi3;
    Real change = (fn - f).abs().maxCoeff();
    f.swap(fn);
    if (change < opt.stop_tol) return {f, it + 1};
  }
  throw std::runtime_error("fixed_point_theta: no convergence within iteration cap");
}

int fixed_point_grid_size(const PotentialSpec& sigma, Complex rho, int min_grid) {
  Real kmax = 0.0;
  if (sigma.is_fourier())
    kmax = Real(std::max(sigma.cos_coeffs().size(), sigma.sin_coeffs().size()));
  Real omega = 2.0 * std::abs(rho) + 2.0 * kmax + 1.0;
  // 4th-order cumulative rule: h^4 omega^4 ~ 1e-10 target
  Real h = 0.0071 / omega;
  int n = static_cast<int>(std::ceil(kPi / h));
  n = std::max(n, min_grid);
  int p = 1;
  while (p + 1 < n) p *= 2;
  return p + 1;
}

}  // namespace

PruferAngle fixed_point_theta(const PotentialSpec& sigma, Complex rho, Real nu,
                              Real R, const FixedPointOptions& opt) {
  if (std::abs(rho.imag()) > nu + 1e-12)
    throw std::domain_error("fixed_point_theta: |Im rho| <= nu required");
  if (!opt.force) {
    Real ups = upsilon(sigma, rho, nu, R);
    Real bound = admissibility_bound(nu, R);
    if (!(ups < bound))
      throw std::domain_error(
          "fixed_point_theta: admissibility violated (Upsilon(rho) = " +
          std::to_string(ups) + " >= " + std::to_string(bound) +
          "); rho too small for this sigma, R, nu");
  }
  const int n = fixed_point_grid_size(sigma, rho, opt.min_grid);
  PruferAngle out;
  out.rho = rho;
  const bool real_path = (rho.imag() == 0.0) && !sigma.complex_valued();
  if (real_path) {
    auto w = make_workspace<Real>(sigma, rho, n);
    auto [f, iters] = iterate_fixed_point<Real>(w, opt);
    (void)iters;
    out.grid_x = w.x.matrix();
    out.theta_values = (rho.real() * w.x + f).matrix().cast<Complex>();
    // log r = -int sigma cos 2theta - (1/2rho) int sigma^2 sin 2theta
    Eigen::ArrayXd theta = rho.real() * w.x + f;
    Eigen::ArrayXd lr = -cumulative<Real>((w.sig * Eigen::cos(2.0 * theta)).eval(), w.h) -
                        w.inv2rho * cumulative<Real>(
                                        (w.sig2 * Eigen::sin(2.0 * theta)).eval(), w.h);
    out.log_r_values = lr.matrix().cast<Complex>();
    return out;
  }
  if (sigma.complex_valued())
    throw std::domain_error("fixed_point_theta: real sigma required");
  auto w = make_workspace<Complex>(sigma, rho, n);
  auto [f, iters] = iterate_fixed_point<Complex>(w, opt);
  (void)iters;
  out.grid_x = w.x.matrix();
  Eigen::ArrayXcd theta = rho * w.x.cast<Complex>() + f;
  out.theta_values = theta.matrix();
  Eigen::ArrayXcd lr =
      -cumulative<Complex>((w.sig.cast<Complex>() * Eigen::cos(2.0 * theta)).eval(), w.h) -
      w.inv2rho *
          cumulative<Complex>((w.sig2.cast<Complex>() * Eigen::sin(2.0 * theta)).eval(), w.h);
  out.log_r_values = lr.matrix();
  return out;
}

namespace {

struct QuasiRhs {
  const RealPotentialEvaluator* sigma;
  Real lambda;
  Eigen::Vector2d operator()(Real x, const Eigen::Vector2d& y) const {
    Real s = (*sigma)(x);
    Eigen::Vector2d d;
    d[0] = s * y[0] + y[1];
    d[1] = -(lambda + s * s) * y[0] - s * y[1];
    return d;
  }
};

}  // namespace

std::pair<Real, Real> quasi_derivative_solve(const PotentialSpec& sigma, Real lambda,
                                             Real abs_tol, Real rel_tol) {
  if (sigma.complex_valued())
    throw std::domain_error("quasi_derivative_solve: real sigma required");
  RealPotentialEvaluator ev(sigma);
  QuasiRhs rhs{&ev, lambda};
  OdeOptions opt;
  opt.abs_tol = abs_tol;
  opt.rel_tol = rel_tol;
  Eigen::Vector2d y(0.0, 1.0);
  Real x = 0.0;
  ode_integrate(rhs, x, y, kPi, opt, sigma.breakpoints());
  return {y[0], y[1]};
}

namespace {

// number of characteristic roots expected below rho_min^2 given theta(pi, rho_min)
int low_root_count(Real theta_at_min, Bc bc) {
  if (bc == Bc::dirichlet) return static_cast<int>(std::floor(theta_at_min / kPi));
  return static_cast<int>(std::floor(theta_at_min / kPi + 0.5));
}

Real target_angle(Bc bc, int n) {
  return bc == Bc::dirichlet ? kPi * Real(n) : kPi * (Real(n) - 0.5);
}

Real sigma_sup_estimate(const PotentialSpec& sigma) {
  Real m = 0.0;
  for (int j = 0; j <= 512; ++j)
    m = std::max(m, std::abs(sigma.eval(kPi * j / 512.0)));
  return m;
}

}  // namespace

Spectrum characteristic_spectrum(const SpectralProblem& p, int n_max, int jobs) {
  if (p.sigma.complex_valued())
    throw std::domain_error("characteristic_spectrum: real sigma required");
  if (n_max < 1) throw std::invalid_argument("characteristic_spectrum: n_max >= 1");
  auto char_fn = [&](Real lam) {
    auto [u, v] = quasi_derivative_solve(p.sigma, lam, p.abs_tol, p.rel_tol);
    return p.bc == Bc::dirichlet ? u : v;
  };
  // scan in rho = sqrt(lambda) above 0 and in lambda below; collect brackets
  Real smax = sigma_sup_estimate(p.sigma);
  Real lam_floor = -(smax * smax) - 1.0;
  std::vector<std::pair<Real, Real>> brackets;  // lambda intervals
  {
    Real step = 0.2;
    Real prev_lam = lam_floor;
    Real prev_val = char_fn(prev_lam);
    Real margin = 1.5 + p.sigma.l2_norm();
    Real rho_hi = Real(n_max) + margin;
    // low region: lambda from floor to 0.25 (step in lambda)
    for (Real lam = lam_floor + step; lam <= 0.26; lam += step) {
      Real val = char_fn(lam);
      if ((prev_val > 0) != (val > 0)) brackets.emplace_back(prev_lam, lam);
      prev_lam = lam;
      prev_val = val;
    }
    // oscillatory region: step in rho
    for (Real rho = std::sqrt(0.26) + 0.1; rho <= rho_hi; rho += 0.1) {
      Real lam = rho * rho;
      Real val = char_fn(lam);
      if ((prev_val > 0) != (val > 0)) brackets.emplace_back(prev_lam, lam);
      prev_lam = lam;
      prev_val = val;
      if (static_cast<int>(brackets.size()) >= n_max) break;
    }
  }
  if (static_cast<int>(brackets.size()) < n_max)
    throw std::runtime_error("characteristic_spectrum: scan found too few roots");
  brackets.resize(n_max);
  Spectrum s;
  s.indices.resize(n_max);
  s.rho.resize(n_max);
  s.lambda.resize(n_max);
  s.residuals.resize(n_max);
  s.method = "quasi_derivative";
  s.bc = p.bc;
  parallel_for(n_max, jobs, [&](int i) {
    auto [a, b] = brackets[i];
    Real fa = char_fn(a), fb = char_fn(b);
    auto r = brent([&](Real lam) { return char_fn(lam); }, a, b, fa, fb,
                   1e-13 * (1.0 + std::abs(b)));
    s.indices[i] = i + 1;
    s.lambda[i] = r.x;
    s.rho[i] = principal_sqrt(Complex(r.x, 0.0));
    s.residuals[i] = std::abs(r.fx);
  });
  return s;
}

Spectrum eigenvalues(const SpectralProblem& p, int n_max, int jobs) {
  if (p.sigma.complex_valued())
    throw std::domain_error(
        "eigenvalues: real sigma required (complex potentials are served by the "
        "galerkin oracle)");
  if (n_max < 1) throw std::invalid_argument("eigenvalues: n_max >= 1");
  RealPotentialEvaluator ev(p.sigma);
  auto breaks = p.sigma.breakpoints();
  OdeOptions opt;
  opt.abs_tol = p.abs_tol;
  opt.rel_tol = p.rel_tol;

  const Real rho_min = 0.05;
  const Real theta_min = prufer_theta_pi(ev, rho_min, breaks, opt);
  const int n_low = std::max(0, std::min(n_max, low_root_count(theta_min, p.bc)));

  // initial guesses improved by the leading sine-coefficient correction
  std::vector<Real> guess(n_max);
  {
    CVector b;
    if (p.sigma.is_fourier()) b = apply_T(p.sigma, 2 * n_max).values;
    for (int n = 1; n <= n_max; ++n) {
      Real g = p.bc == Bc::dirichlet ? Real(n) : Real(n) - 0.5;
      if (b.size() > 0) {
        int k = p.bc == Bc::dirichlet ? 2 * n : 2 * n - 1;
        Real corr = -0.5 * b[k - 1].real();
        g += std::clamp(corr, -0.3, 0.3);
      }
      guess[n - 1] = g;
    }
  }

  Spectrum s;
  s.indices.resize(n_max);
  s.rho.resize(n_max);
  s.lambda.resize(n_max);
  s.residuals.resize(n_max);
  s.method = "prufer";
  s.bc = p.bc;

  std::optional<Spectrum> low_spectrum;
  if (n_low > 0) {
    SpectralProblem lowp = p;
    low_spectrum = characteristic_spectrum(lowp, n_low, 1);
  }

  const Real margin = 2.0 + p.sigma.l2_norm();
  parallel_for(n_max, jobs, [&](int i) {
    const int n = i + 1;
    s.indices[i] = n;
    if (n <= n_low) {
      s.lambda[i] = low_spectrum->lambda[i];
      s.rho[i] = low_spectrum->rho[i];
      s.residuals[i] = low_spectrum->residuals[i];
      return;
    }
    const Real target = target_angle(p.bc, n);
    auto g = [&](Real rho) { return prufer_theta_pi(ev, rho, breaks, opt) - target; };
    auto [a, b, fa, fb] =
        bracket_around(g, guess[i], 0.35, rho_min, Real(n_max) + margin);
    auto r = brent(g, a, b, fa, fb, 1e-13 * (1.0 + guess[i]));
    if (std::abs(r.fx) > 1e-10) {
      char msg[160];
      std::snprintf(msg, sizeof(msg),
                    "eigenvalues: root residual %.3e above tolerance at index %d "
                    "(rho = %.15f, evals = %d)",
                    std::abs(r.fx), n, r.x, r.evals);
      throw std::runtime_error(msg);
    }
    s.lambda[i] = r.x * r.x;
    s.rho[i] = r.x;
    s.residuals[i] = std::abs(r.fx);
  });

  for (int i = 1; i < n_max; ++i)
    if (!(s.rho[i].real() > s.rho[i - 1].real()))
      throw std::runtime_error("eigenvalues: ordering violated (duplicate root?)");
  return s;
}

bool strip_check(const Spectrum& s, Real R) {
  const Real bound = 4.0 * std::exp(2.0 * kPi * R);
  for (Eigen::Index i = 0; i < s.rho.size(); ++i)
    if (!(std::abs(s.rho[i].imag()) < bound)) return false;
  return true;
}

Complex fourier_F(const PotentialSpec& sigma, Complex rho) {
  const Complex i(0.0, 1.0);
  return sigma_exp_integral(sigma, i * rho, kPi);
}

}  // namespace slspec
