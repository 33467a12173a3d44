#include "slspec/sensitivity.hpp"

#include <cmath>
#include <stdexcept>

#include "slspec/ode.hpp"

namespace slspec {

namespace {

// (u, v, int u^2) with u' = sigma u + v, v' = -(lambda + sigma^2) u - sigma v
struct QuasiNormRhs {
  const RealPotentialEvaluator* sigma;
  Real lambda;
  Eigen::Vector3d operator()(Real x, const Eigen::Vector3d& y) const {
    Real s = (*sigma)(x);
    Eigen::Vector3d d;
    d[0] = s * y[0] + y[1];
    d[1] = -(lambda + s * s) * y[0] - s * y[1];
    d[2] = y[0] * y[0];
    return d;
  }
};

// adds int u (u' ) h = int u (v + sigma u) h for the derivative numerator
struct QuasiDerivRhs {
  const RealPotentialEvaluator* sigma;
  const RealPotentialEvaluator* h;
  Real lambda;
  Eigen::Vector4d operator()(Real x, const Eigen::Vector4d& y) const {
    Real s = (*sigma)(x);
    Eigen::Vector4d d;
    d[0] = s * y[0] + y[1];
    d[1] = -(lambda + s * s) * y[0] - s * y[1];
    d[2] = y[0] * y[0];
    d[3] = y[0] * (y[1] + s * y[0]) * (*h)(x);
    return d;
  }
};

std::vector<Real> uniform_grid(int n) {
  std::vector<Real> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = kPi * Real(i) / Real(n - 1);
  xs.back() = kPi;
  return xs;
}

Real solve_lambda(const SpectralProblem& p, int k) {
  Spectrum s = eigenvalues(p, k);
  return s.lambda[k - 1].real();
}

}  // namespace

Eigenfunction eigenfunction_at(const SpectralProblem& p, int k, Real lambda,
                               Normalization norm, int grid_n) {
  if (p.sigma.complex_valued())
    throw std::domain_error("eigenfunction: real sigma required");
  RealPotentialEvaluator ev(p.sigma);
  QuasiNormRhs rhs{&ev, lambda};
  OdeOptions opt;
  opt.abs_tol = p.abs_tol;
  opt.rel_tol = p.rel_tol;
  auto xs = uniform_grid(grid_n);
  Rkf78Integrator<Eigen::Vector3d, QuasiNormRhs> integ(rhs, opt);
  auto states =
      integ.integrate_to_points(0.0, Eigen::Vector3d(0.0, 1.0, 0.0), xs,
                                p.sigma.breakpoints());
  Eigenfunction ef;
  ef.index = k;
  ef.lambda = lambda;
  ef.grid_x = Eigen::Map<const Vector>(xs.data(), grid_n);
  ef.y.resize(grid_n);
  ef.y_quasi.resize(grid_n);
  for (int i = 0; i < grid_n; ++i) {
    ef.y[i] = states[i][0];
    ef.y_quasi[i] = states[i][1];
  }
  Real nrm2 = states.back()[2];
  ef.l2_square = nrm2;
  ef.normalization = norm;
  if (norm == Normalization::unit_l2) {
    if (nrm2 <= 0.0)
      throw std::runtime_error("eigenfunction: nonpositive L2 norm");
    Real scale = std::sqrt(kPi / 2.0 / nrm2);  // y'(0) = v(0) = 1 > 0 kept
    ef.y *= scale;
    ef.y_quasi *= scale;
    ef.l2_square = kPi / 2.0;
  }
  return ef;
}

Eigenfunction eigenfunction(const SpectralProblem& p, int k, Normalization norm,
                            int grid_n) {
  return eigenfunction_at(p, k, solve_lambda(p, k), norm, grid_n);
}

EigenvalueDerivative eigenvalue_derivative(const PotentialSpec& sigma,
                                           const PotentialSpec& h, int k, Bc bc,
                                           Real abs_tol, Real rel_tol) {
  SpectralProblem p{sigma, bc, abs_tol, rel_tol};
  Real lambda = solve_lambda(p, k);
  RealPotentialEvaluator sev(sigma), hev(h);
  QuasiDerivRhs rhs{&sev, &hev, lambda};
  OdeOptions opt;
  opt.abs_tol = abs_tol;
  opt.rel_tol = rel_tol;
  Eigen::Vector4d y(0.0, 1.0, 0.0, 0.0);
  Real x = 0.0;
  std::vector<Real> breaks = sigma.breakpoints();
  for (Real b : h.breakpoints()) breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  ode_integrate(rhs, x, y, kPi, opt, breaks);
  Real denom = y[2];
  if (std::abs(denom) < 1e-8)
    throw std::runtime_error(
        "eigenvalue_derivative: near-degenerate eigenfunction (int y^2 ~ 0)");
  EigenvalueDerivative d;
  d.lambda = lambda;
  d.denom = denom;
  d.dlambda = -2.0 * y[3] / denom;
  if (lambda <= 0.0)
    throw std::runtime_error("eigenvalue_derivative: ds defined for lambda > 0");
  d.ds = 0.5 * d.dlambda / std::sqrt(lambda);
  return d;
}

Real fd_check(const PotentialSpec& sigma, const PotentialSpec& h, int k, Real t,
              Bc bc) {
  if (t <= 0.0) throw std::invalid_argument("fd_check: t > 0 required");
  // the difference quotient divides the solver noise by 2t, so the inner
  // solves run at the tightest workable tolerance
  EigenvalueDerivative d = eigenvalue_derivative(sigma, h, k, bc, 1e-13, 1e-13);
  PotentialSpec plus = linear_combination(1.0, sigma, t, h);
  PotentialSpec minus = linear_combination(1.0, sigma, -t, h);
  SpectralProblem pp{plus, bc, 1e-13, 1e-13};
  SpectralProblem pm{minus, bc, 1e-13, 1e-13};
  Real fd = (solve_lambda(pp, k) - solve_lambda(pm, k)) / (2.0 * t);
  return std::abs(d.dlambda - fd) / std::max(1.0, std::abs(d.dlambda));
}

std::vector<Real> asymptotic_gap(const SpectralProblem& p,
                                 const std::vector<int>& k_list, int grid_n) {
  if (k_list.empty()) return {};
  int k_max = *std::max_element(k_list.begin(), k_list.end());
  Spectrum s = eigenvalues(p, k_max);
  std::vector<Real> gaps;
  gaps.reserve(k_list.size());
  for (int k : k_list) {
    Eigenfunction ef =
        eigenfunction_at(p, k, s.lambda[k - 1].real(), Normalization::unit_l2, grid_n);
    Real w = p.bc == Bc::dirichlet ? Real(k) : Real(k) - 0.5;
    Real gap = 0.0;
    for (Eigen::Index i = 0; i < ef.grid_x.size(); ++i)
      gap = std::max(gap, std::abs(ef.y[i] - std::sin(w * ef.grid_x[i])));
    gaps.push_back(gap);
  }
  return gaps;
}

PotentialSpec linear_combination(Complex a, const PotentialSpec& f, Complex b,
                                 const PotentialSpec& g) {
  if (!f.is_fourier() || !g.is_fourier())
    throw std::domain_error("linear_combination: fourier specs required");
  std::size_t K = std::max({f.cos_coeffs().size(), g.cos_coeffs().size(),
                            f.sin_coeffs().size(), g.sin_coeffs().size()});
  std::vector<Complex> c(K, 0.0), d(K, 0.0);
  for (std::size_t i = 0; i < f.cos_coeffs().size(); ++i) c[i] += a * f.cos_coeffs()[i];
  for (std::size_t i = 0; i < g.cos_coeffs().size(); ++i) c[i] += b * g.cos_coeffs()[i];
  for (std::size_t i = 0; i < f.sin_coeffs().size(); ++i) d[i] += a * f.sin_coeffs()[i];
  for (std::size_t i = 0; i < g.sin_coeffs().size(); ++i) d[i] += b * g.sin_coeffs()[i];
  return PotentialSpec::fourier(a * f.c0() + b * g.c0(), std::move(c), std::move(d));
}

}  // namespace slspec
