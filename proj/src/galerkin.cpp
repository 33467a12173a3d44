#include "slspec/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "slspec/quadrature.hpp"

namespace slspec {

namespace {

// I_s(mu) = int_0^pi sigma(x) sin(mu x) dx for the integer frequencies the
// assembly needs (mu = omega_j +- omega_k, both integer for D and DN bases).
CVector sine_integral_table(const PotentialSpec& sigma, int mu_max) {
  CVector table(mu_max + 1);
  table[0] = 0.0;
  if (sigma.is_fourier()) {
    const auto& c = sigma.cos_coeffs();
    const auto& d = sigma.sin_coeffs();
    for (int mu = 1; mu <= mu_max; ++mu) {
      Complex v = 0.0;
      // int cos(jx) sin(mu x) = 2 mu/(mu^2-j^2) for odd mu+j, else 0
      if (mu % 2 == 1) v += sigma.c0() * 2.0 / Real(mu);
      for (std::size_t j = 1; j <= c.size(); ++j)
        if ((mu + static_cast<int>(j)) % 2 == 1)
          v += c[j - 1] * 2.0 * Real(mu) /
               (Real(mu) * Real(mu) - Real(j) * Real(j));
      if (mu <= static_cast<int>(d.size())) v += d[mu - 1] * (kPi / 2.0);
      table[mu] = v;
    }
    return table;
  }
  QuadratureOptions q;
  q.abs_tol = 1e-12;
  q.rel_tol = 1e-13;
  auto breaks = sigma.breakpoints();
  for (int mu = 1; mu <= mu_max; ++mu) {
    auto f = [&sigma, mu](Real x) { return sigma.eval(x) * std::sin(Real(mu) * x); };
    table[mu] = integrate_adaptive_split(f, 0.0, kPi, breaks, q);
  }
  return table;
}

}  // namespace

GalerkinMatrix assemble(const SpectralProblem& p, int N) {
  if (N < 4) throw std::invalid_argument("assemble: N >= 4 required");
  GalerkinMatrix g;
  g.N = N;
  g.bc = p.bc;
  g.is_real = !p.sigma.complex_valued();
  g.entries.resize(N, N);
  const bool dn = (p.bc == Bc::dirichlet_neumann);
  // omega_j = j (Dirichlet) or j - 1/2 (DN); omega_j + omega_k and
  // omega_j - omega_k are integers in both cases.
  auto sum_index = [dn](int j, int k) { return dn ? j + k - 1 : j + k; };
  CVector I = sine_integral_table(p.sigma, sum_index(N, N));
  for (int j = 1; j <= N; ++j) {
    Real wj = dn ? Real(j) - 0.5 : Real(j);
    for (int k = j; k <= N; ++k) {
      Real wk = dn ? Real(k) - 0.5 : Real(k);
      int sp = sum_index(j, k);
      int sm = k - j;  // omega_k - omega_j is the integer k - j
      // int sigma (phi_j phi_k)' = (1/pi)[(wj+wk) I(wj+wk) - (wj-wk) I(wj-wk)]
      // and I(j-k) = -I(k-j), so the second piece is -(wk-wj) I[k-j].
      Complex coupling = ((wj + wk) * I[sp] - (wk - wj) * I[sm]) / kPi;
      Complex a = -coupling;
      if (j == k) a += wj * wj;
      g.entries(j - 1, k - 1) = a;
      g.entries(k - 1, j - 1) = a;
    }
  }
  return g;
}

Spectrum eigen_solve(const GalerkinMatrix& m, int n_keep) {
  if (n_keep > m.N / 2)
    throw std::invalid_argument(
        "eigen_solve: n_keep <= N/2 required (upper half is truncation-polluted)");
  CVector lambdas(m.N);
  if (m.is_real) {
    Matrix A = m.entries.real();
    Eigen::SelfAdjointEigenSolver<Matrix> es(A);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("eigen_solve: symmetric eigensolver failed");
    lambdas = es.eigenvalues().cast<Complex>();
  } else {
    Eigen::ComplexEigenSolver<CMatrix> es(m.entries);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("eigen_solve: complex eigensolver failed");
    lambdas = es.eigenvalues();
    std::sort(lambdas.data(), lambdas.data() + lambdas.size(),
              [](Complex a, Complex b) {
                if (a.real() != b.real()) return a.real() < b.real();
                return a.imag() < b.imag();
              });
  }
  Spectrum s;
  s.method = "galerkin";
  s.bc = m.bc;
  s.galerkin_N = m.N;
  s.indices.resize(n_keep);
  s.rho.resize(n_keep);
  s.lambda.resize(n_keep);
  s.residuals = Vector::Zero(n_keep);
  for (int i = 0; i < n_keep; ++i) {
    s.indices[i] = i + 1;
    s.lambda[i] = lambdas[i];
    s.rho[i] = principal_sqrt(lambdas[i]);
  }
  return s;
}

Spectrum oracle_spectrum(const SpectralProblem& p, int n_max, Real tol, int n_cap) {
  if (tol <= 0.0) throw std::invalid_argument("oracle_spectrum: tol > 0 required");
  int N = std::max(64, 4 * n_max);
  Spectrum prev = eigen_solve(assemble(p, N), n_max);
  while (2 * N <= n_cap) {
    N *= 2;
    Spectrum cur = eigen_solve(assemble(p, N), n_max);
    Real worst = 0.0;
    for (int i = 0; i < n_max; ++i) {
      Real change = std::abs(cur.lambda[i] - prev.lambda[i]) /
                    std::max(1.0, std::abs(cur.lambda[i]));
      worst = std::max(worst, change);
    }
    prev = std::move(cur);
    if (worst < tol) return prev;
  }
  throw std::runtime_error("oracle_spectrum: N cap reached without convergence");
}

}  // namespace slspec
