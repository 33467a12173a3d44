#include <doctest.h>

#include <cmath>

#include "slspec/prufer.hpp"
#include "slspec/quadrature.hpp"
#include "slspec/roots.hpp"

using namespace slspec;

TEST_CASE("prufer angle for zero potential is exactly rho x") {
  PruferAngle a = prufer_integrate(PotentialSpec::zero(), 3.7);
  for (Eigen::Index i = 0; i < a.grid_x.size(); ++i) {
    CHECK(std::abs(a.theta_values[i] - 3.7 * a.grid_x[i]) < 1e-12);
    CHECK(std::abs(a.log_r_values[i]) < 1e-12);
  }
  CHECK_THROWS_AS(prufer_integrate(PotentialSpec::zero(), 0.0), std::domain_error);
}

TEST_CASE("upsilon closed cases") {
  CHECK(upsilon(PotentialSpec::zero(), 10.0, 0.0, 0.0) == doctest::Approx(0.0));
  // sigma = 0, R=1, nu=0, rho=10: (1+1+1)/20
  CHECK(upsilon(PotentialSpec::zero(), 10.0, 0.0, 1.0) ==
        doctest::Approx(0.15).epsilon(1e-12));
  PotentialSpec ramp = PotentialSpec::linear_ramp();
  Real R = ramp.l2_norm();
  Real u40 = upsilon(ramp, 40.0, 0.0, R);
  Real u80 = upsilon(ramp, 80.0, 0.0, R);
  Real u160 = upsilon(ramp, 160.0, 0.0, R);
  CHECK(u80 < u40);
  CHECK(u160 < u80);
}

TEST_CASE("fixed point on zero potential converges immediately") {
  PruferAngle a = fixed_point_theta(PotentialSpec::zero(), 10.0, 0.0, 0.0);
  for (Eigen::Index i = 0; i < a.grid_x.size(); i += 97)
    CHECK(std::abs(a.theta_values[i] - 10.0 * a.grid_x[i]) < 1e-12);
}

TEST_CASE("fixed point matches ODE integration for sigma = x - pi (forced)") {
  PotentialSpec ramp = PotentialSpec::linear_ramp();
  FixedPointOptions opt;
  opt.force = true;  // the conservative admissibility bound fails here
  for (Real rho : {20.0, 50.0}) {
    PruferAngle fp = fixed_point_theta(ramp, rho, 0.0, ramp.l2_norm(), opt);
    const int n = static_cast<int>(fp.grid_x.size());
    const int stride = (n - 1) / 512;
    PruferAngle ode = prufer_integrate(ramp, rho, 1e-12, 1e-12, 513);
    Real sup = 0.0;
    for (int i = 0; i <= 512; ++i) {
      Complex diff = fp.theta_values[i * stride] - ode.theta_values[i];
      sup = std::max(sup, std::abs(diff));
      CHECK(std::abs(fp.grid_x[i * stride] - ode.grid_x[i]) < 1e-13);
    }
    CHECK(sup < 1e-8);
  }
}

TEST_CASE("fixed point respects the admissibility gate") {
  PotentialSpec big = sample_ball({1.0}, 2.0, 0.05, 32, 5);
  CHECK_THROWS_AS(fixed_point_theta(big, 2.0, 0.0, 2.0), std::domain_error);
}

TEST_CASE("fixed point f stays within a constant multiple of upsilon") {
  // admissible setting: small norm, moderate rho
  PotentialSpec small = sample_ball({1.0}, 0.08, 0.05, 16, 21);
  Real R = sobolev_norm(small, {0.0});
  Real rho = 60.0;
  Real ups = upsilon(small, rho, 0.0, R);
  REQUIRE(ups < admissibility_bound(0.0, R));
  PruferAngle fp = fixed_point_theta(small, rho, 0.0, R);
  Real sup_f = 0.0;
  for (Eigen::Index i = 0; i < fp.grid_x.size(); i += 31)
    sup_f = std::max(sup_f,
                     std::abs(fp.theta_values[i] - rho * fp.grid_x[i]));
  CHECK(sup_f <= 10.0 * ups);
}

TEST_CASE("quasi-derivative endpoint values at closed-form eigenvalues") {
  auto [u1, v1] = quasi_derivative_solve(PotentialSpec::zero(), 4.0);
  CHECK(std::abs(u1) < 1e-10);  // sin(2 pi)/2
  (void)v1;
  auto [u2, v2] = quasi_derivative_solve(PotentialSpec::zero(), 0.25);
  CHECK(std::abs(v2) < 1e-10);  // DN eigenvalue at (1/2)^2
  (void)u2;
  auto [u3, v3] = quasi_derivative_solve(PotentialSpec::linear_ramp(), 2.0);
  CHECK(std::abs(u3) < 1e-9);  // q = 1: lambda_1 = 2
  (void)v3;
}

TEST_CASE("eigenvalues of the free operator") {
  SpectralProblem pD{PotentialSpec::zero(), Bc::dirichlet, 1e-11, 1e-11};
  Spectrum sD = eigenvalues(pD, 10);
  for (int k = 1; k <= 10; ++k) {
    CHECK(std::abs(sD.lambda[k - 1].real() - Real(k) * Real(k)) < 1e-9);
    CHECK(sD.indices[k - 1] == k);
  }
  SpectralProblem pN{PotentialSpec::zero(), Bc::dirichlet_neumann, 1e-11, 1e-11};
  Spectrum sN = eigenvalues(pN, 10);
  for (int k = 1; k <= 10; ++k) {
    Real mu = (Real(k) - 0.5) * (Real(k) - 0.5);
    CHECK(std::abs(sN.lambda[k - 1].real() - mu) < 1e-9);
  }
}

TEST_CASE("constant potential shifts the spectrum") {
  PotentialSpec ramp = PotentialSpec::linear_ramp();  // q = 1, sigma(pi) = 0
  SpectralProblem pD{ramp, Bc::dirichlet, 1e-11, 1e-11};
  Spectrum sD = eigenvalues(pD, 8, 2);
  for (int k = 1; k <= 8; ++k)
    CHECK(std::abs(sD.lambda[k - 1].real() - (Real(k) * Real(k) + 1.0)) < 1e-8);
  CHECK(std::abs(sD.rho[0].real() - std::sqrt(2.0)) < 1e-9);
  SpectralProblem pN{ramp, Bc::dirichlet_neumann, 1e-11, 1e-11};
  Spectrum sN = eigenvalues(pN, 8, 2);
  for (int k = 1; k <= 8; ++k) {
    Real mu = (Real(k) - 0.5) * (Real(k) - 0.5) + 1.0;
    CHECK(std::abs(sN.lambda[k - 1].real() - mu) < 1e-8);
  }
}

TEST_CASE("negative eigenvalue falls back to the characteristic solver") {
  PotentialSpec ramp = PotentialSpec::linear_ramp(-0.5);  // q = -0.5
  SpectralProblem pN{ramp, Bc::dirichlet_neumann, 1e-11, 1e-11};
  Spectrum sN = eigenvalues(pN, 5);
  CHECK(std::abs(sN.lambda[0].real() - (-0.25)) < 1e-8);  // mu_1 = 0.25 - 0.5
  CHECK(sN.rho[0].real() == doctest::Approx(0.0));
  CHECK(sN.rho[0].imag() == doctest::Approx(0.5).epsilon(1e-7));  // +i branch
  for (int k = 2; k <= 5; ++k) {
    Real mu = (Real(k) - 0.5) * (Real(k) - 0.5) - 0.5;
    CHECK(std::abs(sN.lambda[k - 1].real() - mu) < 1e-8);
  }
}

TEST_CASE("delta interaction spectrum matches the matching-condition oracle") {
  const Real c = 0.9;
  PotentialSpec delta = PotentialSpec::heaviside_jump(kPi / 2.0, c);
  SpectralProblem p{delta, Bc::dirichlet, 1e-12, 1e-12};
  Spectrum s = eigenvalues(p, 8, 2);

  // oracle: even family rho = 2j (node at pi/2); odd family solves
  // tan(rho pi / 2) = -2 rho / c, one root per branch rho in (2j-1, 2j+1)
  std::vector<Real> oracle;
  for (int j = 1; j <= 5; ++j) oracle.push_back(2.0 * j);
  auto g = [c](Real rho) {
    return std::tan(rho * kPi / 2.0) + 2.0 * rho / c;
  };
  for (int j = 0; j <= 4; ++j) {
    // branch between odd integers, tan goes -inf..+inf on (2j+1-1, 2j+1+1)
    Real lo = 2.0 * j + 1.0 + 1e-9, hi = 2.0 * j + 3.0 - 1e-9;
    lo = std::max(lo, 1e-6);
    auto r = brent(g, lo, hi, g(lo), g(hi), 1e-14);
    oracle.push_back(r.x);
  }
  std::sort(oracle.begin(), oracle.end());
  for (int k = 1; k <= 8; ++k)
    CHECK(std::abs(s.rho[k - 1].real() - oracle[k - 1]) < 1e-8);
}

TEST_CASE("characteristic solver agrees with the prufer path") {
  PotentialSpec sigma = sample_ball({1.0}, 1.5, 0.05, 24, 13);
  SpectralProblem p{sigma, Bc::dirichlet, 1e-11, 1e-11};
  Spectrum a = eigenvalues(p, 6, 2);
  Spectrum b = characteristic_spectrum(p, 6, 2);
  for (int k = 1; k <= 6; ++k) {
    Real rel = std::abs(a.lambda[k - 1] - b.lambda[k - 1]) /
               std::max(1.0, std::abs(a.lambda[k - 1]));
    CHECK(rel < 1e-7);
  }
}

TEST_CASE("strip_check bound") {
  Spectrum s;
  s.indices = {1};
  s.rho = CVector(1);
  s.lambda = CVector(1);
  s.residuals = Vector::Zero(1);
  s.rho[0] = Complex(1.0, 0.0);
  CHECK(strip_check(s, 0.0));
  s.rho[0] = Complex(1.0, 5.0);
  CHECK_FALSE(strip_check(s, 0.0));  // bound is 4 at R = 0
}

TEST_CASE("fourier transform closed forms and decay") {
  CHECK(std::abs(fourier_F(PotentialSpec::zero(), 2.0)) == 0.0);
  PotentialSpec one = PotentialSpec::fourier(1.0, {});
  CHECK(std::abs(fourier_F(one, 2.0)) < 1e-14);  // (e^{2 i pi} - 1)/(2i)
  PotentialSpec cosx = PotentialSpec::cosine_term(1, 1.0);
  Complex F = fourier_F(cosx, 10.5);
  Complex Fq = integrate_adaptive(
      [&](Real x) { return cosx.eval(x) * std::exp(Complex(0.0, 10.5) * x); }, 0.0,
      kPi);
  CHECK(std::abs(F - Fq) < 1e-10);
  CHECK(std::abs(F) <= 1.2 * kPi / 10.5);  // ~ C ||sigma||_1 / rho
}

TEST_CASE("prufer angle at an eigenvalue hits the quantization target") {
  PotentialSpec ramp = PotentialSpec::linear_ramp();
  SpectralProblem p{ramp, Bc::dirichlet, 1e-12, 1e-12};
  Spectrum s = eigenvalues(p, 1);
  PruferAngle a = prufer_integrate(ramp, s.rho[0].real(), 1e-12, 1e-12, 9);
  CHECK(std::abs(std::sin(a.theta_values[8])) < 1e-9);
}
