#include <doctest.h>

#include <cmath>

#include "slspec/asymptotics.hpp"
#include "slspec/quadrature.hpp"

using namespace slspec;

namespace {

// Exact S_n(pi, rho) for fourier sigma through the exponential-sum calculus:
// a third route, independent of both S_quadrature and S_expansion.
Complex exact_S(const PotentialSpec& sigma, Real rho, int n) {
  ExpSum q = sigma.to_exp_sum().derivative();
  ExpSum S = ExpSum::sine(rho);
  const Complex i(0.0, 1.0);
  for (int level = 1; level <= n; ++level) {
    // S_new(x) = (e^{i rho x} A(x) - e^{-i rho x} B(x)) / (2 i rho),
    // A = int_0^x e^{-i rho t} q S, B = int_0^x e^{i rho t} q S
    ExpSum A = (ExpSum::exponential(1.0, -i * rho) * q * S).antiderivative();
    ExpSum B = (ExpSum::exponential(1.0, i * rho) * q * S).antiderivative();
    S = (ExpSum::exponential(1.0, i * rho) * A -
         ExpSum::exponential(1.0, -i * rho) * B) *
        (1.0 / (2.0 * i * rho));
  }
  return S.eval(kPi);
}

Spectrum spectrum_of(const PotentialSpec& sigma, Bc bc, int n, Real tol = 1e-11) {
  SpectralProblem p{sigma, bc, tol, tol};
  return eigenvalues(p, n, 2);
}

}  // namespace

TEST_CASE("remainders interleave and vanish for the free operator") {
  Spectrum d = spectrum_of(PotentialSpec::zero(), Bc::dirichlet, 6);
  Spectrum n = spectrum_of(PotentialSpec::zero(), Bc::dirichlet_neumann, 6);
  RemainderSeq r = remainders(d, n, 0.5);
  CHECK(r.s_values.size() == 12);
  for (Eigen::Index i = 0; i < 12; ++i) CHECK(std::abs(r.s_values[i]) < 1e-9);

  Spectrum d1 = spectrum_of(PotentialSpec::linear_ramp(), Bc::dirichlet, 2);
  Spectrum n1 = spectrum_of(PotentialSpec::linear_ramp(), Bc::dirichlet_neumann, 2);
  RemainderSeq r1 = remainders(d1, n1, 1.0);
  CHECK(r1.s_values[1].real() ==
        doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-8));  // s_2
  CHECK(r1.s_values[0].real() ==
        doctest::Approx(std::sqrt(1.25) - 0.5).epsilon(1e-8));  // s_1

  Spectrum short_spec = spectrum_of(PotentialSpec::zero(), Bc::dirichlet, 3);
  CHECK_THROWS(remainders(short_spec, n, 0.5));
}

TEST_CASE("phi coordinates: zero case and constant potential") {
  Spectrum d = spectrum_of(PotentialSpec::zero(), Bc::dirichlet, 4);
  Spectrum n = spectrum_of(PotentialSpec::zero(), Bc::dirichlet_neumann, 4);
  CVector phi = phi_of_sigma(PotentialSpec::zero(), remainders(d, n, 0.5));
  CHECK(phi.cwiseAbs().maxCoeff() < 1e-9);

  PotentialSpec ramp = PotentialSpec::linear_ramp();
  Spectrum d1 = spectrum_of(ramp, Bc::dirichlet, 2);
  Spectrum n1 = spectrum_of(ramp, Bc::dirichlet_neumann, 2);
  CVector phi1 = phi_of_sigma(ramp, remainders(d1, n1, 1.0));
  // Phi_2 = (sqrt2 - 1) + (1/2) b_2, b_2 = -1
  CHECK(phi1[1].real() ==
        doctest::Approx(std::sqrt(2.0) - 1.0 - 0.5).epsilon(1e-7));
}

TEST_CASE("thm41 residuals for q = 1 match closed forms") {
  PotentialSpec ramp = PotentialSpec::linear_ramp();
  Spectrum d = spectrum_of(ramp, Bc::dirichlet, 6, 1e-12);
  Spectrum n = spectrum_of(ramp, Bc::dirichlet_neumann, 6, 1e-12);
  CVector alpha = thm41_alphas(ramp, d, n);
  CHECK(alpha[1].real() ==
        doctest::Approx(std::sqrt(2.0) - 1.5).epsilon(1e-7));  // alpha_2
  Real a6 = 9.0 * (std::sqrt(10.0) - 3.0 - 1.0 / 6.0);
  CHECK(alpha[5].real() == doctest::Approx(a6).epsilon(1e-6));
  CHECK(std::abs(alpha[5].real() - (-0.0395)) < 2e-4);  // spec's quoted value
}

TEST_CASE("thm41 residuals bounded for q = cos 2x") {
  PotentialSpec sigma = PotentialSpec::sine_term(2, 0.5);  // q = cos 2x
  Spectrum d = spectrum_of(sigma, Bc::dirichlet, 24);
  Spectrum n = spectrum_of(sigma, Bc::dirichlet_neumann, 24);
  CVector alpha = thm41_alphas(sigma, d, n);
  Real sum = 0.0;
  for (Eigen::Index i = 0; i < alpha.size(); ++i) sum += std::norm(alpha[i]);
  CHECK(sum < 10.0);  // l2-bounded residuals
  // a_2 of q = cos 2x equals 1 (spec example)
  CVector a = apply_cos_T(differentiate(sigma, 1), 4);
  CHECK(a[1].real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(a[0]) < 1e-13);
}

TEST_CASE("S_quadrature closed cases") {
  CHECK(S_quadrature(PotentialSpec::zero(), 7.3, 0) ==
        doctest::Approx(std::sin(7.3 * kPi)).epsilon(1e-14));
  for (int n : {1, 2, 3})
    CHECK(std::abs(S_quadrature(PotentialSpec::zero(), 5.0, n)) < 1e-12);
  // q = 1, rho = 10, n = 1: S_1(pi) = -pi cos(10 pi)/20 (second term vanishes)
  Real s1 = S_quadrature(PotentialSpec::linear_ramp(), 10.0, 1);
  CHECK(s1 == doctest::Approx(-kPi / 20.0).epsilon(1e-9));
}

TEST_CASE("S_quadrature agrees with the exponential-sum route") {
  PotentialSpec sigma = PotentialSpec::fourier(0.0, {0.4}, {0.0, 0.6});
  for (int n : {1, 2, 3}) {
    Real quad = S_quadrature(sigma, 10.25, n);
    Complex exact = exact_S(sigma, 10.25, n);
    CHECK(std::abs(quad - exact.real()) < 1e-9);
    CHECK(std::abs(exact.imag()) < 1e-10);
  }
}

TEST_CASE("series bound |S_n| <= ||q||^n x^{n/2} / (sqrt(n!) rho^n)") {
  PotentialSpec sigma = PotentialSpec::sine_term(2, 0.5);  // q = cos2x, ||q|| = sqrt(pi/2)/sqrt2...
  PotentialSpec q = differentiate(sigma, 1);
  Real qn = q.l2_norm();
  for (Real rho : {5.0, 10.0, 20.0}) {
    Real fact = 1.0;
    for (int n = 1; n <= 4; ++n) {
      fact *= n;
      Real bound = std::pow(qn, n) * std::pow(kPi, n / 2.0) /
                   (std::sqrt(fact) * std::pow(rho, n));
      CHECK(std::abs(S_quadrature(sigma, rho, n)) <= bound * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("identity (integration-by-parts ladder) holds numerically") {
  // int_0^x sin(rho(x-t))/rho nu_s(t) f(t) dt decomposed into nu_{s+1}
  // boundary terms, the nu_j ladder, and the nu_{m+1} tail
  const Real rho = 17.5;
  const int m = 3;
  PotentialSpec fspec = PotentialSpec::fourier(0.0, {1.0}, {0.0, 0.5});
  ExpSum f = fspec.to_exp_sum();
  const Real x = kPi;
  for (int s = 0; s <= 2; ++s) {
    auto nu = [&](int j, Real t) { return nu_eval(j, t, rho).real(); };
    Complex lhs = integrate_adaptive(
        [&](Real t) {
          return std::sin(rho * (x - t)) / rho * nu(s, t) * f.eval(t).real();
        },
        0.0, x, {1e-13, 1e-13, 40});
    Real sgn_s1 = (s % 2 == 0) ? -1.0 : 1.0;  // (-1)^{s+1}
    Complex rhs = sgn_s1 * nu(s + 1, x) * f.antiderivative().eval(x);
    for (int j = s + 2; j <= m + 1; ++j) {
      ExpSum der = f.derivative(j - s - 2);
      Real inner = (j % 2 == 1) ? 1.0 : -1.0;  // (-1)^{j-1}
      rhs -= Real(sign_pm(s) * sign_pm(j)) * nu(j, x) *
             (der.eval(x) - inner * der.eval(0.0));
    }
    // tail: -(+-)_s (+-)_{m+2} int nu_{m+1}(x - 2t) f^{(m-s)}
    ExpSum fms = f.derivative(m - s);
    Complex tail = integrate_adaptive(
        [&](Real t) { return nu_eval(m + 1, x - 2.0 * t, rho) * fms.eval(t); }, 0.0,
        x, {1e-13, 1e-13, 40});
    rhs -= Real(sign_pm(s) * sign_pm(m + 2)) * tail;
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("f tables: first row closed form and zero potential") {
  FTable t = f_recurrence(PotentialSpec::linear_ramp(), 1, 65);
  for (int i = 0; i < 65; ++i)
    CHECK(t.values[0][0][i] == doctest::Approx(-t.grid_x[i]).epsilon(1e-12));

  FTable z = f_recurrence(PotentialSpec::fourier(0.0, {0.0}), 2, 17);
  for (auto& row : z.values)
    for (auto& col : row) CHECK(col.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("f table first row matches the direct formula for a trig sigma") {
  PotentialSpec sigma = PotentialSpec::fourier(0.0, {0.7, 0.0, -0.2}, {0.3});
  const int m = 3;
  FTable t = f_recurrence(sigma, m, 33);
  for (int j = 1; j <= m; ++j) {
    PotentialSpec dj = (j == 1) ? sigma : differentiate(sigma, j - 1);
    Real inner = (j % 2 == 1) ? 1.0 : -1.0;  // (-1)^{j-1}
    for (int i = 0; i < 33; ++i) {
      Real expect = sign_pm(j) *
                    (dj.eval(t.grid_x[i]).real() - inner * dj.eval(0.0).real());
      CHECK(t.values[0][j - 1][i] == doctest::Approx(expect).epsilon(1e-11));
    }
  }
}

TEST_CASE("S_expansion reproduces the partial sums at the stated order") {
  // q = 1, m = 1: |S_exp - (S_1 + S_2)| = O(rho^-3)
  PotentialSpec ramp = PotentialSpec::linear_ramp();
  auto diff_at = [&](Real rho) {
    Real partial = S_quadrature(ramp, rho, 1) + S_quadrature(ramp, rho, 2);
    return std::abs(S_expansion(ramp, rho, 1).real() - partial);
  };
  Real d40 = diff_at(40.0), d80 = diff_at(80.0);
  CHECK(d40 < 5e-5);
  CHECK(d80 < d40 / 6.0);  // order >= log2(6) ~ 2.6, expected 3

  // smooth fourier sigma, m = 2: compare against S_1 + S_2 + S_3
  PotentialSpec sigma = PotentialSpec::sine_term(2, 1.0);
  auto diff2 = [&](Real rho) {
    Real partial = S_quadrature(sigma, rho, 1) + S_quadrature(sigma, rho, 2) +
                   S_quadrature(sigma, rho, 3);
    return std::abs(S_expansion(sigma, rho, 2).real() - partial);
  };
  Real e40 = diff2(40.0), e80 = diff2(80.0);
  Real order = std::log2(e40 / e80);
  CHECK(order >= 3.5);  // m + 1.5
}

TEST_CASE("rate_fit recovers power laws") {
  CVector x(300);
  for (int k = 1; k <= 300; ++k) x[k - 1] = 1.0 / Real(k);
  RateFit f = rate_fit(x, 10, 300);
  CHECK(f.slope == doctest::Approx(-1.0).epsilon(1e-6));
  for (int k = 1; k <= 300; ++k) x[k - 1] = std::pow(Real(k), -2.5);
  CHECK(rate_fit(x, 10, 300).slope == doctest::Approx(-2.5).epsilon(1e-6));
  CHECK_THROWS(rate_fit(x, 10, 15));
  CVector zeros = CVector::Zero(60);
  CHECK_THROWS(rate_fit(zeros, 1, 60));
}

TEST_CASE("thm51 fit for q = 1 recovers h0 = 1, h1 = -1") {
  PotentialSpec ramp = PotentialSpec::linear_ramp();
  Spectrum d = spectrum_of(ramp, Bc::dirichlet, 60, 1e-12);
  Spectrum n = spectrum_of(ramp, Bc::dirichlet_neumann, 60, 1e-12);
  Thm51Report rep = thm51_check(ramp, d, n, 2);
  CHECK(rep.s == 1);
  CHECK(rep.coeffs.h[0] == doctest::Approx(1.0).epsilon(5e-3));
  CHECK(rep.coeffs.h[1] == doctest::Approx(-1.0).epsilon(0.3));
  CHECK(rep.coeffs.g[0] == doctest::Approx(1.0).epsilon(5e-3));
  // validated linear part +1 at j=0, printed sign flips it
  CHECK(rep.h_linear_validated[0] == doctest::Approx(1.0));
  CHECK(rep.h_linear_printed[0] == doctest::Approx(-1.0));
  CHECK(rep.g_linear_validated[0] == doctest::Approx(1.0));
  // even m: h_s^0 vanishes
  CHECK(rep.h_linear_validated[1] == 0.0);
  CHECK(rep.residual_trend_ok);
}

TEST_CASE("thm51 on the zero potential fits all-zero coefficients") {
  Spectrum d = spectrum_of(PotentialSpec::zero(), Bc::dirichlet, 40);
  Spectrum n = spectrum_of(PotentialSpec::zero(), Bc::dirichlet_neumann, 40);
  Thm51Report rep = thm51_check(PotentialSpec::fourier(0.0, {0.0}), d, n, 2);
  CHECK(std::abs(rep.coeffs.h[0]) < 1e-7);
  CHECK(std::abs(rep.coeffs.g[0]) < 1e-7);
}

TEST_CASE("derivative of F at the origin is -T/2 (directional smallness)") {
  // ||F(sigma) + (1/2) T sigma||_2 / eps shrinks as eps halves
  const int K = 12;
  Real prev = -1.0;
  for (Real eps : {0.1, 0.05}) {
    PotentialSpec sigma = PotentialSpec::sine_term(2, eps);
    Spectrum d = spectrum_of(sigma, Bc::dirichlet, K);
    Spectrum n = spectrum_of(sigma, Bc::dirichlet_neumann, K);
    CVector phi = phi_of_sigma(sigma, remainders(d, n, 1.0));
    Real ratio = phi.norm() / eps;
    if (prev > 0.0) CHECK(ratio < prev / 1.8);
    prev = ratio;
  }
}

TEST_CASE("weighted window sums") {
  CVector v = CVector::Ones(10);
  CHECK(weighted_window_sum(v, 0.0, 1, 10) == doctest::Approx(10.0));
  CHECK(weighted_window_sum(v, 0.5, 2, 3) == doctest::Approx(5.0));
  CHECK(weighted_window_sum(v, 0.0, 8, 25) == doctest::Approx(3.0));  // clamps
}
