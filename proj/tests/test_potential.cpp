#include <doctest.h>

#include <cmath>

#include "slspec/io.hpp"
#include "slspec/potential.hpp"
#include "slspec/quadrature.hpp"

using namespace slspec;

TEST_CASE("eval_sigma on the three stated cases") {
  PotentialSpec cosx = PotentialSpec::cosine_term(1, 1.0);
  CHECK(eval_sigma(cosx, 0.0).real() == doctest::Approx(1.0));
  PotentialSpec ramp = PotentialSpec::linear_ramp();  // x - pi
  CHECK(eval_sigma(ramp, kPi / 2.0).real() == doctest::Approx(-kPi / 2.0));
  CHECK(eval_sigma(PotentialSpec::zero(), 1.234) == Complex(0.0));
  CHECK_THROWS_AS(eval_sigma(cosx, -0.5), std::domain_error);
  CHECK_THROWS_AS(eval_sigma(cosx, 4.0), std::domain_error);
}

TEST_CASE("sobolev_norm convention") {
  PotentialSpec cosx = PotentialSpec::cosine_term(1, 1.0);
  CHECK(sobolev_norm(cosx, {1.0}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(sobolev_norm(PotentialSpec::zero(), {0.7}) == 0.0);
  CHECK_THROWS_AS(sobolev_norm(PotentialSpec::linear_ramp(), {1.0}),
                  std::domain_error);

  // c_k = k^{-2}, k <= 64, theta = 1: independent summation of the series
  std::vector<Complex> c(64);
  for (int k = 1; k <= 64; ++k) c[k - 1] = std::pow(Real(k), -2.0);
  PotentialSpec p = PotentialSpec::fourier(0.0, c);
  Real direct = 0.0;
  for (int k = 1; k <= 64; ++k)
    direct += (1.0 + Real(k) * Real(k)) * std::pow(Real(k), -4.0);
  CHECK(sobolev_norm(p, {1.0}) == doctest::Approx(std::sqrt(direct)).epsilon(1e-14));
}

TEST_CASE("sobolev_norm is monotone in theta") {
  PotentialSpec p = sample_ball({0.5}, 1.5, 0.05, 32, 42);
  Real prev = 0.0;
  for (Real th : {0.0, 0.25, 0.5, 1.0, 2.0, 3.5}) {
    Real n = sobolev_norm(p, {th});
    CHECK(n >= prev);
    prev = n;
  }
}

TEST_CASE("differentiate acts termwise") {
  PotentialSpec c2 = PotentialSpec::cosine_term(2, 1.0);
  PotentialSpec d = differentiate(c2, 1);  // -2 sin 2x
  CHECK(d.cos_coeffs()[1] == Complex(0.0));
  CHECK(d.sin_coeffs()[1] == Complex(-2.0));
  PotentialSpec s3 = PotentialSpec::sine_term(3, 1.0);
  PotentialSpec dd = differentiate(s3, 2);  // -9 sin 3x
  CHECK(dd.sin_coeffs()[2] == Complex(-9.0));
  CHECK_THROWS_AS(differentiate(PotentialSpec::linear_ramp(), 1), std::domain_error);
}

TEST_CASE("differentiate matches the analytic derivative on a grid") {
  PotentialSpec p = PotentialSpec::fourier(0.3, {0.5, -0.2, 0.0, 0.1}, {0.4, 0.0, -0.3});
  PotentialSpec dp = differentiate(p, 1);
  for (int i = 0; i <= 32; ++i) {
    Real x = kPi * i / 32.0;
    Real expect = -0.5 * std::sin(x) + 0.4 * std::sin(2 * x) - 0.4 * std::sin(4 * x) +
                  0.4 * std::cos(x) - 0.9 * std::cos(3 * x);
    CHECK(dp.eval(x).real() == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("sample_ball determinism and norm placement") {
  CHECK(sample_ball({1.0}, 0.0, 0.05, 16, 3) == PotentialSpec::zero());
  PotentialSpec a = sample_ball({1.0}, 2.0, 0.05, 128, 7);
  PotentialSpec b = sample_ball({1.0}, 2.0, 0.05, 128, 7);
  CHECK(a == b);
  Real n = sobolev_norm(a, {1.0});
  CHECK(n > 1.0);
  CHECK(n <= 2.0 + 1e-12);
  for (std::uint64_t seed : {1ull, 9ull, 77ull}) {
    PotentialSpec s = sample_ball({0.3}, 1.0, 0.05, 64, seed);
    CHECK(sobolev_norm(s, {0.3}) <= 1.0 + 1e-12);
  }
}

TEST_CASE("endpoints") {
  auto [a, b] = endpoints(PotentialSpec::linear_ramp());
  CHECK(a.real() == doctest::Approx(-kPi));
  CHECK(b.real() == doctest::Approx(0.0));
  auto [c, d] = endpoints(PotentialSpec::cosine_term(1, 1.0));
  CHECK(c.real() == doctest::Approx(1.0));
  CHECK(d.real() == doctest::Approx(-1.0));
  auto [e, f] = endpoints(PotentialSpec::zero());
  CHECK(e == Complex(0.0));
  CHECK(f == Complex(0.0));
}

TEST_CASE("fast evaluator agrees with direct evaluation") {
  PotentialSpec p = sample_ball({0.3}, 1.0, 0.05, 96, 11);
  RealPotentialEvaluator ev(p);
  for (int i = 0; i <= 200; ++i) {
    Real x = kPi * i / 200.0;
    CHECK(ev(x) == doctest::Approx(p.eval(x).real()).epsilon(1e-12));
  }
  PotentialSpec ramp = PotentialSpec::heaviside_jump(kPi / 2.0, 1.5);
  RealPotentialEvaluator rev(ramp);
  CHECK(rev(0.3) == 0.0);
  CHECK(rev(2.0) == 1.5);
  CHECK(rev(kPi / 2.0) == 1.5);  // right limit at the jump
}

TEST_CASE("sigma_exp_integral matches quadrature for both kinds") {
  Complex mu(0.0, 7.3);
  PotentialSpec f = PotentialSpec::fourier(0.2, {0.5, -0.1}, {0.3});
  Complex a = sigma_exp_integral(f, mu, 2.5);
  Complex aq = integrate_adaptive(
      [&](Real t) { return f.eval(t) * std::exp(mu * t); }, 0.0, 2.5);
  CHECK(std::abs(a - aq) < 1e-12);

  PotentialSpec pw = PotentialSpec::piecewise_linear(
      {0.0, 1.0, 1.0, kPi}, {Complex(0.0), Complex(0.5), Complex(1.5), Complex(0.2)});
  Complex b = sigma_exp_integral(pw, mu, 3.0);
  Complex bq = integrate_adaptive_split(
      [&](Real t) { return pw.eval(t) * std::exp(mu * t); }, 0.0, 3.0, {1.0});
  CHECK(std::abs(b - bq) < 1e-11);

  Complex c = sigma2_exp_integral(pw, mu, kPi);
  Complex cq = integrate_adaptive_split(
      [&](Real t) {
        Complex s = pw.eval(t);
        return s * s * std::exp(mu * t);
      },
      0.0, kPi, {1.0});
  CHECK(std::abs(c - cq) < 1e-11);
}

TEST_CASE("potential json round trip") {
  PotentialSpec f = PotentialSpec::fourier(Complex(0.1, 0.2), {0.5, -0.1}, {0.3});
  CHECK(potential_from_json(potential_to_json(f)) == f);
  PotentialSpec pw = PotentialSpec::heaviside_jump(kPi / 2.0, Complex(1.0, 0.0));
  CHECK(potential_from_json(potential_to_json(pw)) == pw);
  CHECK(potential_from_json(Json::parse(
            R"({"kind":"fourier","c0":0.0,"cos":[1.0],"sin":[]})")) ==
        PotentialSpec::cosine_term(1, 1.0));
}

TEST_CASE("piecewise invariants enforced") {
  CHECK_THROWS(PotentialSpec::piecewise_linear({0.0, 1.0}, {Complex(0.0)}));
  CHECK_THROWS(PotentialSpec::piecewise_linear({0.5, kPi}, {Complex(0.0), Complex(1.0)}));
  CHECK_THROWS(PotentialSpec::piecewise_linear({0.0, 2.0, 1.0, kPi},
                                               {Complex(0.0), Complex(1.0),
                                                Complex(1.0), Complex(0.0)}));
}
