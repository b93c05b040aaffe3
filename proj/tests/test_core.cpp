#include <doctest.h>

#include <cmath>
#include <random>

#include "cusp/errors.hpp"
#include "cusp/jet.hpp"
#include "cusp/malpha.hpp"
#include "cusp/mollifier.hpp"
#include "cusp/quadrature.hpp"
#include "cusp/special.hpp"
#include "oracles.hpp"

using namespace cusp;

TEST_CASE("quadrature: closed-form suite within 10x tolerance") {
  struct Case {
    std::function<double(double)> f;
    double a, b, exact;
    Endpoints ends;
  };
  const double pi = kPi;
  EndpointSingularity inv_sqrt{-0.5, false}, logp{0.0, true}, logsq{-0.5, true};
  std::vector<Case> cases = {
      {[](double x) { return 1.0; }, 0, 1, 1.0, {}},
      {[](double x) { return x * x; }, 0, 3, 9.0, {}},
      {[](double x) { return std::pow(x, 7) - 2 * x; }, -1, 2, 255.0 / 8.0 - 3.0, {}},
      {[](double x) { return std::pow(x, 12); }, 0, 1, 1.0 / 13.0, {}},
      {[](double x) { return std::exp(x); }, 0, 1, std::exp(1.0) - 1.0, {}},
      {[](double x) { return std::sin(x); }, 0, pi, 2.0, {}},
      {[](double x) { return std::cos(50 * x); }, 0, 1, std::sin(50.0) / 50.0, {}},
      {[](double x) { return 1.0 / (1.0 + x * x); }, -1, 1, pi / 2.0, {}},
      {[](double x) { return 1.0 / (1e-2 + x * x); }, -1, 1, 20.0 * std::atan(10.0), {}},
      {[](double x) { return std::log(x); }, 0, 1, -1.0, {logp, {}}},
      {[](double x) { return x * std::log(x); }, 0, 1, -0.25, {logp, {}}},
      {[](double x) { return std::log(x) * std::log(x); }, 0, 1, 2.0, {logp, {}}},
      {[](double x) { return std::log(1.0 - x); }, 0, 1, -1.0, {{}, logp}},
      {[](double x) { return 1.0 / std::sqrt(x); }, 0, 1, 2.0, {inv_sqrt, {}}},
      {[](double x) { return 1.0 / std::sqrt(1.0 - x); }, 0, 1, 2.0, {{}, inv_sqrt}},
      {[](double x) { return 1.0 / std::sqrt(x * (1.0 - x)); }, 0, 1, pi, {inv_sqrt, inv_sqrt}},
      {[](double x) { return std::cos(x) / std::sqrt(x); }, 0, 1, 1.8090484758005438, {inv_sqrt, {}}},
      {[](double x) { return std::log(x) / std::sqrt(x); }, 0, 1, -4.0, {logsq, {}}},
      {[](double x) { return std::sqrt(x); }, 0, 4, 16.0 / 3.0, {{0.5, false}, {}}},
      {[](double x) { return std::pow(x, -0.9); }, 0, 1, 10.0, {{-0.9, false}, {}}},
  };
  REQUIRE(cases.size() == 20);
  const QuadratureSpec spec{1e-10, 1e-14, 2000};
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    const auto r = integrate(c.f, c.a, c.b, spec, c.ends);
    INFO("case " << i);
    CHECK(r.converged);
    CHECK(std::abs(r.value - c.exact) <= 10.0 * std::max(spec.abs_tol, spec.rel_tol * std::abs(c.exact)));
  }
}

TEST_CASE("quadrature: panels and infinite range") {
  auto r = integrate_panels([](double x) { return std::abs(x - 0.3); }, {0.0, 0.3, 1.0});
  CHECK(r.value == doctest::Approx(0.045 + 0.245).epsilon(1e-13));
  auto inf = integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0);
  CHECK(inf.value == doctest::Approx(1.0).epsilon(1e-11));
  CHECK_THROWS_AS(integrate([](double x) { return x; }, 0.0, INFINITY), DomainError);
  CHECK_THROWS_AS(integrate([](double x) { return x; }, 0.0, 1.0, {}, Endpoints{{-1.5, false}, {}}),
                  PreconditionError);
}

TEST_CASE("special functions against independent oracles") {
  for (cplx z : {cplx(0.3, 0.2), cplx(2.5, -7.0), cplx(11.0, 3.0), cplx(-2.7, 0.5)}) {
    // same value up to the branch of the imaginary part
    const cplx diff = log_gamma(z) - oracle::lgamma(z);
    const double scale = std::max(1.0, std::abs(oracle::lgamma(z)));
    CHECK(std::abs(diff.real()) < 1e-12 * scale);
    CHECK(std::abs(diff.imag() - 2.0 * kPi * std::round(diff.imag() / (2.0 * kPi))) < 1e-12 * scale);
  }
  for (double x : {0.5, 1.5, 3.0, 17.25}) CHECK(log_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-13));
  for (cplx s : {cplx(0.5, 3.0), cplx(0.8, -1.0), cplx(1.5, 4.5), cplx(3.0, 0.0)}) {
    CHECK(std::abs(riemann_zeta(s) - oracle::zeta(s)) < 1e-12);
  }
  CHECK(riemann_zeta(2.0) == doctest::Approx(kPi * kPi / 6.0).epsilon(1e-14));
  CHECK(riemann_zeta(0.0) == doctest::Approx(-0.5).epsilon(1e-14));
  // zeros on the critical line
  for (double g : oracle::zeta_zero_ordinates()) CHECK(std::abs(riemann_zeta(cplx(0.5, g))) < 1e-11);
  CHECK_THROWS_AS(riemann_zeta(cplx(1.0, 0.0)), PoleError);
  CHECK_THROWS_AS(log_gamma(cplx(-2.0, 0.0)), DomainError);
}

TEST_CASE("jet arithmetic reproduces Taylor coefficients") {
  const Jet x = Jet::variable(0.3, 6);
  Jet s, c;
  sincos(x, s, c);
  const Jet e = exp(x) * s / (1.0 + x * x);
  // derivative by complex-free finite check of order 1 and closed forms of order 0
  CHECK(e[0] == doctest::Approx(std::exp(0.3) * std::sin(0.3) / 1.09).epsilon(1e-15));
  auto g = [](double t) { return std::exp(t) * std::sin(t) / (1.0 + t * t); };
  const double h = 1e-4;
  CHECK(e.derivative(1) == doctest::Approx((g(0.3 + h) - g(0.3 - h)) / (2 * h)).epsilon(1e-8));
  CHECK(e.derivative(2) == doctest::Approx((g(0.3 + h) - 2 * g(0.3) + g(0.3 - h)) / (h * h)).epsilon(1e-6));
  Jet sh, ch;
  sinhcosh(x, sh, ch);
  const Jet one = ch * ch - sh * sh;
  CHECK(one[0] == doctest::Approx(1.0));
  for (int k = 1; k <= 6; ++k) CHECK(std::abs(one[k]) < 1e-14);
  const Jet r = sqrt(x * x);
  for (int k = 0; k <= 6; ++k) CHECK(std::abs(r[k] - x[k]) < 1e-14);
}

TEST_CASE("mollifier contract") {
  Mollifier rho;
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> U(-1.5, 1.5);
  for (int i = 0; i < 2000; ++i) {
    const double t = U(rng);
    const double v = rho(t);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(v == rho(-t));
    if (std::abs(t) <= 0.5) CHECK(v == 1.0);
    if (std::abs(t) >= 1.0) CHECK(v == 0.0);
  }
  // derivative consistent with values
  for (double t : {0.55, 0.7, 0.85, 0.95}) {
    const double h = 1e-6;
    CHECK(rho.derivative(t) == doctest::Approx((rho(t + h) - rho(t - h)) / (2 * h)).epsilon(1e-6));
  }
  CHECK(bump_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  const double mass = oracle::tanh_sinh([](double u) { return bump(u); }, -1.0, 1.0);
  CHECK(bump_mass() == doctest::Approx(mass).epsilon(1e-12));
  CHECK_THROWS_AS(Mollifier(1.0), PreconditionError);
}

TEST_CASE("psi: parity, value at 0 and transform") {
  TestFunctionPsi psi{20.0, 1.0};
  for (double t : {1e-9, 0.01, 0.3, 0.77, 0.99, 1.2}) CHECK(psi_eval(psi, t) == psi_eval(psi, -t));
  CHECK(psi_eval(psi, 0.0) == doctest::Approx(20.0 / kPi).epsilon(1e-15));
  CHECK(psi_eval(psi, 1.0) == 0.0);
  // psi_hat(0) against an independent integrator
  auto f = [&](double t) { return psi_eval(psi, t); };
  const double ref = 2.0 * oracle::kronrod(f, 0.0, 0.5) + 2.0 * oracle::kronrod(f, 0.5, 1.0);
  CHECK(psi_hat(psi, 0.0) == doctest::Approx(ref).epsilon(1e-10));
  // smoothed indicator of [-T, T]
  for (double r : {5.0, 19.5, 40.0}) {
    auto g = [&](double t) { return psi_eval(psi, t) * std::cos(r * t); };
    double ref_r = 0.0;
    for (int k = 0; k < 20; ++k) ref_r += 2.0 * oracle::kronrod(g, 0.05 * k, 0.05 * (k + 1));
    CHECK(psi_hat(psi, r) == doctest::Approx(ref_r).epsilon(1e-9).scale(1e-9));
  }
  CHECK(psi_hat(psi, 5.0) == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(std::abs(psi_hat(psi, 40.0)) < 1e-2);
  CHECK(psi_hat_imaginary(psi, 0.0) == doctest::Approx(psi_hat(psi, 0.0)).epsilon(1e-12));
}

TEST_CASE("M_alpha recursion and pairing reduction") {
  for (double a : {0.5, 1.0, 1.5, 2.0}) {
    for (int i = 1; i <= 100; ++i) {
      const double s = 0.05 * i;
      const double lhs = s * m_alpha_eval({a - 1.0, 0}, s);
      const double rhs = a * m_alpha_eval({a, 0}, s);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
    CHECK(m_alpha_eval({a, 0}, -0.3) == 0.0);
  }
  SmoothTestFunction g;
  g.max_order = 4;
  g.name = "gaussian";
  g.eval = [](double s, int k) {
    const double e = std::exp(-s * s);
    switch (k) {
      case 0: return e;
      case 1: return -2 * s * e;
      case 2: return (4 * s * s - 2) * e;
      case 3: return (-8 * s * s * s + 12 * s) * e;
      default: return (16 * std::pow(s, 4) - 48 * s * s + 12) * e;
    }
  };
  // effective index -1/2 reached from three starting points
  const double p1 = m_alpha_pair({0.5, 1}, g);
  const double p2 = m_alpha_pair({1.5, 2}, g);
  const double p3 = m_alpha_pair({2.5, 3}, g);
  CHECK(std::abs(p1 - p2) < 1e-8);
  CHECK(std::abs(p1 - p3) < 1e-8);
  // direct pairing for alpha > -1: M_{-1/2} = s^{-1/2}/sqrt(pi), int e^{-s^2} s^{-1/2} = Gamma(1/4)/2
  CHECK(p1 == doctest::Approx(std::tgamma(0.25) / (2.0 * std::sqrt(kPi))).epsilon(1e-9));
  CHECK_THROWS_AS(m_alpha_pair({0.5, 5}, g), PreconditionError);
}
