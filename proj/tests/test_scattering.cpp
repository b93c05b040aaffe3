#include <doctest.h>

#include <cmath>
#include <random>

#include "cusp/errors.hpp"
#include "cusp/scattering.hpp"
#include "models.hpp"
#include "oracles.hpp"

using namespace cusp;

namespace {

double panel_integral(const std::function<double(double)>& f, double a, double b, double width = 0.5,
                      unsigned depth = 15) {
  double s = 0.0;
  for (double x = a; x < b; x += width) s += oracle::kronrod(f, x, std::min(b, x + width), 1e-13, depth);
  return s;
}

}  // namespace

TEST_CASE("phi model: unitarity, functional equation and reality") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = testgen::random_phi_model(rng, 1 + trial % 3, 5 + 20 * trial, trial % 2 == 1, trial % 4 == 3);
    const double h = 0.5 * m.resonances.d;
    INFO("trial " << trial);
    for (double t : {-40.0, -3.3, 0.0, 0.7, 12.0, 150.0}) {
      CHECK(std::abs(std::abs(phi_eval(m, cplx(h, t))) - 1.0) < 1e-12);
    }
    for (cplx s : {cplx(h + 0.3, 2.0), cplx(h - 1.7, -9.0), cplx(h + 2.5, 31.0)}) {
      CHECK(std::abs(phi_eval(m, s) * phi_eval(m, static_cast<double>(m.resonances.d) - s) - 1.0) < 1e-11);
      CHECK(std::abs(phi_eval(m, std::conj(s)) - std::conj(phi_eval(m, s))) < 1e-11 * std::abs(phi_eval(m, s)));
    }
    CHECK(std::abs(phi_eval(m, h) - m.phi_at_half) < 1e-12);
  }
}

TEST_CASE("phi model validation") {
  PhiModel m;
  m.resonances.entries = {{cplx(0.2, 1.0), 1}};
  CHECK_THROWS_AS(m.validate(), PreconditionError);
  m.resonances.entries.push_back({cplx(0.2, -1.0), 1});
  m.validate();
  m.q_coeffs = {0.0, 0.3};
  CHECK_THROWS_AS(m.validate(), PreconditionError);
  m.q_coeffs = {0.0, 0.0, 0.1};
  CHECK_THROWS_AS(m.validate(), PreconditionError);
  m.q_coeffs = {};
  m.phi_at_half = cplx(0.0, 1.0);  // |phi| = 1 but phi^2 = -1
  CHECK_THROWS_AS(m.validate(), PreconditionError);
  ResonanceSet r;
  r.entries = {{cplx(0.8, 1.0), 1}};
  CHECK_THROWS_AS(r.validate(), PreconditionError);
  std::mt19937_64 rng(3);
  const auto good = testgen::random_phi_model(rng, 1, 2);
  CHECK_THROWS_AS(phi_eval(good, good.resonances.entries[0].rho), PoleError);
}

TEST_CASE("phase derivative: parts, sign and log-derivative") {
  std::mt19937_64 rng(7);
  const auto m = testgen::random_phi_model(rng, 1, 30, true);
  for (double T = 0.0; T < 80.0; T += 0.37) {
    const auto p = phase_derivative_parts(m, T);
    CHECK(p.resonance_sum <= 0.0);
    CHECK(p.real_pole_sum >= 0.0);
    CHECK(p.value == doctest::Approx(p.polynomial + p.resonance_sum + p.real_pole_sum).epsilon(1e-13));
    // d/dT arg phi(d/2 + iT) = Re phi'/phi
    CHECK(p.value == doctest::Approx(phi_log_derivative(m, cplx(0.5, T)).real()).epsilon(1e-11));
  }
}

TEST_CASE("scattering phase is the integral of its derivative and tracks arg phi") {
  std::mt19937_64 rng(8);
  const auto m = testgen::random_phi_model(rng, 2, 12, false, true);
  const double h = 1.0;
  double prev_arg = std::arg(phi_eval(m, h));
  double unwrapped = 0.0;
  const double dt = 0.005;
  for (double T = dt; T <= 30.0 + 1e-12; T += dt) {
    double a = std::arg(phi_eval(m, cplx(h, T)));
    double jump = a - prev_arg;
    jump -= 2.0 * oracle::pi * std::round(jump / (2.0 * oracle::pi));
    unwrapped += jump;
    prev_arg = a;
  }
  CHECK(2.0 * oracle::pi * scattering_phase(m, 30.0) == doctest::Approx(unwrapped).epsilon(1e-9));
  const double direct = panel_integral([&](double t) { return phase_derivative(m, t); }, 0.0, 30.0, 0.25);
  CHECK(2.0 * oracle::pi * scattering_phase(m, 30.0) == doctest::Approx(direct).epsilon(1e-10));
  const double poly = panel_integral([&](double t) { return phase_derivative_parts(m, t).polynomial; }, 0, 30.0);
  CHECK(2.0 * oracle::pi * phase_polynomial_part(m, 30.0) == doctest::Approx(poly).epsilon(1e-12));
}

TEST_CASE("counting function: example and monotone part") {
  std::mt19937_64 rng(12);
  const auto m = testgen::random_phi_model(rng, 1, 40);
  SpectrumData spec;
  for (int i = 1; i <= 100; ++i) spec.entries.push_back({cplx(i / 10.0, 0.0), 1});
  CHECK(count_point_spectrum(spec, 5.0) == 50);
  CHECK(tilde_N(spec, m, 5.0) == doctest::Approx(50.0 - scattering_phase(m, 5.0)).epsilon(1e-15));
  // N_pp - S + (1/2pi) int i Q' never decreases without real points
  double prev = -INFINITY;
  for (double T = 0.0; T <= 12.0; T += 0.013) {
    const double v = tilde_N(spec, m, T) + phase_polynomial_part(m, T);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  spec.entries.push_back({cplx(0.0, 0.3), 1});
  CHECK(count_point_spectrum(spec, 0.0) == 1);
  spec.entries.push_back({cplx(0.0, 0.9), 1});
  CHECK_THROWS_AS(spec.validate(1), PreconditionError);
}

TEST_CASE("smoother kernel against an independent transform") {
  const Smoother sm(2.0);
  Mollifier rho;
  const double mass =
      2.0 * oracle::pi * (0.5 + oracle::kronrod([&](double y) { return rho(y) * rho(y); }, 0.5, 1.0));
  for (double u : {0.0, 0.37, 3.0, 11.5, 40.2}) {
    const double sh = oracle::kronrod([&](double y) { return rho(y) * std::cos(0.5 * u * y); }, 0.0, 0.5) +
                      oracle::kronrod([&](double y) { return rho(y) * std::cos(0.5 * u * y); }, 0.5, 1.0);
    INFO("u = " << u);
    CHECK(sm.kernel(u) == doctest::Approx(sh * sh / mass).epsilon(1e-6).scale(1e-12));
    CHECK(sm.kernel(u) == sm.kernel(-u));
  }
  for (double u = 0.0; u < 100.0; u += 0.77) CHECK(sm.kernel(u) >= 0.0);
}

TEST_CASE("smoothing reproduces constants and lines and halves a step") {
  const Smoother sm(0.5);
  CHECK(sm([](double) { return 3.0; }, 10.0) == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(sm([](double T) { return 2.0 * T - 1.0; }, 7.0) == doctest::Approx(13.0).epsilon(1e-8));
  CHECK(sm([](double T) { return T > 4.0 ? 1.0 : 0.0; }, 4.0) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK_THROWS_AS(Smoother(0.0), PreconditionError);
}

TEST_CASE("lorentzian closed form against quadrature") {
  std::mt19937_64 rng(30);
  std::uniform_real_distribution<double> A(0.05, 1.0), G(-30.0, 30.0), T(1.0, 40.0);
  for (int i = 0; i < 40; ++i) {
    const int d = 1 + i % 3;
    const cplx rho(0.5 * d - A(rng), G(rng));
    const double t = T(rng);
    const double a = 0.5 * d - rho.real();
    auto f = [&](double x) { return 2.0 * a / (a * a + (rho.imag() + x) * (rho.imag() + x)); };
    double ref = 0.0;
    const double mid = std::clamp(-rho.imag(), -t, t);
    ref += panel_integral(f, -t, mid, 0.25) + panel_integral(f, mid, t, 0.25);
    INFO("rho = " << rho << " T = " << t);
    CHECK(std::abs(lorentzian_strip_integral(rho, d, t) - ref) < 1e-8);
  }
  CHECK_THROWS_AS(lorentzian_strip_integral(cplx(0.4, 0.8), 2, 1.0), DomainError);
}

TEST_CASE("resonance kernel integral is bounded by pi") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> X(-2.0, 0.5), G(-10.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const cplx rho(X(rng), G(rng));
    const double v = resonance_kernel_integral(rho, 1, 1.5, G(rng));
    CHECK(std::abs(v) <= oracle::pi + 1e-12);
  }
  CHECK(resonance_kernel_integral(cplx(0.5, 2.0), 1, 1.5, 1.0) == 0.0);
  CHECK_THROWS_AS(resonance_kernel_integral(cplx(0.3, 2.0), 1, 1.5, 2.0), DomainError);
}

TEST_CASE("strip, out-of-strip and box counts on a small set") {
  ResonanceSet r;
  r.entries = {{cplx(0.25, 10.0), 1}, {cplx(0.25, -10.0), 1}, {cplx(0.4, 20.0), 2},
               {cplx(-1.0, 30.0), 1}, {cplx(0.5, 5.0), 1},   {cplx(0.1, 60.0), 1}};
  const auto s = strip_weighted_sum(r, 1.0, 50.0, LeadingData{std::sqrt(oracle::pi), 0.0});
  // zeros at 0.75 + 10i, 0.6 + 20i (twice) and 0.5 + 5i
  CHECK(s.count == 4);
  CHECK(s.value == doctest::Approx(oracle::pi * (0.25 + 2 * 0.1)).epsilon(1e-14));
  CHECK(s.theorem_sum == doctest::Approx(0.5 + 2 * 0.2).epsilon(1e-14));
  REQUIRE(s.predicted.has_value());
  CHECK(*s.predicted == doctest::Approx(50.0 * std::log(50.0) / (2 * oracle::pi) -
                                        50.0 / oracle::pi * (0.5 + 0.5 * std::log(oracle::pi))));
  CHECK(box_count(r, 1.0, 20.0, 10.0) == 3);
  const auto o = out_of_strip_count(r, 1.2, 30.0, 0.5, 1.0);
  CHECK(o.count == 1);
  CHECK(o.reference == doctest::Approx(15.0));
  CHECK_THROWS_AS(out_of_strip_count(r, 1.2, 30.0, 1.5, 1.0), PreconditionError);
  CHECK_THROWS_AS(strip_weighted_sum(r, 0.4, 30.0), PreconditionError);
}

TEST_CASE("general Weyl count: bookkeeping") {
  std::mt19937_64 rng(40);
  const auto m = testgen::random_phi_model(rng, 1, 60);
  SpectrumData spec;
  for (int i = 0; i < 30; ++i) spec.entries.push_back({cplx(0.7 * i + 0.1, 0.0), 1});
  const auto g = general_weyl_count(m.resonances, spec, 15.3);
  CHECK(g.eigen_count == count_point_spectrum(spec, 15.3));
  CHECK(g.remainder == doctest::Approx(g.remainder_far + g.remainder_near).epsilon(1e-13));
  double lor = 0.0;
  int disc = 0;
  for (const auto& e : m.resonances.entries) {
    lor += e.multiplicity * lorentzian_strip_integral(e.rho, 1, 15.3);
    if (std::abs(e.rho - 0.5) <= 15.3) disc += e.multiplicity;
  }
  CHECK(g.lhs == doctest::Approx(g.eigen_count + lor / (2 * oracle::pi)).epsilon(1e-13));
  CHECK(g.disc_count == disc);
  CHECK(g.convergence_sum == doctest::Approx(m.resonances.convergence_partial_sum()));
}

TEST_CASE("weyl fit recovers exact and noisy coefficients") {
  const double a = 0.25, b = -1.0 / oracle::pi, c = 0.7;
  std::vector<std::pair<double, double>> s;
  for (int i = 0; i <= 300; ++i) {
    const double T = 10.0 * std::pow(1000.0, i / 300.0);
    s.push_back({T, a * T * T + b * T * std::log(T) + c * T});
  }
  const auto f = weyl_fit(s, 1);
  CHECK(f.a_lead == doctest::Approx(a).epsilon(1e-10));
  CHECK(f.b_log == doctest::Approx(b).epsilon(1e-8));
  CHECK(f.c_lin == doctest::Approx(c).epsilon(1e-8));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (auto& p : s) p.second += U(rng) * p.first / std::log(p.first);
  const auto g = weyl_fit(s, 1);
  CHECK(g.a_lead == doctest::Approx(a).epsilon(1e-2));
  CHECK(g.b_log == doctest::Approx(b).epsilon(5e-2));
  std::vector<std::pair<double, double>> few(s.begin(), s.begin() + 5);
  CHECK_THROWS_AS(weyl_fit(few, 1), PreconditionError);
  std::vector<std::pair<double, double>> narrow;
  for (int i = 0; i < 20; ++i) narrow.push_back({10.0 + i * 0.1, 1.0});
  CHECK_THROWS_AS(weyl_fit(narrow, 1), PreconditionError);
}

TEST_CASE("maass-selberg: bound and axis expression") {
  const auto mb = maass_selberg_bound(1.0, 0.8, 2.0, 1.0, 1, 1);
  CHECK(mb.bound == doctest::Approx(std::sqrt(1.0 + 0.09 / 4.0) + 0.15));
  CHECK(mb.passes);
  CHECK_THROWS_AS(maass_selberg_bound(1.0, 0.8, 0.0, 1.0, 1, 1), DomainError);
  AnalyticFunction one;
  one.value = [](cplx) { return cplx(1.0); };
  one.derivative = [](cplx) { return cplx(0.0); };
  const double e = std::exp(1.0);
  CHECK(maass_selberg_axis_rhs(one, 1, e, 1.0) == doctest::Approx(2.0 + std::sin(2.0)).epsilon(1e-12));
  CHECK(maass_selberg_axis_rhs(one, 1, e, 1e-6) == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(maass_selberg_axis_rhs(one, 1, e, 0.0) == doctest::Approx(4.0).epsilon(1e-9));
  // continuity across the extrapolation switch
  CHECK(std::abs(maass_selberg_axis_rhs(one, 1, e, 0.99e-4) - maass_selberg_axis_rhs(one, 1, e, 1.01e-4)) < 1e-7);
}

TEST_CASE("trace formula left side against a direct spectral integral") {
  std::mt19937_64 rng(50);
  const auto m = testgen::random_phi_model(rng, 1, 15);
  SpectrumData spec;
  spec.entries = {{cplx(0.0, 0.4), 1}, {cplx(3.1, 0.0), 1}, {cplx(7.25, 0.0), 2}};
  const TestFunctionPsi psi{10.0, 0.5};
  const double tr = 1.0;
  double direct = psi_hat_imaginary(psi, 0.4) + psi_hat(psi, 3.1) + 2.0 * psi_hat(psi, 7.25);
  const double phase =
      panel_integral([&](double r) { return phase_derivative(m, r) * psi_hat(psi, r); }, 0.0, 40.0, 0.5, 3);
  direct += -0.5 * (2.0 * phase) / (2.0 * oracle::pi) + 0.25 * psi_hat(psi, 0.0) * tr;
  CHECK(trace_formula_lhs(spec, m, psi, tr) == doctest::Approx(direct).epsilon(1e-7));
}

TEST_CASE("modular scattering matrix") {
  CHECK(modular_phi(0.5) == cplx(-1.0));
  CHECK_THROWS_AS(modular_phi(1.0), PoleError);
  const double v2 = oracle::pi / 2.0 * 1.2020569031595942 / (std::pow(oracle::pi, 4) / 90.0);
  CHECK(std::abs(modular_phi(2.0) - v2) < 1e-12);
  for (double t : {0.3, 5.0, 14.0, 33.3}) {
    CHECK(std::abs(std::abs(modular_phi(cplx(0.5, t))) - 1.0) < 1e-10);
    const cplx s(0.8, t);
    CHECK(std::abs(modular_phi(s) * modular_phi(1.0 - s) - 1.0) < 1e-10);
  }
  const auto F = modular_phi_function();
  const cplx s(0.9, 7.0);
  const double h = 1e-5;
  CHECK(std::abs(F.deriv(s) - (modular_phi(s + h) - modular_phi(s - h)) / (2.0 * h)) < 1e-6);
}
