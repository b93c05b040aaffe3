#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cusp/errors.hpp"
#include "cusp/zerocount.hpp"
#include "oracles.hpp"

using namespace cusp;

namespace {

std::vector<cplx> random_zeros(std::mt19937_64& rng, int n, double x0, double x1, double y0, double y1) {
  std::uniform_real_distribution<double> X(x0, x1), Y(y0, y1);
  std::vector<cplx> z;
  for (int i = 0; i < n; ++i) z.emplace_back(X(rng), Y(rng));
  return z;
}

bool close(double a, double b) { return std::abs(a - b) <= std::max(1e-6, 1e-6 * std::abs(b)); }

}  // namespace

TEST_CASE("carleman identity on a single zero") {
  // F(s) = (s - 2)/(s + 1): zero at 2, b = 1, T = 2 gives log(T/|z - b|) minus the e^{...} correction
  AnalyticFunction F;
  F.value = [](cplx s) { return (s - 2.0) / (s + 1.0); };
  F.derivative = [](cplx s) { return 3.0 / ((s + 1.0) * (s + 1.0)); };
  ZeroList z;
  z.entries.push_back({2.0, 1, false});
  const auto q = carleman_weighted_count(F, 1.0, 2.0);
  CHECK(q.value == doctest::Approx(carleman_direct(z, 1.0, 2.0)).epsilon(1e-9));
}

TEST_CASE("big rectangle: zero pair gives the weight (T - y)(x - d/2)") {
  AnalyticFunction F = blaschke_product({{0.8, 1.0}}, 1.0, true);
  const CountingBox box{1.0, 0.5, 3.0, 1.0};
  const auto q = big_rectangle_weighted_sum(F, box);
  CHECK(q.value == doctest::Approx(2.0 * 0.3).epsilon(1e-9));
  CHECK_FALSE(q.proximity_warning);
}

TEST_CASE("small rectangle: zero pair gives cos(c(y - Tc)) sinh(c(x - d/2))") {
  AnalyticFunction F = blaschke_product({{0.7, 5.0}}, 1.0, true);
  const CountingBox box{1.0, 0.5, 10.0, 1.0};
  const auto q = small_rectangle_weighted_sum(F, box, 5.0);
  CHECK(q.value == doctest::Approx(std::sinh(0.2)).epsilon(1e-9));
}

TEST_CASE("lemmas match direct sums on random Blaschke products") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 4; ++trial) {
    auto zs = random_zeros(rng, 3 + trial, 0.55, 2.5, 0.2, 6.0);
    const AnalyticFunction F = blaschke_product(zs, 1.0, true);
    const CountingBox box{1.4, 0.5, 5.0, 1.3};
    INFO("trial " << trial);
    const auto zb = brute_force_zeros(F, Rect{0.5, 1.4, 0.0, 5.0}, 1e-4);
    CHECK(close(big_rectangle_weighted_sum(F, box).value, big_rectangle_direct(zb, box)));
    const auto zsr = brute_force_zeros(F, Rect{0.5, 1.4, 3.0 - kPi / 1.3, 3.0 + kPi / 1.3}, 1e-4);
    CHECK(close(small_rectangle_weighted_sum(F, box, 3.0).value, small_rectangle_direct(zsr, box, 3.0)));
    const auto zc = brute_force_zeros(F, Rect{1.4, 6.4, -5.0, 5.0}, 1e-4);
    CHECK(close(carleman_weighted_count(F, 1.4, 5.0).value, carleman_direct(zc, 1.4, 5.0)));
  }
}

TEST_CASE("brute force agrees with companion-matrix roots") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<cplx> c(7);
  for (auto& x : c) x = cplx(U(rng), U(rng));
  c.back() = 1.0;
  AnalyticFunction P;
  P.value = [c](cplx z) {
    cplx v = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * z + c[k];
    return v;
  };
  const auto roots = oracle::polynomial_roots(c);
  const auto found = brute_force_zeros(P, Rect{-3.03, 3.01, -3.02, 3.04}, 1e-5);
  REQUIRE(found.total_multiplicity() == 6);
  for (const auto& r : roots) {
    double best = 1e9;
    for (const auto& e : found.entries) best = std::min(best, std::abs(e.location - r));
    CHECK(best < 1e-9);
  }
}

TEST_CASE("brute force: multiplicity and winding") {
  AnalyticFunction F;
  F.value = [](cplx z) { return z * z * (z - 0.5); };
  F.derivative = [](cplx z) { return 3.0 * z * z - z; };
  CHECK(winding_number(F, Rect{-1.01, 1.02, -1.03, 1.04}) == doctest::Approx(3.0).epsilon(1e-8));
  const auto z = brute_force_zeros(F, Rect{-1.01, 1.02, -1.03, 1.04}, 1e-6);
  CHECK(z.total_multiplicity() == 3);
  bool double_at_zero = false;
  for (const auto& e : z.entries) double_at_zero |= (e.multiplicity == 2 && std::abs(e.location) < 1e-6);
  CHECK(double_at_zero);
  CHECK_THROWS_AS(brute_force_zeros(F, Rect{1, 0, 0, 1}, 1e-3), PreconditionError);
}

TEST_CASE("zeta(2s): first zero located") {
  AnalyticFunction F;
  F.value = [](cplx s) { return riemann_zeta(2.0 * s); };
  const auto z = brute_force_zeros(F, Rect{0.1, 0.4, 5.0, 8.0}, 1e-6);
  REQUIRE(z.total_multiplicity() == 1);
  CHECK(std::abs(z.entries[0].location - cplx(0.25, 0.5 * oracle::zeta_zero_ordinates()[0])) < 1e-10);
}

TEST_CASE("contour through a zero is nudged with a warning") {
  AnalyticFunction F = blaschke_product({{1.0, 2.0}}, 1.0, true);  // zero on the right edge b = 1
  const CountingBox box{1.0, 0.5, 4.0, 1.0};
  const auto q = big_rectangle_weighted_sum(F, box);
  CHECK(q.proximity_warning);
}

TEST_CASE("blaschke product: unit modulus on the axis and analytic derivative") {
  std::mt19937_64 rng(2);
  auto zs = random_zeros(rng, 6, 0.6, 2.0, -3.0, 3.0);
  const AnalyticFunction F = blaschke_product(zs, 1.0, true);
  for (double t = -10; t <= 10; t += 0.7) CHECK(std::abs(std::abs(F(cplx(0.5, t))) - 1.0) < 1e-13);
  const cplx s(1.3, 0.4);
  const double h = 1e-5;
  const cplx fd = (F(s + h) - F(s - h)) / (2.0 * h);
  CHECK(std::abs(F.deriv(s) - fd) < 1e-8 * std::abs(fd));
}

TEST_CASE("box validation") {
  CHECK_THROWS_AS((CountingBox{0.4, 0.5, 1.0, 1.0}.validate()), PreconditionError);
  CHECK_THROWS_AS((CountingBox{1.0, 0.5, -1.0, 1.0}.validate()), PreconditionError);
}
