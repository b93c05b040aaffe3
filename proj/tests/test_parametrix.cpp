#include <doctest.h>

#include <cmath>

#include "cusp/errors.hpp"
#include "cusp/parametrix.hpp"

using namespace cusp;

TEST_CASE("theta in constant curvature -1 matches (sinh r / r)^d") {
  for (int d : {1, 2, 3}) {
    const auto th = theta_radial(RadialCurvatureProfile::constant(-1.0, 5.0), d, 400);
    for (std::size_t i = 0; i < th.grid.size(); i += 37) {
      const double r = th.grid[i];
      CHECK(th.theta[i] == doctest::Approx(theta_hyperbolic(r, d)).epsilon(1e-9));
      CHECK(th.log_derivative(i) ==
            doctest::Approx(theta_hyperbolic_log_derivative(r, d)).epsilon(1e-8).scale(1.0));
    }
  }
  CHECK(theta_hyperbolic(0.0, 2) == 1.0);
  CHECK(theta_hyperbolic_log_derivative(0.0, 2) == 0.0);
  CHECK(theta_hyperbolic(1e-9, 1) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("flat profile gives theta = 1") {
  const auto th = theta_radial(RadialCurvatureProfile::constant(0.0, 3.0), 2, 100);
  for (double v : th.theta) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("positive curvature reaches a conjugate point") {
  CHECK_THROWS_AS(theta_radial(RadialCurvatureProfile::constant(1.0, 4.0), 1, 400), DomainError);
}

TEST_CASE("hyperbolic collapse: u_0 = 1 and higher u_k vanish") {
  const auto tab = u_k_radial(RadialCurvatureProfile::constant(-1.0, 4.0), 1, 3, 400);
  for (std::size_t i = 0; i < tab.grid.size(); ++i) CHECK(tab.u[0][i] == doctest::Approx(1.0).epsilon(1e-10));
  for (int k = 1; k <= 3; ++k) {
    double sup = 0.0;
    for (double v : tab.u[k]) sup = std::max(sup, std::abs(v));
    INFO("k = " << k);
    CHECK(sup < 1e-6);
  }
}

TEST_CASE("pinched profile: u_k exist and obey an exponential bound") {
  RadialCurvatureProfile prof;
  prof.K = [](double r) { return -1.0 - 0.5 * std::exp(-r * r); };
  prof.K_min = -1.5;
  prof.K_max = -1.0;
  prof.r_max = 5.0;
  const auto tab = u_k_radial(prof, 1, 3, 400);
  const auto fits = verify_bound_uk(tab);
  REQUIRE(fits.size() == 4);
  for (const auto& f : fits) {
    INFO("k = " << f.k);
    CHECK(f.finite);
    CHECK(f.b < 10.0);
  }
  for (double c : tab.resolution_change) CHECK(c < 1e-3);
}

TEST_CASE("profile validation") {
  RadialCurvatureProfile prof = RadialCurvatureProfile::constant(-1.0, 2.0);
  prof.K_min = -0.5;
  prof.K_max = -0.2;
  CHECK_THROWS_AS(prof.validate(), PreconditionError);
  CHECK_THROWS_AS(u_k_radial(RadialCurvatureProfile::constant(-1.0, 2.0), 1, 6), PreconditionError);
  CHECK_THROWS_AS(theta_hyperbolic(-1.0, 1), DomainError);
}
