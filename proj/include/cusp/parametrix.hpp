#pragma once

#include <functional>
#include <vector>

namespace cusp {

struct RadialCurvatureProfile {
  std::function<double(double)> K;
  double r_max = 5.0;
  double K_min = -1.0;
  double K_max = -1.0;

  static RadialCurvatureProfile constant(double K, double r_max);
  void validate() const;  // K sampled inside [K_min, K_max]
};

// Jacobi field j'' + K j = 0, j(0) = 0, j'(0) = 1, on a uniform grid, with
// m = r j' - j carried as its own unknown so that j/r - 1 keeps full accuracy.
struct ThetaSolution {
  int d = 1;
  std::vector<double> grid;
  std::vector<double> theta;  // (j/r)^d
  std::vector<double> jacobi;
  std::vector<double> jacobi_prime;
  std::vector<double> m;
  std::vector<double> curvature;
  double step = 0.0;

  // Theta'/Theta = d m / (r j), 0 at r = 0.
  double log_derivative(std::size_t i) const;
};

// (sinh r / r)^d
double theta_hyperbolic(double r, int d);
// d (coth r - 1/r)
double theta_hyperbolic_log_derivative(double r, int d);

ThetaSolution theta_radial(const RadialCurvatureProfile& profile, int d, int n_steps = 400);

struct UkTable {
  int d = 1;
  std::vector<double> grid;
  std::vector<std::vector<double>> u;  // u[k][i], k = 0..k_max
  std::vector<double> resolution_change;  // sup |u_k(n) - u_k(n/2)| on the common points
};

// u_0 = sqrt(Theta0/Theta) and
// u_k(r) = u_0(r) (r/sinh r) int_0^1 (sinh(r s)/sinh r)^{k-1} g_k(r s) ds,
// g_k = (-Lap u_{k-1} + c_k u_{k-1}) / u_0, Lap f = f'' + (Theta'/Theta + d/r) f',
// c_k = (k - 1 - d/2)^2 - d^2/4.
UkTable u_k_radial(const RadialCurvatureProfile& profile, int d, int k_max, int n_steps = 400,
                   double refine_tolerance = 1e-3);

struct GrowthFit {
  int k;
  double a;  // log|u_k(r)| <= a + b r on [1, r_max]
  double b;
  bool finite;
};

std::vector<GrowthFit> verify_bound_uk(const UkTable& table);

// (1/2)(2 pi)^{-d/2}
double c0_constant(int d);

}  // namespace cusp
