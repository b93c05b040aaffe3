#pragma once

#include <vector>

#include "cusp/quadrature.hpp"

namespace cusp {

// Even cutoff: 1 on |t| <= flat_radius, 0 on |t| >= 1, built from the
// normalized integral of exp(1 - 1/(1-u^2)).
class Mollifier {
 public:
  explicit Mollifier(double flat_radius = 0.5);

  double flat_radius() const { return flat_; }
  double support_radius() const { return 1.0; }

  double operator()(double t) const;
  double derivative(double t) const;
  // rho^{(j)}(t) for j = 0..order.
  std::vector<double> derivatives(double t, int order) const;

 private:
  double flat_;
  double slope() const { return 2.0 / (1.0 - flat_); }
};

// exp(1 - 1/(1-u^2)) on (-1, 1), zero outside.
double bump(double u);
// (1/Z) * integral_{-1}^{u} bump, Z the total mass.
double bump_cdf(double u);
double bump_mass();

struct TestFunctionPsi {
  double cutoff_T;
  double scale_A;
  Mollifier mollifier{};

  void validate() const;
  double support() const { return 1.0 / scale_A; }
};

// psi(t) = (1/pi) sin(tT)/t * rho(At)
double psi_eval(const TestFunctionPsi& psi, double t);
double psi_derivative(const TestFunctionPsi& psi, double t);

// psi_hat(r) = integral psi(t) e^{-irt} dt
double psi_hat(const TestFunctionPsi& psi, double r, const QuadratureSpec& spec = {1e-12, 1e-13, 4000});
// psi_hat(i y) = integral psi(t) cosh(yt) dt, for small eigenvalues below d^2/4.
double psi_hat_imaginary(const TestFunctionPsi& psi, double y,
                         const QuadratureSpec& spec = {1e-12, 1e-13, 4000});

// sin(x)/x and its first derivative with small-argument series.
double sinc(double x);
double sinc_prime(double x);

}  // namespace cusp
