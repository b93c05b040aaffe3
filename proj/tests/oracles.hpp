#pragma once

// Independent reference implementations used only by the tests.

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double euler_gamma = 0.577215664901532860606512090082402431;

// Lanczos (g = 7, n = 9) with reflection.
inline cplx lgamma(cplx z) {
  static const double c[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                              771.32342877765313,   -176.61502916214059,   12.507343278686905,
                              -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) {
    return std::log(pi / std::sin(pi * z)) - lgamma(1.0 - z);
  }
  z -= 1.0;
  cplx x = c[0];
  for (int i = 1; i < 9; ++i) x += c[i] / (z + static_cast<double>(i));
  const cplx t = z + 7.5;
  return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

// Borwein's eta acceleration; reliable for Re s > 0 and |Im s| <= 5.
inline cplx zeta(cplx s) {
  constexpr int n = 60;
  std::vector<double> d(n + 1);
  double term = 1.0;  // n (n+i-1)! 4^i / ((n-i)! (2i)!)
  double sum = term;
  d[0] = sum;
  for (int i = 1; i <= n; ++i) {
    term *= static_cast<double>(n + i - 1) * (n - i + 1) * 4.0 / ((2.0 * i - 1.0) * (2.0 * i));
    sum += term;
    d[i] = sum;
  }
  cplx acc = 0.0;
  for (int k = 0; k < n; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    acc += sign * (d[k] - d[n]) * std::exp(-s * std::log(static_cast<double>(k + 1)));
  }
  const cplx eta = -acc / d[n];
  return eta / (1.0 - std::exp((1.0 - s) * std::log(2.0)));
}

// Published ordinates of the first nontrivial zeros of zeta.
inline const std::vector<double>& zeta_zero_ordinates() {
  static const std::vector<double> g{14.134725141734693790, 21.022039638771554993, 25.010857580145688763,
                                     30.424876125859513210, 32.935061587739189691, 37.586178158825671257,
                                     40.918719012147495187, 43.327073280914999519, 48.005150881167159727,
                                     49.773832477672302181};
  return g;
}

// gamma(Z^2) from sum' |g|^{-2s} = 4 zeta(s) beta(s) near s = 1.
inline double epstein_gamma_z2() {
  return euler_gamma + std::log(2.0) + 1.5 * std::log(pi) - 2.0 * std::lgamma(0.25);
}

inline double tanh_sinh(const std::function<double(double)>& f, double a, double b, double tol = 1e-14) {
  boost::math::quadrature::tanh_sinh<double> q;
  return q.integrate(f, a, b, tol);
}

inline double kronrod(const std::function<double(double)>& f, double a, double b, double tol = 1e-13,
                      unsigned max_depth = 15) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, max_depth, tol);
}

// Roots of sum c_k z^k (c back non-zero) as companion-matrix eigenvalues.
inline std::vector<cplx> polynomial_roots(const std::vector<cplx>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) M(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) M(i, n - 1) = -c[i] / c[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M);
  std::vector<cplx> r(es.eigenvalues().data(), es.eigenvalues().data() + n);
  return r;
}

}  // namespace oracle
