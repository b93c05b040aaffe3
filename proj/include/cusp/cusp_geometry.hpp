#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cusp/mollifier.hpp"

namespace cusp {

struct Lattice {
  int d = 1;
  Eigen::MatrixXd basis;  // columns are the basis vectors

  static Lattice integer(int d);
  void validate() const;  // covolume 1 within 1e-12
};

// sum_{0 < |g| <= R} |g|^{-d}, enumerated over a bounding box in coefficient space.
double lattice_shell_sum(const Lattice& L, double R);

struct LatticeConstant {
  double value;
  double error;
  std::vector<double> radii;
  std::vector<double> estimates;
};

// gamma(L) from the smoothly cut-off sum: F(R)/S_d - log R + c, where
// F(R) = sum' |g|^{-d} rho(|g|/R), S_d = 2 pi^{d/2}/Gamma(d/2), c = int log x rho'(x) dx.
// The error is the change between R_max/sqrt(2) and R_max.
LatticeConstant gamma_lattice(const Lattice& L, double R_max = 0.0, double tolerance = 1e-7);

// C(d): half the x-integral constant, with the arcsine log integral done by quadrature.
double c_d_constant(int d);
// (1/pi) int_0^1 log x / sqrt(x(1-x)) dx
double arcsine_log_integral();
double c1_lattice(const Lattice& L);

struct CuspTermResult {
  double T;
  double value;
  double predicted;
  double residual;
};

CuspTermResult cusp_term(const TestFunctionPsi& psi, const Lattice& L, int d);

// lim_{e->0} [ int_e^inf sin u / u^2 du + log e ]
double sine_log_constant();
// -int_0^inf psi'(t) log sinh(t/2) dt
double log_sinh_integral(const TestFunctionPsi& psi);

struct DiagonalPolynomial {
  std::vector<int> powers;           // d + 1 - 2j
  std::vector<double> coefficients;  // coefficient of T^{powers[j]}
  double condition = 1.0;
};

// C_0 (-1/2)^k u_k int (sin tT / pi t) rho(At) sinh|t| M_{k-(d+2)/2}(cosh t - 1) dt for one T.
double diagonal_integral(const TestFunctionPsi& psi, int d, int k);
// Sum over k of the above, fitted to powers T^{d+1-2j} over several T.
DiagonalPolynomial diagonal_term(const TestFunctionPsi& psi, int d, const std::vector<double>& u_diag,
                                 int n_powers = 0);

double weyl_c0(double vol, int d);

}  // namespace cusp
