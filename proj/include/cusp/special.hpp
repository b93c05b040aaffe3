#pragma once

#include <complex>

namespace cusp {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kEulerGamma = 0.577215664901532860606512090082402431;
inline constexpr double kLog2 = 0.693147180559945309417232121458176568;

// Principal branch: continuous in the plane cut along (-inf, 0].
cplx log_gamma(cplx z);
double log_gamma(double x);

// Euler-Maclaurin summation, valid for Re s >= -1 and moderate |Im s|.
cplx riemann_zeta(cplx s);
double riemann_zeta(double s);

// Throws DomainError on NaN or infinite components.
void require_finite(cplx z, const char* where);

}  // namespace cusp
