#include "cusp/special.hpp"

#include <array>
#include <cmath>
#include <string>

#include "cusp/errors.hpp"

namespace cusp {

namespace {

// B_{2k} / (2k (2k-1)) for the Stirling series, k = 1..10.
constexpr std::array<double, 10> kStirling = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
};

// B_{2k}/(2k)! = (-1)^{k+1} 2 zeta(2k) / (2 pi)^{2k}.
struct EulerMaclaurinTable {
  static constexpr int kTerms = 60;
  std::array<double, kTerms + 1> coef{};
  EulerMaclaurinTable() {
    const double two_pi = 2.0 * kPi;
    for (int k = 1; k <= kTerms; ++k) {
      double z2k;
      if (k == 1) {
        z2k = kPi * kPi / 6.0;
      } else if (k == 2) {
        z2k = std::pow(kPi, 4) / 90.0;
      } else {
        z2k = 0.0;
        for (int n = 400; n >= 1; --n) z2k += std::pow(static_cast<double>(n), -2.0 * k);
      }
      const double sign = (k % 2 == 1) ? 1.0 : -1.0;
      coef[k] = sign * 2.0 * z2k / std::pow(two_pi, 2.0 * k);
    }
  }
};

const EulerMaclaurinTable& em_table() {
  static const EulerMaclaurinTable table;
  return table;
}

}  // namespace

void require_finite(cplx z, const char* where) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError(std::string(where) + ": non-finite argument");
  }
}

cplx log_gamma(cplx z) {
  require_finite(z, "log_gamma");
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) {
    throw DomainError("log_gamma: pole at non-positive integer");
  }
  cplx shift_sum = 0.0;
  cplx w = z;
  while (w.real() < 10.0) {
    shift_sum += std::log(w);
    w += 1.0;
  }
  const cplx inv = 1.0 / w;
  const cplx inv2 = inv * inv;
  cplx series = 0.0;
  cplx p = inv;
  for (double c : kStirling) {
    series += c * p;
    p *= inv2;
  }
  const cplx stirling = (w - 0.5) * std::log(w) - w + 0.5 * std::log(2.0 * kPi) + series;
  return stirling - shift_sum;
}

double log_gamma(double x) {
  if (!std::isfinite(x)) throw DomainError("log_gamma: non-finite argument");
  if (x <= 0.0 && x == std::floor(x)) throw DomainError("log_gamma: pole at non-positive integer");
  return std::lgamma(x);
}

cplx riemann_zeta(cplx s) {
  require_finite(s, "riemann_zeta");
  if (s == cplx(1.0, 0.0)) throw PoleError("riemann_zeta: pole at s = 1", s);
  if (std::abs(s.imag()) > 1e6) throw DomainError("riemann_zeta: |Im s| above 1e6 is out of range");
  const auto& tab = em_table();
  const int N = static_cast<int>(std::ceil((std::abs(s) + 30.0) / kPi)) + 5;
  cplx head = 0.0;
  for (int n = N - 1; n >= 1; --n) head += std::exp(-s * std::log(static_cast<double>(n)));
  const double logN = std::log(static_cast<double>(N));
  const cplx Ns = std::exp(-s * logN);  // N^{-s}
  cplx sum = head + Ns * static_cast<double>(N) / (s - 1.0) + 0.5 * Ns;
  // term_k = C_k s(s+1)...(s+2k-2) N^{-s-2k+1}
  cplx rising = s;
  cplx power = Ns / static_cast<double>(N);
  const double invN2 = 1.0 / (static_cast<double>(N) * N);
  for (int k = 1; k <= EulerMaclaurinTable::kTerms; ++k) {
    const cplx term = tab.coef[k] * rising * power;
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    rising *= (s + (2.0 * k - 1.0)) * (s + 2.0 * k);
    power *= invN2;
  }
  return sum;
}

double riemann_zeta(double s) { return riemann_zeta(cplx(s, 0.0)).real(); }

}  // namespace cusp
