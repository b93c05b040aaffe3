#include "cusp/mollifier.hpp"

#include <array>
#include <cmath>

#include "cusp/jet.hpp"
#include "cusp/special.hpp"

namespace cusp {

namespace {

// In s = atanh(u) the bump mass density is exp(-sinh^2 s) sech^2 s, which
// is smooth and negligible beyond |s| = 4.
constexpr double kSMax = 4.0;
constexpr int kKnots = 256;

constexpr std::array<double, 10> kGlX = {
    -0.973906528517171720077964012084452, -0.865063366688984510732096688423493,
    -0.679409568299024406234327365114874, -0.433395394129247190799265943165784,
    -0.148874338981631210884826001129720, 0.148874338981631210884826001129720,
    0.433395394129247190799265943165784,  0.679409568299024406234327365114874,
    0.865063366688984510732096688423493,  0.973906528517171720077964012084452};
constexpr std::array<double, 10> kGlW = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338, 0.295524224714752870173892994651338,
    0.269266719309996355091226921569469, 0.219086362515982043995534934228163,
    0.149451349150580593145776339657697, 0.066671344308688137593568809893332};

double density(double s) {
  const double sh = std::sinh(s);
  const double ch = std::cosh(s);
  return std::exp(-sh * sh) / (ch * ch);
}

double gl10(double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < 10; ++i) acc += kGlW[i] * density(c + h * kGlX[i]);
  return acc * h;
}

struct CdfTable {
  std::array<double, kKnots + 1> cum{};
  double step = 2.0 * kSMax / kKnots;
  CdfTable() {
    cum[0] = 0.0;
    for (int i = 0; i < kKnots; ++i) {
      const double a = -kSMax + i * step;
      // two GL10 halves per knot interval
      cum[i + 1] = cum[i] + gl10(a, a + 0.5 * step) + gl10(a + 0.5 * step, a + step);
    }
  }
};

const CdfTable& table() {
  static const CdfTable t;
  return t;
}

}  // namespace

double bump(double u) {
  if (!(std::abs(u) < 1.0)) return 0.0;
  const double q = (1.0 - u) * (1.0 + u);
  return std::exp(1.0 - 1.0 / q);
}

double bump_mass() { return table().cum[kKnots]; }

double bump_cdf(double u) {
  if (u <= -1.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const auto& tab = table();
  const double s = std::atanh(u);
  if (s <= -kSMax) return 0.0;
  if (s >= kSMax) return 1.0;
  int i = static_cast<int>(std::floor((s + kSMax) / tab.step));
  i = std::min(std::max(i, 0), kKnots - 1);
  const double a = -kSMax + i * tab.step;
  const double partial = gl10(a, s);
  const double v = (tab.cum[i] + partial) / tab.cum[kKnots];
  return std::min(1.0, std::max(0.0, v));
}

Mollifier::Mollifier(double flat_radius) : flat_(flat_radius) {
  if (!(flat_radius > 0.0 && flat_radius < 1.0)) {
    throw PreconditionError("Mollifier: flat radius must lie in (0, 1)");
  }
}

double Mollifier::operator()(double t) const {
  const double a = std::abs(t);
  if (a <= flat_) return 1.0;
  if (a >= 1.0) return 0.0;
  // 1 - G(u) = G(-u) with u = slope*(a - flat) - 1
  return bump_cdf(1.0 - slope() * (a - flat_));
}

double Mollifier::derivative(double t) const {
  const double a = std::abs(t);
  if (a <= flat_ || a >= 1.0) return 0.0;
  const double u = slope() * (a - flat_) - 1.0;
  const double d = -slope() * bump(u) / bump_mass();
  return t > 0 ? d : -d;
}

std::vector<double> Mollifier::derivatives(double t, int order) const {
  std::vector<double> out(order + 1, 0.0);
  out[0] = (*this)(t);
  const double a = std::abs(t);
  if (order == 0 || a <= flat_ || a >= 1.0) return out;
  const double k = slope();
  const double u = k * (a - flat_) - 1.0;
  // bump jet in u: exp(1 - 1/((1-u)(1+u)))
  Jet x = Jet::variable(u, order);
  Jet q = (1.0 - x) * (1.0 + x);
  Jet b = exp(1.0 - 1.0 / q);
  const double sign = t > 0 ? 1.0 : -1.0;
  double fact = 1.0;
  double scale = 1.0;
  double sgn_pow = 1.0;
  for (int j = 1; j <= order; ++j) {
    scale *= k;
    sgn_pow *= sign;
    // rho^{(j)}(t) = -(k sign)^j b^{(j-1)}(u) / Z
    out[j] = -sgn_pow * scale * b[j - 1] * fact / bump_mass();
    fact *= j;
  }
  return out;
}

void TestFunctionPsi::validate() const {
  if (!(cutoff_T > 0.0)) throw PreconditionError("TestFunctionPsi: cutoff T must be > 0");
  if (!(scale_A > 0.0)) throw PreconditionError("TestFunctionPsi: scale A must be > 0");
}

double sinc(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double sinc_prime(double x) {
  if (std::abs(x) < 1e-3) {
    const double x2 = x * x;
    return x * (-1.0 / 3.0 + x2 / 30.0 - x2 * x2 / 840.0);
  }
  return (x * std::cos(x) - std::sin(x)) / (x * x);
}

double psi_eval(const TestFunctionPsi& psi, double t) {
  const double a = std::abs(t);
  if (psi.scale_A * a >= 1.0) return 0.0;
  return psi.cutoff_T / kPi * sinc(psi.cutoff_T * a) * psi.mollifier(psi.scale_A * a);
}

double psi_derivative(const TestFunctionPsi& psi, double t) {
  const double a = std::abs(t);
  const double A = psi.scale_A, T = psi.cutoff_T;
  if (A * a >= 1.0) return 0.0;
  const double x = T * a;
  const double d = (T * T * sinc_prime(x) * psi.mollifier(A * a) +
                    T * sinc(x) * A * psi.mollifier.derivative(A * a)) /
                   kPi;
  return t >= 0 ? d : -d;
}

namespace {

std::vector<double> psi_panels(const TestFunctionPsi& psi, double freq) {
  const double L = psi.support();
  const double w = std::max(freq, 1.0);
  auto pts = uniform_panels(0.0, L, 2.0 * kPi / w);
  // make the flat/transition boundary of the mollifier a breakpoint
  const double edge = psi.mollifier.flat_radius() / psi.scale_A;
  pts.push_back(edge);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace

double psi_hat(const TestFunctionPsi& psi, double r, const QuadratureSpec& spec) {
  psi.validate();
  const double ar = std::abs(r);
  auto f = [&](double t) { return psi_eval(psi, t) * std::cos(ar * t); };
  auto res = integrate_panels(f, psi_panels(psi, psi.cutoff_T + ar), spec);
  return 2.0 * value_or_throw(res, "psi_hat");
}

double psi_hat_imaginary(const TestFunctionPsi& psi, double y, const QuadratureSpec& spec) {
  psi.validate();
  const double ay = std::abs(y);
  auto f = [&](double t) { return psi_eval(psi, t) * std::cosh(ay * t); };
  auto res = integrate_panels(f, psi_panels(psi, psi.cutoff_T), spec);
  return 2.0 * value_or_throw(res, "psi_hat_imaginary");
}

}  // namespace cusp
