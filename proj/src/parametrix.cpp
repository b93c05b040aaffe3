#include "cusp/parametrix.hpp"

#include <Eigen/Dense>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <string>

#include "cusp/errors.hpp"
#include "cusp/special.hpp"

namespace cusp {

RadialCurvatureProfile RadialCurvatureProfile::constant(double K, double r_max) {
  return {[K](double) { return K; }, r_max, K, K};
}

void RadialCurvatureProfile::validate() const {
  if (!K) throw PreconditionError("RadialCurvatureProfile: curvature function missing");
  if (!(r_max > 0.0)) throw PreconditionError("RadialCurvatureProfile: need r_max > 0");
  if (!(K_min <= K_max)) throw PreconditionError("RadialCurvatureProfile: need K_min <= K_max");
  for (int i = 0; i <= 200; ++i) {
    const double r = r_max * i / 200.0;
    const double k = K(r);
    if (!std::isfinite(k)) throw DomainError("RadialCurvatureProfile: non-finite curvature");
    if (k < K_min - 1e-12 || k > K_max + 1e-12) {
      throw PreconditionError("RadialCurvatureProfile: K(" + std::to_string(r) + ") outside declared pinch");
    }
  }
}

double theta_hyperbolic(double r, int d) {
  if (!(r >= 0.0)) throw DomainError("theta_hyperbolic: need r >= 0");
  double q;
  if (r < 1e-4) {
    const double r2 = r * r;
    q = 1.0 + r2 / 6.0 + r2 * r2 / 120.0;
  } else {
    q = std::sinh(r) / r;
  }
  return std::pow(q, d);
}

namespace {

constexpr double kSeriesRadius = 0.5;

// coth r - 1/r = sum_n c_n r^{2n-1}, c_n = (-1)^{n+1} 2 zeta(2n) / pi^{2n}
const std::array<double, 24>& coth_series() {
  static const std::array<double, 24> c = [] {
    std::array<double, 24> out{};
    for (int n = 1; n <= 24; ++n) {
      const double sign = (n % 2 == 1) ? 1.0 : -1.0;
      out[n - 1] = sign * 2.0 * riemann_zeta(2.0 * n) / std::pow(kPi, 2.0 * n);
    }
    return out;
  }();
  return c;
}

double coth_minus_inverse(double r) {
  if (r >= kSeriesRadius) return 1.0 / std::tanh(r) - 1.0 / r;
  const auto& c = coth_series();
  const double r2 = r * r;
  double acc = 0.0;
  for (int n = 23; n >= 0; --n) acc = acc * r2 + c[n];
  return acc * r;
}

// 1/r^2 - 1/sinh^2 r, the derivative of coth r - 1/r
double inverse_square_gap(double r) {
  if (r >= kSeriesRadius) {
    const double sh = std::sinh(r);
    return 1.0 / (r * r) - 1.0 / (sh * sh);
  }
  const auto& c = coth_series();
  const double r2 = r * r;
  double acc = 0.0;
  for (int n = 23; n >= 0; --n) acc = acc * r2 + (2.0 * n + 1.0) * c[n];
  return acc;
}

}  // namespace

double theta_hyperbolic_log_derivative(double r, int d) {
  if (!(r >= 0.0)) throw DomainError("theta_hyperbolic_log_derivative: need r >= 0");
  return d * coth_minus_inverse(r);
}

double ThetaSolution::log_derivative(std::size_t i) const {
  if (grid[i] == 0.0) return 0.0;
  return d * m[i] / (grid[i] * jacobi[i]);
}

ThetaSolution theta_radial(const RadialCurvatureProfile& profile, int d, int n_steps) {
  profile.validate();
  if (d < 1) throw PreconditionError("theta_radial: need d >= 1");
  if (n_steps < 20) throw PreconditionError("theta_radial: need at least 20 steps");
  namespace ode = boost::numeric::odeint;
  using State = std::array<double, 3>;  // j, j', m
  ThetaSolution sol;
  sol.d = d;
  sol.step = profile.r_max / n_steps;
  for (int i = 0; i <= n_steps; ++i) sol.grid.push_back(i * sol.step);
  sol.grid.back() = profile.r_max;

  auto rhs = [&](const State& y, State& dy, double r) {
    const double K = profile.K(r);
    dy[0] = y[1];
    dy[1] = -K * y[0];
    dy[2] = -r * K * y[0];
  };
  // absolute tolerance far below m ~ r^3/3 near the origin
  State y{0.0, 1.0, 0.0};
  auto observer = [&](const State& s, double r) {
    if (r > 0.0 && !(s[0] > 0.0)) {
      const double r_prev = sol.grid[sol.jacobi.size() - 1];
      const double j_prev = sol.jacobi.back();
      const double where = r_prev + (r - r_prev) * j_prev / (j_prev - s[0]);
      throw DomainError("theta_radial: conjugate point near r = " + std::to_string(where));
    }
    sol.jacobi.push_back(s[0]);
    sol.jacobi_prime.push_back(s[1]);
    sol.m.push_back(s[2]);
  };
  auto stepper = ode::make_controlled(1e-24, 1e-14, ode::runge_kutta_fehlberg78<State>());
  ode::integrate_times(stepper, rhs, y, sol.grid.begin(), sol.grid.end(), sol.step / 4.0, observer);

  for (std::size_t i = 0; i < sol.grid.size(); ++i) {
    const double r = sol.grid[i];
    sol.curvature.push_back(profile.K(r));
    sol.theta.push_back(r == 0.0 ? 1.0 : std::pow(sol.jacobi[i] / r, d));
  }
  return sol;
}

namespace {

constexpr int kHalfWidth = 10;
constexpr int kDegree = 8;
constexpr int kInterp = 8;

// Least-squares polynomial derivative weights for samples at the given offsets.
std::pair<Eigen::VectorXd, Eigen::VectorXd> sg_weights(const std::vector<int>& offsets) {
  const int n = static_cast<int>(offsets.size());
  Eigen::MatrixXd V(n, kDegree + 1);
  for (int i = 0; i < n; ++i) {
    double p = 1.0;
    for (int j = 0; j <= kDegree; ++j) {
      V(i, j) = p;
      p *= offsets[i];
    }
  }
  const Eigen::MatrixXd P = V.completeOrthogonalDecomposition().pseudoInverse();
  return {P.row(1).transpose(), 2.0 * P.row(2).transpose()};
}

// First and second derivatives of an even grid function (reflected at r = 0).
void derivatives(const std::vector<double>& f, double h, std::vector<double>& d1, std::vector<double>& d2) {
  const int n = static_cast<int>(f.size());
  d1.assign(n, 0.0);
  d2.assign(n, 0.0);
  std::vector<int> centred;
  for (int o = -kHalfWidth; o <= kHalfWidth; ++o) centred.push_back(o);
  const auto [w1c, w2c] = sg_weights(centred);
  for (int i = 0; i < n; ++i) {
    int lo = i - kHalfWidth, hi = i + kHalfWidth;
    Eigen::VectorXd w1 = w1c, w2 = w2c;
    if (hi > n - 1) {
      hi = n - 1;
      lo = hi - 2 * kHalfWidth;
      std::vector<int> offs;
      for (int k = lo; k <= hi; ++k) offs.push_back(k - i);
      std::tie(w1, w2) = sg_weights(offs);
    }
    double a = 0.0, b = 0.0;
    for (int k = lo; k <= hi; ++k) {
      const double v = f[std::abs(k)];
      a += w1(k - lo) * v;
      b += w2(k - lo) * v;
    }
    d1[i] = a / h;
    d2[i] = b / (h * h);
  }
}

// 8-point Lagrange interpolation of an even grid function.
double interpolate(const std::vector<double>& f, double h, double x) {
  const int n = static_cast<int>(f.size());
  const int i = static_cast<int>(x / h);
  const int lo = std::min(std::max(i - kInterp / 2 + 1, -kInterp / 2 + 1), n - kInterp);
  double s = 0.0;
  for (int a = 0; a < kInterp; ++a) {
    const double xa = (lo + a) * h;
    double L = 1.0;
    for (int b = 0; b < kInterp; ++b) {
      if (b != a) L *= (x - (lo + b) * h) / (xa - (lo + b) * h);
    }
    s += L * f[std::abs(lo + a)];
  }
  return s;
}

const std::array<std::pair<double, double>, 24>& gauss24() {
  static const std::array<std::pair<double, double>, 24> nodes = [] {
    std::array<std::pair<double, double>, 24> out{};
    // Newton on P_24 from Chebyshev-like starting points, mapped to [0, 1]
    constexpr int n = 24;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      out[i] = {0.5 * (x + 1.0), 0.5 * w};
    }
    return out;
  }();
  return nodes;
}

std::vector<std::vector<double>> solve_levels(const ThetaSolution& th, int k_max) {
  const int d = th.d;
  const std::size_t n = th.grid.size();
  const double h = th.step;
  std::vector<double> u0(n), g1(n), Lg(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = th.grid[i];
    const double K = th.curvature[i];
    if (r == 0.0) {
      u0[i] = 1.0;
      Lg[i] = 0.0;
      // (L0 - L)' at 0 = d (1/3 + K - 2K/3); f'/r -> f''(0)
      const double dq = 0.5 * d * (1.0 / 3.0 + K / 3.0);
      g1[i] = -(dq + d * dq);
      continue;
    }
    const double j = th.jacobi[i], m = th.m[i];
    const double sh = std::sinh(r);
    u0[i] = std::pow(sh / j, 0.5 * d);
    Lg[i] = d * m / (r * j);
    const double L0 = theta_hyperbolic_log_derivative(r, d);
    const double q = 0.5 * (L0 - Lg[i]);  // u0'/u0
    const double A = inverse_square_gap(r);
    const double B = m * (2.0 * j + m) / ((r * j) * (r * j));
    const double dq = 0.5 * d * (A + K + B);  // (u0'/u0)'
    const double second = q * q + dq;         // u0''/u0
    g1[i] = -(second + (Lg[i] + d / r) * q);
  }
  std::vector<std::vector<double>> u{u0};
  const auto& gl = gauss24();
  for (int k = 1; k <= k_max; ++k) {
    const double ck = (k - 1 - 0.5 * d) * (k - 1 - 0.5 * d) - 0.25 * d * d;
    std::vector<double> g(n);
    if (k == 1) {
      for (std::size_t i = 0; i < n; ++i) g[i] = g1[i] + ck;
    } else {
      const auto& prev = u.back();
      std::vector<double> d1, d2;
      derivatives(prev, h, d1, d2);
      for (std::size_t i = 0; i < n; ++i) {
        const double r = th.grid[i];
        const double lap = r == 0.0 ? (1.0 + d) * d2[i] : d2[i] + (Lg[i] + d / r) * d1[i];
        g[i] = (-lap + ck * prev[i]) / u0[i];
      }
    }
    std::vector<double> uk(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = th.grid[i];
      if (r == 0.0) {
        uk[i] = g[0] / k;
        continue;
      }
      const double sh = std::sinh(r);
      double acc = 0.0;
      for (const auto& [s, w] : gl) {
        acc += w * std::pow(std::sinh(r * s) / sh, k - 1) * interpolate(g, h, r * s);
      }
      uk[i] = u0[i] * (r / sh) * acc;
    }
    u.push_back(std::move(uk));
  }
  return u;
}

}  // namespace

UkTable u_k_radial(const RadialCurvatureProfile& profile, int d, int k_max, int n_steps,
                   double refine_tolerance) {
  if (k_max < 0 || k_max > 5) throw PreconditionError("u_k_radial: need 0 <= k_max <= 5");
  if (n_steps % 2 != 0) throw PreconditionError("u_k_radial: step count must be even");
  const ThetaSolution fine = theta_radial(profile, d, n_steps);
  const ThetaSolution coarse = theta_radial(profile, d, n_steps / 2);
  UkTable t;
  t.d = d;
  t.grid = fine.grid;
  t.u = solve_levels(fine, k_max);
  const auto uc = solve_levels(coarse, k_max);
  for (int k = 0; k <= k_max; ++k) {
    double diff = 0.0, scale = 1.0;
    for (std::size_t i = 0; i < uc[k].size(); ++i) {
      diff = std::max(diff, std::abs(t.u[k][2 * i] - uc[k][i]));
      scale = std::max(scale, std::abs(t.u[k][2 * i]));
    }
    t.resolution_change.push_back(diff);
    if (!std::isfinite(diff) || diff > refine_tolerance * scale) {
      throw ResourceError("u_k_radial: level " + std::to_string(k) + " unresolved (change " +
                          std::to_string(diff) + "); refine to n_steps = " + std::to_string(2 * n_steps));
    }
  }
  return t;
}

std::vector<GrowthFit> verify_bound_uk(const UkTable& table) {
  std::vector<GrowthFit> out;
  for (std::size_t k = 0; k < table.u.size(); ++k) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < table.grid.size(); ++i) {
      const double r = table.grid[i];
      const double v = std::abs(table.u[k][i]);
      if (r >= 1.0 && v > 0.0) {
        x.push_back(r);
        y.push_back(std::log(v));
      }
    }
    GrowthFit fit{static_cast<int>(k), -std::numeric_limits<double>::infinity(), 0.0, true};
    if (x.size() >= 2) {
      const double n = static_cast<double>(x.size());
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
      }
      fit.b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      // lift the intercept until the line bounds every sample
      for (std::size_t i = 0; i < x.size(); ++i) fit.a = std::max(fit.a, y[i] - fit.b * x[i]);
      fit.finite = std::isfinite(fit.a) && std::isfinite(fit.b);
    }
    out.push_back(fit);
  }
  return out;
}

double c0_constant(int d) {
  if (d < 1) throw PreconditionError("c0_constant: need d >= 1");
  return 0.5 * std::pow(2.0 * kPi, -0.5 * d);
}

}  // namespace cusp
