#include "cusp/cusp_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "cusp/errors.hpp"
#include "cusp/jet.hpp"
#include "cusp/malpha.hpp"
#include "cusp/parametrix.hpp"
#include "cusp/special.hpp"

namespace cusp {

Lattice Lattice::integer(int d) {
  if (d < 1) throw PreconditionError("Lattice: dimension must be >= 1");
  return {d, Eigen::MatrixXd::Identity(d, d)};
}

void Lattice::validate() const {
  if (d < 1) throw PreconditionError("Lattice: dimension must be >= 1");
  if (basis.rows() != d || basis.cols() != d) throw PreconditionError("Lattice: basis must be d x d");
  if (!(std::abs(std::abs(basis.determinant()) - 1.0) <= 1e-12)) {
    throw PreconditionError("Lattice: covolume must be 1");
  }
}

namespace {

constexpr double kMaxPoints = 1e8;

// Calls f(|g|) for every nonzero lattice vector with |g| <= R.
template <class F>
void enumerate(const Lattice& L, double R, F&& f) {
  L.validate();
  const int d = L.d;
  const Eigen::MatrixXd inv = L.basis.inverse();
  std::vector<long> bound(d);
  double count = 1.0;
  for (int i = 0; i < d; ++i) {
    bound[i] = static_cast<long>(std::floor(R * inv.row(i).norm() + 1e-9));
    count *= 2.0 * bound[i] + 1.0;
  }
  if (count > kMaxPoints) {
    throw ResourceError("lattice enumeration: " + std::to_string(count) + " box points exceeds 1e8");
  }
  std::vector<long> n(d);
  for (int i = 0; i < d; ++i) n[i] = -bound[i];
  const double R2 = R * R;
  Eigen::VectorXd v(d);
  while (true) {
    v.setZero();
    bool zero = true;
    for (int i = 0; i < d; ++i) {
      if (n[i] != 0) {
        zero = false;
        v += static_cast<double>(n[i]) * L.basis.col(i);
      }
    }
    const double r2 = v.squaredNorm();
    if (!zero && r2 <= R2 * (1.0 + 1e-15)) f(std::sqrt(r2));
    int i = 0;
    while (i < d && n[i] == bound[i]) {
      n[i] = -bound[i];
      ++i;
    }
    if (i == d) break;
    ++n[i];
  }
}

double sphere_area(int d) { return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d); }

// int_0^1 log x rho'(x) dx for the default mollifier (derivative supported on [1/2, 1]).
double cutoff_log_moment() {
  static const double value = [] {
    Mollifier rho;
    auto f = [&](double x) { return std::log(x) * rho.derivative(x); };
    return value_or_throw(integrate(f, rho.flat_radius(), 1.0, {1e-13, 0.0, 2000}), "cutoff_log_moment");
  }();
  return value;
}

}  // namespace

double lattice_shell_sum(const Lattice& L, double R) {
  if (!(R > 0.0)) throw PreconditionError("lattice_shell_sum: need R > 0");
  double sum = 0.0;
  long hits = 0;
  enumerate(L, R, [&](double r) {
    sum += std::pow(r, -L.d);
    ++hits;
  });
  if (hits == 0) throw PreconditionError("lattice_shell_sum: R below the shortest vector");
  return sum;
}

LatticeConstant gamma_lattice(const Lattice& L, double R_max, double tolerance) {
  L.validate();
  if (R_max <= 0.0) R_max = L.d <= 2 ? 160.0 : 60.0;
  const double R_lo = R_max / std::sqrt(2.0);
  Mollifier rho;
  double F_hi = 0.0, F_lo = 0.0;
  enumerate(L, R_max, [&](double r) {
    const double w = std::pow(r, -L.d);
    F_hi += w * rho(r / R_max);
    if (r < R_lo) F_lo += w * rho(r / R_lo);
  });
  const double S = sphere_area(L.d);
  const double c = cutoff_log_moment();
  const double v_hi = F_hi / S - std::log(R_max) + c;
  const double v_lo = F_lo / S - std::log(R_lo) + c;
  LatticeConstant out{v_hi, std::abs(v_hi - v_lo), {R_lo, R_max}, {v_lo, v_hi}};
  if (!(out.error <= tolerance)) {
    throw ConvergenceError("gamma_lattice: estimates at R_max/sqrt2 and R_max differ by " +
                               std::to_string(out.error),
                           v_hi, out.error, out.estimates);
  }
  return out;
}

double arcsine_log_integral() {
  static const double value = [] {
    auto f = [](double x) { return std::log(x) / std::sqrt(x * (1.0 - x)); };
    Endpoints ends;
    ends.left = {-0.5, true};
    ends.right = {-0.5, false};
    return value_or_throw(integrate(f, 0.0, 1.0, {1e-14, 0.0, 2000}, ends), "arcsine_log_integral") / kPi;
  }();
  return value;
}

double c_d_constant(int d) {
  if (d < 1) throw PreconditionError("c_d_constant: need d >= 1");
  double twice = 0.0;
  if (d % 2 == 0) {
    for (int k = 1; k <= d / 2 - 1; ++k) twice += 2.0 / (d - 2 * k);
  } else {
    for (int k = 1; k <= d / 2; ++k) twice += 2.0 / (d - 2 * k);
    twice += arcsine_log_integral();
  }
  return 0.5 * twice;
}

double c1_lattice(const Lattice& L) {
  return 1.0 + c_d_constant(L.d) + gamma_lattice(L).value - kEulerGamma;
}

namespace {

std::vector<double> psi_breakpoints(const TestFunctionPsi& psi) {
  auto pts = uniform_panels(0.0, psi.support(), kPi / std::max(psi.cutoff_T, 1.0));
  pts.push_back(psi.mollifier.flat_radius() / psi.scale_A);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// int_0^L psi'(t) w(t) dt with w log-singular at t = 0.
template <class W>
double psi_prime_moment(const TestFunctionPsi& psi, W&& w, const QuadratureSpec& spec, const char* ctx) {
  auto f = [&](double t) { return psi_derivative(psi, t) * w(t); };
  auto pts = psi_breakpoints(psi);
  Endpoints ends;
  ends.left.log = true;
  double total = value_or_throw(integrate(f, pts[0], pts[1], spec, ends), ctx);
  std::vector<double> rest(pts.begin() + 1, pts.end());
  if (rest.size() >= 2) total += value_or_throw(integrate_panels(f, rest, spec), ctx);
  return total;
}

}  // namespace

CuspTermResult cusp_term(const TestFunctionPsi& psi, const Lattice& L, int d) {
  psi.validate();
  if (d != 1) throw DomainError("cusp_term: numeric pipeline supports d = 1 only; use c1_lattice");
  if (L.d != d) throw PreconditionError("cusp_term: lattice dimension differs from d");
  if (!(psi.cutoff_T >= 10.0)) throw PreconditionError("cusp_term: need T >= 10");
  const QuadratureSpec spec{1e-12, 1e-12, 20000};
  const double T = psi.cutoff_T;

  // Coefficient of the tau divergence: -(1/pi) int psi'(t) I dt with
  // I = int_0^z dv / sqrt(v(z - v)), independent of z.
  const double I = [] {
    auto f = [](double x) { return 1.0 / std::sqrt(x * (1.0 - x)); };
    Endpoints ends;
    ends.left.power = -0.5;
    ends.right.power = -0.5;
    return value_or_throw(integrate(f, 0.0, 1.0, {1e-14, 0.0, 500}, ends), "cusp_term arcsine mass");
  }();
  const double dpsi = value_or_throw(
      integrate_panels([&](double t) { return psi_derivative(psi, t); }, psi_breakpoints(psi), spec),
      "cusp_term psi' integral");
  const double a = -I * dpsi / kPi;

  const double gamma_L = gamma_lattice(L).value;
  const double Cd = c_d_constant(d);
  // -(1/2) int psi'(t) log(2 sinh^2(t/2)) dt
  auto logw = [](double t) {
    const double sh = std::sinh(0.5 * t);
    return std::log(2.0 * sh * sh);
  };
  const double main = -0.5 * psi_prime_moment(psi, logw, spec, "cusp_term main integral");

  CuspTermResult r;
  r.T = T;
  r.value = a * (0.5 * kLog2 + gamma_L) + Cd * a + main;
  r.predicted = -(T / kPi) * std::log(T) + (1.0 + Cd + gamma_L - kEulerGamma) * T / kPi;
  r.residual = r.value - r.predicted;
  return r;
}

double sine_log_constant() {
  // int_0^1 (sin u - u)/u^2 du + int_1^inf sin u / u^2 du; the log e cancels int_e^1 du/u.
  auto head = [](double u) {
    if (u < 1e-3) {
      const double u2 = u * u;
      return -u / 6.0 + u * u2 / 120.0 - u * u2 * u2 / 5040.0;
    }
    return (std::sin(u) - u) / (u * u);
  };
  const QuadratureSpec spec{1e-14, 1e-16, 4000};
  double total = value_or_throw(integrate(head, 0.0, 1.0, spec), "sine_log_constant");
  const double U = 200.0;
  total += value_or_throw(integrate_panels([](double u) { return std::sin(u) / (u * u); },
                                           uniform_panels(1.0, U, 2.0),
                                           spec),
                          "sine_log_constant");
  // int_U^inf e^{iu} f = e^{iU} (i f - f' - i f'' + f''' + ...), f = u^{-2}
  std::complex<double> tail = 0.0;
  const std::complex<double> cycle[4] = {{0, 1}, {-1, 0}, {0, -1}, {1, 0}};
  double fk = 1.0 / (U * U);  // |f^{(k)}(U)| = (k+1)! U^{-k-2}
  for (int k = 0; k < 12; ++k) {
    const double signed_fk = (k % 2 == 0) ? fk : -fk;
    tail += cycle[k % 4] * signed_fk;
    fk *= (k + 2) / U;
  }
  tail *= std::exp(std::complex<double>(0.0, U));
  return total + tail.imag();
}

double log_sinh_integral(const TestFunctionPsi& psi) {
  psi.validate();
  const QuadratureSpec spec{1e-12, 1e-12, 20000};
  return -psi_prime_moment(psi, [](double t) { return std::log(std::sinh(0.5 * t)); }, spec,
                           "log_sinh_integral");
}


namespace {

// g(v) = psi(arccosh(1 + v)) with v-derivatives up to `order`.
struct PsiInV {
  const TestFunctionPsi& psi;
  int order;

  // t^2 as a series in v: 2 sum (-1)^{n+1} (2v)^n / (n^2 C(2n, n))
  Jet tau_of_v(const Jet& v) const {
    Jet out(0.0, v.order());
    Jet pw = Jet::constant(1.0, v.order());
    double binom = 1.0;
    for (int n = 1; n <= 24; ++n) {
      pw = pw * (2.0 * v);
      binom *= (2.0 * n) * (2.0 * n - 1.0) / (static_cast<double>(n) * n);
      const double c = 2.0 * ((n % 2 == 1) ? 1.0 : -1.0) / (static_cast<double>(n) * n * binom);
      out += pw * c;
    }
    return out;
  }

  double eval(double v, int m) const {
    if (v < 0.0) return 0.0;
    const double t0 = std::acosh(1.0 + v);
    const double A = psi.scale_A, T = psi.cutoff_T;
    if (A * t0 >= 1.0) return 0.0;
    if (T * t0 < 1e-2 && A * t0 < psi.mollifier.flat_radius()) {
      // rho = 1: (T/pi) sum (-1)^n (T^2 tau)^n / (2n+1)!
      const Jet tau = tau_of_v(Jet::variable(v, m));
      Jet s(0.0, m);
      Jet pw = Jet::constant(1.0, m);
      double fact = 1.0;
      for (int n = 0; n <= m + 8; ++n) {
        if (n > 0) {
          pw = pw * (T * T * tau);
          fact *= (2.0 * n) * (2.0 * n + 1.0);
        }
        s += pw * (((n % 2 == 0) ? 1.0 : -1.0) / fact);
      }
      return s.derivative(m) * T / kPi;
    }
    const Jet t = Jet::variable(t0, m);
    Jet sn, cs;
    sincos(t * T, sn, cs);
    const auto rd = psi.mollifier.derivatives(A * t0, m);
    Jet rho(0.0, m);
    double scale = 1.0, fact = 1.0;
    for (int j = 0; j <= m; ++j) {
      if (j > 0) {
        scale *= A;
        fact *= j;
      }
      rho[j] = rd[j] * scale / fact;
    }
    Jet h = sn / t * rho * (1.0 / kPi);
    Jet sh, ch;
    sinhcosh(t, sh, ch);
    for (int j = 0; j < m; ++j) h = h.differentiate() / sh;
    return h[0];
  }
};

}  // namespace

double diagonal_integral(const TestFunctionPsi& psi, int d, int k) {
  psi.validate();
  if (d < 1 || k < 0) throw PreconditionError("diagonal_integral: need d >= 1 and k >= 0");
  const double alpha = k - 0.5 * (d + 2);
  const int m = alpha > -1.0 ? 0 : static_cast<int>(std::ceil(-alpha - 1e-12));
  const double beta = alpha + m;
  PsiInV g{psi, m};
  SmoothTestFunction f{[&](double v, int order) { return g.eval(v, order); },
                       std::cosh(psi.support()) - 1.0, m, "psi(arccosh(1+v))"};
  // integral over t in R is twice the v-integral on (0, inf)
  const double pair = m_alpha_pair({beta, m}, f, {1e-12, 1e-14, 20000});
  return c0_constant(d) * std::pow(-0.5, k) * 2.0 * pair;
}

DiagonalPolynomial diagonal_term(const TestFunctionPsi& psi, int d, const std::vector<double>& u_diag,
                                 int n_powers) {
  psi.validate();
  DiagonalPolynomial out;
  const int N = static_cast<int>(u_diag.size());
  if (n_powers <= 0) n_powers = N + 2;
  for (int j = 0; j < n_powers; ++j) out.powers.push_back(d + 1 - 2 * j);
  out.coefficients.assign(n_powers, 0.0);
  if (std::all_of(u_diag.begin(), u_diag.end(), [](double u) { return u == 0.0; })) return out;

  const int n_samples = n_powers + 3;
  const double T0 = psi.cutoff_T;
  Eigen::MatrixXd V(n_samples, n_powers);
  Eigen::VectorXd y(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    TestFunctionPsi p = psi;
    p.cutoff_T = T0 * (1.0 + 0.25 * i);
    double total = 0.0;
    for (int k = 0; k < N; ++k) {
      if (u_diag[k] != 0.0) total += u_diag[k] * diagonal_integral(p, d, k);
    }
    const double x = p.cutoff_T / T0;
    for (int j = 0; j < n_powers; ++j) V(i, j) = std::pow(x, out.powers[j]);
    y(i) = total;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(V, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  out.condition = sv(0) / sv(sv.size() - 1);
  if (!(out.condition < 1e10)) {
    throw ConvergenceError("diagonal_term: ill-conditioned power extraction (condition " +
                               std::to_string(out.condition) + ")",
                           std::nan(""), out.condition);
  }
  const Eigen::VectorXd c = svd.solve(y);
  for (int j = 0; j < n_powers; ++j) out.coefficients[j] = c(j) / std::pow(T0, out.powers[j]);
  return out;
}

double weyl_c0(double vol, int d) {
  if (!(vol > 0.0)) throw PreconditionError("weyl_c0: need vol > 0");
  if (d < 1) throw PreconditionError("weyl_c0: need d >= 1");
  const double first = vol / (std::pow(4.0 * kPi, 0.5 * (d + 1)) * std::tgamma(0.5 * d + 1.5));
  // unit co-ball volume in R^{d+1}
  const double ball = std::pow(kPi, 0.5 * (d + 1)) / std::tgamma(0.5 * (d + 1) + 1.0);
  const double second = vol * ball / std::pow(2.0 * kPi, d + 1);
  if (!(std::abs(first - second) <= 1e-12 * std::abs(first))) {
    throw DomainError("weyl_c0: the two closed forms disagree");
  }
  return first;
}

}  // namespace cusp
