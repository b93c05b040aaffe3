#include "cusp/scattering.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cusp/errors.hpp"
#include "cusp/quadrature.hpp"

namespace cusp {

namespace {

constexpr double kReal = 1e-13;

bool is_real(cplx z) { return std::abs(z.imag()) <= kReal * std::max(1.0, std::abs(z)); }

// Kahan sum for long resonance lists.
struct Compensated {
  cplx sum{0.0, 0.0};
  cplx c{0.0, 0.0};
  void add(cplx x) {
    const cplx y = x - c;
    const cplx t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

void ResonanceSet::validate() const {
  if (d < 1) throw PreconditionError("ResonanceSet: d must be >= 1");
  if (kappa < 1) throw PreconditionError("ResonanceSet: kappa must be >= 1");
  const double h = 0.5 * d;
  for (const auto& e : entries) {
    if (e.multiplicity < 1) throw PreconditionError("ResonanceSet: multiplicity must be >= 1");
    if (!std::isfinite(e.rho.real()) || !std::isfinite(e.rho.imag())) {
      throw PreconditionError("ResonanceSet: non-finite entry");
    }
    if (e.rho.real() > h + 1e-12) {
      if (!is_real(e.rho) || e.rho.real() > d + 1e-12) {
        std::ostringstream os;
        os << "ResonanceSet: entry " << e.rho.real() << (e.rho.imag() < 0 ? " - " : " + ")
           << std::abs(e.rho.imag()) << "i lies right of d/2 and is not a real point of (d/2, d]";
        throw PreconditionError(os.str());
      }
    }
  }
}

double ResonanceSet::convergence_partial_sum() const {
  const double h = 0.5 * d;
  double s = 0.0;
  for (const auto& e : entries) {
    const double n2 = std::norm(e.rho - h);
    if (n2 == 0.0) continue;
    s += e.multiplicity * (d - 2.0 * e.rho.real()) / n2;
  }
  return s;
}

void PhiModel::validate() const {
  resonances.validate();
  const double h = 0.5 * resonances.d;
  // conjugate symmetry, so that phi is real on the real axis
  std::vector<std::pair<cplx, int>> open;
  int n_real = 0;
  for (const auto& e : resonances.entries) {
    if (is_real(e.rho)) {
      // axis points rho = d/2 cancel out of the product
      if (std::abs(e.rho.real() - h) > 1e-14) n_real += e.multiplicity;
      continue;
    }
    open.emplace_back(e.rho, e.multiplicity);
  }
  auto key = [](const std::pair<cplx, int>& a, const std::pair<cplx, int>& b) {
    if (a.first.real() != b.first.real()) return a.first.real() < b.first.real();
    return std::abs(a.first.imag()) < std::abs(b.first.imag());
  };
  std::sort(open.begin(), open.end(), key);
  std::vector<bool> used(open.size(), false);
  for (std::size_t i = 0; i < open.size(); ++i) {
    if (used[i]) continue;
    bool found = false;
    for (std::size_t j = i + 1; j < open.size(); ++j) {
      if (used[j]) continue;
      if (std::abs(open[j].first - std::conj(open[i].first)) <= 1e-12 * std::max(1.0, std::abs(open[i].first)) &&
          open[j].second == open[i].second) {
        used[i] = used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) throw PreconditionError("PhiModel: resonance set is not closed under conjugation");
  }
  for (std::size_t j = 0; j < q_coeffs.size(); ++j) {
    const cplx q = q_coeffs[j];
    const double scale = std::max(1.0, std::abs(q));
    if (j % 2 == 1) {
      if (std::abs(q.real()) > 1e-12 * scale) throw PreconditionError("PhiModel: odd Q coefficients must be imaginary");
    } else if (j == 0) {
      if (std::abs(q.imag()) > 1e-12 * scale) throw PreconditionError("PhiModel: q_0 must be real");
    } else if (std::abs(q) > 1e-12) {
      throw PreconditionError("PhiModel: even Q coefficients beyond q_0 must vanish");
    }
  }
  const double q0 = q_coeffs.empty() ? 0.0 : q_coeffs[0].real();
  if (std::abs(std::abs(phi_at_half) - 1.0) > 1e-12) throw PreconditionError("PhiModel: |phi(d/2)| must be 1");
  // phi(d/2)^2 e^{2 i q0} = 1 gives phi(s) phi(d - s) = 1; the product at s = d/2 is (-1)^{#real}
  const cplx sq = phi_at_half * phi_at_half * std::exp(cplx(0.0, 2.0 * q0));
  if (std::abs(sq - 1.0) > 1e-10) throw PreconditionError("PhiModel: phi(d/2)^2 exp(2 i q0) != 1");
  const cplx self = std::exp(cplx(0.0, q0)) * ((n_real % 2) ? -1.0 : 1.0);
  if (std::abs(self - 1.0) > 1e-10) {
    throw PreconditionError("PhiModel: exp(i q0) (-1)^{#real points} must be 1 so that the model reproduces phi(d/2)");
  }
}

namespace {

cplx poly_Q(const PhiModel& m, cplx w) {
  cplx v = 0.0;
  for (std::size_t j = m.q_coeffs.size(); j-- > 0;) v = v * w + m.q_coeffs[j];
  return v;
}

cplx poly_Q_prime(const PhiModel& m, cplx w) {
  cplx v = 0.0;
  for (std::size_t j = m.q_coeffs.size(); j-- > 1;) v = v * w + static_cast<double>(j) * m.q_coeffs[j];
  return v;
}

void check_pole(const PhiModel& m, cplx s) {
  for (const auto& e : m.resonances.entries) {
    if (std::abs(s - e.rho) < 1e-10) {
      const double h = 0.5 * m.resonances.d;
      if (std::abs(e.rho - h) < 1e-14) continue;
      throw PoleError("phi_eval: evaluation point is a pole of the model", e.rho);
    }
  }
}

}  // namespace

cplx phi_eval(const PhiModel& m, cplx s) {
  check_pole(m, s);
  const double d = m.resonances.d;
  const double h = 0.5 * d;
  Compensated acc;
  acc.add(std::log(m.phi_at_half));
  acc.add(cplx(0.0, 1.0) * poly_Q(m, s - h));
  for (const auto& e : m.resonances.entries) {
    if (std::abs(e.rho - h) < 1e-14) continue;
    const cplx num = s - d + std::conj(e.rho);
    const cplx den = s - e.rho;
    if (num == 0.0) return 0.0;
    acc.add(static_cast<double>(e.multiplicity) * (std::log(num) - std::log(den)));
  }
  const cplx v = std::exp(acc.sum);
  require_finite(v, "phi_eval");
  return v;
}

cplx phi_log_derivative(const PhiModel& m, cplx s) {
  check_pole(m, s);
  const double d = m.resonances.d;
  const double h = 0.5 * d;
  Compensated acc;
  acc.add(cplx(0.0, 1.0) * poly_Q_prime(m, s - h));
  for (const auto& e : m.resonances.entries) {
    if (std::abs(e.rho - h) < 1e-14) continue;
    acc.add(static_cast<double>(e.multiplicity) * (1.0 / (s - d + std::conj(e.rho)) - 1.0 / (s - e.rho)));
  }
  return acc.sum;
}

AnalyticFunction phi_function(const PhiModel& m) {
  m.validate();
  AnalyticFunction f;
  f.value = [m](cplx s) { return phi_eval(m, s); };
  f.derivative = [m](cplx s) { return phi_eval(m, s) * phi_log_derivative(m, s); };
  f.name = "phi-model";
  return f;
}

PhaseDerivative phase_derivative_parts(const PhiModel& m, double T) {
  const int d = m.resonances.d;
  const double h = 0.5 * d;
  PhaseDerivative out{0.0, 0.0, 0.0, 0.0};
  out.polynomial = (cplx(0.0, 1.0) * poly_Q_prime(m, cplx(0.0, T))).real();
  for (const auto& e : m.resonances.entries) {
    const double a = h - e.rho.real();
    const double y = T - e.rho.imag();
    if (std::abs(a) < 1e-14) {
      continue;  // axis points cancel
    }
    const double den = a * a + y * y;
    const double term = e.multiplicity * (2.0 * e.rho.real() - d) / den;
    if (a > 0.0) {
      out.resonance_sum += term;
    } else {
      out.real_pole_sum += term;
    }
  }
  if (out.resonance_sum > 0.0) throw DomainError("phase_derivative: strip resonance sum is positive");
  out.value = out.polynomial + out.resonance_sum + out.real_pole_sum;
  return out;
}

double phase_derivative(const PhiModel& m, double T) { return phase_derivative_parts(m, T).value; }

double phase_polynomial_part(const PhiModel& m, double T) {
  // int_0^T i Q'(it) dt = Q(iT) - Q(0)
  return (poly_Q(m, cplx(0.0, T)) - poly_Q(m, 0.0)).real() / (2.0 * kPi);
}

double scattering_phase(const PhiModel& m, double T) {
  const double h = 0.5 * m.resonances.d;
  double s = 0.0;
  for (const auto& e : m.resonances.entries) {
    const double a = h - e.rho.real();
    if (std::abs(a) < 1e-14) continue;
    const double g = e.rho.imag();
    // int_0^T -2a/(a^2 + (t-g)^2) dt
    s += -2.0 * e.multiplicity * (std::atan((T - g) / a) + std::atan(g / a));
  }
  return phase_polynomial_part(m, T) + s / (2.0 * kPi);
}

void SpectrumData::validate(int d) const {
  for (const auto& e : entries) {
    if (e.multiplicity < 1) throw PreconditionError("SpectrumData: multiplicity must be >= 1");
    const bool real_r = std::abs(e.r.imag()) == 0.0 && e.r.real() >= 0.0;
    const bool small = e.r.real() == 0.0 && e.r.imag() > 0.0 && e.r.imag() <= 0.5 * d + 1e-12;
    if (!real_r && !small) {
      throw PreconditionError("SpectrumData: r must be real >= 0 or i y with 0 < y <= d/2");
    }
  }
}

int count_point_spectrum(const SpectrumData& spec, double T) {
  int n = 0;
  for (const auto& e : spec.entries) {
    // small eigenvalues (imaginary r) lie below every r^2 >= 0
    if (e.r.imag() > 0.0 || e.r.real() <= T) n += e.multiplicity;
  }
  return n;
}

double tilde_N(const SpectrumData& spec, const PhiModel& m, double T) {
  spec.validate(m.resonances.d);
  if (T < 0.0) throw PreconditionError("tilde_N: T must be >= 0");
  return count_point_spectrum(spec, T) - scattering_phase(m, T);
}

// ---------------------------------------------------------------- smoothing

Smoother::Smoother(double A, const Mollifier& mollifier) : A_(A) {
  if (!(A > 0.0)) throw PreconditionError("Smoother: A must be > 0");
  // sigma_hat(u) = int_0^1 rho(y) cos(u y / 2) dy on fixed Kronrod-21 panels; the u-grid
  // advances every node by a rotation instead of fresh cosines.
  const int panels = 128;  // 0.5 (end of the flat part) is a panel edge
  std::vector<double> y, w;
  for (int p = 0; p < panels; ++p) {
    const double c = (p + 0.5) / panels, h = 0.5 / panels;
    for (int i = 0; i < 11; ++i) {
      const double x = detail::kXgk[i];
      for (double sgn : {-1.0, 1.0}) {
        if (x == 0.0 && sgn > 0.0) continue;
        y.push_back(c + sgn * h * x);
        w.push_back(h * detail::kWgk[i] * mollifier(c + sgn * h * x));
      }
    }
  }
  const double step = 0.02;
  const std::size_t n = y.size();
  std::vector<double> cs(n, 1.0), sn(n, 0.0), rc(n), rs(n);
  for (std::size_t i = 0; i < n; ++i) {
    rc[i] = std::cos(0.5 * step * y[i]);
    rs[i] = std::sin(0.5 * step * y[i]);
  }
  double s0 = 0.0;
  for (std::size_t i = 0; i < n; ++i) s0 += w[i];
  const double floor = 1e-14 * s0 * s0;
  int quiet = 0;
  for (int k = 0;; ++k) {
    const double u = k * step;
    if (k % 512 == 0) {
      // re-anchor the rotation against drift
      for (std::size_t i = 0; i < n; ++i) {
        cs[i] = std::cos(0.5 * u * y[i]);
        sn[i] = std::sin(0.5 * u * y[i]);
      }
    }
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) v += w[i] * cs[i];
    const double kv = v * v;
    if (!(kv >= 0.0)) throw DomainError("Smoother: kernel negative on grid");
    grid_.push_back(u);
    values_.push_back(kv);
    quiet = (kv < floor) ? quiet + 1 : 0;
    if (quiet * step >= 4.0) break;
    if (u > 5000.0) throw ResourceError("Smoother: kernel tail did not decay below 1e-14 by u = 5000");
    for (std::size_t i = 0; i < n; ++i) {
      const double c = cs[i] * rc[i] - sn[i] * rs[i];
      sn[i] = sn[i] * rc[i] + cs[i] * rs[i];
      cs[i] = c;
    }
  }
  cutoff_ = grid_.back();
  values_.push_back(0.0);  // sentinel for the interpolation stencil
  grid_.push_back(cutoff_ + step);
  // normalise the interpolated kernel to unit mass on [-cutoff, cutoff]
  auto raw = [&](double x) { return kernel(x); };
  const double mass =
      2.0 * value_or_throw(integrate_panels(raw, uniform_panels(0.0, cutoff_, 1.0), {1e-13, 0.0, 20000}),
                           "Smoother mass");
  for (auto& v : values_) v /= mass;
}

double Smoother::kernel(double u) const {
  const double x = std::abs(u);
  if (x >= cutoff_) return 0.0;
  const double step = grid_[1] - grid_[0];
  const int n = static_cast<int>(grid_.size());
  int i = static_cast<int>(std::floor(x / step));
  // four-point Lagrange on i-1..i+2, mirrored through 0
  auto at = [&](int j) { return values_[std::min(std::abs(j), n - 1)]; };
  const double t = x / step - i;
  const double l0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
  const double l1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
  const double l2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
  const double l3 = (t + 1.0) * t * (t - 1.0) / 6.0;
  return std::max(0.0, l0 * at(i - 1) + l1 * at(i) + l2 * at(i + 1) + l3 * at(i + 2));
}

double Smoother::operator()(const std::function<double(double)>& f, double T) const {
  auto g = [&](double u) { return f(T + A_ * u) * kernel(u); };
  auto res = integrate_panels(g, uniform_panels(-cutoff_, cutoff_, 0.5), {1e-10, 1e-13, 40000});
  return value_or_throw(res, "smear");
}

// ---------------------------------------------------------------- counting

StripSum strip_weighted_sum(const ResonanceSet& r, double b, double T, const std::optional<LeadingData>& lead) {
  r.validate();
  const double d = r.d;
  const double h = 0.5 * d;
  if (!(b > h)) throw PreconditionError("strip_weighted_sum: b must exceed d/2");
  StripSum out{0.0, 0.0, std::nullopt, 0};
  for (const auto& e : r.entries) {
    if (e.rho.real() > h) continue;
    // zero of phi at beta + i gamma = d - conj(rho)
    const double beta = d - e.rho.real();
    const double gamma = e.rho.imag();
    if (beta > b || gamma < 0.0 || gamma > T) continue;
    out.value += kPi * e.multiplicity * (beta - h);
    out.theorem_sum += e.multiplicity * (d - 2.0 * e.rho.real());
    out.count += e.multiplicity;
  }
  if (lead) {
    if (!(lead->abs_a_star > 0.0)) throw PreconditionError("strip_weighted_sum: |a*| must be > 0");
    const double k = r.kappa;
    out.predicted = k / (2.0 * kPi) * T * std::log(T) -
                    T / kPi * (0.5 * k + std::log(lead->abs_a_star) - h * lead->ell_star);
  }
  return out;
}

OutOfStripCount out_of_strip_count(const ResonanceSet& r, double b, double T, double eps, double alpha) {
  if (!(eps > 0.0 && eps < 1.0)) throw PreconditionError("out_of_strip_count: eps must lie in (0, 1)");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw PreconditionError("out_of_strip_count: alpha must lie in (0, 1]");
  r.validate();
  const double h = 0.5 * r.d;
  const double radius = std::pow(eps * T, alpha);
  int n = 0;
  for (const auto& e : r.entries) {
    if (e.rho.real() < r.d - b && std::abs(e.rho - cplx(h, T)) <= radius) n += e.multiplicity;
  }
  return {n, radius};
}

int box_count(const ResonanceSet& r, double b, double T, double half_height) {
  r.validate();
  const double h = 0.5 * r.d;
  int n = 0;
  for (const auto& e : r.entries) {
    const double x = e.rho.real();
    if (x >= r.d - b && x <= h && std::abs(e.rho.imag() - T) <= half_height) n += e.multiplicity;
  }
  return n;
}

double resonance_kernel_integral(cplx rho, int d, double b, double T) {
  const double h = 0.5 * d;
  if (!(b > h)) throw PreconditionError("resonance_kernel_integral: b must exceed d/2");
  const double x_rho = rho.real();
  const double x_ref = d - rho.real();  // pole of 1/(s - d + conj rho)
  if (std::abs(rho.imag() - T) < 1e-12) {
    if ((x_rho >= h && x_rho <= b) || (x_ref >= h && x_ref <= b)) {
      throw DomainError("resonance_kernel_integral: singular configuration, pole on the segment");
    }
  }
  if (std::abs(x_rho - h) < 1e-15) return 0.0;
  auto f = [&](double sigma) {
    const cplx s(sigma, T);
    return (1.0 / (s - static_cast<double>(d) + std::conj(rho)) - 1.0 / (s - rho)).imag();
  };
  std::vector<double> pts{h, b};
  for (double c : {x_rho, x_ref}) {
    if (c > h && c < b) pts.push_back(c);
  }
  std::sort(pts.begin(), pts.end());
  const double v = value_or_throw(integrate_panels(f, pts, {1e-12, 1e-15, 4000}), "resonance_kernel_integral");
  if (std::abs(v) > kPi + 1e-8) {
    throw DomainError("resonance_kernel_integral: argument variation exceeds pi");
  }
  return v;
}

double lorentzian_strip_integral(cplx rho, int d, double T) {
  if (!(T > 0.0)) throw PreconditionError("lorentzian_strip_integral: T must be > 0");
  const double h = 0.5 * d;
  const double n2 = std::norm(rho - h);
  const double T2 = T * T;
  if (std::abs(n2 - T2) <= 1e-12 * std::max(1.0, T2)) {
    throw DomainError("lorentzian_strip_integral: degenerate configuration |rho - d/2| = T");
  }
  const double c = (d - 2.0 * rho.real()) * T / n2 / (1.0 - T2 / n2);
  return 2.0 * std::atan(c) + (n2 < T2 ? 2.0 * kPi : 0.0);
}

GeneralWeylCount general_weyl_count(const ResonanceSet& r, const SpectrumData& spec, double T) {
  r.validate();
  spec.validate(r.d);
  const double h = 0.5 * r.d;
  GeneralWeylCount out{};
  out.eigen_count = count_point_spectrum(spec, T);
  out.convergence_sum = r.convergence_partial_sum();
  if (!std::isfinite(out.convergence_sum)) throw PreconditionError("general_weyl_count: resonance sum diverges");
  double lor = 0.0;
  for (const auto& e : r.entries) {
    const double n = std::abs(e.rho - h);
    if (n == 0.0) continue;
    const double L = lorentzian_strip_integral(e.rho, r.d, T);
    lor += e.multiplicity * L;
    const bool inside = n < T;
    if (inside) out.disc_count += e.multiplicity;
    // R(T) collects the arctan part of each term
    const double arct = e.multiplicity * (0.5 * L - (inside ? kPi : 0.0)) / kPi;
    out.remainder += arct;
    if (std::abs(n - T) > 1.0) {
      out.remainder_far += arct;
    } else {
      out.remainder_near += arct;
    }
  }
  out.lhs = out.eigen_count + lor / (2.0 * kPi);
  return out;
}

WeylFitResult weyl_fit(const std::vector<std::pair<double, double>>& samples, int d,
                       const std::vector<double>& sigmas) {
  if (d < 1) throw PreconditionError("weyl_fit: d must be >= 1");
  if (samples.size() < 10) throw PreconditionError("weyl_fit: need at least 10 samples");
  if (!sigmas.empty() && sigmas.size() != samples.size()) {
    throw PreconditionError("weyl_fit: sigmas must match samples");
  }
  double tmin = std::numeric_limits<double>::infinity(), tmax = 0.0;
  for (const auto& [T, v] : samples) {
    if (!(T > 1.0) || !std::isfinite(v)) throw PreconditionError("weyl_fit: samples need T > 1 and finite values");
    tmin = std::min(tmin, T);
    tmax = std::max(tmax, T);
  }
  if (tmax < 10.0 * tmin) throw PreconditionError("weyl_fit: samples must span a decade in T");
  const Eigen::Index n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd X(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double T = samples[i].first;
    // default weights follow the O(T^d / log T) remainder
    const double w = sigmas.empty() ? std::log(T) / std::pow(T, d) : 1.0 / sigmas[i];
    X(i, 0) = w * std::pow(T, d + 1);
    X(i, 1) = w * T * std::log(T);
    X(i, 2) = w * T;
    y(i) = w * samples[i].second;
  }
  Eigen::Vector3d scale;
  for (int j = 0; j < 3; ++j) {
    scale(j) = X.col(j).norm();
    X.col(j) /= scale(j);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cond = sv(0) / sv(sv.size() - 1);
  if (!(cond < 1e12)) throw ConvergenceError("weyl_fit: conditioning", cond);
  Eigen::Vector3d c = svd.solve(y);
  const double res = (X * c - y).norm();
  c = c.cwiseQuotient(scale);
  return {c(0), c(1), c(2), res};
}

MaassSelbergCheck maass_selberg_bound(double phi_abs, double sigma, double t, double y, int d, int kappa) {
  if (t == 0.0) throw DomainError("maass_selberg_bound: degenerate at t = 0");
  if (!(sigma > 0.5 * d)) throw PreconditionError("maass_selberg_bound: sigma must exceed d/2");
  if (!(y > 0.0)) throw PreconditionError("maass_selberg_bound: y must be > 0");
  const double x = sigma - 0.5 * d;
  const double base = std::sqrt(1.0 + x * x / (t * t)) + x / std::abs(t);
  const double bound = std::pow(y, kappa * (2.0 * sigma - d)) * std::pow(base, kappa);
  return {bound, phi_abs <= bound};
}

namespace {

double axis_rhs_direct(const AnalyticFunction& phi, int d, double y, double t, int kappa) {
  const cplx s(0.5 * d, t);
  const cplx p = phi(s);
  if (std::abs(std::abs(p) - 1.0) > 1e-8) {
    throw PreconditionError("maass_selberg_axis_rhs: |phi| != 1 on the axis");
  }
  const double ly = std::log(y);
  const cplx w = std::exp(cplx(0.0, -2.0 * t * ly)) * p;  // y^{-2it} phi
  // (conj(w) - w)/(2it) = -Im(w)/t
  return 2.0 * kappa * ly - (phi.deriv(s) / p).real() - w.imag() / t;
}

}  // namespace

double maass_selberg_axis_rhs(const AnalyticFunction& phi, int d, double y, double t, int kappa) {
  if (kappa != 1) throw PreconditionError("maass_selberg_axis_rhs: scalar case kappa = 1 only");
  if (!(y > 0.0)) throw PreconditionError("maass_selberg_axis_rhs: y must be > 0");
  if (std::abs(t) >= 1e-4) return axis_rhs_direct(phi, d, y, t, kappa);
  // even in t: fit c0 + c2 t^2 through t = 1e-4, 2e-4
  const double ta = 1e-4, tb = 2e-4;
  const double fa = axis_rhs_direct(phi, d, y, ta, kappa);
  const double fb = axis_rhs_direct(phi, d, y, tb, kappa);
  const double c2 = (fb - fa) / (tb * tb - ta * ta);
  const double c0 = fa - c2 * ta * ta;
  return c0 + c2 * t * t;
}

double trace_formula_lhs(const SpectrumData& spec, const PhiModel& m, const TestFunctionPsi& psi,
                         double tr_phi_half) {
  psi.validate();
  m.validate();
  spec.validate(m.resonances.d);
  double sum = 0.0;
  for (const auto& e : spec.entries) {
    const double v = e.r.imag() > 0.0 ? psi_hat_imaginary(psi, e.r.imag()) : psi_hat(psi, e.r.real());
    sum += e.multiplicity * v;
  }
  // int 2 pi S'(r) psi_hat(r) dr on the time side.
  // Polynomial part: i Q'(ir) = sum_j j q_j i^j r^{j-1}; int psi_hat r^{2n} = 2 T^{2n+1}/(2n+1)
  // because rho(At) = 1 near t = 0.
  const double T = psi.cutoff_T;
  double phase = 0.0;
  for (std::size_t j = 1; j < m.q_coeffs.size(); j += 2) {
    const cplx c = static_cast<double>(j) * m.q_coeffs[j] * std::pow(cplx(0.0, 1.0), static_cast<int>(j));
    const int p = static_cast<int>(j) - 1;
    phase += c.real() * 2.0 * std::pow(T, p + 1) / (p + 1);
  }
  // Lorentzian part: int e^{-irt} a/(a^2 + (r-g)^2) dr = sign(a) pi e^{-|a||t|} e^{-igt}
  const double h = 0.5 * m.resonances.d;
  const double L = psi.support();
  for (const auto& e : m.resonances.entries) {
    const double a = h - e.rho.real();
    if (std::abs(a) < 1e-14) continue;
    const double g = e.rho.imag();
    auto f = [&](double t) { return psi_eval(psi, t) * std::exp(-std::abs(a) * t) * std::cos(g * t); };
    std::vector<double> pts = uniform_panels(0.0, L, 2.0 * kPi / std::max(1.0, T + std::abs(g)));
    pts.push_back(psi.mollifier.flat_radius() / psi.scale_A);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const double I = 2.0 * value_or_throw(integrate_panels(f, pts, {1e-12, 1e-14, 8000}), "trace_formula_lhs");
    phase += e.multiplicity * (-2.0) * (a > 0.0 ? 1.0 : -1.0) * kPi * I;
  }
  return sum - 0.5 * phase / (2.0 * kPi) + 0.25 * psi_hat(psi, 0.0) * tr_phi_half;
}

// ---------------------------------------------------------------- modular backend

cplx modular_phi(cplx s) {
  if (std::abs(s - 0.5) < 1e-14) return -1.0;
  if (std::abs(s - 1.0) < 1e-14) throw PoleError("modular_phi: pole at s = 1", 1.0);
  if (s.imag() == 0.0 && s.real() <= 0.5 && std::abs(s.real() - std::round(s.real() - 0.5) - 0.5) < 1e-14) {
    throw PoleError("modular_phi: Gamma(s - 1/2) pole", s);
  }
  const cplx z2 = riemann_zeta(2.0 * s);
  if (std::abs(z2) < 1e-300) throw PoleError("modular_phi: zero of zeta(2s)", s);
  const cplx lg = 0.5 * std::log(kPi) + log_gamma(s - 0.5) - log_gamma(s);
  cplx v = std::exp(lg) * riemann_zeta(2.0 * s - 1.0) / z2;
  if (s.imag() == 0.0) v = cplx(v.real(), 0.0);
  require_finite(v, "modular_phi");
  return v;
}

AnalyticFunction modular_phi_function() {
  AnalyticFunction f;
  f.value = [](cplx s) { return modular_phi(s); };
  // five-point stencil; h well inside the distance 1/4 to the nearest pole off the real axis
  f.derivative = [](cplx s) {
    const double h = 1e-3;
    return (8.0 * (modular_phi(s + h) - modular_phi(s - h)) - (modular_phi(s + 2.0 * h) - modular_phi(s - 2.0 * h))) /
           (12.0 * h);
  };
  f.name = "modular";
  return f;
}

}  // namespace cusp
