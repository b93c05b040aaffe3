#include "cusp/dirichlet.hpp"

#include <cmath>
#include <string>

#include "cusp/errors.hpp"

namespace cusp {

namespace {

constexpr double kMargin = 1e-6;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_above(double abscissa, cplx s, const char* ctx) {
  if (!(s.real() > abscissa + kMargin)) {
    throw ConvergenceError(std::string(ctx) + ": Re s = " + std::to_string(s.real()) +
                               " not above the abscissa " + std::to_string(abscissa),
                           std::nan(""), std::numeric_limits<double>::infinity());
  }
}

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

void ExponentialDirichletSeries::validate() const {
  for (std::size_t k = 1; k < terms.size(); ++k) {
    if (!(terms[k].ell > terms[k - 1].ell)) {
      throw PreconditionError("ExponentialDirichletSeries: exponents must increase strictly");
    }
  }
  for (const auto& t : terms) {
    if (!std::isfinite(t.ell) || !std::isfinite(std::abs(t.a))) {
      throw DomainError("ExponentialDirichletSeries: non-finite term");
    }
  }
}

void ClassicalDirichletSeries::validate() const {
  for (std::size_t k = 0; k < terms.size(); ++k) {
    if (!(terms[k].lambda > 0.0)) throw PreconditionError("ClassicalDirichletSeries: lambda_k must be > 0");
    if (k > 0 && !(terms[k].lambda > terms[k - 1].lambda)) {
      throw PreconditionError("ClassicalDirichletSeries: lambda_k must increase strictly");
    }
    if (!std::isfinite(terms[k].c)) throw DomainError("ClassicalDirichletSeries: non-finite coefficient");
  }
}

ExponentialDirichletSeries to_exponential(const ClassicalDirichletSeries& L) {
  L.validate();
  ExponentialDirichletSeries out;
  out.truncated = L.truncated;
  out.abscissa = L.abscissa;
  for (const auto& t : L.terms) out.terms.push_back({cplx(t.c, 0.0), std::log(t.lambda)});
  return out;
}

ClassicalDirichletSeries to_classical(const ExponentialDirichletSeries& L) {
  L.validate();
  ClassicalDirichletSeries out;
  out.truncated = L.truncated;
  out.abscissa = L.abscissa;
  for (const auto& t : L.terms) {
    if (t.a.imag() != 0.0) throw DomainError("to_classical: coefficients must be real");
    out.terms.push_back({t.a.real(), std::exp(t.ell)});
  }
  return out;
}

double abscissa_absolute(const ExponentialDirichletSeries& L) { return L.abscissa.value_or(kNegInf); }
double abscissa_absolute(const ClassicalDirichletSeries& L) { return L.abscissa.value_or(kNegInf); }

SeriesValue evaluate_with_tail(const ExponentialDirichletSeries& L, cplx s) {
  require_finite(s, "evaluate");
  check_above(abscissa_absolute(L), s, "evaluate");
  cplx sum = 0.0;
  // smallest terms first
  for (auto it = L.terms.rbegin(); it != L.terms.rend(); ++it) sum += it->a * std::exp(-s * it->ell);
  SeriesValue out{sum, 0.0};
  if (L.truncated && L.terms.size() >= 2) {
    const auto& last = L.terms.back();
    const auto& prev = L.terms[L.terms.size() - 2];
    const double m_last = std::abs(last.a) * std::exp(-s.real() * last.ell);
    const double m_prev = std::abs(prev.a) * std::exp(-s.real() * prev.ell);
    const double q = m_prev > 0.0 ? m_last / m_prev : 0.0;
    out.tail_bound = q < 1.0 ? m_last * q / (1.0 - q) : std::numeric_limits<double>::infinity();
    if (!std::isfinite(out.tail_bound)) {
      throw ConvergenceError("evaluate: truncated terms do not decay geometrically", std::abs(sum),
                             out.tail_bound);
    }
  }
  return out;
}

cplx evaluate(const ExponentialDirichletSeries& L, cplx s) { return evaluate_with_tail(L, s).value; }

cplx evaluate(const ClassicalDirichletSeries& L, cplx s) {
  require_finite(s, "evaluate");
  check_above(abscissa_absolute(L), s, "evaluate");
  cplx sum = 0.0;
  for (auto it = L.terms.rbegin(); it != L.terms.rend(); ++it) {
    sum += it->c * std::exp(-s * std::log(it->lambda));
  }
  return sum;
}

cplx evaluate_derivative(const ExponentialDirichletSeries& L, cplx s) {
  require_finite(s, "evaluate_derivative");
  check_above(abscissa_absolute(L), s, "evaluate_derivative");
  cplx sum = 0.0;
  for (auto it = L.terms.rbegin(); it != L.terms.rend(); ++it) sum -= it->ell * it->a * std::exp(-s * it->ell);
  return sum;
}

double abscissa_from_generator(const SeriesGenerator& gen, long first) {
  constexpr int kMaxPow = 22;
  const long N = 1L << kMaxPow;
  // partial sums of |a_k| at k = first + 2^j - 1
  std::vector<double> partial(kMaxPow + 1), ell(kMaxPow + 1);
  double acc = 0.0, comp = 0.0;
  int j = 0;
  for (long k = 0; k < N; ++k) {
    const double y = std::abs(gen.coefficient(first + k)) - comp;
    const double t = acc + y;
    comp = (t - acc) - y;
    acc = t;
    if (k + 1 == (1L << j)) {
      partial[j] = acc;
      ell[j] = gen.exponent(first + k);
      ++j;
    }
  }
  std::vector<double> x, y;
  for (int i = 12; i <= kMaxPow; ++i) {
    if (partial[i] > 0.0) {
      x.push_back(ell[i]);
      y.push_back(std::log(partial[i]));
    }
  }
  if (x.size() >= 2) {
    const double slope = lsq_slope(x, y);
    if (slope > 1e-3) return slope;
  }
  // convergent: tails against the total at 2^22 terms, sampled well below it
  x.clear();
  y.clear();
  for (int i = 8; i <= 14; ++i) {
    const double tail = acc - partial[i];
    if (tail > 0.0) {
      x.push_back(ell[i]);
      y.push_back(std::log(tail));
    }
  }
  if (x.size() < 2) return kNegInf;
  return lsq_slope(x, y);
}

ExponentialDirichletSeries truncate_generator(const SeriesGenerator& gen, long n_terms, long first) {
  ExponentialDirichletSeries out;
  for (long k = 0; k < n_terms; ++k) out.terms.push_back({gen.coefficient(first + k), gen.exponent(first + k)});
  out.truncated = true;
  out.abscissa = abscissa_from_generator(gen, first);
  out.validate();
  return out;
}

namespace {

void require_d0(const ClassicalDirichletSeries& L) {
  L.validate();
  if (!L.in_d0()) throw PreconditionError("mean_value_integral: series not in D0 (need lambda_0 > 1)");
}

}  // namespace

double mean_value_integral(const ClassicalDirichletSeries& L, double b, double T) {
  require_d0(L);
  check_above(abscissa_absolute(L), cplx(b, 0.0), "mean_value_integral");
  double sum = 0.0;
  for (const auto& t : L.terms) {
    const double lg = std::log(t.lambda);
    sum += t.c * std::exp(-b * lg) * std::sin(T * lg) / lg;
  }
  return sum;
}

double mean_value_bound(const ClassicalDirichletSeries& L, double b) {
  require_d0(L);
  double sum = 0.0;
  for (const auto& t : L.terms) sum += std::abs(t.c) * std::exp(-b * std::log(t.lambda));
  return sum / std::log(L.terms.front().lambda);
}

void ParametrixExpansion::validate() const {
  if (series.empty()) throw PreconditionError("ParametrixExpansion: series list is empty");
  if (kappa < 0 || d < 1) throw PreconditionError("ParametrixExpansion: need kappa >= 0 and d >= 1");
  if (truncation_order < 0) throw PreconditionError("ParametrixExpansion: truncation order must be >= 0");
  for (const auto& L : series) L.validate();
}

namespace {

int used_terms(const ParametrixExpansion& p) {
  return std::min<int>(p.truncation_order + 1, static_cast<int>(p.series.size()));
}

void check_parametrix(const ParametrixExpansion& p, cplx s) {
  p.validate();
  require_finite(s, "parametrix_eval");
  check_above(p.delta_g, s, "parametrix_eval");
  if (s == 0.0) throw DomainError("parametrix_eval: s = 0");
}

}  // namespace

cplx parametrix_eval(const ParametrixExpansion& p, cplx s) {
  check_parametrix(p, s);
  const double half = 0.5 * p.kappa * p.d;
  cplx sum = 0.0;
  const cplx inv = 1.0 / s;
  cplx pw = 1.0;
  for (int j = 0; j < used_terms(p); ++j) {
    sum += evaluate(p.series[j], s) * pw;
    pw *= inv;
  }
  return std::exp(-half * std::log(s)) * sum;
}

cplx parametrix_log_derivative(const ParametrixExpansion& p, cplx s) {
  check_parametrix(p, s);
  const double half = 0.5 * p.kappa * p.d;
  const cplx inv = 1.0 / s;
  cplx sum = 0.0, dsum = 0.0, pw = 1.0;
  for (int j = 0; j < used_terms(p); ++j) {
    const cplx L = evaluate(p.series[j], s);
    const cplx dL = evaluate_derivative(p.series[j], s);
    sum += L * pw;
    dsum += dL * pw - static_cast<double>(j) * L * pw * inv;
    pw *= inv;
  }
  return -half * inv + dsum / sum;
}

std::optional<LeadingTerm> leading_term(const ExponentialDirichletSeries& L0) {
  for (const auto& t : L0.terms) {
    if (t.a != 0.0) return LeadingTerm{t.a, t.ell};
  }
  return std::nullopt;
}

ProfileTable p1_p2_profile(const ParametrixExpansion& p, double b, const std::vector<double>& t_grid) {
  p.validate();
  const auto lead = leading_term(p.series.front());
  if (!lead) throw PreconditionError("p1_p2_profile: L0 vanishes identically");
  const double half = 0.5 * p.kappa * p.d;
  ProfileTable out;
  for (double t : t_grid) {
    const cplx s(b, t);
    // R(s) = sum over later terms of (a_k/a*) e^{-s(l_k - l*)}
    cplx R = 0.0, dR = 0.0;
    bool past = false;
    for (const auto& term : p.series.front().terms) {
      if (!past) {
        past = term.a != 0.0;
        continue;
      }
      const double gap = term.ell - lead->ell_star;
      const cplx v = term.a / lead->a_star * std::exp(-s * gap);
      R += v;
      dR -= gap * v;
    }
    ProfileRow row;
    row.t = t;
    row.re_log_deriv = std::real(parametrix_log_derivative(p, s));
    row.re_log_deriv_predicted = -lead->ell_star + std::real(dR / (1.0 + R));
    row.log_abs = std::log(std::abs(parametrix_eval(p, s)));
    row.log_abs_predicted = -half * std::log(std::abs(s)) - b * lead->ell_star +
                            std::log(std::abs(lead->a_star)) + std::real(std::log(1.0 + R));
    const double ms = std::abs(s);
    out.sup_scaled_residual_p1 =
        std::max(out.sup_scaled_residual_p1, std::abs(row.re_log_deriv - row.re_log_deriv_predicted) * ms);
    out.sup_scaled_residual_p2 =
        std::max(out.sup_scaled_residual_p2, std::abs(row.log_abs - row.log_abs_predicted) * ms);
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace cusp
