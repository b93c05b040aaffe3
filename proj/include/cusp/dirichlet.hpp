#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "cusp/special.hpp"

namespace cusp {

// Coefficient and exponent of the k-th term, k = 0, 1, 2, ...
struct SeriesGenerator {
  std::function<cplx(long)> coefficient;
  std::function<double(long)> exponent;
};

// sum_k a_k exp(-s l_k), l_k strictly increasing.
struct ExponentialDirichletSeries {
  struct Term {
    cplx a;
    double ell;
  };
  std::vector<Term> terms;
  // Stored terms are a truncation; the tail is estimated geometrically from the last two.
  bool truncated = false;
  // Abscissa of the full series when the stored terms are a truncation of a known generator.
  std::optional<double> abscissa;

  void validate() const;
};

// sum_k c_k lambda_k^{-s}, lambda_k strictly increasing and positive.
struct ClassicalDirichletSeries {
  struct Term {
    double c;
    double lambda;
  };
  std::vector<Term> terms;
  bool truncated = false;
  std::optional<double> abscissa;

  void validate() const;
  bool in_d0() const { return !terms.empty() && terms.front().lambda > 1.0; }
};

ExponentialDirichletSeries to_exponential(const ClassicalDirichletSeries& L);
ClassicalDirichletSeries to_classical(const ExponentialDirichletSeries& L);

struct SeriesValue {
  cplx value;
  double tail_bound = 0.0;
};

SeriesValue evaluate_with_tail(const ExponentialDirichletSeries& L, cplx s);
cplx evaluate(const ExponentialDirichletSeries& L, cplx s);
cplx evaluate(const ClassicalDirichletSeries& L, cplx s);
// sum -l_k a_k exp(-s l_k)
cplx evaluate_derivative(const ExponentialDirichletSeries& L, cplx s);

// -inf for finite series; the stored abscissa for truncations.
double abscissa_absolute(const ExponentialDirichletSeries& L);
double abscissa_absolute(const ClassicalDirichletSeries& L);
// Cahen-type estimate from a generator: slope of log(partial sums of |a_k|)
// against l_n when they diverge, of log(tail sums) when they converge.
double abscissa_from_generator(const SeriesGenerator& gen, long first = 0);
// First n_terms of the generator, tagged with the generator's abscissa.
ExponentialDirichletSeries truncate_generator(const SeriesGenerator& gen, long n_terms, long first = 0);

// integral_0^T Re L(b + it) dt = sum c_k lambda_k^{-b} sin(T log lambda_k) / log lambda_k
double mean_value_integral(const ClassicalDirichletSeries& L, double b, double T);
// sum |c_k| lambda_k^{-b} / log lambda_0, the T-independent bound.
double mean_value_bound(const ClassicalDirichletSeries& L, double b);

struct ParametrixExpansion {
  int kappa = 1;
  int d = 1;
  std::vector<ExponentialDirichletSeries> series;  // L_0, L_1, ...
  int truncation_order = 0;
  double delta_g = -std::numeric_limits<double>::infinity();

  void validate() const;
};

// s^{-kappa d/2} sum_{j<=N} L_j(s) / s^j
cplx parametrix_eval(const ParametrixExpansion& p, cplx s);
cplx parametrix_log_derivative(const ParametrixExpansion& p, cplx s);

struct LeadingTerm {
  cplx a_star;
  double ell_star;
};
std::optional<LeadingTerm> leading_term(const ExponentialDirichletSeries& L0);

struct ProfileRow {
  double t;
  double re_log_deriv, re_log_deriv_predicted;
  double log_abs, log_abs_predicted;
};

struct ProfileTable {
  std::vector<ProfileRow> rows;
  double sup_scaled_residual_p1 = 0.0;  // sup |observed - predicted| |s|
  double sup_scaled_residual_p2 = 0.0;
};

// Observed Re phi'/phi and log|phi| on Re s = b against
//   -l* + Re L0~          and   -(kappa d/2) log|s| - b l* + log|a*| + Re L1~,
// where L0 = a* e^{-s l*}(1 + R), L1~ = log(1 + R) and L0~ = R'/(1 + R).
ProfileTable p1_p2_profile(const ParametrixExpansion& p, double b, const std::vector<double>& t_grid);

}  // namespace cusp
