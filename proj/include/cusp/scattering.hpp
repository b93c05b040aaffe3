#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cusp/mollifier.hpp"
#include "cusp/special.hpp"
#include "cusp/zerocount.hpp"

namespace cusp {

struct Resonance {
  cplx rho;
  int multiplicity = 1;
};

struct ResonanceSet {
  int d = 1;
  int kappa = 1;
  std::vector<Resonance> entries;

  // Re rho <= d/2, or rho real in [d/2, d]; multiplicities >= 1.
  void validate() const;
  // sum mult (d - 2 Re rho) / |rho - d/2|^2 over the stored entries
  double convergence_partial_sum() const;
};

// Q(s) = sum_j q_j (s - d/2)^j. Real on the axis and Q(s) + Q(d - s) constant
// mean q_j is real for even j, imaginary for odd j, and zero for even j >= 2.
struct PhiModel {
  ResonanceSet resonances;
  cplx phi_at_half = 1.0;
  std::vector<cplx> q_coeffs;

  void validate() const;
};

cplx phi_eval(const PhiModel& m, cplx s);
cplx phi_log_derivative(const PhiModel& m, cplx s);
AnalyticFunction phi_function(const PhiModel& m);

struct PhaseDerivative {
  double value;           // 2 pi S'(T)
  double polynomial;      // i Q'(d/2 + iT)
  double resonance_sum;   // entries with Re rho <= d/2, each term <= 0
  double real_pole_sum;   // entries on (d/2, d]
};

PhaseDerivative phase_derivative_parts(const PhiModel& m, double T);
double phase_derivative(const PhiModel& m, double T);
// S(T) with S(0) = 0, integrated in closed form.
double scattering_phase(const PhiModel& m, double T);
// (1/2 pi) int_0^T i Q'(d/2 + it) dt
double phase_polynomial_part(const PhiModel& m, double T);

struct SpectralEntry {
  cplx r;  // real r >= 0, or i y with 0 < y <= d/2 for small eigenvalues
  int multiplicity = 1;
};

struct SpectrumData {
  std::vector<SpectralEntry> entries;
  void validate(int d) const;
};

int count_point_spectrum(const SpectrumData& spec, double T);
// N_pp(T) - S(T)
double tilde_N(const SpectrumData& spec, const PhiModel& m, double T);

// Convolution with the non-negative kernel rho_hat = |sigma_hat|^2, sigma(x) = rho(2x),
// normalised to unit mass.
class Smoother {
 public:
  Smoother(double A, const Mollifier& mollifier = Mollifier());
  double kernel(double u) const;  // unit mass
  double operator()(const std::function<double(double)>& f, double T) const;
  double width() const { return A_; }

 private:
  double A_;
  double cutoff_;
  std::vector<double> grid_, values_;
};

struct StripSum {
  double value;           // pi sum (beta - d/2) over zeros beta = d - Re rho in [d/2, b], 0 <= gamma <= T
  double theorem_sum;     // sum (d - 2 Re rho) over the same resonances
  std::optional<double> predicted;  // (kappa/2pi) T log T - (T/pi)(kappa/2 + log|a*| - (d/2) l*)
  int count;
};

struct LeadingData {
  double abs_a_star;
  double ell_star;
};

StripSum strip_weighted_sum(const ResonanceSet& r, double b, double T,
                            const std::optional<LeadingData>& lead = std::nullopt);

struct OutOfStripCount {
  int count;
  double reference;  // (eps T)^alpha
};

OutOfStripCount out_of_strip_count(const ResonanceSet& r, double b, double T, double eps, double alpha);

// Resonances with d - b <= Re rho <= d/2 and |Im rho - T| <= half_height.
int box_count(const ResonanceSet& r, double b, double T, double half_height);

// int_{d/2}^b Im[1/(s - d + conj rho) - 1/(s - rho)] at s = sigma + iT, |value| <= pi.
double resonance_kernel_integral(cplx rho, int d, double b, double T);

// int_{-T}^{T} (d - 2 Re rho)/|rho - d/2 + it|^2 dt in closed form.
double lorentzian_strip_integral(cplx rho, int d, double T);

struct GeneralWeylCount {
  int eigen_count;          // |r_i| <= T
  int disc_count;           // resonances with |rho - d/2| <= T, with multiplicity
  double lhs;               // eigen_count + (1/2pi) sum lorentzian
  double remainder;         // R(T) = (1/pi) sum arctan(...)
  double remainder_far;     // terms with ||rho - d/2| - T| > 1
  double remainder_near;
  double convergence_sum;
};

GeneralWeylCount general_weyl_count(const ResonanceSet& r, const SpectrumData& spec, double T);

struct WeylFitResult {
  double a_lead;
  double b_log;
  double c_lin;
  double residual_norm;
};

// Least squares on a T^{d+1} + b T log T + c T, weighted by 1/sigma when given and
// by log T / T^d otherwise.
WeylFitResult weyl_fit(const std::vector<std::pair<double, double>>& samples, int d,
                       const std::vector<double>& sigmas = {});

struct MaassSelbergCheck {
  double bound;
  bool passes;
};

MaassSelbergCheck maass_selberg_bound(double phi_abs, double sigma, double t, double y, int d, int kappa);

// 2 kappa log y - Re phi'/phi(d/2 + it) + Re[(y^{2it} conj(phi) - y^{-2it} phi)/(2it)]
double maass_selberg_axis_rhs(const AnalyticFunction& phi, int d, double y, double t, int kappa = 1);

// sum_lambda psi_hat(r_lambda) - (1/2) int S' psi_hat + (1/4) psi_hat(0) tr phi(d/2)
double trace_formula_lhs(const SpectrumData& spec, const PhiModel& m, const TestFunctionPsi& psi,
                         double tr_phi_half);

// sqrt(pi) Gamma(s - 1/2) zeta(2s - 1) / (Gamma(s) zeta(2s))
cplx modular_phi(cplx s);
AnalyticFunction modular_phi_function();

}  // namespace cusp
