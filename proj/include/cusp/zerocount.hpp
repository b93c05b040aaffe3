#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "cusp/quadrature.hpp"
#include "cusp/special.hpp"

namespace cusp {

struct AnalyticFunction {
  std::function<cplx(cplx)> value;
  std::function<cplx(cplx)> derivative;  // optional
  std::string name;

  cplx operator()(cplx z) const { return value(z); }
  // Analytic derivative when supplied, else central difference with h = 1e-6 max(1,|z|).
  cplx deriv(cplx z) const;
  cplx log_derivative(cplx z) const { return deriv(z) / value(z); }
};

struct ZeroEntry {
  cplx location;
  int multiplicity = 1;
  bool on_boundary = false;
};

struct ZeroList {
  std::vector<ZeroEntry> entries;
  int total_multiplicity() const;
};

struct CountingBox {
  double b;
  double d_half;
  double T;
  double c = 1.0;
  void validate() const;
};

struct Rect {
  double x0, x1, y0, y1;
};

// Quadrature evaluation of a counting identity.
struct LemmaValue {
  double value = 0.0;
  double error = 0.0;
  bool proximity_warning = false;  // a contour was nudged by 1e-6 around a nearby zero
};

// (1/2pi)[ int log|F(b+Te^{it})| dt - pi log|F(b)| - int log(T/|t|) Re F'/F(b+it) dt ]
LemmaValue carleman_weighted_count(const AnalyticFunction& F, double b, double T,
                                   const QuadratureSpec& spec = {});
// Green identity on [d/2, b] x [0, T] with weight (T - y)(x - d/2), divided by 2 pi.
LemmaValue big_rectangle_weighted_sum(const AnalyticFunction& F, const CountingBox& box,
                                      const QuadratureSpec& spec = {});
// Green identity on [d/2, b] x [Tc - pi/c, Tc + pi/c] with weight cos(c(y - Tc)) sinh(c(x - d/2)).
LemmaValue small_rectangle_weighted_sum(const AnalyticFunction& F, const CountingBox& box,
                                        double T_center, const QuadratureSpec& spec = {});

// Direct weighted sums over an explicit zero list; boundary entries weigh 1/2.
double carleman_direct(const ZeroList& zeros, double b, double T);
double big_rectangle_direct(const ZeroList& zeros, const CountingBox& box);
double small_rectangle_direct(const ZeroList& zeros, const CountingBox& box, double T_center);

struct BruteForceOptions {
  QuadratureSpec spec{1e-9, 1e-9, 600};
  int max_newton = 60;
  int max_depth = 60;
};

// Winding number (1/2 pi i) of F'/F around the rectangle, unrounded.
double winding_number(const AnalyticFunction& F, const Rect& r, const QuadratureSpec& spec = {1e-9, 1e-9, 600});

ZeroList brute_force_zeros(const AnalyticFunction& F, const Rect& rect, double min_cell,
                           const BruteForceOptions& opt = {});

// prod (z - rho)/(z - d + conj(rho)), each rho paired with conj(rho) when
// conjugate_pairs is set so that F is real on the real axis.
AnalyticFunction blaschke_product(const std::vector<cplx>& zeros, double d, bool conjugate_pairs = true);

}  // namespace cusp
