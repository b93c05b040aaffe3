#pragma once

#include <functional>
#include <limits>
#include <string>

#include "cusp/quadrature.hpp"

namespace cusp {

// M_alpha(s) = s_+^alpha / Gamma(alpha + 1); with reduction_order m the
// object is M_{alpha - m}, reached by m integrations by parts.
struct MAlphaIndex {
  double alpha;
  int reduction_order = 0;
  double effective() const { return alpha - reduction_order; }
};

// A real test function on [0, support_right) with derivatives up to max_order.
struct SmoothTestFunction {
  std::function<double(double s, int order)> eval;
  double support_right = std::numeric_limits<double>::infinity();
  int max_order = 0;
  std::string name;
};

double m_alpha_eval(const MAlphaIndex& idx, double s);

// <M_{alpha-m}, g> = (-1)^m integral_0^inf M_alpha(s) g^{(m)}(s) ds
double m_alpha_pair(const MAlphaIndex& idx, const SmoothTestFunction& g,
                    const QuadratureSpec& spec = {});

}  // namespace cusp
