#include "cusp/malpha.hpp"

#include <cmath>

#include "cusp/errors.hpp"
#include "cusp/special.hpp"

namespace cusp {

double m_alpha_eval(const MAlphaIndex& idx, double s) {
  if (idx.reduction_order != 0 || !(idx.alpha > -1.0)) {
    throw DomainError("m_alpha_eval: pointwise mode needs effective index > -1; use m_alpha_pair");
  }
  if (!std::isfinite(s)) throw DomainError("m_alpha_eval: non-finite argument");
  if (s <= 0.0) return 0.0;
  if (idx.alpha == 0.0) return 1.0;
  return std::pow(s, idx.alpha) / std::tgamma(idx.alpha + 1.0);
}

double m_alpha_pair(const MAlphaIndex& idx, const SmoothTestFunction& g, const QuadratureSpec& spec) {
  const int m = idx.reduction_order;
  if (m < 0) throw PreconditionError("m_alpha_pair: reduction order must be >= 0");
  if (!(idx.alpha > -1.0)) {
    throw PreconditionError("m_alpha_pair: base index must exceed -1 (raise the reduction order)");
  }
  if (m > g.max_order) {
    throw PreconditionError("m_alpha_pair: test function lacks derivative of order " + std::to_string(m));
  }
  const double gamma1 = std::tgamma(idx.alpha + 1.0);
  // s^alpha / Gamma(alpha+1) written out so the singular endpoint stays integrable
  auto f = [&](double s) { return std::pow(s, idx.alpha) / gamma1 * g.eval(s, m); };
  const bool integer_alpha = idx.alpha == std::floor(idx.alpha);
  Endpoints ends;
  if (!integer_alpha) ends.left.power = idx.alpha;

  double value;
  if (std::isfinite(g.support_right)) {
    value = value_or_throw(integrate(f, 0.0, g.support_right, spec, ends), "m_alpha_pair");
  } else {
    const double head = value_or_throw(integrate(f, 0.0, 1.0, spec, ends), "m_alpha_pair");
    const double tail = value_or_throw(integrate_to_infinity(f, 1.0, spec), "m_alpha_pair");
    value = head + tail;
  }
  return (m % 2 == 0) ? value : -value;
}

}  // namespace cusp
