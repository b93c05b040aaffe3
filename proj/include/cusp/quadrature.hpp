#pragma once

// Adaptive Gauss-Kronrod (10/21) quadrature with a global error heap,
// algebraic/logarithmic endpoint substitution and breakpoint panels.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <string>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include "cusp/errors.hpp"

namespace cusp {

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_subdivisions = 2000;

  void validate() const {
    if (!(rel_tol > 0.0)) throw PreconditionError("QuadratureSpec: rel_tol must be > 0");
    if (!(abs_tol >= 0.0)) throw PreconditionError("QuadratureSpec: abs_tol must be >= 0");
    if (max_subdivisions < 1) throw PreconditionError("QuadratureSpec: max_subdivisions must be >= 1");
  }
};

// Integrable endpoint behaviour |x - c|^power, optionally times log|x - c|.
struct EndpointSingularity {
  double power = 0.0;
  bool log = false;
  bool active() const { return power != 0.0 || log; }
};

struct Endpoints {
  EndpointSingularity left;
  EndpointSingularity right;
};

template <class V>
struct QuadResult {
  V value{};
  double error = 0.0;
  int subdivisions = 0;
  bool converged = true;
};

namespace detail {

inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525452722, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <class V>
double magnitude(const V& v) {
  return std::abs(v);
}

template <class V>
bool finite_value(const V& v) {
  if constexpr (std::is_same_v<V, double>) {
    return std::isfinite(v);
  } else {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  }
}

template <class V>
struct Segment {
  int piece;
  double a, b;
  V value;
  double error;
  double resabs;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class V, class G>
Segment<V> gk21(G& g, int piece, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const V fc = g(piece, c);
  V kron = fc * kWgk[10];
  V gauss{};
  double resabs = magnitude(fc) * kWgk[10];
  for (int j = 0; j < 10; ++j) {
    const double dx = h * kXgk[j];
    const V f1 = g(piece, c - dx);
    const V f2 = g(piece, c + dx);
    kron += (f1 + f2) * kWgk[j];
    resabs += (magnitude(f1) + magnitude(f2)) * kWgk[j];
    if (j % 2 == 1) gauss += (f1 + f2) * kWg[j / 2];
  }
  if (!finite_value(kron)) {
    throw DomainError("integrate: non-finite integrand on [" + std::to_string(a) + ", " +
                      std::to_string(b) + "]");
  }
  return {piece, a, b, kron * h, magnitude((kron - gauss) * h), resabs * std::abs(h)};
}

// Core driver: g(piece, u) over the initial list of (piece, a, b) segments.
template <class V, class G>
QuadResult<V> adaptive(G& g, const std::vector<std::tuple<int, double, double>>& initial,
                       const QuadratureSpec& spec) {
  spec.validate();
  std::priority_queue<Segment<V>> heap;
  V total{};
  double err = 0.0, resabs = 0.0;
  for (const auto& [piece, a, b] : initial) {
    if (a == b) continue;
    auto s = gk21<V>(g, piece, a, b);
    total += s.value;
    err += s.error;
    resabs += s.resabs;
    heap.push(s);
  }
  QuadResult<V> out;
  const double eps = std::numeric_limits<double>::epsilon();
  int subdivisions = static_cast<int>(heap.size());
  auto target = [&]() {
    return std::max({spec.abs_tol, spec.rel_tol * magnitude(total), 50.0 * eps * resabs});
  };
  while (!heap.empty() && err > target()) {
    if (subdivisions >= spec.max_subdivisions) break;
    Segment<V> worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b))) break;
    heap.pop();
    auto left = gk21<V>(g, worst.piece, worst.a, mid);
    auto right = gk21<V>(g, worst.piece, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    resabs += left.resabs + right.resabs - worst.resabs;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }
  // Re-sum to remove drift from the running updates.
  V fresh{};
  double fresh_err = 0.0;
  while (!heap.empty()) {
    fresh += heap.top().value;
    fresh_err += heap.top().error;
    heap.pop();
  }
  out.value = fresh;
  out.error = fresh_err;
  out.subdivisions = subdivisions;
  total = fresh;
  out.converged = fresh_err <= target();
  return out;
}

}  // namespace detail

// Integrate f over [a, b]. Singular endpoints are mapped by x = c +- u^k,
// k = m/(1+p) with m = 3 when a logarithm is declared and m = 1 otherwise.
template <class F>
auto integrate(F&& f, double a, double b, const QuadratureSpec& spec = {},
               const Endpoints& ends = {}) -> QuadResult<std::invoke_result_t<F&, double>> {
  using V = std::invoke_result_t<F&, double>;
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("integrate: endpoints must be finite");
  }
  if (a == b) return {};
  if (a > b) {
    auto r = integrate(f, b, a, spec, Endpoints{ends.right, ends.left});
    r.value = -r.value;
    return r;
  }
  const bool L = ends.left.active();
  const bool R = ends.right.active();
  for (const auto* e : {&ends.left, &ends.right}) {
    if (!(e->power > -1.0)) throw PreconditionError("integrate: endpoint power must exceed -1");
  }
  auto exponent = [](const EndpointSingularity& e) { return (e.log ? 3.0 : 1.0) / (1.0 + e.power); };
  const double kl = exponent(ends.left);
  const double kr = exponent(ends.right);
  const double split = (L && R) ? 0.5 * (a + b) : (L ? b : a);
  // piece 0: plain [split_l, split_r]; piece 1: left map; piece 2: right map
  auto g = [&](int piece, double u) -> V {
    if (piece == 0) return f(u);
    if (piece == 1) {
      double x = a + std::pow(u, kl);
      if (x <= a) x = std::nextafter(a, b);
      return f(x) * (kl * std::pow(u, kl - 1.0));
    }
    double x = b - std::pow(u, kr);
    if (x >= b) x = std::nextafter(b, a);
    return f(x) * (kr * std::pow(u, kr - 1.0));
  };
  std::vector<std::tuple<int, double, double>> init;
  if (L) init.emplace_back(1, 0.0, std::pow(split - a, 1.0 / kl));
  if (R) init.emplace_back(2, 0.0, std::pow(b - split, 1.0 / kr));
  if (!L && !R) init.emplace_back(0, a, b);
  return detail::adaptive<V>(g, init, spec);
}

// Integrate over consecutive panels [p0,p1], [p1,p2], ... sharing one error budget.
template <class F>
auto integrate_panels(F&& f, const std::vector<double>& points, const QuadratureSpec& spec = {})
    -> QuadResult<std::invoke_result_t<F&, double>> {
  using V = std::invoke_result_t<F&, double>;
  auto g = [&](int, double x) -> V { return f(x); };
  std::vector<std::tuple<int, double, double>> init;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) init.emplace_back(0, points[i], points[i + 1]);
  QuadratureSpec s = spec;
  s.max_subdivisions = std::max(spec.max_subdivisions, static_cast<int>(init.size()) * 8);
  return detail::adaptive<V>(g, init, s);
}

// Integrate over [a, inf) by x = a + u/(1-u).
template <class F>
auto integrate_to_infinity(F&& f, double a, const QuadratureSpec& spec = {})
    -> QuadResult<std::invoke_result_t<F&, double>> {
  using V = std::invoke_result_t<F&, double>;
  auto g = [&](int, double u) -> V {
    const double one_minus = 1.0 - u;
    const double x = a + u / one_minus;
    if (!std::isfinite(x)) return V{};
    return f(x) / (one_minus * one_minus);
  };
  std::vector<std::tuple<int, double, double>> init{{0, 0.0, 1.0}};
  return detail::adaptive<V>(g, init, spec);
}

template <class V>
V value_or_throw(const QuadResult<V>& r, const std::string& context) {
  if (!r.converged) {
    double best;
    if constexpr (std::is_same_v<V, double>) {
      best = r.value;
    } else {
      best = std::abs(r.value);
    }
    throw ConvergenceError(context + ": quadrature did not meet tolerance", best, r.error);
  }
  return r.value;
}

// Breakpoints splitting [a, b] into panels no longer than max_len.
inline std::vector<double> uniform_panels(double a, double b, double max_len) {
  const int n = std::max(1, static_cast<int>(std::ceil((b - a) / max_len)));
  std::vector<double> pts(n + 1);
  for (int i = 0; i <= n; ++i) pts[i] = a + (b - a) * static_cast<double>(i) / n;
  pts.back() = b;
  return pts;
}

}  // namespace cusp
