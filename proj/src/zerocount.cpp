#include "cusp/zerocount.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "cusp/errors.hpp"

namespace cusp {

cplx AnalyticFunction::deriv(cplx z) const {
  if (derivative) return derivative(z);
  const double h = 1e-6 * std::max(1.0, std::abs(z));
  return (value(z + h) - value(z - h)) / (2.0 * h);
}

int ZeroList::total_multiplicity() const {
  int n = 0;
  for (const auto& e : entries) n += e.multiplicity;
  return n;
}

void CountingBox::validate() const {
  if (!(b > d_half)) throw PreconditionError("CountingBox: need b > d/2");
  if (!(T > 0.0)) throw PreconditionError("CountingBox: need T > 0");
  if (!(c > 0.0)) throw PreconditionError("CountingBox: need c > 0");
}

namespace {

constexpr double kNear = 1e-8;
constexpr double kNudge = 1e-6;
constexpr int kSamples = 400;

// Newton from z; returns the root if the iteration settles within leash of the start.
std::optional<cplx> newton(const AnalyticFunction& F, cplx z, int max_iter, double mult = 1.0,
                           double leash = std::numeric_limits<double>::infinity()) {
  const cplx z0 = z;
  for (int i = 0; i < max_iter; ++i) {
    cplx f, df;
    try {
      f = F(z);
      if (f == 0.0) return z;
      df = F.deriv(z);
    } catch (const Error&) {
      return std::nullopt;  // wandered onto a pole or out of the function's domain
    }
    if (df == 0.0 || !std::isfinite(std::abs(df))) return std::nullopt;
    const cplx step = mult * f / df;
    z -= step;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return std::nullopt;
    if (std::abs(z - z0) > leash) return std::nullopt;
    if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(z))) return z;
  }
  return std::nullopt;
}

double dist_segment(cplx z, cplx p0, cplx p1) {
  const cplx d = p1 - p0;
  double t = std::real((z - p0) * std::conj(d)) / std::norm(d);
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(z - (p0 + t * d));
}

// Distance from z to the right half circle |w - b| = T, Re w >= b.
double dist_arc(cplx z, double b, double T) {
  const cplx w = z - b;
  if (w.real() >= 0.0) return std::abs(std::abs(w) - T);
  return std::min(std::abs(w - cplx(0, T)), std::abs(w - cplx(0, -T)));
}

struct Piece {
  cplx p0, p1;  // for a segment
  bool arc = false;
  double b = 0.0, T = 0.0;
  cplx at(double s) const {
    if (!arc) return p0 + s * (p1 - p0);
    const double th = -0.5 * kPi + s * kPi;
    return b + T * std::exp(cplx(0.0, th));
  }
  double dist(cplx z) const { return arc ? dist_arc(z, b, T) : dist_segment(z, p0, p1); }
  double length() const { return arc ? kPi * T : std::abs(p1 - p0); }
};

// Scan the piece for a zero of F within kNear; returns the offending point.
std::optional<cplx> near_zero(const AnalyticFunction& F, const Piece& p) {
  const double spacing = p.length() / kSamples;
  for (int i = 0; i <= kSamples; ++i) {
    const cplx z = p.at(static_cast<double>(i) / kSamples);
    const cplx f = F(z);
    if (std::abs(f) <= 1e-12) return z;
    const cplx df = F.deriv(z);
    if (std::abs(df) == 0.0) continue;
    if (std::abs(f / df) > 3.0 * spacing) continue;
    if (auto root = newton(F, z, 40)) {
      if (p.dist(*root) < kNear) return *root;
    }
  }
  return std::nullopt;
}

struct Accum {
  double value = 0.0;
  double error = 0.0;
  template <class R>
  void add(const R& r, const char* ctx) {
    value += value_or_throw(r, ctx);
    error += r.error;
  }
};

double log_abs(const AnalyticFunction& F, cplx z) { return std::log(std::abs(F(z))); }

// Harmonic weight u with its partial derivatives.
struct Weight {
  std::function<double(double, double)> u, ux, uy;
};

// Boundary terms of 2 pi sum u(z) = closed integral (u d_nu log|F| - log|F| d_nu u)
// over the right, top and bottom edges of [x0, x1] x [y0, y1]. The left edge lies on
// the axis where log|F| = 0 and u = 0.
LemmaValue green_rectangle(const AnalyticFunction& F, double x0, double x1, double y0, double y1,
                           const Weight& w, const QuadratureSpec& spec, bool warn) {
  Accum acc;
  const double panel = 0.25;
  auto right = [&](double y) {
    const cplx z(x1, y);
    return w.u(x1, y) * std::real(F.log_derivative(z)) - log_abs(F, z) * w.ux(x1, y);
  };
  acc.add(integrate_panels(right, uniform_panels(y0, y1, panel), spec), "rectangle right edge");
  auto top = [&](double x) {
    const cplx z(x, y1);
    return -w.u(x, y1) * std::imag(F.log_derivative(z)) - log_abs(F, z) * w.uy(x, y1);
  };
  acc.add(integrate_panels(top, uniform_panels(x0, x1, panel), spec), "rectangle top edge");
  auto bottom = [&](double x) {
    const cplx z(x, y0);
    return w.u(x, y0) * std::imag(F.log_derivative(z)) + log_abs(F, z) * w.uy(x, y0);
  };
  acc.add(integrate_panels(bottom, uniform_panels(x0, x1, panel), spec), "rectangle bottom edge");
  return {acc.value / (2.0 * kPi), acc.error / (2.0 * kPi), warn};
}

void check_axis_symmetry(const AnalyticFunction& F, const CountingBox& box, double y0, double y1) {
  for (int i = 0; i <= 200; ++i) {
    const double y = y0 + (y1 - y0) * i / 200.0;
    const double m = std::abs(F(cplx(box.d_half, y)));
    if (!(std::abs(m - 1.0) <= 1e-8)) {
      throw PreconditionError("rectangle lemma: |F| != 1 on the axis at y = " + std::to_string(y));
    }
  }
  for (int i = 0; i <= 200; ++i) {
    const double x = box.d_half + (box.b - box.d_half) * i / 200.0;
    const cplx f = F(cplx(x, 0.0));
    if (!(std::abs(f.imag()) <= 1e-8 * std::max(1.0, std::abs(f)))) {
      throw PreconditionError("rectangle lemma: F not real on the real axis at x = " + std::to_string(x));
    }
  }
}

// Nudge each listed edge outward until no zero sits within kNear of it.
// Edges: 0 right (x1), 1 top (y1), 2 bottom (y0). Edge 2 is left in place when
// pinned (the real axis), where conjugate symmetry gives the half weight.
bool settle_rectangle(const AnalyticFunction& F, double x0, double& x1, double& y0, double& y1,
                      bool bottom_pinned) {
  bool warned = false;
  for (int edge = 0; edge < 3; ++edge) {
    for (int attempt = 0; attempt < 2; ++attempt) {
      Piece p;
      if (edge == 0) p = {cplx(x1, y0), cplx(x1, y1)};
      if (edge == 1) p = {cplx(x0, y1), cplx(x1, y1)};
      if (edge == 2) p = {cplx(x0, y0), cplx(x1, y0)};
      auto hit = near_zero(F, p);
      if (!hit) break;
      warned = true;
      if (edge == 2 && bottom_pinned) break;
      if (attempt == 1) throw ContourProximityError("rectangle lemma: zero on the contour", *hit);
      if (edge == 0) x1 += kNudge;
      if (edge == 1) y1 += kNudge;
      if (edge == 2) y0 -= kNudge;
    }
  }
  return warned;
}

}  // namespace

LemmaValue carleman_weighted_count(const AnalyticFunction& F, double b, double T,
                                   const QuadratureSpec& spec) {
  if (!(T > 0.0)) throw PreconditionError("carleman_weighted_count: need T > 0");
  bool warned = false;
  for (int attempt = 0;; ++attempt) {
    Piece arc;
    arc.arc = true;
    arc.b = b;
    arc.T = T;
    Piece seg{cplx(b, -T), cplx(b, T)};
    auto h_arc = near_zero(F, arc);
    auto h_seg = near_zero(F, seg);
    if (!h_arc && !h_seg) break;
    warned = true;
    if (attempt == 2) throw ContourProximityError("carleman_weighted_count: zero on the contour",
                                                  h_arc ? *h_arc : *h_seg);
    if (h_arc) T += kNudge;
    if (h_seg) b -= kNudge;
  }
  const double fb = std::abs(F(cplx(b, 0.0)));
  if (!(fb > 1e-12)) throw ContourProximityError("carleman_weighted_count: F(b) = 0", cplx(b, 0.0));

  Accum acc;
  auto arc_f = [&](double th) { return log_abs(F, b + T * std::exp(cplx(0.0, th))); };
  {
    auto pts = uniform_panels(-0.5 * kPi, 0.5 * kPi, 0.05);
    acc.add(integrate_panels(arc_f, pts, spec), "carleman arc");
  }
  const double point = -kPi * std::log(fb);
  // log(T/|t|) Re F'/F(b + it), log singular at t = 0
  auto seg_f = [&](double t) {
    return std::log(T / std::abs(t)) * std::real(F.log_derivative(cplx(b, t)));
  };
  const double h0 = std::min(T, 0.5);
  Endpoints left_log;
  left_log.left.log = true;
  Endpoints right_log;
  right_log.right.log = true;
  double seg = 0.0, seg_err = 0.0;
  {
    auto r1 = integrate(seg_f, 0.0, h0, spec, left_log);
    auto r2 = integrate(seg_f, -h0, 0.0, spec, right_log);
    seg += value_or_throw(r1, "carleman segment") + value_or_throw(r2, "carleman segment");
    seg_err += r1.error + r2.error;
    if (T > h0) {
      auto r3 = integrate_panels(seg_f, uniform_panels(h0, T, 0.25), spec);
      auto r4 = integrate_panels(seg_f, uniform_panels(-T, -h0, 0.25), spec);
      seg += value_or_throw(r3, "carleman segment") + value_or_throw(r4, "carleman segment");
      seg_err += r3.error + r4.error;
    }
  }
  const double total = acc.value + point - seg;
  return {total / (2.0 * kPi), (acc.error + seg_err) / (2.0 * kPi), warned};
}

LemmaValue big_rectangle_weighted_sum(const AnalyticFunction& F, const CountingBox& box,
                                      const QuadratureSpec& spec) {
  box.validate();
  check_axis_symmetry(F, box, 0.0, box.T);
  double x1 = box.b, y0 = 0.0, y1 = box.T;
  const bool warned = settle_rectangle(F, box.d_half, x1, y0, y1, true);
  const double T = box.T, dh = box.d_half;
  Weight w{[=](double x, double y) { return (T - y) * (x - dh); },
           [=](double, double y) { return T - y; },
           [=](double x, double) { return -(x - dh); }};
  return green_rectangle(F, dh, x1, y0, y1, w, spec, warned);
}

LemmaValue small_rectangle_weighted_sum(const AnalyticFunction& F, const CountingBox& box,
                                        double T_center, const QuadratureSpec& spec) {
  box.validate();
  const double c = box.c, dh = box.d_half;
  double y0 = T_center - kPi / c, y1 = T_center + kPi / c;
  check_axis_symmetry(F, box, y0, y1);
  double x1 = box.b;
  const bool warned = settle_rectangle(F, dh, x1, y0, y1, false);
  Weight w{[=](double x, double y) { return std::cos(c * (y - T_center)) * std::sinh(c * (x - dh)); },
           [=](double x, double y) { return c * std::cos(c * (y - T_center)) * std::cosh(c * (x - dh)); },
           [=](double x, double y) { return -c * std::sin(c * (y - T_center)) * std::sinh(c * (x - dh)); }};
  return green_rectangle(F, dh, x1, y0, y1, w, spec, warned);
}

namespace {

double entry_weight(const ZeroEntry& e, bool on_edge) {
  return e.multiplicity * ((e.on_boundary || on_edge) ? 0.5 : 1.0);
}

bool within(double v, double lo, double hi) { return v >= lo - kNear && v <= hi + kNear; }

bool on_edge_of(double v, double lo, double hi) {
  return std::abs(v - lo) <= kNear || std::abs(v - hi) <= kNear;
}

}  // namespace

double carleman_direct(const ZeroList& zeros, double b, double T) {
  double s = 0.0;
  for (const auto& e : zeros.entries) {
    const double r = std::abs(e.location - b);
    if (e.location.real() < b - kNear || r > T + kNear) continue;
    const bool edge = std::abs(e.location.real() - b) <= kNear || std::abs(r - T) <= kNear;
    s += entry_weight(e, edge) * std::log(T / r);
  }
  return s;
}

double big_rectangle_direct(const ZeroList& zeros, const CountingBox& box) {
  double s = 0.0;
  for (const auto& e : zeros.entries) {
    const double beta = e.location.real(), gamma = e.location.imag();
    if (!within(beta, box.d_half, box.b) || !within(gamma, 0.0, box.T)) continue;
    const bool edge = on_edge_of(beta, box.d_half, box.b) || on_edge_of(gamma, 0.0, box.T);
    s += entry_weight(e, edge) * (box.T - gamma) * (beta - box.d_half);
  }
  return s;
}

double small_rectangle_direct(const ZeroList& zeros, const CountingBox& box, double T_center) {
  const double lo = T_center - kPi / box.c, hi = T_center + kPi / box.c;
  double s = 0.0;
  for (const auto& e : zeros.entries) {
    const double beta = e.location.real(), gamma = e.location.imag();
    if (!within(beta, box.d_half, box.b) || !within(gamma, lo, hi)) continue;
    const bool edge = on_edge_of(beta, box.d_half, box.b) || on_edge_of(gamma, lo, hi);
    s += entry_weight(e, edge) * std::cos(box.c * (gamma - T_center)) *
         std::sinh(box.c * (beta - box.d_half));
  }
  return s;
}

double winding_number(const AnalyticFunction& F, const Rect& r, const QuadratureSpec& spec) {
  const cplx corners[5] = {{r.x0, r.y0}, {r.x1, r.y0}, {r.x1, r.y1}, {r.x0, r.y1}, {r.x0, r.y0}};
  cplx total = 0.0;
  for (int k = 0; k < 4; ++k) {
    const cplx p0 = corners[k], d = corners[k + 1] - corners[k];
    auto f = [&](double s) { return F.log_derivative(p0 + s * d) * d; };
    QuadResult<cplx> res;
    try {
      // panels no longer than 0.5 in the plane, at least four per edge
      res = integrate_panels(f, uniform_panels(0.0, 1.0, std::min(0.25, 0.5 / std::abs(d))), spec);
    } catch (const DomainError&) {
      return std::nan("");
    }
    if (!res.converged) return std::nan("");
    total += res.value;
  }
  return std::real(total / cplx(0.0, 2.0 * kPi));
}

namespace {

struct Finder {
  const AnalyticFunction& F;
  const BruteForceOptions& opt;
  double min_cell;
  std::vector<ZeroEntry> found;

  static bool integral(double w, int& n) {
    if (!std::isfinite(w)) return false;
    const double r = std::round(w);
    if (std::abs(w - r) >= 0.1) return false;
    n = static_cast<int>(r);
    return true;
  }

  static bool inside(const Rect& r, cplx z) {
    const double pad = 1e-9 * std::max(1.0, std::abs(z));
    return z.real() >= r.x0 - pad && z.real() <= r.x1 + pad && z.imag() >= r.y0 - pad &&
           z.imag() <= r.y1 + pad;
  }

  std::vector<Rect> split(const Rect& r, double f) const {
    const double w = r.x1 - r.x0, h = r.y1 - r.y0;
    const double xm = r.x0 + f * w, ym = r.y0 + f * h;
    if (w > 2.0 * h) return {{r.x0, xm, r.y0, r.y1}, {xm, r.x1, r.y0, r.y1}};
    if (h > 2.0 * w) return {{r.x0, r.x1, r.y0, ym}, {r.x0, r.x1, ym, r.y1}};
    return {{r.x0, xm, r.y0, ym}, {xm, r.x1, r.y0, ym}, {r.x0, xm, ym, r.y1}, {xm, r.x1, ym, r.y1}};
  }

  static double leash(const Rect& r) { return 2.0 * std::hypot(r.x1 - r.x0, r.y1 - r.y0); }

  void record(const Rect& r, int n) {
    const cplx center(0.5 * (r.x0 + r.x1), 0.5 * (r.y0 + r.y1));
    auto root = newton(F, center, opt.max_newton, static_cast<double>(n), leash(r));
    cplx z = (root && inside(r, *root)) ? *root : center;
    found.push_back({z, n, false});
  }

  void process(const Rect& r, int n, int depth) {
    if (n == 0) return;
    const double size = std::max(r.x1 - r.x0, r.y1 - r.y0);
    if (size <= min_cell || depth >= opt.max_depth) {
      record(r, n);
      return;
    }
    if (n == 1) {
      const cplx center(0.5 * (r.x0 + r.x1), 0.5 * (r.y0 + r.y1));
      auto root = newton(F, center, opt.max_newton, 1.0, leash(r));
      if (root && inside(r, *root)) {
        found.push_back({*root, 1, false});
        return;
      }
    }
    // Off-centre split fractions keep cell edges away from symmetry lines.
    for (double f : {0.5 + 0.0123, 0.5 - 0.0311}) {
      auto kids = split(r, f);
      std::vector<int> counts(kids.size());
      int sum = 0;
      bool ok = true;
      for (std::size_t i = 0; i < kids.size() && ok; ++i) {
        ok = integral(winding_number(F, kids[i], opt.spec), counts[i]) && counts[i] >= 0;
        sum += counts[i];
      }
      if (!ok || sum != n) continue;
      for (std::size_t i = 0; i < kids.size(); ++i) process(kids[i], counts[i], depth + 1);
      return;
    }
    throw ContourProximityError("brute_force_zeros: winding integral not integral near a cell",
                                cplx(0.5 * (r.x0 + r.x1), 0.5 * (r.y0 + r.y1)));
  }
};

}  // namespace

ZeroList brute_force_zeros(const AnalyticFunction& F, const Rect& rect, double min_cell,
                           const BruteForceOptions& opt) {
  if (!(rect.x1 > rect.x0 && rect.y1 > rect.y0)) throw PreconditionError("brute_force_zeros: empty rectangle");
  if (!(min_cell > 0.0)) throw PreconditionError("brute_force_zeros: min_cell must be > 0");
  Rect outer = rect;
  int n = 0;
  if (!Finder::integral(winding_number(F, outer, opt.spec), n)) {
    const double gx = 0.05 * (rect.x1 - rect.x0), gy = 0.05 * (rect.y1 - rect.y0);
    outer = {rect.x0 - gx, rect.x1 + gx, rect.y0 - gy, rect.y1 + gy};
    if (!Finder::integral(winding_number(F, outer, opt.spec), n)) {
      throw ContourProximityError("brute_force_zeros: outer winding not integral",
                                  cplx(rect.x0, rect.y0));
    }
  }
  if (n < 0) throw PreconditionError("brute_force_zeros: negative winding (poles inside rectangle)");
  Finder finder{F, opt, min_cell, {}};
  finder.process(outer, n, 0);
  ZeroList out;
  out.entries = std::move(finder.found);
  for (auto& e : out.entries) {
    const cplx z = e.location;
    e.on_boundary = std::abs(z.real() - outer.x0) < kNear || std::abs(z.real() - outer.x1) < kNear ||
                    std::abs(z.imag() - outer.y0) < kNear || std::abs(z.imag() - outer.y1) < kNear;
  }
  std::sort(out.entries.begin(), out.entries.end(), [](const ZeroEntry& a, const ZeroEntry& b) {
    if (a.location.imag() != b.location.imag()) return a.location.imag() < b.location.imag();
    return a.location.real() < b.location.real();
  });
  return out;
}

AnalyticFunction blaschke_product(const std::vector<cplx>& zeros, double d, bool conjugate_pairs) {
  std::vector<cplx> all;
  for (const cplx& r : zeros) {
    all.push_back(r);
    if (conjugate_pairs && r.imag() != 0.0) all.push_back(std::conj(r));
  }
  AnalyticFunction F;
  F.name = "blaschke";
  F.value = [all, d](cplx z) {
    cplx p = 1.0;
    for (const cplx& r : all) p *= (z - r) / (z - d + std::conj(r));
    return p;
  };
  F.derivative = [all, d, val = F.value](cplx z) {
    cplx s = 0.0;
    for (const cplx& r : all) s += 1.0 / (z - r) - 1.0 / (z - d + std::conj(r));
    return val(z) * s;
  };
  return F;
}

}  // namespace cusp
