#pragma once

// Truncated Taylor series c_0 + c_1 h + ... + c_n h^n (c_k = f^{(k)}/k!).

#include <cmath>
#include <vector>

namespace cusp {

class Jet {
 public:
  Jet() = default;
  Jet(double c0, int order) : c_(order + 1, 0.0) { c_[0] = c0; }

  static Jet variable(double x0, int order) {
    Jet j(x0, order);
    if (order >= 1) j.c_[1] = 1.0;
    return j;
  }
  static Jet constant(double v, int order) { return Jet(v, order); }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  double operator[](int k) const { return c_[k]; }
  double& operator[](int k) { return c_[k]; }
  // k-th derivative at the expansion point
  double derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return c_[k] * f;
  }
  // Taylor series of f' (order drops by one)
  Jet differentiate() const {
    Jet r(0.0, order() - 1);
    for (int k = 0; k < order(); ++k) r.c_[k] = (k + 1) * c_[k + 1];
    return r;
  }

  Jet& operator+=(const Jet& o) {
    for (int k = 0; k <= order(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int k = 0; k <= order(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) { return a *= -1.0; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, double s) {
    a.c_[0] += s;
    return a;
  }
  friend Jet operator+(double s, Jet a) { return a + s; }
  friend Jet operator-(Jet a, double s) { return a + (-s); }
  friend Jet operator-(double s, const Jet& a) { return (-a) + s; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    const int n = std::min(a.order(), b.order());
    Jet r(0.0, n);
    for (int k = 0; k <= n; ++k) {
      double acc = 0.0;
      for (int j = 0; j <= k; ++j) acc += a.c_[j] * b.c_[k - j];
      r.c_[k] = acc;
    }
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    const int n = std::min(a.order(), b.order());
    Jet q(0.0, n);
    for (int k = 0; k <= n; ++k) {
      double acc = a.c_[k];
      for (int j = 1; j <= k; ++j) acc -= b.c_[j] * q.c_[k - j];
      q.c_[k] = acc / b.c_[0];
    }
    return q;
  }
  friend Jet operator/(double s, const Jet& b) { return Jet(s, b.order()) / b; }
  friend Jet operator/(Jet a, double s) { return a *= (1.0 / s); }

  friend Jet exp(const Jet& a) {
    Jet r(std::exp(a.c_[0]), a.order());
    for (int k = 1; k <= a.order(); ++k) {
      double acc = 0.0;
      for (int j = 1; j <= k; ++j) acc += j * a.c_[j] * r.c_[k - j];
      r.c_[k] = acc / k;
    }
    return r;
  }
  // sin and cos together
  friend void sincos(const Jet& a, Jet& s, Jet& c) {
    s = Jet(std::sin(a.c_[0]), a.order());
    c = Jet(std::cos(a.c_[0]), a.order());
    for (int k = 1; k <= a.order(); ++k) {
      double as = 0.0, ac = 0.0;
      for (int j = 1; j <= k; ++j) {
        as += j * a.c_[j] * c.c_[k - j];
        ac -= j * a.c_[j] * s.c_[k - j];
      }
      s.c_[k] = as / k;
      c.c_[k] = ac / k;
    }
  }
  friend void sinhcosh(const Jet& a, Jet& s, Jet& c) {
    s = Jet(std::sinh(a.c_[0]), a.order());
    c = Jet(std::cosh(a.c_[0]), a.order());
    for (int k = 1; k <= a.order(); ++k) {
      double as = 0.0, ac = 0.0;
      for (int j = 1; j <= k; ++j) {
        as += j * a.c_[j] * c.c_[k - j];
        ac += j * a.c_[j] * s.c_[k - j];
      }
      s.c_[k] = as / k;
      c.c_[k] = ac / k;
    }
  }
  friend Jet sqrt(const Jet& a) {
    Jet r(std::sqrt(a.c_[0]), a.order());
    for (int k = 1; k <= a.order(); ++k) {
      double acc = a.c_[k];
      for (int j = 1; j < k; ++j) acc -= r.c_[j] * r.c_[k - j];
      r.c_[k] = acc / (2.0 * r.c_[0]);
    }
    return r;
  }

 private:
  std::vector<double> c_;
};

}  // namespace cusp
