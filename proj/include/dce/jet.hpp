#pragma once

#include <cmath>

namespace dce {

/// Truncated Taylor jet: a value together with its first three derivatives
/// with respect to a single independent variable. Arithmetic propagates the
/// derivatives exactly (Leibniz / Faa di Bruno up to third order).
struct Jet3 {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;

  static constexpr Jet3 constant(double x) { return {x, 0.0, 0.0, 0.0}; }
  static constexpr Jet3 variable(double x) { return {x, 1.0, 0.0, 0.0}; }
};

/// Chain rule: `outer` holds (h, h', h'', h''') evaluated at inner.v.
constexpr Jet3 compose(const Jet3& outer, const Jet3& inner) {
  const double f1 = inner.d1;
  const double f2 = inner.d2;
  const double f3 = inner.d3;
  return {outer.v,
          outer.d1 * f1,
          outer.d2 * f1 * f1 + outer.d1 * f2,
          outer.d3 * f1 * f1 * f1 + 3.0 * outer.d2 * f1 * f2 + outer.d1 * f3};
}

/// Derivatives of the inverse function x = b^{-1}(y) given the jet of b at x
/// (b.v = y, b.d1 = b'(x), ...). The returned jet is with respect to y.
constexpr Jet3 inverse(const Jet3& b, double x) {
  const double p = b.d1;
  const double p3 = p * p * p;
  return {x, 1.0 / p, -b.d2 / p3, (3.0 * b.d2 * b.d2 - p * b.d3) / (p3 * p * p)};
}

constexpr Jet3 operator+(const Jet3& a, const Jet3& b) {
  return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3};
}
constexpr Jet3 operator-(const Jet3& a, const Jet3& b) {
  return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2, a.d3 - b.d3};
}
constexpr Jet3 operator-(const Jet3& a) { return {-a.v, -a.d1, -a.d2, -a.d3}; }
constexpr Jet3 operator+(const Jet3& a, double s) { return {a.v + s, a.d1, a.d2, a.d3}; }
constexpr Jet3 operator+(double s, const Jet3& a) { return a + s; }
constexpr Jet3 operator-(const Jet3& a, double s) { return {a.v - s, a.d1, a.d2, a.d3}; }
constexpr Jet3 operator-(double s, const Jet3& a) { return {s - a.v, -a.d1, -a.d2, -a.d3}; }
constexpr Jet3 operator*(const Jet3& a, double s) { return {a.v * s, a.d1 * s, a.d2 * s, a.d3 * s}; }
constexpr Jet3 operator*(double s, const Jet3& a) { return a * s; }
constexpr Jet3 operator/(const Jet3& a, double s) { return a * (1.0 / s); }

constexpr Jet3 operator*(const Jet3& a, const Jet3& b) {
  return {a.v * b.v,
          a.d1 * b.v + a.v * b.d1,
          a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2,
          a.d3 * b.v + 3.0 * a.d2 * b.d1 + 3.0 * a.d1 * b.d2 + a.v * b.d3};
}

constexpr Jet3 reciprocal(const Jet3& a) {
  const double r = 1.0 / a.v;
  return compose({r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r}, a);
}

constexpr Jet3 operator/(const Jet3& a, const Jet3& b) { return a * reciprocal(b); }

inline Jet3 exp(const Jet3& a) {
  const double e = std::exp(a.v);
  return compose({e, e, e, e}, a);
}

inline Jet3 sin(const Jet3& a) {
  const double s = std::sin(a.v);
  const double c = std::cos(a.v);
  return compose({s, c, -s, -c}, a);
}

inline Jet3 cos(const Jet3& a) {
  const double s = std::sin(a.v);
  const double c = std::cos(a.v);
  return compose({c, -s, -c, s}, a);
}

}  // namespace dce
