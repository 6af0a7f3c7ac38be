#pragma once

#include <cmath>
#include <type_traits>

namespace bochner {

/// Forward-mode dual number carrying one directional derivative. Nesting
/// Dual<Dual<double>> gives exact second derivatives, and so on.
template <class T>
struct Dual {
  T v{};
  T d{};

  constexpr Dual() = default;
  constexpr Dual(double value) : v(value), d(0.0) {}  // NOLINT(google-explicit-constructor)
  constexpr Dual(T value, T deriv) : v(std::move(value)), d(std::move(deriv)) {}

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
  Dual& operator/=(const Dual& o) { *this = *this / o; return *this; }
  Dual& operator*=(double s) { v *= s; d *= s; return *this; }
};

template <class T> struct is_dual : std::false_type {};
template <class T> struct is_dual<Dual<T>> : std::true_type {};

/// Nesting depth: 0 for double, 1 for Dual<double>, ...
template <class T> struct dual_depth : std::integral_constant<int, 0> {};
template <class T> struct dual_depth<Dual<T>> : std::integral_constant<int, 1 + dual_depth<T>::value> {};

inline double value_of(double x) { return x; }
template <class T> double value_of(const Dual<T>& x) { return value_of(x.v); }

template <class T> Dual<T> operator+(const Dual<T>& a) { return a; }
template <class T> Dual<T> operator-(const Dual<T>& a) { return {-a.v, -a.d}; }

template <class T> Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) { return {a.v + b.v, a.d + b.d}; }
template <class T> Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) { return {a.v - b.v, a.d - b.d}; }
template <class T> Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
template <class T> Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  T inv = T(1.0) / b.v;
  T q = a.v * inv;
  return {q, (a.d - q * b.d) * inv};
}

template <class T> Dual<T> operator+(const Dual<T>& a, double b) { return {a.v + b, a.d}; }
template <class T> Dual<T> operator+(double a, const Dual<T>& b) { return {a + b.v, b.d}; }
template <class T> Dual<T> operator-(const Dual<T>& a, double b) { return {a.v - b, a.d}; }
template <class T> Dual<T> operator-(double a, const Dual<T>& b) { return {a - b.v, -b.d}; }
template <class T> Dual<T> operator*(const Dual<T>& a, double b) { return {a.v * b, a.d * b}; }
template <class T> Dual<T> operator*(double a, const Dual<T>& b) { return {a * b.v, a * b.d}; }
template <class T> Dual<T> operator/(const Dual<T>& a, double b) { return {a.v / b, a.d / b}; }
template <class T> Dual<T> operator/(double a, const Dual<T>& b) { return Dual<T>(T(a), T(0.0)) / b; }

using std::cos;
using std::exp;
using std::log;
using std::sin;
using std::sqrt;

template <class T> Dual<T> sin(const Dual<T>& a) { return {sin(a.v), cos(a.v) * a.d}; }
template <class T> Dual<T> cos(const Dual<T>& a) { return {cos(a.v), -sin(a.v) * a.d}; }
template <class T> Dual<T> exp(const Dual<T>& a) { T e = exp(a.v); return {e, e * a.d}; }
template <class T> Dual<T> log(const Dual<T>& a) { return {log(a.v), a.d / a.v}; }
template <class T> Dual<T> sqrt(const Dual<T>& a) {
  T s = sqrt(a.v);
  return {s, a.d / (2.0 * s)};
}

/// Integer power by repeated multiplication (exact derivative propagation).
template <class T>
T ipow(const T& x, int p) {
  T r(1.0);
  for (int i = 0; i < p; ++i) r = r * x;
  return r;
}

}  // namespace bochner
