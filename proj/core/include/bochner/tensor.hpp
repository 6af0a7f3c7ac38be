#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cassert>
#include <cstddef>
#include <type_traits>
#include <utility>
#include <vector>

#include "bochner/dual.hpp"

namespace bochner {

inline constexpr int kMaxDim = 3;

/// Chart coordinates of a point. `level` counts enclosing differentiations and
/// selects the finite-difference step for nested derivatives.
template <class T>
struct Point {
  std::array<T, kMaxDim> x{};
  int n = 0;
  int level = 0;

  const T& operator[](int i) const { return x[static_cast<std::size_t>(i)]; }
  T& operator[](int i) { return x[static_cast<std::size_t>(i)]; }
};

/// Scalar type of a point expression (for generic lambdas over Point<T>).
template <class P>
using scalar_of = typename std::decay_t<decltype(std::declval<P>().x)>::value_type;

inline Point<double> make_point(std::initializer_list<double> coords) {
  Point<double> p;
  int i = 0;
  for (double c : coords) p.x[static_cast<std::size_t>(i++)] = c;
  p.n = i;
  return p;
}

/// Component array of a tensor in the coordinate basis.
///
/// Storage is row-major over `rank` indices of range `n`. Covariant slots come
/// first, in slot order; when `up` is set the final index is contravariant.
/// A scalar is rank 0 with a single component, a vector field is rank 1 with
/// `up == true`.
template <class T>
class Tensor {
 public:
  Tensor() = default;
  Tensor(int n, int rank, bool up = false)
      : n_(n), rank_(rank), up_(up), c_(static_cast<std::size_t>(ipow_int(n, rank)), T(0.0)) {}

  static Tensor scalar(T v) {
    Tensor t(1, 0, false);
    t.c_[0] = std::move(v);
    return t;
  }

  int n() const { return n_; }
  int rank() const { return rank_; }
  bool up() const { return up_; }
  /// Number of covariant slots.
  int covariant() const { return rank_ - (up_ ? 1 : 0); }
  std::size_t size() const { return c_.size(); }
  const std::vector<T>& data() const { return c_; }

  T& operator[](std::size_t i) { return c_[i]; }
  const T& operator[](std::size_t i) const { return c_[i]; }

  T& operator()() { return c_[0]; }
  const T& operator()() const { return c_[0]; }
  T& operator()(int a) { return c_[static_cast<std::size_t>(a)]; }
  const T& operator()(int a) const { return c_[static_cast<std::size_t>(a)]; }
  T& operator()(int a, int b) { return c_[static_cast<std::size_t>(a * n_ + b)]; }
  const T& operator()(int a, int b) const { return c_[static_cast<std::size_t>(a * n_ + b)]; }
  T& operator()(int a, int b, int c) { return c_[static_cast<std::size_t>((a * n_ + b) * n_ + c)]; }
  const T& operator()(int a, int b, int c) const { return c_[static_cast<std::size_t>((a * n_ + b) * n_ + c)]; }
  T& operator()(int a, int b, int c, int d) {
    return c_[static_cast<std::size_t>(((a * n_ + b) * n_ + c) * n_ + d)];
  }
  const T& operator()(int a, int b, int c, int d) const {
    return c_[static_cast<std::size_t>(((a * n_ + b) * n_ + c) * n_ + d)];
  }

  /// Flat offset of a multi-index.
  std::size_t offset(const int* idx) const {
    std::size_t off = 0;
    for (int s = 0; s < rank_; ++s) off = off * static_cast<std::size_t>(n_) + static_cast<std::size_t>(idx[s]);
    return off;
  }
  T& at(const int* idx) { return c_[offset(idx)]; }
  const T& at(const int* idx) const { return c_[offset(idx)]; }

  /// Inverse of offset(); writes `rank` digits into idx.
  void decode(std::size_t off, int* idx) const {
    for (int s = rank_ - 1; s >= 0; --s) {
      idx[s] = static_cast<int>(off % static_cast<std::size_t>(n_));
      off /= static_cast<std::size_t>(n_);
    }
  }

  Tensor& operator+=(const Tensor& o) {
    assert(o.size() == size());
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Tensor& operator-=(const Tensor& o) {
    assert(o.size() == size());
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Tensor& operator*=(double s) {
    for (auto& v : c_) v = v * s;
    return *this;
  }
  template <class S>
  Tensor& scale(const S& s) {
    for (auto& v : c_) v = v * s;
    return *this;
  }

  /// Same shape, zero components.
  Tensor zeros_like() const { return Tensor(n_, rank_, up_); }

 private:
  static int ipow_int(int b, int e) {
    int r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
  }

  int n_ = 0;
  int rank_ = 0;
  bool up_ = false;
  std::vector<T> c_;
};

template <class T> Tensor<T> operator+(Tensor<T> a, const Tensor<T>& b) { return a += b; }
template <class T> Tensor<T> operator-(Tensor<T> a, const Tensor<T>& b) { return a -= b; }
template <class T> Tensor<T> operator*(Tensor<T> a, double s) { return a *= s; }
template <class T> Tensor<T> operator*(double s, Tensor<T> a) { return a *= s; }
template <class T> Tensor<T> scaled(Tensor<T> a, const T& s) { return a.scale(s); }

/// Strips all derivative parts.
template <class T>
Tensor<double> values(const Tensor<T>& t) {
  Tensor<double> r(t.n(), t.rank(), t.up());
  for (std::size_t i = 0; i < t.size(); ++i) r[i] = value_of(t[i]);
  return r;
}

/// Lifts a tensor to a higher dual level with zero derivative part.
template <class T>
Tensor<Dual<T>> lift(const Tensor<T>& t) {
  Tensor<Dual<T>> r(t.n(), t.rank(), t.up());
  for (std::size_t i = 0; i < t.size(); ++i) r[i] = Dual<T>(t[i], T(0.0));
  return r;
}

template <class T>
Tensor<T> tangent(const Tensor<Dual<T>>& t) {
  Tensor<T> r(t.n(), t.rank(), t.up());
  for (std::size_t i = 0; i < t.size(); ++i) r[i] = t[i].d;
  return r;
}

template <class T>
Tensor<T> primal(const Tensor<Dual<T>>& t) {
  Tensor<T> r(t.n(), t.rank(), t.up());
  for (std::size_t i = 0; i < t.size(); ++i) r[i] = t[i].v;
  return r;
}

template <class T>
Point<Dual<T>> lift(const Point<T>& p) {
  Point<Dual<T>> q;
  q.n = p.n;
  q.level = p.level;
  for (int i = 0; i < p.n; ++i) q[i] = Dual<T>(p[i], T(0.0));
  return q;
}

inline Point<double> values(const Point<double>& p) { return p; }
template <class T>
Point<double> values(const Point<T>& p) {
  Point<double> q;
  q.n = p.n;
  q.level = p.level;
  for (int i = 0; i < p.n; ++i) q[i] = value_of(p[i]);
  return q;
}

/// Max absolute component.
template <class T>
double max_abs(const Tensor<T>& t) {
  double m = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) m = std::max(m, std::abs(value_of(t[i])));
  return m;
}

/// Iterates all multi-indices of given rank over range n.
template <class Fn>
void for_each_index(int n, int rank, Fn&& fn) {
  std::array<int, 8> idx{};
  std::size_t total = 1;
  for (int i = 0; i < rank; ++i) total *= static_cast<std::size_t>(n);
  for (std::size_t off = 0; off < total; ++off) {
    std::size_t rem = off;
    for (int s = rank - 1; s >= 0; --s) {
      idx[static_cast<std::size_t>(s)] = static_cast<int>(rem % static_cast<std::size_t>(n));
      rem /= static_cast<std::size_t>(n);
    }
    fn(idx.data());
  }
}

}  // namespace bochner
