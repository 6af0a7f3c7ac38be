#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bochner/field.hpp"

namespace bochner {

enum class Backend { analytic, fd };

std::string_view to_string(Backend b);
Backend backend_from_string(std::string_view s);

/// Differentiation backend. `analytic` propagates dual numbers through the
/// field expressions (exact up to rounding); `fd` uses central differences,
/// step `h` at the outermost level and `h2` for nested derivatives.
struct Diff {
  Backend backend = Backend::analytic;
  double h = 1e-4;
  double h2 = 2e-4;
};

/// Coordinate partial derivative d/dx^k of a field callable at p.
template <class F, class T>
auto partial(const Diff& diff, const F& f, const Point<T>& p, int k) {
  if (diff.backend == Backend::analytic) {
    Point<Dual<T>> q = lift(p);
    q.x[static_cast<std::size_t>(k)].d = T(1.0);
    q.level = p.level + 1;
    return tangent(f(q));
  }
  const double step = p.level == 0 ? diff.h : diff.h2;
  Point<T> a = p;
  Point<T> b = p;
  a[k] = a[k] + step;
  b[k] = b[k] - step;
  a.level = b.level = p.level + 1;
  auto r = f(a);
  r -= f(b);
  r *= 1.0 / (2.0 * step);
  return r;
}

/// All coordinate partials of a field; element k is d/dx^k.
template <class F, class T>
auto gradient(const Diff& diff, const F& f, const Point<T>& p) {
  using R = decltype(partial(diff, f, p, 0));
  std::vector<R> out;
  out.reserve(static_cast<std::size_t>(p.n));
  for (int k = 0; k < p.n; ++k) out.push_back(partial(diff, f, p, k));
  return out;
}

}  // namespace bochner
