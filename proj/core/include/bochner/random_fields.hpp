#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "bochner/chart.hpp"
#include "bochner/linalg.hpp"
#include "bochner/tensor_ops.hpp"

namespace bochner {

/// Seeded generator with a platform-independent mapping to doubles.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  int integer(int lo, int hi) { return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1)); }

 private:
  std::mt19937_64 eng_;
};

/// Smooth random scalar: a trigonometric polynomial on tori, a polynomial of
/// degree <= 2 in the ambient coordinates on the round sphere.
struct RandomScalar {
  struct Wave {
    double coef;
    double phase;
    std::array<int, kMaxDim> k;
  };
  bool sphere = false;
  int dim = 0;
  std::vector<Wave> waves;
  std::array<double, 10> poly{};  // 1, x, y, z, xx, yy, zz, xy, xz, yz

  static RandomScalar draw(const Manifold& m, Rng& rng, int terms = 4);

  template <class T>
  T operator()(const Point<T>& p) const {
    if (sphere) {
      const auto q = ambient(p);
      return poly_eval(q);
    }
    T s(0.0);
    for (const Wave& w : waves) {
      T arg(w.phase);
      for (int i = 0; i < dim; ++i) arg += static_cast<double>(w.k[static_cast<std::size_t>(i)]) * p[i];
      s += w.coef * cos(arg);
    }
    return s;
  }

  template <class T>
  static std::array<T, 3> ambient(const Point<T>& p) {
    const T st = sin(p[0]), ct = cos(p[0]), sp = sin(p[1]), cp = cos(p[1]);
    return {st * cp, st * sp, ct};
  }

  /// Partials of the ambient coordinates: rows x,y,z; columns theta, phi.
  template <class T>
  static std::array<std::array<T, 2>, 3> ambient_jacobian(const Point<T>& p) {
    const T st = sin(p[0]), ct = cos(p[0]), sp = sin(p[1]), cp = cos(p[1]);
    return {{{ct * cp, -st * sp}, {ct * sp, st * cp}, {-st, T(0.0)}}};
  }

  template <class T>
  T poly_eval(const std::array<T, 3>& q) const {
    const T& x = q[0];
    const T& y = q[1];
    const T& z = q[2];
    return poly[0] + poly[1] * x + poly[2] * y + poly[3] * z + poly[4] * x * x + poly[5] * y * y + poly[6] * z * z +
           poly[7] * x * y + poly[8] * x * z + poly[9] * y * z;
  }
};

/// Random k-form (k <= dim) with smooth coefficients. On the sphere 1-forms are
/// sum_j p_j dq_j over ambient coordinates and 2-forms are h * dvol.
struct RandomForm {
  int dim = 0;
  int k = 0;
  bool sphere = false;
  std::vector<RandomScalar> comps;

  static RandomForm draw(const Manifold& m, int k, Rng& rng);

  template <class T>
  Tensor<T> operator()(const Point<T>& p) const {
    Tensor<T> w(dim, k);
    if (k == 0) {
      w() = comps[0](p);
      return w;
    }
    if (sphere && k == 1) {
      const auto J = RandomScalar::ambient_jacobian(p);
      for (int j = 0; j < 3; ++j) {
        const T c = comps[static_cast<std::size_t>(j)](p);
        for (int a = 0; a < 2; ++a) w(a) += c * J[static_cast<std::size_t>(j)][static_cast<std::size_t>(a)];
      }
      return w;
    }
    if (sphere && k == 2) {
      const T h = comps[0](p) * sin(p[0]);
      w(0, 1) = h;
      w(1, 0) = -h;
      return w;
    }
    std::size_t c = 0;
    std::array<int, kMaxDim> idx{};
    enumerate(0, 0, idx, [&](const std::array<int, kMaxDim>& I) {
      const T v = comps[c++](p);
      std::array<int, kMaxDim> perm = I;
      std::sort(perm.begin(), perm.begin() + k);
      do {
        w.at(perm.data()) = static_cast<double>(permutation_sign(perm.data(), k)) * v;
      } while (std::next_permutation(perm.begin(), perm.begin() + k));
    });
    return w;
  }

 private:
  template <class Fn>
  void enumerate(int depth, int start, std::array<int, kMaxDim>& idx, Fn&& fn) const {
    if (depth == k) {
      fn(idx);
      return;
    }
    for (int i = start; i < dim; ++i) {
      idx[static_cast<std::size_t>(depth)] = i;
      enumerate(depth + 1, i + 1, idx, fn);
    }
  }
};

/// Random vector field: the metric dual of a random 1-form.
struct RandomVector {
  RandomForm form;
  Field metric;

  static RandomVector draw(const Manifold& m, Rng& rng);

  template <class T>
  Tensor<T> operator()(const Point<T>& p) const {
    return raise(inverse(metric(p)), form(p));
  }
};

}  // namespace bochner
