#pragma once

#include "bochner/errors.hpp"
#include "bochner/tensor.hpp"

namespace bochner {

/// Determinant of a rank-2 component array (n <= 3), any scalar type.
template <class T>
T det(const Tensor<T>& m) {
  switch (m.n()) {
    case 1:
      return m(0, 0);
    case 2:
      return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    default:
      return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
             m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
             m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
  }
}

/// Inverse by cofactors. Throws degenerate_metric when |det| <= eps.
template <class T>
Tensor<T> inverse(const Tensor<T>& m, double eps = 1e-14) {
  const int n = m.n();
  const T d = det(m);
  if (!(std::abs(value_of(d)) > eps)) throw Error(ErrorKind::degenerate_metric, "degenerate metric: det g <= eps");
  Tensor<T> r(n, 2, m.up());
  if (n == 1) {
    r(0, 0) = T(1.0) / d;
    return r;
  }
  if (n == 2) {
    r(0, 0) = m(1, 1) / d;
    r(1, 1) = m(0, 0) / d;
    r(0, 1) = -m(0, 1) / d;
    r(1, 0) = -m(1, 0) / d;
    return r;
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int i1 = (j + 1) % 3, i2 = (j + 2) % 3, j1 = (i + 1) % 3, j2 = (i + 2) % 3;
      r(i, j) = (m(i1, j1) * m(i2, j2) - m(i1, j2) * m(i2, j1)) / d;
    }
  return r;
}

}  // namespace bochner
