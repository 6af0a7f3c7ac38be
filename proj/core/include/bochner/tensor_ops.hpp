#pragma once

#include <array>
#include <cstddef>

#include "bochner/tensor.hpp"

namespace bochner {

/// Applies a (1,1) tensor to a vector: (L V)^a = L^a_b V^b, with L stored as
/// L(b, a).
template <class T>
Tensor<T> apply_endo(const Tensor<T>& L, const Tensor<T>& V) {
  const int n = V.n();
  Tensor<T> r(n, 1, true);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) r(a) += L(b, a) * V(b);
  return r;
}

/// Composition (L M) as a (1,1) tensor: (L M)^a_c = L^a_b M^b_c.
template <class T>
Tensor<T> compose_endo(const Tensor<T>& L, const Tensor<T>& M) {
  const int n = L.n();
  Tensor<T> r(n, 2, true);
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) r(c, a) += L(b, a) * M(c, b);
  return r;
}

template <class T>
Tensor<T> lower(const Tensor<T>& g, const Tensor<T>& V) {
  const int n = V.n();
  Tensor<T> r(n, 1, false);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) r(a) += g(a, b) * V(b);
  return r;
}

template <class T>
Tensor<T> raise(const Tensor<T>& ginv, const Tensor<T>& w) {
  const int n = w.n();
  Tensor<T> r(n, 1, true);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) r(a) += ginv(a, b) * w(b);
  return r;
}

template <class T>
T metric_dot(const Tensor<T>& g, const Tensor<T>& X, const Tensor<T>& Y) {
  T s(0.0);
  for (int a = 0; a < X.n(); ++a)
    for (int b = 0; b < X.n(); ++b) s += g(a, b) * X(a) * Y(b);
  return s;
}

/// Contracts covariant slots 0 and 1 with the inverse metric:
/// (tr S)_{I} = g^{ab} S_{a b I}.
template <class T>
Tensor<T> trace_first_two(const Tensor<T>& ginv, const Tensor<T>& S) {
  const int n = S.n();
  Tensor<T> r(n, S.rank() - 2, S.up());
  const std::size_t block = r.size();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const std::size_t base = static_cast<std::size_t>(a * n + b) * block;
      for (std::size_t i = 0; i < block; ++i) r[i] += ginv(a, b) * S[base + i];
    }
  return r;
}

/// Interior product in the first slot: (i_V w)_I = V^a w_{a I}.
template <class T>
Tensor<T> interior(const Tensor<T>& V, const Tensor<T>& w) {
  const int n = w.n();
  if (w.rank() == 0) return Tensor<T>(n, 0, false);
  Tensor<T> r(n, w.rank() - 1, w.up());
  const std::size_t block = r.size();
  for (int a = 0; a < n; ++a)
    for (std::size_t i = 0; i < block; ++i) r[i] += V(a) * w[static_cast<std::size_t>(a) * block + i];
  return r;
}

/// Full contraction <S1,S2> = sum over all slots, indices raised with ginv
/// (covariant) or lowered with g (contravariant last slot).
template <class T>
T full_inner(const Tensor<T>& g, const Tensor<T>& ginv, const Tensor<T>& S1, const Tensor<T>& S2) {
  const int n = S1.n();
  const int rank = S1.rank();
  T s(0.0);
  std::array<int, 8> J{};
  for_each_index(n, rank, [&](const int* I) {
    const T& u = S1.at(I);
    // sum_J S2_J * prod metric factors
    for_each_index(n, rank, [&](const int* Jx) {
      T f(1.0);
      for (int k = 0; k < rank; ++k) {
        const bool contra = S1.up() && k == rank - 1;
        f = f * (contra ? g(I[k], Jx[k]) : ginv(I[k], Jx[k]));
      }
      s += u * f * S2.at(Jx);
    });
  });
  (void)J;
  return s;
}

inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

/// Inner product of k-forms over strictly increasing frame indices, i.e. the
/// full contraction divided by k!.
template <class T>
T form_inner(const Tensor<T>& g, const Tensor<T>& ginv, const Tensor<T>& w1, const Tensor<T>& w2) {
  return full_inner(g, ginv, w1, w2) * (1.0 / factorial(w1.rank()));
}

/// Sign of the permutation that sorts idx (0 if an index repeats).
inline int permutation_sign(const int* idx, int k) {
  int sign = 1;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      if (idx[i] == idx[j]) return 0;
      if (idx[i] > idx[j]) sign = -sign;
    }
  return sign;
}

/// Alternating sum sum_i (-1)^i S(a_i; a_0..^a_i..a_k) of a tensor whose
/// slot 0 is a derivative slot and remaining slots are alternating.
template <class T>
Tensor<T> alternate_derivative_slot(const Tensor<T>& S) {
  const int n = S.n();
  const int rank = S.rank();
  Tensor<T> r(n, rank, false);
  std::array<int, 8> src{};
  for_each_index(n, rank, [&](const int* A) {
    T acc(0.0);
    for (int i = 0; i < rank; ++i) {
      src[0] = A[i];
      int w = 1;
      for (int j = 0; j < rank; ++j)
        if (j != i) src[static_cast<std::size_t>(w++)] = A[j];
      const T& v = S.at(src.data());
      if (i % 2 == 0) acc += v; else acc -= v;
    }
    r.at(A) = acc;
  });
  return r;
}

/// Components of a tensor in an orthonormal frame, frame(i, a) = e_i^a. The
/// contravariant slot, if any, is paired with the coframe <e_c, .>.
template <class T>
Tensor<T> frame_components(const Tensor<T>& g, const Tensor<T>& frame, const Tensor<T>& S) {
  const int n = S.n();
  const int rank = S.rank();
  Tensor<T> cur = S;
  for (int slot = 0; slot < rank; ++slot) {
    const bool contra = S.up() && slot == rank - 1;
    Tensor<T> next(n, rank, S.up());
    for_each_index(n, rank, [&](const int* I) {
      std::array<int, 8> J{};
      for (int k = 0; k < rank; ++k) J[static_cast<std::size_t>(k)] = I[k];
      T acc(0.0);
      for (int a = 0; a < n; ++a) {
        J[static_cast<std::size_t>(slot)] = a;
        T coef(0.0);
        if (contra) {
          for (int b = 0; b < n; ++b) coef += g(a, b) * frame(I[slot], b);
        } else {
          coef = frame(I[slot], a);
        }
        acc += coef * cur.at(J.data());
      }
      next.at(I) = acc;
    });
    cur = std::move(next);
  }
  return cur;
}

}  // namespace bochner
