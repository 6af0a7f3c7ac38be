#pragma once

#include <vector>

#include "bochner/diffops.hpp"

namespace bochner {

/// (nabla^P)^2 S stored (a, b, I): nabla_a(nabla_b S) - nabla_{nabla_a d_b} S.
template <class F, class T>
Tensor<T> second_derivative(const Geometry& geo, const F& S, const Point<T>& p, Variant v = Variant::plain) {
  const auto nS = [&geo, &S, v](const auto& q) { return geo.nabla(S, q, v); };
  return geo.nabla(nS, p, v);
}

/// R^P_{d_a,d_b} d_c = R^d_{abc} d_d from the definition
/// nabla_a nabla_b - nabla_b nabla_a - nabla_{[d_a,d_b]_P}; stored (a, b, c, d).
template <class T>
Tensor<T> curvature_up(const Geometry& geo, const Point<T>& p, Variant v = Variant::plain) {
  const int n = geo.dim();
  const Tensor<T> C = geo.conn(p, v);
  const Tensor<T> P = geo.P(p);
  const Tensor<T> G = geo.christoffel(p);
  // d C = d K + dP Gamma + P dGamma, with dGamma from second metric partials
  const auto Kf = [&geo, v](const auto& q) { return geo.K(q, v); };
  const auto Pf = [&geo](const auto& q) { return geo.P(q); };
  std::vector<Tensor<T>> dC = gradient(geo.diff(), Kf, p);
  const auto dP = gradient(geo.diff(), Pf, p);
  const auto dG = christoffel_gradient(geo.manifold(), geo.diff(), p);
  for (int f = 0; f < n; ++f) {
    const auto F = static_cast<std::size_t>(f);
    for_each_index(n, 3, [&](const int* I) {
      T s(0.0);
      for (int b = 0; b < n; ++b) s += dP[F](I[0], b) * G(b, I[1], I[2]) + P(I[0], b) * dG[F](b, I[1], I[2]);
      dC[F].at(I) += s;
    });
  }
  Tensor<T> R(n, 4, true);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int e = 0; e < n; ++e) {
          T s(0.0);
          for (int f = 0; f < n; ++f)
            s += P(a, f) * dC[static_cast<std::size_t>(f)](b, c, e) - P(b, f) * dC[static_cast<std::size_t>(f)](a, c, e);
          for (int d = 0; d < n; ++d) s += C(a, d, e) * C(b, c, d) - C(b, d, e) * C(a, c, d);
          for (int f = 0; f < n; ++f) s -= (C(a, b, f) - C(b, a, f)) * C(f, c, e);
          R(a, b, c, e) = s;
        }
  return R;
}

template <class T>
Tensor<T> lower_last(const Tensor<T>& g, const Tensor<T>& Rup) {
  const int n = g.n();
  Tensor<T> R(n, Rup.rank(), false);
  const std::size_t block = static_cast<std::size_t>(n);
  for (std::size_t base = 0; base < Rup.size(); base += block)
    for (int d = 0; d < n; ++d) {
      T s(0.0);
      for (int e = 0; e < n; ++e) s += g(d, e) * Rup[base + static_cast<std::size_t>(e)];
      R[base + static_cast<std::size_t>(d)] = s;
    }
  return R;
}

/// R^P(a,b,c,d) = <R^P_{d_a,d_b} d_c, d_d> from the definition.
template <class T>
Tensor<T> curvature(const Geometry& geo, const Point<T>& p, Variant v = Variant::plain) {
  return lower_last(geo.g(p), curvature_up(geo, p, v));
}

/// <[K_a, K_b] d_c, d_d> for the variant's contorsion.
template <class T>
Tensor<T> k_commutator(const Geometry& geo, const Point<T>& p, Variant v = Variant::plain) {
  const int n = geo.dim();
  const Tensor<T> A = geo.A(p, v);
  const Tensor<T> K = geo.K(p, v);
  Tensor<T> out(n, 4);
  for_each_index(n, 4, [&](const int* I) {
    T s(0.0);
    for (int e = 0; e < n; ++e) s += K(I[1], I[2], e) * A(I[0], e, I[3]) - K(I[0], I[2], e) * A(I[1], e, I[3]);
    out.at(I) = s;
  });
  return out;
}

/// R(P d_a, P d_b, d_c, d_d) with the Levi-Civita curvature.
template <class T>
Tensor<T> curvature_hat_formula(const Geometry& geo, const Point<T>& p) {
  const int n = geo.dim();
  const Tensor<T> R = riemann(geo.manifold(), geo.diff(), p);
  const Tensor<T> P = geo.P(p);
  Tensor<T> out(n, 4);
  for_each_index(n, 4, [&](const int* I) {
    T s(0.0);
    for (int e = 0; e < n; ++e)
      for (int f = 0; f < n; ++f) s += P(I[0], e) * P(I[1], f) * R(e, f, I[2], I[3]);
    out.at(I) = s;
  });
  return out;
}

/// R(PX,PY,Z,W) + <[K^v_X,K^v_Y]Z,W> with the variant's contorsion; equals the
/// curvature of the variant when D^P = 0 and the Codazzi condition hold.
template <class T>
Tensor<T> curvature_formula(const Geometry& geo, const Point<T>& p, Variant v = Variant::plain) {
  Tensor<T> out = curvature_hat_formula(geo, p);
  if (v == Variant::hat) return out;
  return out + k_commutator(geo, p, v);
}

/// Ricci contraction Ric(a, d) = g^{bc} R(a, b, c, d).
template <class T>
Tensor<T> ricci_of(const Tensor<T>& ginv, const Tensor<T>& R) {
  const int n = ginv.n();
  Tensor<T> out(n, 2);
  for (int a = 0; a < n; ++a)
    for (int d = 0; d < n; ++d) {
      T s(0.0);
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) s += ginv(b, c) * R(a, b, c, d);
      out(a, d) = s;
    }
  return out;
}

template <class T>
Tensor<T> ric_P(const Geometry& geo, const Point<T>& p, Variant v = Variant::plain) {
  return ricci_of(geo.ginv(p), curvature(geo, p, v));
}

/// sum_i R(PX, Pe_i, e_i, Y).
template <class T>
Tensor<T> ric_P_hat(const Geometry& geo, const Point<T>& p) {
  return ricci_of(geo.ginv(p), curvature_hat_formula(geo, p));
}

/// (R^P_{d_a,d_b} S)_I = D^P(d_a,d_b)(S_I) - sum_j R^e_{a b i_j} S_{..e..}
/// for a (0,k) tensor field S; returns one tensor per (a, b), index a*n+b.
template <class F, class T>
std::vector<Tensor<T>> curvature_action(const Geometry& geo, const F& S, const Point<T>& p, Variant v = Variant::plain) {
  const int n = geo.dim();
  const Tensor<T> s = S(p);
  const int k = s.rank();
  const auto dS = gradient(geo.diff(), S, p);
  const Tensor<T> Ru = curvature_up(geo, p, v);
  std::vector<Tensor<T>> out;
  std::array<int, 8> J{};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Tensor<T> D = frak_D(geo, coord_field(n, a), coord_field(n, b), p);
      Tensor<T> r(n, k);
      for_each_index(n, k, [&](const int* I) {
        T acc(0.0);
        for (int c = 0; c < n; ++c) acc += D(c) * dS[static_cast<std::size_t>(c)].at(I);
        for (int j = 0; j < k; ++j) {
          for (int l = 0; l < k; ++l) J[static_cast<std::size_t>(l)] = I[l];
          for (int e = 0; e < n; ++e) {
            J[static_cast<std::size_t>(j)] = e;
            acc -= Ru(a, b, I[j], e) * s.at(J.data());
          }
        }
        r.at(I) = acc;
      });
      out.push_back(std::move(r));
    }
  return out;
}

/// Action of the LC curvature of P-directions on a (0,k) tensor value, R_{PX,PY}
/// in the (1,k) item: returns one tensor per (a, b).
template <class T>
Tensor<T> slot_action(const Tensor<T>& Lup /*(c, e): L d_c = L(c,e) d_e*/, const Tensor<T>& s) {
  const int n = s.n(), k = s.rank();
  Tensor<T> r(n, k);
  std::array<int, 8> J{};
  for_each_index(n, k, [&](const int* I) {
    T acc(0.0);
    for (int j = 0; j < k; ++j) {
      for (int l = 0; l < k; ++l) J[static_cast<std::size_t>(l)] = I[l];
      for (int e = 0; e < n; ++e) {
        J[static_cast<std::size_t>(j)] = e;
        acc -= Lup(I[j], e) * s.at(J.data());
      }
    }
    r.at(I) = acc;
  });
  return r;
}

enum class RicMethod { direct, coordinate, basis };

/// Weitzenboeck operator from its definition sum_a sum_i (R^P_{e_i,X_a} S)(..e_i@a..),
/// including the D^P term of the curvature action.
template <class F, class T>
Tensor<T> weitzenbock_direct(const Geometry& geo, const F& S, const Point<T>& p, Variant v = Variant::plain) {
  const int n = geo.dim();
  const Tensor<T> gi = geo.ginv(p);
  const auto act = curvature_action(geo, S, p, v);
  const int k = S(p).rank();
  Tensor<T> out(n, k);
  std::array<int, 8> J{};
  for_each_index(n, k, [&](const int* I) {
    T acc(0.0);
    for (int s = 0; s < k; ++s) {
      for (int l = 0; l < k; ++l) J[static_cast<std::size_t>(l)] = I[l];
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          J[static_cast<std::size_t>(s)] = c;
          acc += gi(b, c) * act[static_cast<std::size_t>(b * n + I[s])].at(J.data());
        }
    }
    out.at(I) = acc;
  });
  return out;
}

/// Coordinate form: sum_a Ric^P(X_a, e_j) S(..e_j@a..)
/// + sum_{a != b} R^P(e_i, X_a, e_j, X_b) S(..e_i@a.., ..e_j@b..).
template <class T>
Tensor<T> weitzenbock_coordinate(const Geometry& geo, const Tensor<T>& S, const Point<T>& p, Variant v = Variant::plain) {
  const int n = geo.dim();
  const int k = S.rank();
  const Tensor<T> gi = geo.ginv(p);
  const Tensor<T> R = curvature(geo, p, v);
  const Tensor<T> Ric = ricci_of(gi, R);
  Tensor<T> out(n, k);
  std::array<int, 8> J{};
  for_each_index(n, k, [&](const int* I) {
    T acc(0.0);
    for (int a = 0; a < k; ++a) {
      for (int l = 0; l < k; ++l) J[static_cast<std::size_t>(l)] = I[l];
      for (int u = 0; u < n; ++u)
        for (int w = 0; w < n; ++w) {
          J[static_cast<std::size_t>(a)] = w;
          acc += Ric(I[a], u) * gi(u, w) * S.at(J.data());
        }
    }
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) {
        if (a == b) continue;
        for (int l = 0; l < k; ++l) J[static_cast<std::size_t>(l)] = I[l];
        for (int u = 0; u < n; ++u)
          for (int v2 = 0; v2 < n; ++v2) {
            const T r = R(u, I[a], v2, I[b]);
            for (int u2 = 0; u2 < n; ++u2)
              for (int w2 = 0; w2 < n; ++w2) {
                J[static_cast<std::size_t>(a)] = u2;
                J[static_cast<std::size_t>(b)] = w2;
                acc += r * gi(u, u2) * gi(v2, w2) * S.at(J.data());
              }
          }
      }
    out.at(I) = acc;
  });
  return out;
}

/// Endomorphism R^P(X ^ Y) with <R^P(X^Y)Z, W> = R^P(X,Y,Z,W); given the
/// curvature array Rl (lowered), returns L(c, d) = (L d_c)^d.
template <class T>
Tensor<T> bivector_endo(const Tensor<T>& ginv, const Tensor<T>& Rl, const Tensor<T>& frame, int i, int j) {
  const int n = ginv.n();
  Tensor<T> L(n, 2, true);
  for (int c = 0; c < n; ++c)
    for (int w = 0; w < n; ++w) {
      T s(0.0);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) s += frame(i, a) * frame(j, b) * Rl(a, b, c, w);
      for (int d = 0; d < n; ++d) L(c, d) += ginv(d, w) * s;
    }
  return L;
}

/// Basis form -sum_alpha R^P(xi_alpha)(xi_alpha S), with R^P(xi) built from
/// R(PX,PY,Z,W) + <[K_X,K_Y]Z,W>.
template <class T>
Tensor<T> weitzenbock_basis(const Geometry& geo, const Tensor<T>& S, const Point<T>& p, Variant v = Variant::plain) {
  const int n = geo.dim();
  const Tensor<T> g = geo.g(p);
  const Tensor<T> gi = geo.ginv(p);
  const Tensor<T> E = orthonormal_frame(g);
  const auto xis = so_basis(g, E);
  const Tensor<T> Rl = curvature_formula(geo, p, v);
  Tensor<T> out(n, S.rank());
  int alpha = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++alpha) {
      const Tensor<T> L = bivector_endo(gi, Rl, E, i, j);
      out -= slot_action(L, slot_action(xis[static_cast<std::size_t>(alpha)], S));
    }
  return out;
}

/// <K_X, K_Y> (Frobenius) for coordinate X = d_a, Y = d_b.
template <class T>
Tensor<T> k_frobenius(const Tensor<T>& ginv, const Tensor<T>& A) {
  const int n = ginv.n();
  Tensor<T> out(n, 2);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      T s(0.0);
      for (int u = 0; u < n; ++u)
        for (int w = 0; w < n; ++w)
          for (int u2 = 0; u2 < n; ++u2)
            for (int w2 = 0; w2 < n; ++w2) s += A(a, u, w) * A(b, u2, w2) * ginv(u, u2) * ginv(w, w2);
      out(a, b) = s;
    }
  return out;
}

/// Coefficient of the pair term of the K operator. The value -2 (opposite to
/// the printed +2) is the one for which Ric^P = Ric-hat^P - K holds.
inline constexpr double kFrakKPairSign = -2.0;

/// K operator on k-forms (E = 0 setting):
/// sum_a <K_{X_a}, K_{e_j}> w(..e_j@a..)
/// + c sum_{b<a} (<K_{X_a} e_j, K_{X_b} e_i> - <K_{e_i} e_j, K_{X_a} X_b>) w(..e_j@b.., ..e_i@a..).
template <class T>
Tensor<T> frak_K(const Geometry& geo, const Tensor<T>& w, const Point<T>& p, double pair_coeff = kFrakKPairSign) {
  const int n = geo.dim();
  const int k = w.rank();
  const Tensor<T> gi = geo.ginv(p);
  const Tensor<T> A = geo.A(p);
  const Tensor<T> K = geo.K(p);
  const Tensor<T> F = k_frobenius(gi, A);
  // <K_a d_u, K_b d_v> = K^x_{au} K^y_{bv} g_xy = K^x_{au} A(b, v, x)
  const auto kk = [&](int a, int u, int b, int v) {
    T s(0.0);
    for (int x = 0; x < n; ++x) s += K(a, u, x) * A(b, v, x);
    return s;
  };
  Tensor<T> out(n, k);
  std::array<int, 8> J{};
  for_each_index(n, k, [&](const int* I) {
    T acc(0.0);
    for (int a = 0; a < k; ++a) {
      for (int l = 0; l < k; ++l) J[static_cast<std::size_t>(l)] = I[l];
      for (int u = 0; u < n; ++u)
        for (int x = 0; x < n; ++x) {
          J[static_cast<std::size_t>(a)] = x;
          acc += F(I[a], u) * gi(u, x) * w.at(J.data());
        }
    }
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < a; ++b) {
        for (int l = 0; l < k; ++l) J[static_cast<std::size_t>(l)] = I[l];
        // e_j at slot b, e_i at slot a; frame sums become g^{..} contractions.
        for (int jj = 0; jj < n; ++jj)
          for (int ii = 0; ii < n; ++ii) {
            const T q = kk(I[a], jj, I[b], ii) - kk(ii, jj, I[a], I[b]);
            for (int j2 = 0; j2 < n; ++j2)
              for (int i2 = 0; i2 < n; ++i2) {
                J[static_cast<std::size_t>(b)] = j2;
                J[static_cast<std::size_t>(a)] = i2;
                acc += pair_coeff * q * gi(jj, j2) * gi(ii, i2) * w.at(J.data());
              }
          }
      }
    out.at(I) = acc;
  });
  return out;
}

/// Matrices on Lambda^2 in the basis xi_alpha = e_i ^ e_j (i < j); entry
/// (beta, alpha) = <Op(xi_alpha), xi_beta>.
struct BivectorMatrices {
  int size = 0;
  std::vector<double> R;      // classical curvature operator, <R(X^Y), Z^W> = R(X,Y,W,Z)
  std::vector<double> RP;     // <R^P(X^Y), Z^W> = R^P(X,Y,W,Z), R^P from the definition
  std::vector<double> RPbar;  // same for the conjugate
  std::vector<double> RPhat;  // R(PX,PY,W,Z)
  std::vector<double> K;      // <K(X^Y), Z^W> = <[K_X,K_Y]Z, W>
  double at(const std::vector<double>& m, int beta, int alpha) const {
    return m[static_cast<std::size_t>(beta * size + alpha)];
  }
};

BivectorMatrices bivector_ops(const Geometry& geo, const Point<double>& p);

/// Frame index pairs (i, j), i < j, in the order used for xi_alpha.
std::vector<std::pair<int, int>> bivector_pairs(int n);

/// Coordinate components of the frame k-form theta^{i1} ^ ... ^ theta^{ik}.
Tensor<double> frame_form(const Tensor<double>& theta, const std::vector<int>& idx);

/// Increasing multi-indices of length k in [0, n).
std::vector<std::vector<int>> increasing_indices(int n, int k);

/// Matrix of Ric^P on k-forms at p in the orthonormal basis of frame forms
/// (coordinate method); entry (row, col) = <Ric^P(theta^col), theta^row>.
std::vector<double> weitzenbock_matrix(const Geometry& geo, const Point<double>& p, int k);

struct PositivityProbe {
  double min_curvature_operator = 0.0;  // symmetric part of R^P on Lambda^2
  double min_weitzenbock = 0.0;         // symmetric part of Ric^P on unit k-forms
  double constant_C = 0.0;              // max sum_alpha |xi_alpha S|^2 / |S|^2
};

PositivityProbe positivity_probe(const Geometry& geo, const Point<double>& p, int k);

/// Numerical rank of the columns, singular values below tol * max dropped.
int numerical_rank(const std::vector<std::vector<double>>& columns, int n, double tol = 1e-8);

/// Symmetric-part eigenvalues (ascending) of a dense row-major matrix.
std::vector<double> symmetric_eigenvalues(const std::vector<double>& m, int size);

}  // namespace bochner
