#pragma once

#include "bochner/structure.hpp"

namespace bochner {

/// Field q -> P(q) X(q).
template <class F>
auto apply_P(const Geometry& geo, F X) {
  return [&geo, X](const auto& q) { return apply_endo(geo.P(q), X(q)); };
}

/// Constant coordinate field d_a.
inline auto coord_field(int n, int a) {
  return [n, a](const auto& q) {
    using T = typename std::decay_t<decltype(q.x)>::value_type;
    Tensor<T> v(n, 1, true);
    v(a) = T(1.0);
    return v;
  };
}

/// Directional derivative of a field along the vector value X at p, with the
/// direction slot contracted: sum_a X^a (D S)(a, I).
template <class T>
Tensor<T> contract_direction(const Tensor<T>& X, const Tensor<T>& DS) {
  return interior(X, DS);
}

/// Lie bracket [X, Y].
template <class FX, class FY, class T>
Tensor<T> lie_bracket(const Diff& diff, const FX& X, const FY& Y, const Point<T>& p) {
  const auto dX = gradient(diff, X, p);
  const auto dY = gradient(diff, Y, p);
  const Tensor<T> x = X(p), y = Y(p);
  Tensor<T> r(x.n(), 1, true);
  for (int a = 0; a < x.n(); ++a)
    for (int c = 0; c < x.n(); ++c) r(c) += x(a) * dY[static_cast<std::size_t>(a)](c) - y(a) * dX[static_cast<std::size_t>(a)](c);
  return r;
}

/// nabla^P_X Y at p.
template <class FX, class FY, class T>
Tensor<T> nabla_along(const Geometry& geo, const FX& X, const FY& Y, const Point<T>& p, Variant v = Variant::plain) {
  return interior(X(p), geo.nabla(Y, p, v));
}

/// [X,Y]_P = nabla^P_X Y - nabla^P_Y X.
template <class FX, class FY, class T>
Tensor<T> p_bracket(const Geometry& geo, const FX& X, const FY& Y, const Point<T>& p, Variant v = Variant::plain) {
  return nabla_along(geo, X, Y, p, v) - nabla_along(geo, Y, X, p, v);
}

/// D^P(X,Y) = [PX,PY] - P[X,Y]_P.
template <class FX, class FY, class T>
Tensor<T> frak_D(const Geometry& geo, const FX& X, const FY& Y, const Point<T>& p) {
  return lie_bracket(geo.diff(), apply_P(geo, X), apply_P(geo, Y), p) - apply_endo(geo.P(p), p_bracket(geo, X, Y, p));
}

/// N_P(X,Y) = [PX,PY] - P[PX,Y] - P[X,PY] + P^2[X,Y].
template <class FX, class FY, class T>
Tensor<T> nijenhuis(const Geometry& geo, const FX& X, const FY& Y, const Point<T>& p) {
  const Diff& d = geo.diff();
  const auto PX = apply_P(geo, X);
  const auto PY = apply_P(geo, Y);
  const Tensor<T> P = geo.P(p);
  Tensor<T> r = lie_bracket(d, PX, PY, p);
  r -= apply_endo(P, lie_bracket(d, PX, Y, p) + lie_bracket(d, X, PY, p));
  r += apply_endo(P, apply_endo(P, lie_bracket(d, X, Y, p)));
  return r;
}

/// N_P through the Levi-Civita form
/// [PX,PY] - P(nabla_{PX}Y + (nabla_X P)Y) + P(nabla_{PY}X - (nabla_Y P)X).
template <class FX, class FY, class T>
Tensor<T> nijenhuis_lc(const Geometry& geo, const FX& X, const FY& Y, const Point<T>& p) {
  const Tensor<T> P = geo.P(p);
  const Tensor<T> x = X(p), y = Y(p);
  const Tensor<T> px = apply_endo(P, x), py = apply_endo(P, y);
  const auto Pf = [&geo](const auto& q) { return geo.P(q); };
  const Tensor<T> nP = geo.lc(Pf, p);  // (b, a, e)
  const Tensor<T> nY = geo.lc(Y, p), nX = geo.lc(X, p);
  const Tensor<T> XP = interior(x, nP), YP = interior(y, nP);
  Tensor<T> inner = interior(px, nY) + apply_endo(XP, y);
  inner -= interior(py, nX) - apply_endo(YP, x);
  return lie_bracket(geo.diff(), apply_P(geo, X), apply_P(geo, Y), p) - apply_endo(P, inner);
}

/// d^P as the alternation of nabla^P (the variant selects d, d-bar, d-hat).
template <class F, class T>
Tensor<T> d_P(const Geometry& geo, const F& w, const Point<T>& p, Variant v = Variant::plain) {
  return alternate_derivative_slot(geo.nabla(w, p, v));
}

/// d^P through the derivation formula with coordinate fields and P-brackets.
template <class F, class T>
Tensor<T> d_P_derivation(const Geometry& geo, const F& w, const Point<T>& p, Variant v = Variant::plain) {
  const int n = geo.dim();
  const Tensor<T> W = w(p);
  const int k = W.rank();
  const auto dW = gradient(geo.diff(), w, p);
  const Tensor<T> P = geo.P(p);
  std::vector<Tensor<T>> br(static_cast<std::size_t>(n * n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      br[static_cast<std::size_t>(a * n + b)] = p_bracket(geo, coord_field(n, a), coord_field(n, b), p, v);
  Tensor<T> out(n, k + 1);
  std::array<int, 8> J{};
  for_each_index(n, k + 1, [&](const int* A) {
    T acc(0.0);
    for (int i = 0; i <= k; ++i) {
      int w_ = 0;
      for (int j = 0; j <= k; ++j)
        if (j != i) J[static_cast<std::size_t>(w_++)] = A[j];
      T dv(0.0);
      for (int b = 0; b < n; ++b) dv += P(A[i], b) * dW[static_cast<std::size_t>(b)].at(J.data());
      if (i % 2 == 0) acc += dv; else acc -= dv;
    }
    for (int i = 0; i <= k; ++i)
      for (int j = i + 1; j <= k; ++j) {
        const Tensor<T>& B = br[static_cast<std::size_t>(A[i] * n + A[j])];
        int w_ = 1;
        for (int l = 0; l <= k; ++l)
          if (l != i && l != j) J[static_cast<std::size_t>(w_++)] = A[l];
        T s(0.0);
        for (int e = 0; e < n; ++e) {
          J[0] = e;
          s += B(e) * W.at(J.data());
        }
        if ((i + j) % 2 == 0) acc += s; else acc -= s;
      }
    out.at(A) = acc;
  });
  return out;
}

/// Formal adjoint -tr_g (nabla^v S), also the codifferential on forms.
template <class F, class T>
Tensor<T> nabla_star(const Geometry& geo, const F& S, const Point<T>& p, Variant v = Variant::plain) {
  const Tensor<T> nS = geo.nabla(S, p, v);
  if (nS.rank() < 2) return Tensor<T>(geo.dim(), 0);
  return trace_first_two(geo.ginv(p), nS) * -1.0;
}

template <class F, class T>
Tensor<T> codifferential(const Geometry& geo, const F& w, const Point<T>& p, Variant v = Variant::plain) {
  return nabla_star(geo, w, p, v);
}

/// div_P X = sum_i <nabla^P_{e_i} X, e_i>.
template <class F, class T>
T div_P(const Geometry& geo, const F& X, const Point<T>& p, Variant v = Variant::plain) {
  const Tensor<T> nX = geo.nabla(X, p, v);
  T s(0.0);
  for (int a = 0; a < geo.dim(); ++a) s += nX(a, a);
  return s;
}

/// Interior product field q -> i_{V(q)} w(q).
template <class FV, class FW>
auto interior_field(FV V, FW w) {
  return [V, w](const auto& q) { return interior(V(q), w(q)); };
}

/// Hodge-type Laplacians: plain d^P dbar + dbar d^P, bar d^P delta + delta d^P,
/// hat dhat deltahat + deltahat dhat.
template <class F, class T>
Tensor<T> laplacian(const Geometry& geo, const F& w, const Point<T>& p, Variant v = Variant::plain) {
  const Variant vd = v == Variant::hat ? Variant::hat : Variant::plain;
  const Variant vs = v == Variant::plain ? Variant::bar : v;
  const auto dw = [&geo, &w, vd](const auto& q) { return d_P(geo, w, q, vd); };
  Tensor<T> r = codifferential(geo, dw, p, vs);
  if (w(p).rank() > 0) {
    const auto sw = [&geo, &w, vs](const auto& q) { return codifferential(geo, w, q, vs); };
    r += d_P(geo, sw, p, vd);
  }
  return r;
}

/// Gradient field (nabla^P f)^# of a function.
template <class F>
auto p_gradient(const Geometry& geo, F f, Variant v = Variant::plain) {
  return [&geo, f, v](const auto& q) { return raise(geo.ginv(q), geo.nabla(f, q, v)); };
}

/// Function Laplacian div_P(nabla^P f) (non-negative spectrum has opposite sign).
template <class F, class T>
T laplacian_fn(const Geometry& geo, const F& f, const Point<T>& p, Variant v = Variant::plain) {
  return div_P(geo, p_gradient(geo, f, v), p, v);
}

/// Modified Lie derivative d^P i_V + i_V d^P.
template <class FV, class FW, class T>
Tensor<T> lie_P(const Geometry& geo, const FV& V, const FW& w, const Point<T>& p, Variant v = Variant::plain) {
  Tensor<T> r = interior(V(p), d_P(geo, w, p, v));
  if (w(p).rank() > 0) r += d_P(geo, interior_field(V, w), p, v);
  return r;
}

/// Classical Lie derivative of a covariant tensor:
/// (L_V S)_I = V^b d_b S_I + sum_j S_{..b..} d_{i_j} V^b.
template <class FV, class FS, class T>
Tensor<T> lie_classical(const Diff& diff, const FV& V, const FS& S, const Point<T>& p) {
  const Tensor<T> s = S(p), vv = V(p);
  const auto dS = gradient(diff, S, p);
  const auto dV = gradient(diff, V, p);
  const int n = vv.n(), k = s.rank();
  Tensor<T> r(n, k);
  std::array<int, 8> J{};
  for_each_index(n, k, [&](const int* I) {
    T acc(0.0);
    for (int b = 0; b < n; ++b) acc += vv(b) * dS[static_cast<std::size_t>(b)].at(I);
    for (int j = 0; j < k; ++j) {
      for (int l = 0; l < k; ++l) J[static_cast<std::size_t>(l)] = I[l];
      for (int b = 0; b < n; ++b) {
        J[static_cast<std::size_t>(j)] = b;
        acc += s.at(J.data()) * dV[static_cast<std::size_t>(I[j])](b);
      }
    }
    r.at(I) = acc;
  });
  return r;
}

/// Rough Laplacian nabla-bar^{*P} nabla^P w.
template <class F, class T>
Tensor<T> rough_laplacian(const Geometry& geo, const F& w, const Point<T>& p) {
  const auto nw = [&geo, &w](const auto& q) { return geo.nabla(w, q, Variant::plain); };
  return nabla_star(geo, nw, p, Variant::bar);
}

}  // namespace bochner
