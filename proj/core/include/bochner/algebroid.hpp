#pragma once

#include <algorithm>
#include <initializer_list>
#include <memory>
#include <string>

#include "bochner/diffops.hpp"

namespace bochner {

/// Anchor and bracket on TM. Every antisymmetric bracket obeying the anchored
/// Leibniz rule has the form [X,Y] = rho(X)(Y) - rho(Y)(X) + B(X,Y) with B a
/// tensor, so the pair (rho, B) is stored.
struct AnchoredBracket {
  std::string name;
  int dim = 0;
  Field anchor;     // (b, a) = rho^a_b
  Field structure;  // (a, b, c) = B^c_{ab}
  Diff diff;

  template <class FX, class T>
  Tensor<T> rho(const FX& X, const Point<T>& p) const {
    return apply_endo(anchor(p), X(p));
  }

  /// Derivative of the field S along rho(X(p)).
  template <class FX, class FS, class T>
  Tensor<T> derive(const FX& X, const FS& S, const Point<T>& p) const {
    const Tensor<T> rx = rho(X, p);
    const auto dS = gradient(diff, S, p);
    Tensor<T> r = scaled(dS[0], rx(0));
    for (int b = 1; b < dim; ++b) r += scaled(dS[static_cast<std::size_t>(b)], rx(b));
    return r;
  }

  template <class FX, class FY, class T>
  Tensor<T> bracket(const FX& X, const FY& Y, const Point<T>& p) const {
    Tensor<T> r = derive(X, Y, p) - derive(Y, X, p);
    const Tensor<T> B = structure(p);
    const Tensor<T> x = X(p), y = Y(p);
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b)
        for (int c = 0; c < dim; ++c) r(c) += B(a, b, c) * x(a) * y(b);
    return r;
  }

  template <class FX, class FY>
  auto bracket_field(FX X, FY Y) const {
    return [this, X, Y](const auto& q) { return bracket(X, Y, q); };
  }
};

/// The canonical Lie algebroid: identity anchor, Lie bracket.
AnchoredBracket tangent_algebroid(const Manifold& m, const Diff& diff = {});

/// Anchor P with bracket [X,Y]_P = nabla^P_X Y - nabla^P_Y X of the chosen variant.
AnchoredBracket p_algebroid(const Manifold& m, const PStructure& ps, const Diff& diff = {},
                            Variant v = Variant::plain);

struct AxiomResiduals {
  double antisymmetry = 0.0;
  double leibniz = 0.0;
  double anchor = 0.0;
};

/// Axiom residuals at p for fields X, Y and function f, each relative to
/// max(1, largest term) so that large coordinate components do not dominate.
template <class FX, class FY, class Ff>
AxiomResiduals axiom_residuals(const AnchoredBracket& ab, const FX& X, const FY& Y, const Ff& f,
                               const Point<double>& p) {
  const auto rel = [](double d, std::initializer_list<double> terms) {
    return d / std::max(1.0, std::max(terms));
  };
  AxiomResiduals r;
  const Tensor<double> xy = ab.bracket(X, Y, p), yx = ab.bracket(Y, X, p);
  r.antisymmetry = rel(max_abs(xy + yx), {max_abs(xy), max_abs(yx)});
  const auto fY = [&f, &Y](const auto& q) { return scaled(Y(q), f(q)()); };
  const Tensor<double> lhs = ab.bracket(X, fY, p);
  const Tensor<double> t1 = Y(p) * ab.derive(X, f, p)(), t2 = xy * f(p)();
  r.leibniz = rel(max_abs(lhs - (t1 + t2)), {max_abs(lhs), max_abs(t1), max_abs(t2)});
  const auto rX = [&ab, &X](const auto& q) { return ab.rho(X, q); };
  const auto rY = [&ab, &Y](const auto& q) { return ab.rho(Y, q); };
  const Tensor<double> lb = lie_bracket(ab.diff, rX, rY, p), pb = apply_endo(ab.anchor(p), xy);
  r.anchor = rel(max_abs(lb - pb), {max_abs(lb), max_abs(pb)});
  return r;
}

/// Cyclic sum [X,[Y,Z]] + [Y,[Z,X]] + [Z,[X,Y]].
template <class FX, class FY, class FZ, class T>
Tensor<T> jacobiator(const AnchoredBracket& ab, const FX& X, const FY& Y, const FZ& Z, const Point<T>& p) {
  Tensor<T> r = ab.bracket(X, ab.bracket_field(Y, Z), p);
  r += ab.bracket(Y, ab.bracket_field(Z, X), p);
  r += ab.bracket(Z, ab.bracket_field(X, Y), p);
  return r;
}

/// Exterior differential of the anchored bracket, from the derivation formula
/// on coordinate fields (whose brackets reduce to B).
template <class F, class T>
Tensor<T> d_rho(const AnchoredBracket& ab, const F& w, const Point<T>& p) {
  const int n = ab.dim;
  const Tensor<T> W = w(p);
  const int k = W.rank();
  const auto dW = gradient(ab.diff, w, p);
  const Tensor<T> R = ab.anchor(p);
  const Tensor<T> B = ab.structure(p);
  Tensor<T> out(n, k + 1);
  std::array<int, 8> J{};
  for_each_index(n, k + 1, [&](const int* A) {
    T acc(0.0);
    for (int i = 0; i <= k; ++i) {
      int w_ = 0;
      for (int j = 0; j <= k; ++j)
        if (j != i) J[static_cast<std::size_t>(w_++)] = A[j];
      T dv(0.0);
      for (int b = 0; b < n; ++b) dv += R(A[i], b) * dW[static_cast<std::size_t>(b)].at(J.data());
      if (i % 2 == 0) acc += dv; else acc -= dv;
    }
    for (int i = 0; i <= k; ++i)
      for (int j = i + 1; j <= k; ++j) {
        int w_ = 1;
        for (int l = 0; l <= k; ++l)
          if (l != i && l != j) J[static_cast<std::size_t>(w_++)] = A[l];
        T s(0.0);
        for (int e = 0; e < n; ++e) {
          J[0] = e;
          s += B(A[i], A[j], e) * W.at(J.data());
        }
        if ((i + j) % 2 == 0) acc += s; else acc -= s;
      }
    out.at(A) = acc;
  });
  return out;
}

/// (d^rho)^2 applied to w at p.
template <class F, class T>
Tensor<T> d_rho_squared(const AnchoredBracket& ab, const F& w, const Point<T>& p) {
  const auto dw = [&ab, &w](const auto& q) { return d_rho(ab, w, q); };
  return d_rho(ab, dw, p);
}

enum class AlgebroidClass { lie, skew_symmetric, almost };

std::string_view to_string(AlgebroidClass c);

struct DRhoProbe {
  double function_residual = 0.0;  // max |(d^rho)^2 f|
  double form_residual = 0.0;      // max |(d^rho)^2 w| for a 1-form
  AlgebroidClass classification = AlgebroidClass::almost;
};

inline AlgebroidClass classify(double function_residual, double form_residual, double tol) {
  if (function_residual > tol) return AlgebroidClass::almost;
  return form_residual > tol ? AlgebroidClass::skew_symmetric : AlgebroidClass::lie;
}

/// A rho-connection nabla_X Y = D(X)(Y) + C(X,Y); a valid one has D = rho.
struct RhoConnection {
  Field derivation;  // (b, a) like the anchor
  Field coeff;       // (a, i, c) = C^c_{ai}

  template <class FX, class FY, class T>
  Tensor<T> apply(const Diff& diff, const FX& X, const FY& Y, const Point<T>& p) const {
    const Tensor<T> x = X(p), y = Y(p);
    const Tensor<T> dx = apply_endo(derivation(p), x);
    const auto dY = gradient(diff, Y, p);
    const Tensor<T> C = coeff(p);
    const int n = x.n();
    Tensor<T> r(n, 1, true);
    for (int c = 0; c < n; ++c) {
      T s(0.0);
      for (int b = 0; b < n; ++b) s += dx(b) * dY[static_cast<std::size_t>(b)](c);
      for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i) s += C(a, i, c) * x(a) * y(i);
      r(c) = s;
    }
    return r;
  }
};

/// The P-connection of the chosen variant viewed as a rho-connection.
RhoConnection p_rho_connection(const Manifold& m, const PStructure& ps, const Diff& diff = {},
                               Variant v = Variant::plain);

struct TorsionCurvature {
  Tensor<double> torsion;
  Tensor<double> curvature;
  double koszul_residual = 0.0;
};

/// Koszul residual max of |nabla_X(fY+Z) - rho(X)(f)Y - f nabla_X Y - nabla_X Z|
/// and |nabla_{fX}Y - f nabla_X Y| at p, relative to max(1, largest term).
template <class FX, class FY, class FZ, class Ff>
double koszul_residual(const AnchoredBracket& ab, const RhoConnection& nc, const FX& X, const FY& Y,
                       const FZ& Z, const Ff& f, const Point<double>& p) {
  const auto fYZ = [&](const auto& q) { return scaled(Y(q), f(q)()) + Z(q); };
  const auto fX = [&](const auto& q) { return scaled(X(q), f(q)()); };
  const double fv = f(p)();
  const Tensor<double> nXY = nc.apply(ab.diff, X, Y, p);
  const Tensor<double> a = nc.apply(ab.diff, X, fYZ, p), b = Y(p) * ab.derive(X, f, p)(), c = nXY * fv,
                       d = nc.apply(ab.diff, X, Z, p), e = nc.apply(ab.diff, fX, Y, p);
  const double scale =
      std::max({1.0, max_abs(a), max_abs(b), max_abs(c), max_abs(d), max_abs(e)});
  return std::max(max_abs(a - b - c - d), max_abs(e - c)) / scale;
}

template <class FX, class FY, class T>
Tensor<T> rho_torsion(const AnchoredBracket& ab, const RhoConnection& nc, const FX& X, const FY& Y,
                      const Point<T>& p) {
  return nc.apply(ab.diff, X, Y, p) - nc.apply(ab.diff, Y, X, p) - ab.bracket(X, Y, p);
}

/// R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_{[X,Y]} Z.
template <class FX, class FY, class FZ, class T>
Tensor<T> rho_curvature(const AnchoredBracket& ab, const RhoConnection& nc, const FX& X, const FY& Y,
                        const FZ& Z, const Point<T>& p) {
  const Diff& d = ab.diff;
  const auto nYZ = [&](const auto& q) { return nc.apply(d, Y, Z, q); };
  const auto nXZ = [&](const auto& q) { return nc.apply(d, X, Z, q); };
  const auto XY = ab.bracket_field(X, Y);
  return nc.apply(d, X, nYZ, p) - nc.apply(d, Y, nXZ, p) - nc.apply(d, XY, Z, p);
}

/// Torsion and curvature at p after a Koszul spot-check with the function f;
/// throws invalid_connection when the spot-check exceeds tol.
template <class FX, class FY, class FZ, class Ff>
TorsionCurvature rho_connection_tc(const AnchoredBracket& ab, const RhoConnection& nc, const FX& X,
                                   const FY& Y, const FZ& Z, const Ff& f, const Point<double>& p,
                                   double tol) {
  TorsionCurvature out;
  out.koszul_residual = koszul_residual(ab, nc, X, Y, Z, f, p);
  if (!(out.koszul_residual <= tol))
    throw Error(ErrorKind::invalid_connection,
                "rho-connection fails the Koszul conditions (residual " + std::to_string(out.koszul_residual) + ")");
  out.torsion = rho_torsion(ab, nc, X, Y, p);
  out.curvature = rho_curvature(ab, nc, X, Y, Z, p);
  return out;
}

/// Cyclic sum of R(X,Y)Z - (nabla_X T)(Y,Z) - T(T(X,Y),Z), minus the Jacobiator.
template <class FX, class FY, class FZ, class T>
Tensor<T> bianchi_torsion_residual(const AnchoredBracket& ab, const RhoConnection& nc, const FX& X,
                                   const FY& Y, const FZ& Z, const Point<T>& p) {
  const Diff& d = ab.diff;
  const auto term = [&](const auto& A, const auto& B, const auto& C) {
    const auto TBC = [&](const auto& q) { return rho_torsion(ab, nc, B, C, q); };
    const auto nAB = [&](const auto& q) { return nc.apply(d, A, B, q); };
    const auto nAC = [&](const auto& q) { return nc.apply(d, A, C, q); };
    const auto TAB = [&](const auto& q) { return rho_torsion(ab, nc, A, B, q); };
    // (nabla_A T)(B,C) = nabla_A(T(B,C)) - T(nabla_A B, C) - T(B, nabla_A C)
    Tensor<T> dT = nc.apply(d, A, TBC, p) - rho_torsion(ab, nc, nAB, C, p) - rho_torsion(ab, nc, B, nAC, p);
    return rho_curvature(ab, nc, A, B, C, p) - dT - rho_torsion(ab, nc, TAB, C, p);
  };
  return term(X, Y, Z) + term(Y, Z, X) + term(Z, X, Y) - jacobiator(ab, X, Y, Z, p);
}

}  // namespace bochner
