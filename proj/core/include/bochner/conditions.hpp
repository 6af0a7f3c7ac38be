#pragma once

#include <string>
#include <vector>

#include "bochner/diffops.hpp"

namespace bochner {

/// Worst point of a sweep and the frame slots where it occurred.
struct Witness {
  std::vector<double> point;
  std::vector<int> slots;
};

/// Max-norm residual of a condition over a sample grid.
struct ConditionResidual {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  Witness witness;

  bool pass() const { return value <= tolerance; }  // NaN fails
  /// Folds in a scalar residual; NaN is sticky.
  void update(double v, const Point<double>& p, std::vector<int> slots = {});
  /// Folds in every component of a tensor given in frame components.
  void update(const Tensor<double>& t, const Point<double>& p);
};

std::vector<double> coords_of(const Point<double>& p);

/// Frame vector e_i as a coordinate vector value.
Tensor<double> frame_vector(const Tensor<double>& frame, int i);

/// E = sum_i K_{e_i} e_i = g^{ab} K^c_{ab}.
template <class T>
Tensor<T> field_E(const Geometry& geo, const Point<T>& p, Variant v = Variant::plain) {
  const Tensor<T> K = geo.K(p, v);
  return trace_first_two(geo.ginv(p), K);
}

/// tr K_X for X = d_b: sum_a K^a_{b a}, as a covector.
template <class T>
Tensor<T> trace_K(const Geometry& geo, const Point<T>& p) {
  const Tensor<T> K = geo.K(p);
  const int n = geo.dim();
  Tensor<T> t(n, 1);
  for (int b = 0; b < n; ++b)
    for (int a = 0; a < n; ++a) t(b) += K(b, a, a);
  return t;
}

/// (div P)(d_b) = sum_a (nabla_a P)^a_b, as a covector.
template <class T>
Tensor<T> div_P_tensor(const Geometry& geo, const Point<T>& p) {
  const auto Pf = [&geo](const auto& q) { return geo.P(q); };
  const Tensor<T> nP = geo.lc(Pf, p);
  const int n = geo.dim();
  Tensor<T> t(n, 1);
  for (int b = 0; b < n; ++b)
    for (int a = 0; a < n; ++a) t(b) += nP(a, b, a);
  return t;
}

/// Q(X,Y) = (nabla_{PX} P)Y - (nabla_{PY} P)X stored (a, b, c) for X = d_a, Y = d_b.
template <class T>
Tensor<T> condPP_tensor(const Geometry& geo, const Point<T>& p) {
  const auto Pf = [&geo](const auto& q) { return geo.P(q); };
  const Tensor<T> nP = geo.lc(Pf, p);  // (d, b, c) = (nabla_d P)^c_b
  const Tensor<T> P = geo.P(p);
  const int n = geo.dim();
  Tensor<T> Q(n, 3, true);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        T s(0.0);
        for (int d = 0; d < n; ++d) s += P(a, d) * nP(d, b, c) - P(b, d) * nP(d, a, c);
        Q(a, b, c) = s;
      }
  return Q;
}

/// D^P on coordinate fields, stored (a, b, c).
template <class T>
Tensor<T> frak_D_tensor(const Geometry& geo, const Point<T>& p) {
  const int n = geo.dim();
  Tensor<T> D(n, 3, true);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Tensor<T> v = frak_D(geo, coord_field(n, a), coord_field(n, b), p);
      for (int c = 0; c < n; ++c) D(a, b, c) = v(c);
    }
  return D;
}

/// (nabla_{PX} K)_Y Z - (nabla_{PY} K)_X Z stored (x, y, z, c).
template <class T>
Tensor<T> codazzi_tensor(const Geometry& geo, const Point<T>& p) {
  const auto Kf = [&geo](const auto& q) { return geo.K(q); };
  const Tensor<T> nK = geo.lc(Kf, p);  // (d, y, z, c)
  const Tensor<T> P = geo.P(p);
  const int n = geo.dim();
  Tensor<T> R(n, 4, true);
  for_each_index(n, 4, [&](const int* I) {
    T s(0.0);
    for (int d = 0; d < n; ++d) s += P(I[0], d) * nK(d, I[1], I[2], I[3]) - P(I[1], d) * nK(d, I[0], I[2], I[3]);
    R.at(I) = s;
  });
  return R;
}

/// nabla^P g stored (x, y, z).
template <class T>
Tensor<T> p_metricity_tensor(const Geometry& geo, const Point<T>& p) {
  const auto gf = [&geo](const auto& q) { return geo.g(q); };
  return geo.nabla(gf, p);
}

ConditionResidual check_statistical(const Geometry& geo, const std::vector<Point<double>>& pts, double tol);
/// Residual of (nabla_{PX}P)Y = (nabla_{PY}P)X.
ConditionResidual check_condPP_stat(const Geometry& geo, const std::vector<Point<double>>& pts, double tol);
/// Residual of D^P = 0 from brackets.
ConditionResidual check_frak_D(const Geometry& geo, const std::vector<Point<double>>& pts, double tol);
/// D^P(X,Y) - Q(X,Y) where Q is the condPP tensor; zero whenever K_X Y = K_Y X.
ConditionResidual check_frak_D_matches_condPP(const Geometry& geo, const std::vector<Point<double>>& pts,
                                              double tol);

struct DivConditions {
  ConditionResidual cond;   // (div P)(X) = tr K_X
  ConditionResidual cond2;  // div P = 0 and E = 0
};
DivConditions check_div_conditions(const Geometry& geo, const std::vector<Point<double>>& pts, double tol);

ConditionResidual check_codazzi_K(const Geometry& geo, const std::vector<Point<double>>& pts, double tol);
/// <E, X> = tr K_X over frame X.
ConditionResidual check_E_trace(const Geometry& geo, const std::vector<Point<double>>& pts, double tol);
/// nabla^P g = 0.
ConditionResidual check_p_metric(const Geometry& geo, const std::vector<Point<double>>& pts, double tol);
/// A(X,Y,Z) + A(X,Z,Y) = 0.
ConditionResidual check_K_skew(const Geometry& geo, const std::vector<Point<double>>& pts, double tol);
/// (nabla^P_X g)(Y,Z) + 2 A(X,Y,Z) = 0.
ConditionResidual check_metricity_cubic(const Geometry& geo, const std::vector<Point<double>>& pts, double tol);
/// Total symmetry of nabla^P g.
ConditionResidual check_metricity_symmetric(const Geometry& geo, const std::vector<Point<double>>& pts,
                                            double tol);

/// Rank of span{P d_i} + span{[P d_i, P d_j]} at p.
int bracket_generating_step2(const Geometry& geo, const Point<double>& p, double rank_tol = 1e-8);

}  // namespace bochner
