#include "bochner/conditions.hpp"

#include <algorithm>
#include <cmath>

#include "bochner/curvature.hpp"

namespace bochner {

std::vector<double> coords_of(const Point<double>& p) { return {p.x.begin(), p.x.begin() + p.n}; }

void ConditionResidual::update(double v, const Point<double>& p, std::vector<int> slots) {
  if (std::isnan(value)) return;
  if (!(std::isnan(v) || v > value || witness.point.empty())) return;
  value = std::isnan(v) ? v : std::max(v, value);
  witness.point = coords_of(p);
  witness.slots = std::move(slots);
}

void ConditionResidual::update(const Tensor<double>& t, const Point<double>& p) {
  std::vector<int> worst(static_cast<std::size_t>(t.rank()), 0);
  double m = 0.0;
  for_each_index(t.n(), t.rank(), [&](const int* I) {
    const double v = std::abs(t.at(I));
    if (std::isnan(m)) return;
    if (std::isnan(v) || v > m) {
      m = v;
      worst.assign(I, I + t.rank());
    }
  });
  update(m, p, std::move(worst));
}

Tensor<double> frame_vector(const Tensor<double>& frame, int i) {
  const int n = frame.n();
  Tensor<double> v(n, 1, true);
  for (int a = 0; a < n; ++a) v(a) = frame(i, a);
  return v;
}

namespace {

ConditionResidual make(const char* name, double tol) {
  ConditionResidual r;
  r.name = name;
  r.tolerance = tol;
  return r;
}

template <class Fn>
ConditionResidual sweep_frame(const char* name, const Geometry& geo, const std::vector<Point<double>>& pts,
                              double tol, Fn fn) {
  ConditionResidual r = make(name, tol);
  for (const Point<double>& p : pts) {
    const Tensor<double> g = geo.g(p);
    r.update(frame_components(g, orthonormal_frame(g), fn(p)), p);
  }
  return r;
}

}  // namespace

ConditionResidual check_statistical(const Geometry& geo, const std::vector<Point<double>>& pts, double tol) {
  return sweep_frame("statistical", geo, pts, tol, [&](const Point<double>& p) {
    const Tensor<double> A = geo.A(p);
    const int n = geo.dim();
    Tensor<double> r(n, 3);
    for_each_index(n, 3, [&](const int* I) {
      std::array<int, 3> s{I[0], I[1], I[2]};
      std::sort(s.begin(), s.end());
      double worst = 0.0;
      do {
        worst = std::max(worst, std::abs(A.at(I) - A(s[0], s[1], s[2])));
      } while (std::next_permutation(s.begin(), s.end()));
      r.at(I) = worst;
    });
    return r;
  });
}

ConditionResidual check_condPP_stat(const Geometry& geo, const std::vector<Point<double>>& pts, double tol) {
  return sweep_frame("condPP-stat", geo, pts, tol, [&](const Point<double>& p) { return condPP_tensor(geo, p); });
}

ConditionResidual check_frak_D(const Geometry& geo, const std::vector<Point<double>>& pts, double tol) {
  return sweep_frame("frakD", geo, pts, tol, [&](const Point<double>& p) { return frak_D_tensor(geo, p); });
}

ConditionResidual check_frak_D_matches_condPP(const Geometry& geo, const std::vector<Point<double>>& pts,
                                              double tol) {
  return sweep_frame("frakD-vs-condPP", geo, pts, tol,
                     [&](const Point<double>& p) { return frak_D_tensor(geo, p) - condPP_tensor(geo, p); });
}

DivConditions check_div_conditions(const Geometry& geo, const std::vector<Point<double>>& pts, double tol) {
  DivConditions out{make("cond-PP-stat", tol), make("cond-PP-stat-2", tol)};
  for (const Point<double>& p : pts) {
    const Tensor<double> g = geo.g(p);
    const Tensor<double> frame = orthonormal_frame(g);
    const Tensor<double> dP = div_P_tensor(geo, p);
    out.cond.update(frame_components(g, frame, dP - trace_K(geo, p)), p);
    out.cond2.update(frame_components(g, frame, dP), p);
    out.cond2.update(frame_components(g, frame, field_E(geo, p)), p);
  }
  return out;
}

ConditionResidual check_codazzi_K(const Geometry& geo, const std::vector<Point<double>>& pts, double tol) {
  return sweep_frame("codazzi-K", geo, pts, tol, [&](const Point<double>& p) { return codazzi_tensor(geo, p); });
}

ConditionResidual check_E_trace(const Geometry& geo, const std::vector<Point<double>>& pts, double tol) {
  return sweep_frame("E-trace", geo, pts, tol, [&](const Point<double>& p) {
    return lower(geo.g(p), field_E(geo, p)) - trace_K(geo, p);
  });
}

ConditionResidual check_p_metric(const Geometry& geo, const std::vector<Point<double>>& pts, double tol) {
  return sweep_frame("P-metric", geo, pts, tol, [&](const Point<double>& p) { return p_metricity_tensor(geo, p); });
}

ConditionResidual check_K_skew(const Geometry& geo, const std::vector<Point<double>>& pts, double tol) {
  return sweep_frame("K-skew", geo, pts, tol, [&](const Point<double>& p) {
    const Tensor<double> A = geo.A(p);
    const int n = geo.dim();
    Tensor<double> r(n, 3);
    for_each_index(n, 3, [&](const int* I) { r.at(I) = A(I[0], I[1], I[2]) + A(I[0], I[2], I[1]); });
    return r;
  });
}

ConditionResidual check_metricity_cubic(const Geometry& geo, const std::vector<Point<double>>& pts, double tol) {
  return sweep_frame("metricity-cubic", geo, pts, tol,
                     [&](const Point<double>& p) { return p_metricity_tensor(geo, p) + geo.A(p) * 2.0; });
}

ConditionResidual check_metricity_symmetric(const Geometry& geo, const std::vector<Point<double>>& pts,
                                            double tol) {
  return sweep_frame("metricity-symmetric", geo, pts, tol, [&](const Point<double>& p) {
    const Tensor<double> M = p_metricity_tensor(geo, p);
    const int n = geo.dim();
    Tensor<double> r(n, 3);
    for_each_index(n, 3, [&](const int* I) {
      r.at(I) = std::max(std::abs(M(I[0], I[1], I[2]) - M(I[1], I[0], I[2])),
                         std::abs(M(I[0], I[1], I[2]) - M(I[2], I[1], I[0])));
    });
    return r;
  });
}

int bracket_generating_step2(const Geometry& geo, const Point<double>& p, double rank_tol) {
  const int n = geo.dim();
  const Tensor<double> g = geo.g(p);
  const Tensor<double> frame = orthonormal_frame(g);
  const Tensor<double> P = geo.P(p);
  std::vector<std::vector<double>> cols;
  const auto push = [&](const Tensor<double>& v) {
    const Tensor<double> c = frame_components(g, frame, v);
    cols.emplace_back(c.data().begin(), c.data().end());
  };
  for (int i = 0; i < n; ++i) push(apply_endo(P, coord_field(n, i)(p)));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      push(lie_bracket(geo.diff(), apply_P(geo, coord_field(n, i)), apply_P(geo, coord_field(n, j)), p));
  return numerical_rank(cols, n, rank_tol);
}

}  // namespace bochner
