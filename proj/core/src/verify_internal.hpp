#pragma once

#include <cmath>
#include <array>
#include <functional>
#include <initializer_list>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bochner/conditions.hpp"
#include "bochner/random_fields.hpp"
#include "bochner/verification.hpp"

namespace bochner::detail {

struct Hypothesis {
  bool ok = false;
  double residual = 0.0;
};

/// Per-scenario state shared by the check stages. Geometry keeps pointers
/// into this object, so it never moves.
class Ctx {
 public:
  Ctx(const Scenario& s, const Tolerances& t, const Manifold& manifold);
  Ctx(const Ctx&) = delete;
  Ctx& operator=(const Ctx&) = delete;

  const Scenario& sc;
  const Tolerances& tol;
  Manifold m;
  Diff diff;
  PStructure ps;
  PStructure conj;
  Geometry geo;
  Geometry geo_conj;
  std::vector<Point<double>> pts;
  std::vector<int> degrees;
  std::map<std::string, Hypothesis> hyp;
  std::vector<CheckResult> out;

  bool analytic() const { return diff.backend == Backend::analytic; }
  bool classical() const;
  /// Pointwise tolerance for a check taking `order` nested derivatives.
  double pt_tol(int order) const;
  /// Override lookup: scenario first, then config.
  double tol_for(const std::string& check, double dflt) const;
  /// Generator seeded from (seed, scenario, check); independent of run order.
  Rng rng(std::string_view check) const;
  void set_hyp(const std::string& name, const ConditionResidual& r);
  bool has(const std::string& name) const;

  /// Runs one check: anchor from the catalog, exceptions become failures, and
  /// a body that leaves status == pass gets pass/fail from residual <= tolerance.
  void run(const std::string& name, const std::function<void(CheckResult&)>& body);
};

/// Marks r as skipped unless every hypothesis holds; records the names.
bool gate(const Ctx& c, CheckResult& r, std::initializer_list<std::string_view> hyps);

/// Max-norm sweep of a scalar residual over points.
template <class Fn>
void sweep(CheckResult& r, const std::vector<Point<double>>& pts, Fn&& fn) {
  ConditionResidual acc;
  acc.value = r.residual;
  acc.witness = r.witness;
  for (const auto& p : pts) acc.update(static_cast<double>(fn(p)), p);
  r.residual = acc.value;
  r.witness = acc.witness;
}

/// Folds one value into r (NaN sticky), with witness.
void fold(CheckResult& r, double v, const Point<double>& p, std::vector<int> slots = {});

/// Every other point when the grid is larger than `cap`, for checks whose
/// per-point cost is high.
std::vector<Point<double>> thin(const std::vector<Point<double>>& pts, std::size_t cap);

/// Convergence order from residuals at successive doubled grids, ignoring
/// levels below `floor`; NaN when fewer than two levels are above it.
double convergence_order(const std::vector<double>& residuals, double floor);

/// Max abs of the orthonormal-frame components of T at a point with metric g.
inline double frame_max(const Tensor<double>& g, const Tensor<double>& t) {
  return max_abs(frame_components(g, orthonormal_frame(g), t));
}

/// (K_u w)_I = -sum_j K^c_{u i_j} w_{..c..}, the derivation action of K_{d_u}.
inline Tensor<double> k_action(const Tensor<double>& K, int u, const Tensor<double>& w) {
  const int n = w.n(), k = w.rank();
  Tensor<double> r(n, k);
  std::array<int, 8> J{};
  for_each_index(n, k, [&](const int* I) {
    double acc = 0.0;
    for (int j = 0; j < k; ++j) {
      for (int l = 0; l < k; ++l) J[static_cast<std::size_t>(l)] = I[l];
      for (int c = 0; c < n; ++c) {
        J[static_cast<std::size_t>(j)] = c;
        acc -= K(u, I[j], c) * w.at(J.data());
      }
    }
    r.at(I) = acc;
  });
  return r;
}

/// Quadrature nodes per dimension: the configured grid in 2D, 16 in 3D.
inline int quad_nodes(const Ctx& c) { return c.m.dim <= 2 ? c.sc.quad_grid : 16; }

// Stages, in run order.
void stage_chart(Ctx& c);
void stage_structure(Ctx& c);
void stage_diffops(Ctx& c);
void stage_quadrature(Ctx& c);
void stage_curvature(Ctx& c);
void stage_algebroid(Ctx& c);
void stage_flagship(Ctx& c);
void stage_vanishing(Ctx& c);

// Hypothesis names, reported verbatim.
inline const std::string kStat = "E-stat-K";
inline const std::string kFrakD = "E-condPP";
inline const std::string kCondPPStat = "E-condPP-stat";
inline const std::string kDiv = "E-cond-PP-stat";
inline const std::string kDiv2 = "E-cond-PP-stat-2";
inline const std::string kCodazzi = "E-cond-PK2";
inline const std::string kEZero = "E = 0";
inline const std::string kClosed = "closed fixture";
inline const std::string kClassical = "P = id, K = 0";
inline const std::string kSelfAdjoint = "P* = P";

}  // namespace bochner::detail
