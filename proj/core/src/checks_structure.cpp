#include <algorithm>
#include <cmath>

#include "bochner/curvature.hpp"
#include "verify_internal.hpp"

namespace bochner::detail {

namespace {

/// Lambda^2 inner product of two skew endomorphisms: half the sum over the
/// frame of <L e_a, M e_a>.
double so_inner(const Tensor<double>& g, const Tensor<double>& frame, const Tensor<double>& L,
                const Tensor<double>& M) {
  const int n = g.n();
  double s = 0.0;
  for (int a = 0; a < n; ++a) {
    const Tensor<double> e = frame_vector(frame, a);
    s += metric_dot(g, apply_endo(L, e), apply_endo(M, e));
  }
  return 0.5 * s;
}

}  // namespace

void stage_chart(Ctx& c) {
  const int n = c.m.dim;
  c.run("chart.metric", [&](CheckResult& r) {
    r.tolerance = c.tol_for(r.name, c.tol.analytic);
    double min_eig = 1.0;
    for (const auto& p : c.pts) {
      const Tensor<double> g = c.m.metric(p);
      std::vector<double> mat(g.data().begin(), g.data().end());
      double asym = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) asym = std::max(asym, std::abs(g(a, b) - g(b, a)));
      fold(r, asym, p);
      min_eig = std::min(min_eig, symmetric_eigenvalues(mat, n).front());
    }
    if (!(min_eig > 0.0)) {
      r.status = Status::fail;
      r.note = "metric not positive definite (min eigenvalue " + std::to_string(min_eig) + ")";
    }
  });
  c.run("chart.christoffel", [&](CheckResult& r) {
    r.tolerance = c.tol_for(r.name, c.pt_tol(1));
    const auto gf = [&c](const auto& q) { return c.m.metric(q); };
    sweep(r, c.pts, [&](const Point<double>& p) {
      const Tensor<double> G = christoffel(c.m, c.diff, p);
      double s = 0.0;
      for_each_index(n, 3, [&](const int* I) { s = std::max(s, std::abs(G(I[0], I[1], I[2]) - G(I[1], I[0], I[2]))); });
      return std::max(s, max_abs(c.geo.lc(gf, p)));
    });
  });
  c.run("chart.riemann", [&](CheckResult& r) {
    r.tolerance = c.tol_for(r.name, c.pt_tol(2));
    sweep(r, c.pts, [&](const Point<double>& p) {
      const Tensor<double> g = c.m.metric(p);
      const Tensor<double> R = frame_components(g, orthonormal_frame(g), riemann(c.m, c.diff, p));
      double s = 0.0;
      for_each_index(n, 4, [&](const int* I) {
        const int a = I[0], b = I[1], cc = I[2], d = I[3];
        s = std::max(s, std::abs(R(a, b, cc, d) + R(b, a, cc, d)));
        s = std::max(s, std::abs(R(a, b, cc, d) + R(a, b, d, cc)));
        s = std::max(s, std::abs(R(a, b, cc, d) - R(cc, d, a, b)));
        s = std::max(s, std::abs(R(a, b, cc, d) + R(b, cc, a, d) + R(cc, a, b, d)));
      });
      return s;
    });
  });
  c.run("chart.frame", [&](CheckResult& r) {
    r.tolerance = c.tol_for(r.name, c.tol.analytic);
    sweep(r, c.pts, [&](const Point<double>& p) {
      const Tensor<double> g = c.m.metric(p);
      const Tensor<double> E = orthonormal_frame(g);
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          s = std::max(s, std::abs(metric_dot(g, frame_vector(E, i), frame_vector(E, j)) - (i == j ? 1.0 : 0.0)));
      const auto xis = so_basis(g, E);
      for (std::size_t a = 0; a < xis.size(); ++a) {
        for (std::size_t b = 0; b < xis.size(); ++b)
          s = std::max(s, std::abs(so_inner(g, E, xis[a], xis[b]) - (a == b ? 1.0 : 0.0)));
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            const Tensor<double> ei = frame_vector(E, i), ej = frame_vector(E, j);
            s = std::max(s, std::abs(metric_dot(g, apply_endo(xis[a], ei), ej) + metric_dot(g, ei, apply_endo(xis[a], ej))));
          }
      }
      return s;
    });
  });
  c.run("chart.divergence", [&](CheckResult& r) {
    r.hypotheses.push_back(kClosed);
    r.tolerance = c.tol_for(r.name, c.tol.quadrature);
    if (!c.m.closed) {
      r.status = Status::skip;
      r.residual = std::numeric_limits<double>::quiet_NaN();
      r.note = "hypothesis failed: " + kClosed;
      return;
    }
    Rng rng = c.rng(r.name);
    const int G = quad_nodes(c);
    for (int t = 0; t < 3; ++t) {
      const RandomVector X = RandomVector::draw(c.m, rng);
      const double v = integrate(c.m, [&](const Point<double>& p) { return divergence(c.m, c.diff, X, p); }, G);
      fold(r, std::abs(v), c.pts.front(), {t});
    }
    r.note = "quadrature nodes " + std::to_string(G) + " per dimension; witness slot = field index";
  });
}

void stage_structure(Ctx& c) {
  const Geometry& geo = c.geo;
  const int n = c.m.dim;
  c.hyp[kClosed] = {c.m.closed, 0.0};
  c.hyp[kClassical] = {c.classical(), 0.0};

  const auto condition = [&](const std::string& name, const std::string& hyp, ConditionResidual res) {
    if (!hyp.empty()) c.set_hyp(hyp, res);
    c.run(name, [&](CheckResult& r) {
      r.residual = res.value;
      r.tolerance = res.tolerance;
      r.witness = res.witness;
      r.status = Status::info;
      r.note = res.pass() ? "holds" : "does not hold";
    });
  };
  condition("cond.statistical", kStat, check_statistical(geo, c.pts, c.pt_tol(1)));
  condition("cond.frakD", kFrakD, check_frak_D(geo, c.pts, c.pt_tol(2)));
  condition("cond.condPP_stat", kCondPPStat, check_condPP_stat(geo, c.pts, c.pt_tol(2)));
  const DivConditions dc = check_div_conditions(geo, c.pts, c.pt_tol(2));
  condition("cond.div", kDiv, dc.cond);
  condition("cond.div2", kDiv2, dc.cond2);
  condition("cond.codazzi", kCodazzi, check_codazzi_K(geo, c.pts, c.pt_tol(3)));
  {
    ConditionResidual ez;
    ez.name = "E = 0";
    ez.tolerance = c.pt_tol(2);
    for (const auto& p : c.pts) {
      const Tensor<double> E = field_E(geo, p);
      ez.update(std::sqrt(metric_dot(geo.g(p), E, E)), p);
    }
    condition("cond.E_zero", kEZero, ez);
  }
  const ConditionResidual pmet = check_p_metric(geo, c.pts, c.pt_tol(1));
  const ConditionResidual kskew = check_K_skew(geo, c.pts, c.pt_tol(1));
  condition("cond.P_metric", "", pmet);
  condition("cond.K_skew", "", kskew);
  {
    ConditionResidual sa;
    sa.name = "P* = P";
    sa.tolerance = c.tol.analytic;
    for (const auto& p : c.pts) {
      const Tensor<double> g = geo.g(p), P = geo.P(p);
      double s = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double l = 0.0, rr = 0.0;
          for (int e = 0; e < n; ++e) {
            l += P(a, e) * g(e, b);
            rr += g(a, e) * P(b, e);
          }
          s = std::max(s, std::abs(l - rr));
        }
      sa.update(s, p);
    }
    condition("cond.P_selfadjoint", kSelfAdjoint, sa);
  }
  {
    ConditionResidual bg;
    bg.name = "bracket-generating";
    bg.tolerance = 0.0;
    for (const auto& p : thin(c.pts, 64)) bg.update(n - bracket_generating_step2(geo, p), p);
    condition("cond.bracket_generating", "", bg);
  }

  c.run("frakD.tensorial", [&](CheckResult& r) {
    r.tolerance = c.tol_for(r.name, c.pt_tol(2));
    Rng rng = c.rng(r.name);
    const RandomVector X = RandomVector::draw(c.m, rng), Y = RandomVector::draw(c.m, rng);
    const RandomScalar f = RandomScalar::draw(c.m, rng);
    const auto fX = [X, f](const auto& q) { return scaled(X(q), f(q)); };
    const auto fY = [Y, f](const auto& q) { return scaled(Y(q), f(q)); };
    sweep(r, thin(c.pts, 256), [&](const Point<double>& p) {
      const Tensor<double> D = frak_D(geo, X, Y, p) * f(p);
      const Tensor<double> g = geo.g(p);
      return std::max(frame_max(g, frak_D(geo, fX, Y, p) - D), frame_max(g, frak_D(geo, X, fY, p) - D));
    });
  });

  c.run("prop1", [&](CheckResult& r) {
    r.tolerance = c.tol_for(r.name, c.pt_tol(1));
    sweep(r, c.pts, [&](const Point<double>& p) {
      const Tensor<double> M = p_metricity_tensor(geo, p);
      const Tensor<double> A = geo.A(p);
      Tensor<double> d = M.zeros_like();
      for_each_index(n, 3, [&](const int* I) { d.at(I) = M.at(I) + A(I[0], I[1], I[2]) + A(I[0], I[2], I[1]); });
      return frame_max(geo.g(p), d);
    });
    if (pmet.pass() != kskew.pass()) {
      r.status = Status::fail;
      r.note = "metric test and skew-K test disagree";
    }
  });

  c.run("prop2", [&](CheckResult& r) {
    if (!gate(c, r, {kStat})) return;
    r.tolerance = c.tol_for(r.name, c.pt_tol(2));
    sweep(r, c.pts, [&](const Point<double>& p) {
      return frame_max(geo.g(p), frak_D_tensor(geo, p) - condPP_tensor(geo, p));
    });
    if (c.has(kFrakD) != c.has(kCondPPStat)) {
      r.status = Status::fail;
      r.note = "frak-D test and condPP test disagree";
    }
  });

  c.run("prop3", [&](CheckResult& r) {
    if (!gate(c, r, {kStat})) return;
    r.tolerance = c.tol_for(r.name, c.pt_tol(1));
    const ConditionResidual a = check_metricity_cubic(geo, c.pts, r.tolerance);
    const ConditionResidual b = check_metricity_symmetric(geo, c.pts, r.tolerance);
    const ConditionResidual& w = a.value >= b.value ? a : b;
    r.residual = w.value;
    r.witness = w.witness;
  });

  c.run("bracket_stat", [&](CheckResult& r) {
    if (!gate(c, r, {kStat})) return;
    r.tolerance = c.tol_for(r.name, c.pt_tol(1));
    Rng rng = c.rng(r.name);
    const RandomVector X = RandomVector::draw(c.m, rng), Y = RandomVector::draw(c.m, rng);
    sweep(r, c.pts, [&](const Point<double>& p) {
      const Tensor<double> P = geo.P(p);
      const Tensor<double> rhs =
          interior(apply_endo(P, X(p)), geo.lc(Y, p)) - interior(apply_endo(P, Y(p)), geo.lc(X, p));
      return frame_max(geo.g(p), p_bracket(geo, X, Y, p) - rhs);
    });
  });

  c.run("E_trace", [&](CheckResult& r) {
    if (!gate(c, r, {kStat})) return;
    r.tolerance = c.tol_for(r.name, c.pt_tol(1));
    const ConditionResidual a = check_E_trace(geo, c.pts, r.tolerance);
    r.residual = a.value;
    r.witness = a.witness;
  });

  c.run("stat_L1_a", [&](CheckResult& r) {
    if (!gate(c, r, {kStat})) return;
    r.tolerance = c.tol_for(r.name, c.pt_tol(1));
    Rng rng = c.rng(r.name);
    for (int k : c.degrees) {
      if (k < 1) continue;
      const RandomForm w = RandomForm::draw(c.m, k, rng);
      sweep(r, c.pts, [&](const Point<double>& p) {
        const Tensor<double> K = geo.K(p), gi = geo.ginv(p), wv = w(p);
        Tensor<double> lhs(n, k - 1);
        for (int u = 0; u < n; ++u) {
          const Tensor<double> kw = k_action(K, u, wv);
          for (int v = 0; v < n; ++v) {
            Tensor<double> ev(n, 1, true);
            ev(v) = gi(u, v);
            lhs += interior(ev, kw);
          }
        }
        return frame_max(geo.g(p), lhs + interior(field_E(geo, p), wv));
      });
    }
  });

  c.run("stat_L1_b", [&](CheckResult& r) {
    if (!gate(c, r, {kStat})) return;
    r.tolerance = c.tol_for(r.name, c.pt_tol(1));
    Rng rng = c.rng(r.name);
    bool any = false;
    for (int k1 : c.degrees) {
      if (k1 < 2) continue;
      any = true;
      const int k = k1 - 1;
      const RandomForm w = RandomForm::draw(c.m, k1, rng);
      sweep(r, c.pts, [&](const Point<double>& p) {
        const Tensor<double> K = geo.K(p), gi = geo.ginv(p), wv = w(p);
        double worst = 0.0;
        for (int a = 0; a < k; ++a) {
          Tensor<double> t(n, k);
          std::array<int, 8> J{};
          for_each_index(n, k, [&](const int* I) {
            double acc = 0.0;
            for (int u = 0; u < n; ++u)
              for (int v = 0; v < n; ++v) {
                if (gi(u, v) == 0.0) continue;
                J[0] = v;
                for (int l = 0; l < k; ++l) J[static_cast<std::size_t>(l + 1)] = I[l];
                for (int cc = 0; cc < n; ++cc) {
                  J[static_cast<std::size_t>(a + 1)] = cc;
                  acc += gi(u, v) * K(u, I[a], cc) * wv.at(J.data());
                }
              }
            t.at(I) = acc;
          });
          worst = std::max(worst, frame_max(geo.g(p), t));
        }
        return worst;
      });
    }
    if (!any) {
      r.status = Status::skip;
      r.residual = std::numeric_limits<double>::quiet_NaN();
      r.note = "no form degree >= 2 in this scenario";
    }
  });

  c.run("conjugate.duality", [&](CheckResult& r) {
    r.tolerance = c.tol_for(r.name, c.pt_tol(1));
    Rng rng = c.rng(r.name);
    const RandomVector X = RandomVector::draw(c.m, rng), Y = RandomVector::draw(c.m, rng),
                       Z = RandomVector::draw(c.m, rng);
    const auto gyz = [&geo, Y, Z](const auto& q) {
      using T = scalar_of<decltype(q)>;
      return Tensor<T>::scalar(metric_dot(geo.g(q), Y(q), Z(q)));
    };
    sweep(r, c.pts, [&](const Point<double>& p) {
      const Tensor<double> g = geo.g(p);
      const auto dg = gradient(c.diff, gyz, p);
      const Tensor<double> px = apply_endo(geo.P(p), X(p));
      double lhs = 0.0;
      for (int b = 0; b < n; ++b) lhs += px(b) * dg[static_cast<std::size_t>(b)]();
      const double t1 = metric_dot(g, nabla_along(geo, X, Y, p), Z(p));
      const double t2 = metric_dot(g, Y(p), nabla_along(geo, X, Z, p, Variant::bar));
      return std::abs(lhs - t1 - t2) / std::max({1.0, std::abs(lhs), std::abs(t1), std::abs(t2)});
    });
  });

  c.run("conjugate.midpoint", [&](CheckResult& r) {
    if (!gate(c, r, {kStat})) return;
    r.tolerance = c.tol_for(r.name, c.pt_tol(1));
    Rng rng = c.rng(r.name);
    const RandomVector X = RandomVector::draw(c.m, rng), Y = RandomVector::draw(c.m, rng);
    sweep(r, c.pts, [&](const Point<double>& p) {
      const Tensor<double> d = nabla_along(geo, X, Y, p) + nabla_along(geo, X, Y, p, Variant::bar) -
                               nabla_along(geo, X, Y, p, Variant::hat) * 2.0;
      return frame_max(geo.g(p), d);
    });
  });

  c.run("conjugate.involution", [&](CheckResult& r) {
    r.tolerance = c.tol_for(r.name, 0.0);
    const PStructure twice = conjugate(c.conj);
    sweep(r, c.pts, [&](const Point<double>& p) {
      return std::max(max_abs(twice.A(p) - c.ps.A(p)), max_abs(twice.P(p) - c.ps.P(p)));
    });
  });

  c.run("remark2", [&](CheckResult& r) {
    if (!gate(c, r, {kStat})) return;
    r.tolerance = c.tol_for(r.name, c.pt_tol(2));
    Rng rng = c.rng(r.name);
    const RandomVector X = RandomVector::draw(c.m, rng), Y = RandomVector::draw(c.m, rng);
    sweep(r, thin(c.pts, 256), [&](const Point<double>& p) {
      const Tensor<double> g = geo.g(p);
      return std::max(frame_max(g, p_bracket(c.geo_conj, X, Y, p) - p_bracket(geo, X, Y, p)),
                      frame_max(g, frak_D(c.geo_conj, X, Y, p) - frak_D(geo, X, Y, p)));
    });
  });
}

}  // namespace bochner::detail
