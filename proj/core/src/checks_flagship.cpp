#include <algorithm>
#include <cmath>
#include <sstream>

#include "bochner/algebroid.hpp"
#include "bochner/curvature.hpp"
#include "verify_internal.hpp"

namespace bochner::detail {

namespace {

/// Slot-0 slice a of a tensor with a leading direction slot.
Tensor<double> slice(const Tensor<double>& t, int a) {
  Tensor<double> out(t.n(), t.rank() - 1, t.up());
  const std::size_t block = out.size();
  for (std::size_t i = 0; i < block; ++i) out[i] = t[static_cast<std::size_t>(a) * block + i];
  return out;
}

/// Classical Weitzenboeck term on a (0,k) value from a lowered curvature array:
/// sum_a Ric(i_a, u) S(..u#@a..) + sum_{a != b} R(u, i_a, v, i_b) S(..u#@a.., ..v#@b..).
Tensor<double> weitzenbock_term(const Tensor<double>& gi, const Tensor<double>& R, const Tensor<double>& S) {
  const int n = S.n(), k = S.rank();
  const Tensor<double> Ric = ricci_of(gi, R);
  Tensor<double> out(n, k);
  std::array<int, 8> J{};
  for_each_index(n, k, [&](const int* I) {
    double acc = 0.0;
    for (int a = 0; a < k; ++a) {
      for (int l = 0; l < k; ++l) J[static_cast<std::size_t>(l)] = I[l];
      for (int u = 0; u < n; ++u)
        for (int x = 0; x < n; ++x) {
          J[static_cast<std::size_t>(a)] = x;
          acc += Ric(I[a], u) * gi(u, x) * S.at(J.data());
        }
    }
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) {
        if (a == b) continue;
        for (int l = 0; l < k; ++l) J[static_cast<std::size_t>(l)] = I[l];
        for (int u = 0; u < n; ++u)
          for (int v = 0; v < n; ++v)
            for (int x = 0; x < n; ++x)
              for (int y = 0; y < n; ++y) {
                J[static_cast<std::size_t>(a)] = x;
                J[static_cast<std::size_t>(b)] = y;
                acc += R(u, I[a], v, I[b]) * gi(u, x) * gi(v, y) * S.at(J.data());
              }
      }
    out.at(I) = acc;
  });
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

/// Constant coordinate k-forms dx^{i1} ^ ... ^ dx^{ik}.
struct CoordForm {
  int dim = 0;
  std::vector<int> idx;
  template <class T>
  Tensor<T> operator()(const Point<T>&) const {
    const int k = static_cast<int>(idx.size());
    Tensor<T> w(dim, k);
    std::array<int, kMaxDim> perm{};
    for (int s = 0; s < k; ++s) perm[static_cast<std::size_t>(s)] = idx[static_cast<std::size_t>(s)];
    do {
      w.at(perm.data()) = T(static_cast<double>(permutation_sign(perm.data(), k)));
    } while (std::next_permutation(perm.begin(), perm.begin() + k));
    return w;
  }
};

/// Riemannian volume form sqrt(det g) dx^1 ^ ... ^ dx^n.
struct VolumeForm {
  const Manifold* m = nullptr;
  template <class T>
  Tensor<T> operator()(const Point<T>& p) const {
    std::vector<int> all(static_cast<std::size_t>(m->dim));
    for (int i = 0; i < m->dim; ++i) all[static_cast<std::size_t>(i)] = i;
    Tensor<T> w = CoordForm{m->dim, all}(p);
    return scaled(w, T(sqrt(det(m->metric(p)))));
  }
};

}  // namespace

void stage_algebroid(Ctx& c) {
  const Geometry& geo = c.geo;
  const int n = c.m.dim;
  const AnchoredBracket ab = p_algebroid(c.m, c.ps, c.diff);
  const RhoConnection nc = p_rho_connection(c.m, c.ps, c.diff);
  const auto light = thin(c.pts, 256);
  const auto heavy = thin(c.pts, 16);

  Rng rng = c.rng("algebroid");
  const RandomVector X = RandomVector::draw(c.m, rng), Y = RandomVector::draw(c.m, rng), Z = RandomVector::draw(c.m, rng);
  const RandomForm f = RandomForm::draw(c.m, 0, rng);

  const auto axiom = [&](const std::string& name, double AxiomResiduals::*field, double tol) {
    c.run(name, [&](CheckResult& r) {
      r.tolerance = c.tol_for(r.name, tol);
      sweep(r, light, [&](const Point<double>& p) { return axiom_residuals(ab, X, Y, f, p).*field; });
    });
  };
  axiom("algebroid.antisymmetry", &AxiomResiduals::antisymmetry, c.pt_tol(1));
  axiom("algebroid.leibniz", &AxiomResiduals::leibniz, c.pt_tol(1));
  axiom("algebroid.anchor", &AxiomResiduals::anchor, c.pt_tol(2));

  c.run("algebroid.d_rho_squared", [&](CheckResult& r) {
    r.tolerance = c.tol_for(r.name, c.pt_tol(2));
    sweep(r, light, [&](const Point<double>& p) { return max_abs(d_rho_squared(ab, f, p)); });
  });

  c.run("algebroid.d_rho_forms", [&](CheckResult& r) {
    r.status = Status::info;
    r.tolerance = c.pt_tol(2);
    Rng rf = c.rng(r.name);
    const RandomForm w = RandomForm::draw(c.m, 1, rf);
    DRhoProbe probe;
    for (const auto& p : light) {
      probe.function_residual = std::max(probe.function_residual, max_abs(d_rho_squared(ab, f, p)));
      if (n >= 2) probe.form_residual = std::max(probe.form_residual, max_abs(d_rho_squared(ab, w, p)));
    }
    probe.classification = classify(probe.function_residual, probe.form_residual, r.tolerance);
    r.residual = probe.form_residual;
    r.note = std::string("class: ") + std::string(to_string(probe.classification));
  });

  c.run("algebroid.d_rho", [&](CheckResult& r) {
    r.tolerance = c.tol_for(r.name, c.pt_tol(1));
    Rng rf = c.rng(r.name);
    for (int k = 0; k < n; ++k) {
      const RandomForm w = RandomForm::draw(c.m, k, rf);
      sweep(r, light, [&](const Point<double>& p) { return frame_max(geo.g(p), d_rho(ab, w, p) - d_P(geo, w, p)); });
    }
  });

  c.run("algebroid.jacobiator", [&](CheckResult& r) {
    if (!gate(c, r, {kFrakD})) return;
    r.tolerance = c.tol_for(r.name, c.pt_tol(2));
    sweep(r, heavy, [&](const Point<double>& p) {
      const Tensor<double> P = geo.P(p);
      const Tensor<double> a = apply_endo(P, ab.bracket(X, ab.bracket_field(Y, Z), p)),
                           b = apply_endo(P, ab.bracket(Y, ab.bracket_field(Z, X), p)),
                           d = apply_endo(P, ab.bracket(Z, ab.bracket_field(X, Y), p));
      return max_abs(a + b + d) / std::max({1.0, max_abs(a), max_abs(b), max_abs(d)});
    });
  });

  c.run("algebroid.torsion", [&](CheckResult& r) {
    r.tolerance = c.tol_for(r.name, c.pt_tol(1));
    sweep(r, light, [&](const Point<double>& p) {
      const TorsionCurvature tc = rho_connection_tc(ab, nc, X, Y, Z, f, p, std::max(r.tolerance, 1e-6));
      return std::max(tc.koszul_residual, max_abs(tc.torsion));
    });
  });

  c.run("algebroid.bianchi_torsion", [&](CheckResult& r) {
    r.tolerance = c.tol_for(r.name, c.pt_tol(2));
    // a connection with torsion: add a constant non-symmetric C^c_{ai}
    RhoConnection tw = nc;
    const Field base = nc.coeff;
    tw.coeff = Field::from<2>([base, n](const auto& q) {
      auto C = base(q);
      for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i) C(a, i, (a + 2 * i) % n) += 0.25 * (a + 1) - 0.4 * i;
      return C;
    });
    sweep(r, heavy, [&](const Point<double>& p) { return max_abs(bianchi_torsion_residual(ab, tw, X, Y, Z, p)); });
  });
}

void stage_flagship(Ctx& c) {
  const Geometry& geo = c.geo;
  const int n = c.m.dim;
  const auto pts = thin(c.pts, 256);
  const double tol3 = c.pt_tol(3);

  const auto forms = [&](const std::string& name) {
    Rng rng = c.rng(name);
    std::vector<RandomForm> out;
    for (int k : c.degrees)
      if (k >= 1) out.push_back(RandomForm::draw(c.m, k, rng));
    return out;
  };

  c.run("wei0", [&](CheckResult& r) {
    if (!gate(c, r, {kClassical})) return;
    r.tolerance = c.tol_for(r.name, c.analytic() ? c.tol.classical_analytic : c.tol.classical_fd);
    for (const RandomForm& w : forms(r.name)) {
      const auto lw = [&geo, &w](const auto& q) { return geo.lc(w, q); };
      sweep(r, pts, [&](const Point<double>& p) {
        const Tensor<double> g = geo.g(p), gi = geo.ginv(p);
        const Tensor<double> rough = trace_first_two(gi, geo.lc(lw, p)) * -1.0;
        const Tensor<double> R = riemann(c.m, c.diff, p);
        return frame_max(g, laplacian(geo, w, p) - rough - weitzenbock_term(gi, R, w(p)));
      });
    }
  });

  c.run("wei", [&](CheckResult& r) {
    if (!gate(c, r, {kStat, kFrakD, kDiv2})) return;
    r.tolerance = c.tol_for(r.name, c.analytic() ? c.tol.weitzenbock : tol3);
    for (const RandomForm& w : forms(r.name))
      sweep(r, pts, [&](const Point<double>& p) {
        return frame_max(geo.g(p), laplacian(geo, w, p) - rough_laplacian(geo, w, p) - weitzenbock_direct(geo, w, p));
      });
  });

  c.run("wei_E", [&](CheckResult& r) {
    if (!gate(c, r, {kStat, kFrakD, kDiv})) return;
    r.tolerance = c.tol_for(r.name, c.analytic() ? c.tol.weitzenbock : tol3);
    const auto E = [&geo](const auto& q) { return field_E(geo, q); };
    for (const RandomForm& w : forms(r.name))
      sweep(r, pts, [&](const Point<double>& p) {
        Tensor<double> rhs = rough_laplacian(geo, w, p) + weitzenbock_direct(geo, w, p);
        rhs -= lie_P(geo, E, w, p) * 2.0;
        rhs += interior(field_E(geo, p), geo.nabla(w, p)) * 2.0;
        return frame_max(geo.g(p), laplacian(geo, w, p) - rhs);
      });
  });

  c.run("bochner", [&](CheckResult& r) {
    if (!gate(c, r, {kStat, kFrakD, kDiv2, kCodazzi})) return;
    r.tolerance = c.tol_for(r.name, c.analytic() ? c.tol.bochner : tol3);
    for (const RandomForm& w : forms(r.name)) {
      const auto normsq = [&geo, &w](const auto& q) {
        using T = scalar_of<decltype(q)>;
        Tensor<T> s(geo.dim(), 0);
        s() = form_inner(geo.g(q), geo.ginv(q), w(q), w(q));
        return s;
      };
      sweep(r, pts, [&](const Point<double>& p) {
        const Tensor<double> g = geo.g(p), gi = geo.ginv(p), wv = w(p), K = geo.K(p);
        const Tensor<double> nw = geo.nabla(w, p), nh = geo.nabla(w, p, Variant::hat);
        double grad = 0.0, cross = 0.0;
        std::vector<Tensor<double>> D;
        for (int a = 0; a < n; ++a) {
          D.push_back(slice(nw, a) - k_action(K, a, wv));
          cross = std::max(cross, frame_max(g, D.back() - slice(nh, a)));
        }
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            grad += gi(a, b) * form_inner(g, gi, D[static_cast<std::size_t>(a)], D[static_cast<std::size_t>(b)]);
        const double lhs = 0.5 * laplacian_fn(geo, normsq, p);
        const double rhs = -form_inner(g, gi, laplacian(geo, w, p), wv) +
                           form_inner(g, gi, weitzenbock_direct(geo, w, p), wv) + grad +
                           form_inner(g, gi, frak_K(geo, wv, p), wv);
        return std::max(std::abs(lhs - rhs), cross);
      });
    }
  });
}

void stage_vanishing(Ctx& c) {
  const Geometry& geo = c.geo;
  const int n = c.m.dim;
  const auto pts = thin(c.pts, 256);

  c.run("vanishing.parallel", [&](CheckResult& r) {
    if (!gate(c, r, {kStat, kDiv2})) return;
    r.tolerance = c.tol_for(r.name, c.pt_tol(2));
    const double ptol = c.pt_tol(1);
    // candidates: constant coordinate forms and the volume form; kept when P-parallel
    std::vector<std::pair<std::string, Field>> cand;
    for (int k : c.degrees) {
      if (k < 1) continue;
      for (const auto& I : increasing_indices(n, k)) {
        std::string label = "d";
        for (int i : I) label += "x" + std::to_string(i);
        cand.emplace_back(label, Field::from(CoordForm{n, I}));
      }
    }
    cand.emplace_back("dvol", Field::from(VolumeForm{&c.m}));
    int used = 0;
    std::string names;
    for (const auto& [label, w] : cand) {
      double par = 0.0;
      for (const auto& p : pts) par = std::max(par, frame_max(geo.g(p), geo.nabla(w, p)));
      if (!(par <= ptol)) continue;
      ++used;
      names += (names.empty() ? "" : " ") + label;
      sweep(r, pts, [&](const Point<double>& p) {
        const Tensor<double> g = geo.g(p);
        double s = frame_max(g, codifferential(geo, w, p, Variant::bar));
        if (w(p).rank() < n) s = std::max(s, frame_max(g, d_P(geo, w, p)));
        return s;
      });
    }
    if (used == 0) {
      r.status = Status::skip;
      r.residual = std::numeric_limits<double>::quiet_NaN();
      r.note = "no P-parallel candidate form on this scenario";
      return;
    }
    r.note = "P-parallel candidates: " + names;
  });

  c.run("vanishing.function", [&](CheckResult& r) {
    if (!gate(c, r, {kStat, kDiv, kClosed})) return;
    r.tolerance = c.tol_for(r.name, c.pt_tol(2));
    // f = cos(x_j) with df o P = 0 everywhere, so Delta^P f = 0 by construction
    std::vector<int> dirs;
    for (int j = 0; j < n; ++j) {
      double col = 0.0;
      for (const auto& p : pts) {
        const Tensor<double> P = geo.P(p);
        for (int b = 0; b < n; ++b) col = std::max(col, std::abs(P(b, j)));
      }
      if (col <= 1e-12) dirs.push_back(j);
    }
    if (dirs.empty()) {
      r.status = Status::skip;
      r.residual = std::numeric_limits<double>::quiet_NaN();
      r.note = "P has no coordinate kernel direction; only constants qualify";
      return;
    }
    for (int j : dirs) {
      const auto f = [j, n](const auto& q) {
        using T = scalar_of<decltype(q)>;
        Tensor<T> s(n, 0);
        s() = cos(q[j]);
        return s;
      };
      double lap_min = 0.0;
      sweep(r, pts, [&](const Point<double>& p) {
        lap_min = std::min(lap_min, laplacian_fn(geo, f, p));
        return frame_max(geo.g(p), geo.nabla(f, p));
      });
      if (lap_min < -r.tolerance) {
        r.status = Status::fail;
        r.note = "constructed f does not satisfy the sign hypothesis";
        return;
      }
    }
    r.note = "f = cos(x_j) for j in kernel directions";
  });

  c.run("vanishing.positivity", [&](CheckResult& r) {
    r.status = Status::info;
    r.hypotheses = {kStat};
    r.tolerance = c.pt_tol(2);
    double min_r = std::numeric_limits<double>::infinity(), min_w = min_r, C = 0.0, viol = 0.0;
    for (int k : c.degrees) {
      if (k < 1) continue;
      for (const auto& p : thin(c.pts, 64)) {
        const PositivityProbe pr = positivity_probe(geo, p, k);
        min_r = std::min(min_r, pr.min_curvature_operator);
        min_w = std::min(min_w, pr.min_weitzenbock);
        C = std::max(C, pr.constant_C);
        const double eps = std::max(0.0, -pr.min_curvature_operator);
        const double v = -eps * pr.constant_C - pr.min_weitzenbock;
        if (v > viol) {
          viol = v;
          r.witness.point = coords_of(p);
          r.witness.slots = {k};
        }
      }
    }
    r.residual = std::max(0.0, viol);
    r.note = "min curvature operator " + fmt(min_r) + ", min Weitzenboeck " + fmt(min_w) + ", C " + fmt(C) +
             (r.residual <= r.tolerance ? "; bound holds" : "; bound violated");
  });
}

}  // namespace bochner::detail
