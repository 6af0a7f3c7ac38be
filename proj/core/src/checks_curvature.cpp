#include <algorithm>
#include <cmath>

#include "bochner/algebroid.hpp"
#include "bochner/curvature.hpp"
#include "verify_internal.hpp"

namespace bochner::detail {

namespace {

/// R^e_{abc} from a lowered curvature array: (a, b, c, e).
Tensor<double> raise_last(const Tensor<double>& gi, const Tensor<double>& Rl) {
  const int n = gi.n();
  Tensor<double> R(n, 4, true);
  for_each_index(n, 4, [&](const int* I) {
    double s = 0.0;
    for (int d = 0; d < n; ++d) s += gi(I[3], d) * Rl(I[0], I[1], I[2], d);
    R.at(I) = s;
  });
  return R;
}

/// (nabla^P)^2_{a,b} S - (nabla^P)^2_{b,a} S, stored (a, b, I) with S's up flag.
template <class F>
Tensor<double> commuted_second(const Geometry& geo, const F& S, const Point<double>& p,
                               double* scale = nullptr) {
  const Tensor<double> D2 = second_derivative(geo, S, p);
  const Tensor<double> s = S(p);
  const int n = geo.dim();
  if (scale) *scale = frame_max(geo.g(p), D2);
  Tensor<double> out(n, s.rank() + 2, s.up());
  const std::size_t block = s.size();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (std::size_t i = 0; i < block; ++i) {
        const std::size_t ab = static_cast<std::size_t>(a * n + b), ba = static_cast<std::size_t>(b * n + a);
        out[ab * block + i] = D2[ab * block + i] - D2[ba * block + i];
      }
  return out;
}

/// Random (1,1) field alpha (x) V + beta (x) W, covariant slot first.
struct RandomEndo {
  RandomForm alpha, beta;
  RandomVector V, W;

  template <class T>
  Tensor<T> operator()(const Point<T>& p) const {
    const Tensor<T> a = alpha(p), b = beta(p), v = V(p), w = W(p);
    const int n = a.n();
    Tensor<T> S(n, 2, true);
    for (int c = 0; c < n; ++c)
      for (int e = 0; e < n; ++e) S(c, e) = a(c) * v(e) + b(c) * w(e);
    return S;
  }
};

}  // namespace

void stage_curvature(Ctx& c) {
  const Geometry& geo = c.geo;
  const int n = c.m.dim;
  const std::initializer_list<std::string_view> prop10 = {kStat, kFrakD, kCodazzi};
  const double ctol = c.pt_tol(2);

  c.run("second_derivative", [&](CheckResult& r) {
    r.tolerance = c.tol_for(r.name, ctol);
    Rng rng = c.rng(r.name);
    const RandomForm f = RandomForm::draw(c.m, 0, rng);
    sweep(r, thin(c.pts, 256), [&](const Point<double>& p) {
      const Tensor<double> A = commuted_second(geo, f, p);
      const auto df = gradient(c.diff, f, p);
      Tensor<double> res(n, 2);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const Tensor<double> D = frak_D(geo, coord_field(n, a), coord_field(n, b), p);
          double Df = 0.0;
          for (int e = 0; e < n; ++e) Df += D(e) * df[static_cast<std::size_t>(e)]();
          res(a, b) = A(a, b) - Df;
        }
      return frame_max(geo.g(p), res);
    });
  });

  c.run("bianchi", [&](CheckResult& r) {
    r.tolerance = c.tol_for(r.name, ctol);
    const AnchoredBracket ab = p_algebroid(c.m, c.ps, c.diff);
    sweep(r, thin(c.pts, 32), [&](const Point<double>& p) {
      const Tensor<double> R = curvature_up(geo, p);
      double worst = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int d = 0; d < n; ++d) {
            const Tensor<double> J = jacobiator(ab, coord_field(n, a), coord_field(n, b), coord_field(n, d), p);
            for (int e = 0; e < n; ++e)
              worst = std::max(worst, std::abs(R(a, b, d, e) + R(b, d, a, e) + R(d, a, b, e) - J(e)));
          }
      return worst;
    });
  });

  c.run("prop10.item1", [&](CheckResult& r) {
    if (!gate(c, r, prop10)) return;
    r.tolerance = c.tol_for(r.name, ctol);
    Rng rng = c.rng(r.name);
    const RandomForm w = RandomForm::draw(c.m, 1, rng);
    sweep(r, thin(c.pts, 256), [&](const Point<double>& p) {
      const Tensor<double> g = geo.g(p), gi = geo.ginv(p);
      const Tensor<double> Rf = curvature_formula(geo, p);
      const Tensor<double> Ru = raise_last(gi, Rf);
      double s = frame_max(g, curvature(geo, p) - Rf);
      // (R_{ab} w)(c) = -w(R_{ab} d_c)
      const Tensor<double> A = commuted_second(geo, w, p), wv = w(p);
      Tensor<double> res(n, 3);
      for_each_index(n, 3, [&](const int* I) {
        double t = A.at(I);
        for (int e = 0; e < n; ++e) t += Ru(I[0], I[1], I[2], e) * wv(e);
        res.at(I) = t;
      });
      s = std::max(s, frame_max(g, res));
      return s;
    });
  });

  c.run("prop10.item2", [&](CheckResult& r) {
    if (!gate(c, r, prop10)) return;
    r.tolerance = c.tol_for(r.name, ctol);
    Rng rng = c.rng(r.name);
    const RandomForm f = RandomForm::draw(c.m, 0, rng);
    const auto metric = [&c](const auto& q) { return c.m.metric(q); };
    sweep(r, thin(c.pts, 256), [&](const Point<double>& p) {
      const Tensor<double> g = geo.g(p);
      return std::max(frame_max(g, commuted_second(geo, f, p)), frame_max(g, commuted_second(geo, metric, p)));
    });
  });

  c.run("prop10.item3", [&](CheckResult& r) {
    if (!gate(c, r, prop10)) return;
    r.tolerance = c.tol_for(r.name, ctol);
    Rng rng = c.rng(r.name);
    RandomEndo S{RandomForm::draw(c.m, 1, rng), RandomForm::draw(c.m, 1, rng), RandomVector::draw(c.m, rng),
                 RandomVector::draw(c.m, rng)};
    sweep(r, thin(c.pts, 256), [&](const Point<double>& p) {
      const Tensor<double> g = geo.g(p), gi = geo.ginv(p);
      const Tensor<double> Ru = raise_last(gi, curvature_formula(geo, p));
      double scale = 0.0;
      const Tensor<double> A = commuted_second(geo, S, p, &scale), s = S(p);
      Tensor<double> res(n, 4, true);
      for_each_index(n, 4, [&](const int* I) {
        const int a = I[0], b = I[1], cc = I[2], e = I[3];
        double t = A.at(I);
        for (int f = 0; f < n; ++f) t -= Ru(a, b, f, e) * s(cc, f) - Ru(a, b, cc, f) * s(f, e);
        res.at(I) = t;
      });
      return frame_max(g, res) / std::max(1.0, scale);
    });
  });

  c.run("prop10.item4", [&](CheckResult& r) {
    if (!gate(c, r, prop10)) return;
    r.tolerance = c.tol_for(r.name, ctol);
    sweep(r, c.pts, [&](const Point<double>& p) {
      return frame_max(geo.g(p), curvature(geo, p) - curvature_formula(geo, p));
    });
  });

  c.run("prop10.item5", [&](CheckResult& r) {
    if (!gate(c, r, prop10)) return;
    r.tolerance = c.tol_for(r.name, ctol);
    sweep(r, c.pts, [&](const Point<double>& p) {
      const Tensor<double> R = frame_components(geo.g(p), orthonormal_frame(geo.g(p)), curvature(geo, p));
      double s = 0.0;
      for_each_index(n, 4, [&](const int* I) {
        s = std::max(s, std::abs(R.at(I) + R(I[1], I[0], I[2], I[3])));
        s = std::max(s, std::abs(R.at(I) + R(I[0], I[1], I[3], I[2])));
      });
      return s;
    });
  });

  c.run("ric.E-Ric-K", [&](CheckResult& r) {
    if (!gate(c, r, prop10)) return;
    r.tolerance = c.tol_for(r.name, ctol);
    sweep(r, c.pts, [&](const Point<double>& p) {
      const Tensor<double> gi = geo.ginv(p), A = geo.A(p), E = field_E(geo, p);
      Tensor<double> rhs = ric_P_hat(geo, p) - k_frobenius(gi, A);
      for (int a = 0; a < n; ++a)
        for (int d = 0; d < n; ++d)
          for (int e = 0; e < n; ++e) rhs(a, d) += A(a, d, e) * E(e);
      return frame_max(geo.g(p), ric_P(geo, p) - rhs);
    });
  });

  c.run("ric.conjugate", [&](CheckResult& r) {
    if (!gate(c, r, prop10)) return;
    r.tolerance = c.tol_for(r.name, ctol);
    sweep(r, c.pts, [&](const Point<double>& p) {
      return frame_max(geo.g(p), ric_P(geo, p, Variant::bar) - ric_P(geo, p));
    });
  });

  c.run("conjugate.curvature_sum", [&](CheckResult& r) {
    r.status = Status::info;
    r.tolerance = ctol;
    sweep(r, c.pts, [&](const Point<double>& p) {
      const Tensor<double> s = curvature(geo, p) + curvature(geo, p, Variant::bar) - curvature(geo, p, Variant::hat) * 2.0;
      return frame_max(geo.g(p), s);
    });
    r.note = r.residual <= ctol ? "relation holds here" : "relation fails here; the conjugate carries +[K,K]";
  });

  c.run("conjugate.curvature_dual", [&](CheckResult& r) {
    if (!gate(c, r, prop10)) return;
    r.tolerance = c.tol_for(r.name, ctol);
    sweep(r, c.pts, [&](const Point<double>& p) {
      const Tensor<double> R = curvature(geo, p), Rb = curvature(geo, p, Variant::bar);
      Tensor<double> s(n, 4);
      for_each_index(n, 4, [&](const int* I) { s.at(I) = R.at(I) + Rb(I[0], I[1], I[3], I[2]); });
      return frame_max(geo.g(p), s);
    });
  });

  const auto matrix_sweep = [&](CheckResult& r, auto&& fn) {
    sweep(r, thin(c.pts, 256), [&](const Point<double>& p) {
      const BivectorMatrices B = bivector_ops(geo, p);
      double s = 0.0;
      for (int be = 0; be < B.size; ++be)
        for (int al = 0; al < B.size; ++al) s = std::max(s, std::abs(fn(B, be, al)));
      return s;
    });
  };

  c.run("bivector.K_symmetric", [&](CheckResult& r) {
    if (!gate(c, r, {kStat})) return;
    r.tolerance = c.tol_for(r.name, ctol);
    matrix_sweep(r, [](const BivectorMatrices& B, int be, int al) { return B.at(B.K, be, al) - B.at(B.K, al, be); });
  });

  c.run("lmab+", [&](CheckResult& r) {
    if (!gate(c, r, prop10)) return;
    r.tolerance = c.tol_for(r.name, ctol);
    sweep(r, thin(c.pts, 256), [&](const Point<double>& p) {
      const Tensor<double> g = geo.g(p), gi = geo.ginv(p), F = orthonormal_frame(g);
      const Tensor<double> Rl = curvature(geo, p);
      double s = 0.0;
      for (const auto& [i, j] : bivector_pairs(n)) {
        const Tensor<double> L = bivector_endo(gi, Rl, F, i, j);
        // <L e_u, e_v> + <L e_v, e_u> in the frame
        for (int u = 0; u < n; ++u)
          for (int v = 0; v < n; ++v) {
            double t = 0.0;
            for (int a = 0; a < n; ++a)
              for (int b = 0; b < n; ++b)
                for (int d = 0; d < n; ++d)
                  t += (F(u, a) * F(v, b) + F(v, a) * F(u, b)) * L(a, d) * g(d, b);
            s = std::max(s, std::abs(t));
          }
      }
      return s;
    });
  });

  c.run("lemma4", [&](CheckResult& r) {
    if (!gate(c, r, prop10)) return;
    r.tolerance = c.tol_for(r.name, ctol);
    matrix_sweep(r, [](const BivectorMatrices& B, int be, int al) {
      return B.at(B.RP, be, al) - (B.at(B.RPhat, be, al) - B.at(B.K, be, al));
    });
  });

  c.run("wei.methods", [&](CheckResult& r) {
    if (!gate(c, r, prop10)) return;
    r.tolerance = c.tol_for(r.name, c.analytic() ? c.tol.methods : ctol);
    Rng rng = c.rng(r.name);
    for (int k : c.degrees) {
      if (k < 1) continue;
      const RandomForm w = RandomForm::draw(c.m, k, rng);
      sweep(r, thin(c.pts, 256), [&](const Point<double>& p) {
        const Tensor<double> g = geo.g(p), wv = w(p);
        const Tensor<double> direct = weitzenbock_direct(geo, w, p);
        return std::max(frame_max(g, direct - weitzenbock_coordinate(geo, wv, p)),
                        frame_max(g, direct - weitzenbock_basis(geo, wv, p)));
      });
    }
  });

  c.run("wei.one_form", [&](CheckResult& r) {
    if (!gate(c, r, {kStat, kFrakD})) return;
    r.tolerance = c.tol_for(r.name, ctol);
    Rng rng = c.rng(r.name);
    const RandomForm w = RandomForm::draw(c.m, 1, rng);
    sweep(r, thin(c.pts, 256), [&](const Point<double>& p) {
      const Tensor<double> gi = geo.ginv(p), Ric = ric_P(geo, p), wv = w(p);
      Tensor<double> rhs(n, 1);
      for (int a = 0; a < n; ++a)
        for (int u = 0; u < n; ++u)
          for (int x = 0; x < n; ++x) rhs(a) += Ric(a, u) * gi(u, x) * wv(x);
      return frame_max(geo.g(p), weitzenbock_direct(geo, w, p) - rhs);
    });
  });

  c.run("ric_hat_ric", [&](CheckResult& r) {
    if (!gate(c, r, {kStat, kFrakD, kDiv2, kCodazzi})) return;
    r.tolerance = c.tol_for(r.name, ctol);
    Rng rng = c.rng(r.name);
    for (int k : c.degrees) {
      if (k < 1) continue;
      const RandomForm w = RandomForm::draw(c.m, k, rng);
      sweep(r, thin(c.pts, 256), [&](const Point<double>& p) {
        const Tensor<double> wv = w(p);
        const Tensor<double> lhs = weitzenbock_coordinate(geo, wv, p);
        const Tensor<double> rhs = weitzenbock_coordinate(geo, wv, p, Variant::hat) - frak_K(geo, wv, p);
        return frame_max(geo.g(p), lhs - rhs);
      });
    }
  });

  c.run("frakK.k1", [&](CheckResult& r) {
    r.tolerance = c.tol_for(r.name, c.tol.frak_k);
    Rng rng = c.rng(r.name);
    const RandomForm w = RandomForm::draw(c.m, 1, rng);
    sweep(r, c.pts, [&](const Point<double>& p) {
      const Tensor<double> g = geo.g(p), gi = geo.ginv(p), K = geo.K(p), wv = w(p);
      const Tensor<double> ws = raise(gi, wv);
      // M^c_i = (K_{w#})^c_i, |M|^2 = g_cd g^ij M^c_i M^d_j
      Tensor<double> M(n, 2);
      for (int i = 0; i < n; ++i)
        for (int cc = 0; cc < n; ++cc)
          for (int a = 0; a < n; ++a) M(i, cc) += ws(a) * K(a, i, cc);
      double norm = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int cc = 0; cc < n; ++cc)
            for (int d = 0; d < n; ++d) norm += g(cc, d) * gi(i, j) * M(i, cc) * M(j, d);
      const double lhs = metric_dot(gi, frak_K(geo, wv, p), wv);
      return std::abs(lhs - norm) / std::max(1.0, norm);
    });
  });
}

}  // namespace bochner::detail
