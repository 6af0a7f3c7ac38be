#pragma once

#include <map>
#include <string>
#include <vector>

#include "bochner/diff.hpp"
#include "bochner/errors.hpp"
#include "bochner/field.hpp"
#include "bochner/linalg.hpp"
#include "bochner/tensor_ops.hpp"

namespace bochner {

struct CoordRange {
  double lo = 0.0;
  double hi = 0.0;
  bool periodic = false;
};

/// Quadrature rule per coordinate: periodic trapezoid or Gauss-Legendre.
enum class Rule { trapezoid, gauss_legendre };

/// A model manifold given by one (possibly periodic) chart.
struct Manifold {
  std::string name;
  std::string kind;  // built-in metric expression: flat, round-sphere, warped-torus
  std::vector<double> params;
  int dim = 0;
  std::vector<CoordRange> domain;
  /// Sub-box used for pointwise sample grids (keeps away from chart poles).
  std::vector<CoordRange> sample;
  std::vector<Rule> rules;
  Field metric;  // (0,2)
  bool closed = true;
};

/// Built-in metric expressions; `params` as documented in list_metric_kinds().
Manifold make_manifold(const std::string& name, const std::string& kind, int dim,
                       const std::vector<double>& params = {});

class ManifoldRegistry {
 public:
  /// T2-flat, S2-round, T3-flat, T2-warped.
  static ManifoldRegistry builtin();

  void add(Manifold m);
  const Manifold& get(const std::string& name) const;
  bool contains(const std::string& name) const { return items_.count(name) != 0; }
  std::vector<std::string> names() const;

 private:
  std::map<std::string, Manifold> items_;
  std::vector<std::string> order_;
};

std::vector<std::string> list_metric_kinds();

template <class T>
void check_domain(const Manifold& m, const Point<T>& p) {
  for (int i = 0; i < m.dim; ++i) {
    const auto& r = m.domain[static_cast<std::size_t>(i)];
    const double v = value_of(p[i]);
    if (!r.periodic && (v < r.lo - 1e-12 || v > r.hi + 1e-12))
      throw Error(ErrorKind::domain, m.name + ": coordinate " + std::to_string(i) + " outside chart domain");
  }
}

template <class T>
Tensor<T> metric_at(const Manifold& m, const Point<T>& p) {
  return m.metric(p);
}

template <class T>
Tensor<T> inverse_metric_at(const Manifold& m, const Point<T>& p) {
  return inverse(m.metric(p));
}

/// Gamma^c_{ab}, stored (a, b, c).
template <class T>
Tensor<T> christoffel(const Manifold& m, const Diff& diff, const Point<T>& p) {
  check_domain(m, p);
  const int n = m.dim;
  const Tensor<T> ginv = inverse(m.metric(p));
  const auto dg = gradient(diff, m.metric, p);
  Tensor<T> G(n, 3, true);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        T s(0.0);
        for (int d = 0; d < n; ++d)
          s += ginv(c, d) * (dg[static_cast<std::size_t>(a)](b, d) + dg[static_cast<std::size_t>(b)](a, d) -
                             dg[static_cast<std::size_t>(d)](a, b));
        G(a, b, c) = 0.5 * s;
      }
  return G;
}

/// Covariant derivative kernel shared by every connection in the library.
///
/// Given S and its coordinate partials dS[b], a direction map D (the slot-0
/// derivative is taken along D(a,b) d_b) and connection coefficients C(a,i,c)
/// = C^c_{ai}, returns (nabla S)(a, I) = D(a,b) d_b S_I - sum_j C^e_{a i_j}
/// S_{..e..} (+ C^c_{a e} S^e for a contravariant last slot).
template <class T>
Tensor<T> connection_apply(const Tensor<T>& S, const std::vector<Tensor<T>>& dS, const Tensor<T>& D,
                           const Tensor<T>& C) {
  const int n = D.n();
  const int rank = S.rank();
  const int cov = S.covariant();
  Tensor<T> out(n, rank + 1, S.up());
  std::array<int, 8> J{};
  for_each_index(n, rank + 1, [&](const int* AI) {
    const int a = AI[0];
    const int* I = AI + 1;
    T acc(0.0);
    for (int b = 0; b < n; ++b) acc += D(a, b) * dS[static_cast<std::size_t>(b)].at(I);
    for (int k = 0; k < rank; ++k) J[static_cast<std::size_t>(k)] = I[k];
    for (int j = 0; j < cov; ++j) {
      for (int e = 0; e < n; ++e) {
        J[static_cast<std::size_t>(j)] = e;
        acc -= C(a, I[j], e) * S.at(J.data());
      }
      J[static_cast<std::size_t>(j)] = I[j];
    }
    if (S.up()) {
      const int c = I[rank - 1];
      for (int e = 0; e < n; ++e) {
        J[static_cast<std::size_t>(rank - 1)] = e;
        acc += C(a, e, c) * S.at(J.data());
      }
    }
    out.at(AI) = acc;
  });
  return out;
}

template <class T>
Tensor<T> identity_endo(int n) {
  Tensor<T> r(n, 2, true);
  for (int a = 0; a < n; ++a) r(a, a) = T(1.0);
  return r;
}

/// Levi-Civita derivative of a tensor field callable; slot 0 is the direction.
template <class F, class T>
Tensor<T> lc_derivative(const Manifold& m, const Diff& diff, const F& S, const Point<T>& p) {
  return connection_apply(S(p), gradient(diff, S, p), identity_endo<T>(m.dim), christoffel(m, diff, p));
}

/// Partials of the Christoffel symbols, element f is d_f Gamma stored (a, b, c),
/// from second metric partials; the fd backend never differentiates Gamma itself,
/// whose 1/sin terms near a pole would amplify the truncation error.
template <class T>
std::vector<Tensor<T>> christoffel_gradient(const Manifold& m, const Diff& diff, const Point<T>& p) {
  const int n = m.dim;
  const Tensor<T> ginv = inverse(m.metric(p));
  const Tensor<T> G = christoffel(m, diff, p);
  const auto dg = gradient(diff, m.metric, p);
  std::vector<std::vector<Tensor<T>>> H;
  for (int a = 0; a < n; ++a) {
    auto dga = [&m, &diff, a](const auto& q) { return partial(diff, m.metric, q, a); };
    H.push_back(gradient(diff, dga, p));
  }
  // d2g(f, x, i, j) = d_f d_x g_ij
  const auto d2g = [&H](int f, int x, int i, int j) {
    return H[static_cast<std::size_t>(x)][static_cast<std::size_t>(f)](i, j);
  };
  std::vector<Tensor<T>> out;
  for (int f = 0; f < n; ++f) {
    const Tensor<T>& dgf = dg[static_cast<std::size_t>(f)];
    Tensor<T> low(n, 3);  // (a, b, d): d_f Gamma_{dab} - d_f g_{de} Gamma^e_{ab}
    for_each_index(n, 3, [&](const int* I) {
      const int a = I[0], b = I[1], d = I[2];
      T s = 0.5 * (d2g(f, a, b, d) + d2g(f, b, a, d) - d2g(f, d, a, b));
      for (int e = 0; e < n; ++e) s -= dgf(d, e) * G(a, b, e);
      low.at(I) = s;
    });
    Tensor<T> dG(n, 3, true);
    for_each_index(n, 3, [&](const int* I) {
      T s(0.0);
      for (int d = 0; d < n; ++d) s += ginv(I[2], d) * low(I[0], I[1], d);
      dG.at(I) = s;
    });
    out.push_back(std::move(dG));
  }
  return out;
}

/// R^d_{abc} (R_{d_a,d_b} d_c = R^d_{abc} d_d), stored (a, b, c, d).
template <class T>
Tensor<T> riemann_up(const Manifold& m, const Diff& diff, const Point<T>& p) {
  const int n = m.dim;
  const Tensor<T> G = christoffel(m, diff, p);
  const auto dG = christoffel_gradient(m, diff, p);
  Tensor<T> R(n, 4, true);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          T s = dG[static_cast<std::size_t>(a)](b, c, d) - dG[static_cast<std::size_t>(b)](a, c, d);
          for (int e = 0; e < n; ++e) s += G(a, e, d) * G(b, c, e) - G(b, e, d) * G(a, c, e);
          R(a, b, c, d) = s;
        }
  return R;
}

/// R_{abcd} = <R_{d_a,d_b} d_c, d_d>.
template <class T>
Tensor<T> riemann(const Manifold& m, const Diff& diff, const Point<T>& p) {
  const int n = m.dim;
  const Tensor<T> Ru = riemann_up(m, diff, p);
  const Tensor<T> g = m.metric(p);
  Tensor<T> R(n, 4, false);
  for_each_index(n, 4, [&](const int* I) {
    T s(0.0);
    for (int e = 0; e < n; ++e) s += g(I[3], e) * Ru(I[0], I[1], I[2], e);
    R.at(I) = s;
  });
  return R;
}

/// Classical divergence d_a X^a + Gamma^a_{ab} X^b.
template <class F, class T>
T divergence(const Manifold& m, const Diff& diff, const F& X, const Point<T>& p) {
  const Tensor<T> nX = lc_derivative(m, diff, X, p);
  T s(0.0);
  for (int a = 0; a < m.dim; ++a) s += nX(a, a);
  return s;
}

/// Orthonormal frame by Gram-Schmidt in coordinate order; frame(i, a) = e_i^a.
template <class T>
Tensor<T> orthonormal_frame(const Tensor<T>& g) {
  const int n = g.n();
  if (!(std::abs(value_of(det(g))) > 1e-14)) throw Error(ErrorKind::degenerate_metric, "degenerate metric: det g <= eps");
  Tensor<T> E(n, 2, true);
  for (int i = 0; i < n; ++i) {
    std::array<T, kMaxDim> v{};
    v[static_cast<std::size_t>(i)] = T(1.0);
    for (int j = 0; j < i; ++j) {
      T dot(0.0);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) dot += g(a, b) * v[static_cast<std::size_t>(a)] * E(j, b);
      for (int a = 0; a < n; ++a) v[static_cast<std::size_t>(a)] -= dot * E(j, a);
    }
    T nn(0.0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) nn += g(a, b) * v[static_cast<std::size_t>(a)] * v[static_cast<std::size_t>(b)];
    const T len = sqrt(nn);
    for (int a = 0; a < n; ++a) E(i, a) = v[static_cast<std::size_t>(a)] / len;
  }
  return E;
}

/// Unit bivectors e_i ^ e_j (i < j) as skew endomorphisms, stored L(b, a) =
/// (L d_b)^a, with (A ^ B)Z = <B,Z>A - <A,Z>B.
template <class T>
std::vector<Tensor<T>> so_basis(const Tensor<T>& g, const Tensor<T>& frame) {
  const int n = g.n();
  std::vector<Tensor<T>> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Tensor<T> L(n, 2, true);
      for (int b = 0; b < n; ++b) {
        T ei_b(0.0), ej_b(0.0);
        for (int c = 0; c < n; ++c) {
          ei_b += g(b, c) * frame(i, c);
          ej_b += g(b, c) * frame(j, c);
        }
        for (int a = 0; a < n; ++a) L(b, a) = ej_b * frame(i, a) - ei_b * frame(j, a);
      }
      out.push_back(std::move(L));
    }
  return out;
}

/// Tensor product grid with weights (coordinate measure, without sqrt det g).
struct QuadGrid {
  std::vector<Point<double>> points;
  std::vector<double> weights;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

QuadGrid quadrature_grid(const Manifold& m, int G);

/// Pointwise sample grid: G points per coordinate over m.sample.
std::vector<Point<double>> sample_grid(const Manifold& m, int G);

/// Pairwise (cascade) summation; reproducible for a fixed input order.
double pairwise_sum(const double* v, std::size_t n);
inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

/// Integral of a scalar function of the point against dvol_g.
template <class F>
double integrate(const Manifold& m, const F& f, int G) {
  if (!m.closed) throw Error(ErrorKind::unsupported_domain, m.name + ": integration needs a closed fixture");
  const QuadGrid q = quadrature_grid(m, G);
  std::vector<double> terms(q.points.size());
  for (std::size_t i = 0; i < q.points.size(); ++i) {
    const Point<double>& p = q.points[i];
    const double vol = std::sqrt(std::max(0.0, det(m.metric(p))));
    terms[i] = vol == 0.0 ? 0.0 : q.weights[i] * vol * static_cast<double>(f(p));
  }
  return pairwise_sum(terms);
}

}  // namespace bochner
