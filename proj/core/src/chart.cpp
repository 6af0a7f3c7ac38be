#include "bochner/chart.hpp"

#include <cmath>
#include <numbers>

namespace bochner {

std::string_view to_string(Backend b) { return b == Backend::analytic ? "analytic" : "fd"; }

Backend backend_from_string(std::string_view s) {
  if (s == "analytic") return Backend::analytic;
  if (s == "fd") return Backend::fd;
  throw Error(ErrorKind::config, "unknown backend '" + std::string(s) + "'");
}

std::vector<std::string> list_metric_kinds() {
  return {"flat (dim n; no params)", "round-sphere (dim 2; params [radius=1])",
          "warped-torus (dim 2; params [a=2, b=1], g = dx^2 + (a + b cos x)^2 dy^2)"};
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double param(const std::vector<double>& p, std::size_t i, double dflt) { return i < p.size() ? p[i] : dflt; }

}  // namespace

Manifold make_manifold(const std::string& name, const std::string& kind, int dim, const std::vector<double>& params) {
  Manifold m;
  m.name = name;
  m.kind = kind;
  m.params = params;
  m.dim = dim;
  if (kind == "flat") {
    if (dim < 1 || dim > kMaxDim) throw Error(ErrorKind::config, name + ": flat torus dimension must be 1..3");
    m.domain.assign(static_cast<std::size_t>(dim), CoordRange{0.0, kTwoPi, true});
    m.rules.assign(static_cast<std::size_t>(dim), Rule::trapezoid);
    m.metric = Field::from([dim](const auto& p) {
      using T = typename std::decay_t<decltype(p.x)>::value_type;
      Tensor<T> g(dim, 2);
      for (int a = 0; a < dim; ++a) g(a, a) = T(1.0);
      return g;
    });
  } else if (kind == "round-sphere") {
    if (dim != 2) throw Error(ErrorKind::config, name + ": round-sphere is 2-dimensional");
    const double r = param(params, 0, 1.0);
    if (!(r > 0.0)) throw Error(ErrorKind::config, name + ": radius must be positive");
    m.domain = {CoordRange{0.0, std::numbers::pi, false}, CoordRange{0.0, kTwoPi, true}};
    m.rules = {Rule::gauss_legendre, Rule::trapezoid};
    m.sample = {CoordRange{0.1, std::numbers::pi - 0.1, false}, CoordRange{0.0, kTwoPi, true}};
    m.metric = Field::from([r](const auto& p) {
      using T = typename std::decay_t<decltype(p.x)>::value_type;
      Tensor<T> g(2, 2);
      const T s = sin(p[0]);
      g(0, 0) = T(r * r);
      g(1, 1) = (r * r) * s * s;
      return g;
    });
  } else if (kind == "warped-torus") {
    if (dim != 2) throw Error(ErrorKind::config, name + ": warped-torus is 2-dimensional");
    const double a = param(params, 0, 2.0);
    const double b = param(params, 1, 1.0);
    if (!(std::abs(b) < a)) throw Error(ErrorKind::config, name + ": warped-torus needs |b| < a");
    m.domain.assign(2, CoordRange{0.0, kTwoPi, true});
    m.rules.assign(2, Rule::trapezoid);
    m.metric = Field::from([a, b](const auto& p) {
      using T = typename std::decay_t<decltype(p.x)>::value_type;
      Tensor<T> g(2, 2);
      const T w = a + b * cos(p[0]);
      g(0, 0) = T(1.0);
      g(1, 1) = w * w;
      return g;
    });
  } else {
    throw Error(ErrorKind::config, name + ": unknown metric kind '" + kind + "'");
  }
  if (m.sample.empty()) m.sample = m.domain;
  return m;
}

ManifoldRegistry ManifoldRegistry::builtin() {
  ManifoldRegistry r;
  r.add(make_manifold("T2-flat", "flat", 2));
  r.add(make_manifold("S2-round", "round-sphere", 2));
  r.add(make_manifold("T3-flat", "flat", 3));
  r.add(make_manifold("T2-warped", "warped-torus", 2));
  return r;
}

void ManifoldRegistry::add(Manifold m) {
  const std::string key = m.name;
  if (!items_.count(key)) order_.push_back(key);
  items_[key] = std::move(m);
}

const Manifold& ManifoldRegistry::get(const std::string& name) const {
  auto it = items_.find(name);
  if (it == items_.end()) throw Error(ErrorKind::config, "unknown fixture '" + name + "'");
  return it->second;
}

std::vector<std::string> ManifoldRegistry::names() const { return order_; }

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[static_cast<std::size_t>(i)] = -z;
    x[static_cast<std::size_t>(n - 1 - i)] = z;
    const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
    w[static_cast<std::size_t>(i)] = wi;
    w[static_cast<std::size_t>(n - 1 - i)] = wi;
  }
}

namespace {

void rule_nodes(const CoordRange& r, Rule rule, int G, std::vector<double>& x, std::vector<double>& w) {
  if (rule == Rule::gauss_legendre) {
    gauss_legendre(G, x, w);
    const double half = 0.5 * (r.hi - r.lo);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = r.lo + half * (x[i] + 1.0);
      w[i] *= half;
    }
    return;
  }
  const double h = (r.hi - r.lo) / G;
  x.resize(static_cast<std::size_t>(G));
  w.assign(static_cast<std::size_t>(G), h);
  for (int i = 0; i < G; ++i) x[static_cast<std::size_t>(i)] = r.lo + h * i;
}

}  // namespace

QuadGrid quadrature_grid(const Manifold& m, int G) {
  if (G < 2) throw Error(ErrorKind::config, "quadrature grid must be at least 2");
  std::vector<std::vector<double>> xs(static_cast<std::size_t>(m.dim)), ws(static_cast<std::size_t>(m.dim));
  for (int d = 0; d < m.dim; ++d)
    rule_nodes(m.domain[static_cast<std::size_t>(d)], m.rules[static_cast<std::size_t>(d)], G,
               xs[static_cast<std::size_t>(d)], ws[static_cast<std::size_t>(d)]);
  QuadGrid q;
  for_each_index(G, m.dim, [&](const int* I) {
    Point<double> p;
    p.n = m.dim;
    double w = 1.0;
    for (int d = 0; d < m.dim; ++d) {
      p[d] = xs[static_cast<std::size_t>(d)][static_cast<std::size_t>(I[d])];
      w *= ws[static_cast<std::size_t>(d)][static_cast<std::size_t>(I[d])];
    }
    q.points.push_back(p);
    q.weights.push_back(w);
  });
  return q;
}

std::vector<Point<double>> sample_grid(const Manifold& m, int G) {
  std::vector<Point<double>> pts;
  for_each_index(G, m.dim, [&](const int* I) {
    Point<double> p;
    p.n = m.dim;
    for (int d = 0; d < m.dim; ++d) {
      const CoordRange& r = m.sample[static_cast<std::size_t>(d)];
      // periodic samples are shifted off the symmetric points (k pi / 4), where
      // trigonometric fixtures vanish by coincidence
      const double t = r.periodic ? (I[d] + 0.3 + 0.17 * d) / G : (G > 1 ? static_cast<double>(I[d]) / (G - 1) : 0.5);
      p[d] = r.lo + (r.hi - r.lo) * t;
    }
    pts.push_back(p);
  });
  return pts;
}

double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

}  // namespace bochner
