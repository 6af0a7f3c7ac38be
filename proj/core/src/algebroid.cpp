#include "bochner/algebroid.hpp"

namespace bochner {

AnchoredBracket tangent_algebroid(const Manifold& m, const Diff& diff) {
  const int n = m.dim;
  AnchoredBracket ab;
  ab.name = "TM";
  ab.dim = n;
  ab.diff = diff;
  ab.anchor = Field::from([n](const auto& p) { return identity_endo<scalar_of<decltype(p)>>(n); });
  ab.structure = Field::from([n](const auto& p) { return Tensor<scalar_of<decltype(p)>>(n, 3, true); });
  return ab;
}

namespace {

// Owns copies so that fields built on a Geometry outlive the caller's objects.
struct GeometryHolder {
  Manifold m;
  PStructure ps;
  Geometry geo;
  GeometryHolder(const Manifold& m_, const PStructure& ps_, const Diff& d) : m(m_), ps(ps_), geo(m, ps, d) {}
};

}  // namespace

AnchoredBracket p_algebroid(const Manifold& m, const PStructure& ps, const Diff& diff, Variant v) {
  auto h = std::make_shared<GeometryHolder>(m, ps, diff);
  AnchoredBracket ab;
  ab.name = "P(" + ps.name() + ")";
  ab.dim = m.dim;
  ab.diff = diff;
  ab.anchor = ps.P;
  ab.structure = Field::from<2>([h, v](const auto& p) {
    using T = scalar_of<decltype(p)>;
    const Tensor<T> C = h->geo.conn(p, v);
    const int n = C.n();
    Tensor<T> B(n, 3, true);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) B(a, b, c) = C(a, b, c) - C(b, a, c);
    return B;
  });
  return ab;
}

RhoConnection p_rho_connection(const Manifold& m, const PStructure& ps, const Diff& diff, Variant v) {
  auto h = std::make_shared<GeometryHolder>(m, ps, diff);
  RhoConnection nc;
  nc.derivation = ps.P;
  nc.coeff = Field::from<2>([h, v](const auto& p) { return h->geo.conn(p, v); });
  return nc;
}

std::string_view to_string(AlgebroidClass c) {
  switch (c) {
    case AlgebroidClass::lie: return "lie";
    case AlgebroidClass::skew_symmetric: return "skew-symmetric";
    case AlgebroidClass::almost: return "almost";
  }
  return "almost";
}

}  // namespace bochner
