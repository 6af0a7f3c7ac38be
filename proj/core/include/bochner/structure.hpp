#pragma once

#include <string>
#include <vector>

#include "bochner/chart.hpp"

namespace bochner {

/// A registry name with numeric arguments, e.g. K-cubic(1,0).
struct NamedSpec {
  std::string name;
  std::vector<double> args;

  std::string str() const;
};

NamedSpec parse_named_spec(const std::string& s);

/// The pair (P, K). P is stored as P(b, a) = P^a_b; K through its lowered
/// cubic form A(a, b, c) = <K_{d_a} d_b, d_c>.
struct PStructure {
  NamedSpec p_spec;
  NamedSpec k_spec;
  bool conjugated = false;
  int dim = 0;
  Field P;
  Field A;

  std::string name() const;
};

/// Builds (P, K) on a manifold. Contorsions defined through derivatives of P
/// (K-grad, K-divP, K-divsym) differentiate with `diff`.
PStructure make_structure(const Manifold& m, const NamedSpec& p, const NamedSpec& k, const Diff& diff = {});

/// Contorsion -K* (A'(a,b,c) = -A(a,c,b)); an exact involution.
PStructure conjugate(const PStructure& ps);

struct CatalogEntry {
  std::string name;
  std::string params;
  std::string summary;
};
std::vector<CatalogEntry> p_catalog();
std::vector<CatalogEntry> k_catalog();

enum class Variant { plain, bar, hat };

/// Manifold, structure and backend bundled for operator evaluation. Holds
/// references; both must outlive the Geometry.
class Geometry {
 public:
  Geometry(const Manifold& m, const PStructure& ps, Diff diff = {}) : m_(&m), ps_(&ps), diff_(diff) {}

  const Manifold& manifold() const { return *m_; }
  const PStructure& structure() const { return *ps_; }
  const Diff& diff() const { return diff_; }
  int dim() const { return m_->dim; }

  template <class T> Tensor<T> g(const Point<T>& p) const { return m_->metric(p); }
  template <class T> Tensor<T> ginv(const Point<T>& p) const { return inverse(m_->metric(p)); }
  template <class T> Tensor<T> P(const Point<T>& p) const { return ps_->P(p); }
  template <class T> Tensor<T> christoffel(const Point<T>& p) const { return bochner::christoffel(*m_, diff_, p); }

  /// Cubic form of the variant's contorsion: K, -K* or 0.
  template <class T>
  Tensor<T> A(const Point<T>& p, Variant v = Variant::plain) const {
    const int n = dim();
    if (v == Variant::hat) return Tensor<T>(n, 3);
    Tensor<T> a = ps_->A(p);
    if (v == Variant::plain) return a;
    Tensor<T> b(n, 3);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) b(i, j, k) = -a(i, k, j);
    return b;
  }

  /// K^c_{ab} stored (a, b, c).
  template <class T>
  Tensor<T> K(const Point<T>& p, Variant v = Variant::plain) const {
    const int n = dim();
    const Tensor<T> a = A(p, v);
    const Tensor<T> gi = ginv(p);
    Tensor<T> k(n, 3, true);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int c = 0; c < n; ++c) {
          T s(0.0);
          for (int d = 0; d < n; ++d) s += gi(c, d) * a(i, j, d);
          k(i, j, c) = s;
        }
    return k;
  }

  /// Connection coefficients C^c_{ai} = P^b_a Gamma^c_{bi} + K^c_{ai}, stored (a, i, c).
  template <class T>
  Tensor<T> conn(const Point<T>& p, Variant v = Variant::plain) const {
    const int n = dim();
    const Tensor<T> Pm = P(p);
    const Tensor<T> G = christoffel(p);
    Tensor<T> C = K(p, v);
    for (int a = 0; a < n; ++a)
      for (int i = 0; i < n; ++i)
        for (int c = 0; c < n; ++c)
          for (int b = 0; b < n; ++b) C(a, i, c) += Pm(a, b) * G(b, i, c);
    return C;
  }

  /// nabla^P S with the direction in slot 0.
  template <class F, class T>
  Tensor<T> nabla(const F& S, const Point<T>& p, Variant v = Variant::plain) const {
    return connection_apply(S(p), gradient(diff_, S, p), P(p), conn(p, v));
  }

  /// Levi-Civita derivative.
  template <class F, class T>
  Tensor<T> lc(const F& S, const Point<T>& p) const {
    return lc_derivative(*m_, diff_, S, p);
  }

 private:
  const Manifold* m_;
  const PStructure* ps_;
  Diff diff_;
};

/// Coframe theta(i, a) = <e_i, d_a>.
template <class T>
Tensor<T> coframe(const Tensor<T>& g, const Tensor<T>& frame) {
  const int n = g.n();
  Tensor<T> th(n, 2);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) th(i, a) += g(a, b) * frame(i, b);
  return th;
}

}  // namespace bochner
