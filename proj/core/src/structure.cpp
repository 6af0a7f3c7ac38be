#include "bochner/structure.hpp"

#include <cstdio>
#include <sstream>

namespace bochner {

namespace {

std::string format_arg(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

/// Coordinate components of a cubic form given in orthonormal-frame components.
template <class T>
Tensor<T> from_frame3(const Tensor<T>& g, const Tensor<double>& hatA) {
  const int n = g.n();
  const Tensor<T> th = coframe(g, orthonormal_frame(g));
  Tensor<T> A(n, 3);
  for_each_index(n, 3, [&](const int* I) {
    T s(0.0);
    for_each_index(n, 3, [&](const int* J) {
      const double c = hatA.at(J);
      if (c != 0.0) s += c * th(J[0], I[0]) * th(J[1], I[1]) * th(J[2], I[2]);
    });
    A.at(I) = s;
  });
  return A;
}

template <class T>
Tensor<T> from_frame1(const Tensor<T>& g, const std::vector<double>& hatV) {
  const int n = g.n();
  const Tensor<T> th = coframe(g, orthonormal_frame(g));
  Tensor<T> v(n, 1);
  for (int c = 0; c < n; ++c)
    for (int i = 0; i < n && i < static_cast<int>(hatV.size()); ++i) v(c) += hatV[static_cast<std::size_t>(i)] * th(i, c);
  return v;
}

void require_args(const NamedSpec& s, std::size_t lo, std::size_t hi) {
  if (s.args.size() < lo || s.args.size() > hi)
    throw Error(ErrorKind::config, "wrong number of parameters for '" + s.str() + "'");
}

Field make_p(const Manifold& m, const NamedSpec& s) {
  const int n = m.dim;
  const std::string& k = s.name;
  if (k == "P-id") {
    require_args(s, 0, 0);
    return Field::from([n](const auto& p) { return identity_endo<scalar_of<decltype(p)>>(n); });
  }
  if (k == "P-proj") {
    require_args(s, 0, 0);
    if (n < 2) throw Error(ErrorKind::config, "P-proj needs dimension >= 2");
    return Field::from([n](const auto& p) {
      using T = scalar_of<decltype(p)>;
      Tensor<T> P = identity_endo<T>(n);
      P(n - 1, n - 1) = T(0.0);
      return P;
    });
  }
  if (k == "J-rot") {
    require_args(s, 0, 0);
    if (n != 2) throw Error(ErrorKind::config, "J-rot is defined for dimension 2");
    Field metric = m.metric;
    return Field::from([metric](const auto& p) {
      using T = scalar_of<decltype(p)>;
      const Tensor<T> g = metric(p);
      const Tensor<T> e = orthonormal_frame(g);
      const Tensor<T> th = coframe(g, e);
      Tensor<T> P(2, 2, true);
      for (int b = 0; b < 2; ++b)
        for (int a = 0; a < 2; ++a) P(b, a) = e(1, a) * th(0, b) - e(0, a) * th(1, b);
      return P;
    });
  }
  if (k == "P-sing" || k == "P-wave" || k == "P-tilt") {
    if (n != 2) throw Error(ErrorKind::config, k + " is defined for dimension 2");
    require_args(s, k == "P-tilt" ? 1 : 0, k == "P-tilt" ? 1 : 0);
    const double eps = s.args.empty() ? 0.0 : s.args[0];
    const int which = k == "P-sing" ? 0 : (k == "P-wave" ? 1 : 2);
    return Field::from([which, eps](const auto& p) {
      using T = scalar_of<decltype(p)>;
      Tensor<T> P(2, 2, true);
      if (which == 0) {
        const T sx = sin(p[0]);
        P(0, 0) = T(1.0);
        P(1, 1) = sx * sx;
      } else if (which == 1) {
        P(0, 0) = cos(p[1]);
        P(1, 1) = cos(p[0]);
      } else {
        P(0, 0) = 1.0 + eps * sin(p[0]);
        P(1, 1) = T(1.0);
      }
      return P;
    });
  }
  if (k == "P-contact") {
    require_args(s, 0, 0);
    if (n != 3) throw Error(ErrorKind::config, "P-contact is defined for dimension 3");
    return Field::from([](const auto& p) {
      using T = scalar_of<decltype(p)>;
      Tensor<T> P(3, 2, true);
      P(0, 0) = T(1.0);
      P(1, 1) = T(1.0);
      P(1, 2) = sin(p[0]);
      return P;
    });
  }
  throw Error(ErrorKind::config, "unknown structure '" + k + "'");
}

Field make_k(const Manifold& m, const Field& Pf, const NamedSpec& s, const Diff& diff) {
  const int n = m.dim;
  const std::string& k = s.name;
  Field metric = m.metric;
  if (k == "K-0") {
    require_args(s, 0, 0);
    return Field::from([n](const auto& p) { return Tensor<scalar_of<decltype(p)>>(n, 3); });
  }
  if (k == "K-cubic" || k == "K-skew") {
    Tensor<double> hat(n, 3);
    if (k == "K-cubic") {
      require_args(s, 2, 2);
      if (n < 2) throw Error(ErrorKind::config, "K-cubic needs dimension >= 2");
      const double a = s.args[0], b = s.args[1];
      hat(0, 0, 0) = a;
      hat(0, 1, 1) = hat(1, 0, 1) = hat(1, 1, 0) = -a;
      hat(0, 0, 1) = hat(0, 1, 0) = hat(1, 0, 0) = b;
      hat(1, 1, 1) = -b;
    } else {
      require_args(s, 1, 1);
      if (n < 2) throw Error(ErrorKind::config, "K-skew needs dimension >= 2");
      hat(0, 0, 1) = s.args[0];
      hat(0, 1, 0) = -s.args[0];
    }
    return Field::from([metric, hat](const auto& p) { return from_frame3(metric(p), hat); });
  }
  if (k == "K-trace" || k == "K-trace-sin") {
    require_args(s, 1, static_cast<std::size_t>(n));
    const std::vector<double> V = s.args;
    const bool modulate = k == "K-trace-sin";
    return Field::from([metric, V, modulate, n](const auto& p) {
      using T = scalar_of<decltype(p)>;
      const Tensor<T> g = metric(p);
      const Tensor<T> v = from_frame1(g, V);
      const T f = modulate ? sin(p[0]) : T(1.0);
      Tensor<T> A(n, 3);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) A(a, b, c) = f * g(a, b) * v(c);
      return A;
    });
  }
  if (k == "K-grad" || k == "K-divP" || k == "K-divsym") {
    require_args(s, k == "K-grad" ? 1 : 0, k == "K-grad" ? 1 : 0);
    const double c = s.args.empty() ? 0.0 : s.args[0];
    const int which = k == "K-grad" ? 0 : (k == "K-divP" ? 1 : 2);
    return Field::from<kMaxFieldDepth - 1>([m, Pf, diff, c, which, n](const auto& p) {
      using T = scalar_of<decltype(p)>;
      const Tensor<T> g = m.metric(p);
      const Tensor<T> nP = lc_derivative(m, diff, Pf, p);  // (b, a, e) = (nabla_b P)^e_a
      Tensor<T> A(n, 3);
      if (which == 0) {
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int d = 0; d < n; ++d) {
              T acc(0.0);
              for (int e = 0; e < n; ++e) acc += g(d, e) * nP(b, a, e);
              A(a, b, d) = c * acc;
            }
        return A;
      }
      Tensor<T> alpha(n, 1);
      for (int b = 0; b < n; ++b)
        for (int a = 0; a < n; ++a) alpha(b) += nP(a, b, a);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int d = 0; d < n; ++d) {
            if (which == 1) {
              A(a, b, d) = alpha(b) * g(a, d);
            } else {
              A(a, b, d) = (g(a, b) * alpha(d) + g(a, d) * alpha(b) + g(b, d) * alpha(a)) * (1.0 / (n + 2));
            }
          }
      return A;
    });
  }
  throw Error(ErrorKind::config, "unknown contorsion '" + k + "'");
}

}  // namespace

std::string NamedSpec::str() const {
  if (args.empty()) return name;
  std::string s = name + "(";
  for (std::size_t i = 0; i < args.size(); ++i) s += (i ? "," : "") + format_arg(args[i]);
  return s + ")";
}

NamedSpec parse_named_spec(const std::string& s) {
  NamedSpec out;
  const auto open = s.find('(');
  if (open == std::string::npos) {
    out.name = s;
    return out;
  }
  if (s.back() != ')') throw Error(ErrorKind::config, "malformed spec '" + s + "'");
  out.name = s.substr(0, open);
  std::stringstream ss(s.substr(open + 1, s.size() - open - 2));
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.args.push_back(std::stod(tok, &used));
      if (used != tok.size() && tok.find_first_not_of(' ', used) != std::string::npos) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw Error(ErrorKind::config, "bad numeric parameter '" + tok + "' in '" + s + "'");
    }
  }
  return out;
}

std::string PStructure::name() const {
  return p_spec.str() + ":" + k_spec.str() + (conjugated ? "~conj" : "");
}

PStructure make_structure(const Manifold& m, const NamedSpec& p, const NamedSpec& k, const Diff& diff) {
  PStructure ps;
  ps.p_spec = p;
  ps.k_spec = k;
  ps.dim = m.dim;
  ps.P = make_p(m, p);
  ps.A = make_k(m, ps.P, k, diff);
  return ps;
}

PStructure conjugate(const PStructure& ps) {
  PStructure out = ps;
  out.conjugated = !ps.conjugated;
  const Field A = ps.A;
  const int n = ps.dim;
  out.A = Field::from<kMaxFieldDepth - 1>([A, n](const auto& p) {
    const auto a = A(p);
    auto b = a.zeros_like();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) b(i, j, k) = -a(i, k, j);
    return b;
  });
  return out;
}

std::vector<CatalogEntry> p_catalog() {
  return {
      {"P-id", "", "identity endomorphism"},
      {"P-proj", "", "constant orthoprojector diag(1,..,1,0)"},
      {"J-rot", "", "rotation by 90 degrees in the orthonormal frame (n=2)"},
      {"P-sing", "", "diag(1, sin^2 x); rank drops on x = 0, pi (n=2)"},
      {"P-wave", "", "diag(cos y, cos x); div P = 0 on flat tori (n=2)"},
      {"P-tilt", "(eps)", "diag(1 + eps sin x, 1); div P != 0 (n=2)"},
      {"P-contact", "", "d_x -> d_x, d_y -> d_y + sin x d_z, d_z -> 0 (n=3)"},
  };
}

std::vector<CatalogEntry> k_catalog() {
  return {
      {"K-0", "", "zero contorsion"},
      {"K-cubic", "(a,b)", "constant trace-free symmetric cubic form in the orthonormal frame"},
      {"K-skew", "(c)", "metric (skew) contorsion <K_e1 e1, e2> = c"},
      {"K-trace", "(v1,..)", "K_X Y = <X,Y> V, V given in frame components"},
      {"K-trace-sin", "(v1,..)", "K_X Y = sin x <X,Y> V"},
      {"K-grad", "(c)", "K_X Y = c (nabla_Y P) X"},
      {"K-divP", "", "K_X Y = (div P)(Y) X"},
      {"K-divsym", "", "symmetrized g (x) div P / (n+2); trace vector E = (div P)^#"},
  };
}

}  // namespace bochner
