#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "bochner/chart.hpp"
#include "bochner/errors.hpp"
#include "bochner/tensor_ops.hpp"

using namespace bochner;
using std::numbers::pi;

namespace {

const Manifold& fixture(const std::string& name) {
  static const ManifoldRegistry reg = ManifoldRegistry::builtin();
  return reg.get(name);
}

}  // namespace

TEST(Chart, FlatTorusChristoffelVanish) {
  const auto G = christoffel(fixture("T2-flat"), Diff{}, make_point({0.3, 1.7}));
  EXPECT_EQ(max_abs(G), 0.0);
}

TEST(Chart, SphereChristoffel) {
  const Manifold& s2 = fixture("S2-round");
  // stored (a, b, c) = Gamma^c_{ab}; coordinate 0 is theta, 1 is phi
  const auto G = christoffel(s2, Diff{}, make_point({pi / 4, 0.4}));
  EXPECT_NEAR(G(0, 1, 1), 1.0, 1e-14);
  EXPECT_NEAR(G(1, 0, 1), 1.0, 1e-14);
  const auto H = christoffel(s2, Diff{}, make_point({pi / 2, 0.4}));
  EXPECT_NEAR(H(1, 1, 0), 0.0, 1e-15);
  const auto J = christoffel(s2, Diff{}, make_point({0.9, 0.4}));
  EXPECT_NEAR(J(1, 1, 0), -std::sin(0.9) * std::cos(0.9), 1e-15);
}

TEST(Chart, SphereRiemann) {
  const Manifold& s2 = fixture("S2-round");
  const auto R = riemann(s2, Diff{}, make_point({pi / 2, 1.0}));
  // <R(d_t, d_p) d_p, d_t> = sin^2 t: sectional curvature 1
  EXPECT_NEAR(R(0, 1, 1, 0), 1.0, 1e-13);
  EXPECT_NEAR(R(0, 1, 0, 1), -1.0, 1e-13);
  const auto R2 = riemann(s2, Diff{}, make_point({0.6, 1.0}));
  EXPECT_NEAR(R2(0, 1, 1, 0), std::pow(std::sin(0.6), 2), 1e-13);
  double skew = 0.0;
  for_each_index(2, 4, [&](const int* I) { skew = std::max(skew, std::abs(R2.at(I) + R2(I[1], I[0], I[2], I[3]))); });
  EXPECT_LT(skew, 1e-14);
}

TEST(Chart, FlatRiemannVanishes) {
  EXPECT_EQ(max_abs(riemann(fixture("T3-flat"), Diff{}, make_point({0.1, 0.2, 0.3}))), 0.0);
}

TEST(Chart, SphereFrame) {
  const auto g = fixture("S2-round").metric(make_point({pi / 4, 0.0}));
  const auto E = orthonormal_frame(g);
  // frame(i, a) = component a of e_i
  EXPECT_NEAR(E(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(E(1, 1), std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(E(1, 0), 0.0, 1e-15);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double s = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) s += g(a, b) * E(i, a) * E(j, b);
      EXPECT_NEAR(s, i == j ? 1.0 : 0.0, 1e-14);
    }
}

TEST(Chart, WarpedFrameGram) {
  const Manifold& w = fixture("T2-warped");
  const auto p = make_point({0.7, 2.1});
  const auto g = w.metric(p);
  const auto E = orthonormal_frame(g);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double s = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) s += g(a, b) * E(i, a) * E(j, b);
      EXPECT_NEAR(s, i == j ? 1.0 : 0.0, 1e-13);
    }
}

TEST(Chart, Volumes) {
  const auto one = [](const Point<double>&) { return 1.0; };
  EXPECT_NEAR(integrate(fixture("T2-flat"), one, 64), 4 * pi * pi, 1e-12);
  EXPECT_NEAR(integrate(fixture("S2-round"), one, 256), 4 * pi, 1e-6);
  EXPECT_NEAR(integrate(fixture("T3-flat"), one, 16), 8 * pi * pi * pi, 1e-10);
  const auto sx = [](const Point<double>& p) { return std::sin(p[0]); };
  EXPECT_NEAR(integrate(fixture("T2-flat"), sx, 64), 0.0, 1e-13);
}

TEST(Chart, SphereQuadratureOfPolynomial) {
  // integral of z^2 = cos^2 t over the unit sphere is 4 pi / 3
  const auto z2 = [](const Point<double>& p) { return std::pow(std::cos(p[0]), 2); };
  EXPECT_NEAR(integrate(fixture("S2-round"), z2, 64), 4 * pi / 3, 1e-12);
}

TEST(Chart, DomainError) {
  const Manifold& s2 = fixture("S2-round");
  try {
    (void)christoffel(s2, Diff{}, make_point({-0.5, 0.0}));
    FAIL() << "expected a domain error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::domain);
  }
}

TEST(Chart, UnknownFixture) {
  EXPECT_THROW((void)ManifoldRegistry::builtin().get("K3-surface"), Error);
}

TEST(Chart, FiniteDifferenceOrder) {
  // fd Christoffel symbols against the analytic backend at two steps
  const Manifold& s2 = fixture("S2-round");
  const auto p = make_point({0.8, 0.3});
  const auto exact = christoffel(s2, Diff{}, p);
  const double e1 = max_abs(christoffel(s2, Diff{Backend::fd, 2e-2, 2e-2}, p) - exact);
  const double e2 = max_abs(christoffel(s2, Diff{Backend::fd, 1e-2, 1e-2}, p) - exact);
  EXPECT_GT(std::log2(e1 / e2), 1.9);
  const auto R = riemann(s2, Diff{}, p);
  const double r1 = max_abs(riemann(s2, Diff{Backend::fd, 2e-2, 2e-2}, p) - R);
  const double r2 = max_abs(riemann(s2, Diff{Backend::fd, 1e-2, 1e-2}, p) - R);
  EXPECT_GT(std::log2(r1 / r2), 1.9);
}

TEST(Chart, FiniteDifferenceNearPole) {
  // the default fd steps stay accurate inside the sample band
  const Manifold& s2 = fixture("S2-round");
  const auto p = make_point({0.1, 0.9});
  const auto R = riemann(s2, Diff{}, p), Rf = riemann(s2, Diff{Backend::fd}, p);
  EXPECT_LT(std::abs(Rf(0, 1, 1, 0) - R(0, 1, 1, 0)) / R(0, 1, 1, 0), 1e-5);
}

TEST(Chart, GaussLegendreNodes) {
  std::vector<double> x, w;
  gauss_legendre(5, x, w);
  double s = 0.0, m4 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += w[i];
    m4 += w[i] * std::pow(x[i], 4);
  }
  EXPECT_NEAR(s, 2.0, 1e-14);
  EXPECT_NEAR(m4, 0.4, 1e-14);
}
