#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "bochner/diffops.hpp"
#include "bochner/random_fields.hpp"
#include "support.hpp"

using namespace bochner;
using bochner::testing::Fixture;
using bochner::testing::pt;

namespace {

template <class F>
auto scalar_field(F f) {
  return [f](const auto& q) {
    using T = scalar_of<decltype(q)>;
    return Tensor<T>::scalar(f(q));
  };
}

/// 1-form a dx + b dy from two scalar expressions.
template <class FA, class FB>
auto one_form(FA a, FB b) {
  return [a, b](const auto& q) {
    using T = scalar_of<decltype(q)>;
    Tensor<T> w(2, 1);
    w(0) = a(q);
    w(1) = b(q);
    return w;
  };
}

template <class FA, class FB>
auto vector_field(FA a, FB b) {
  return [a, b](const auto& q) {
    using T = scalar_of<decltype(q)>;
    Tensor<T> v(2, 1, true);
    v(0) = a(q);
    v(1) = b(q);
    return v;
  };
}

const auto zero = [](const auto& q) { return scalar_of<decltype(q)>(0.0); };

}  // namespace

TEST(Diffops, GradientProjector) {
  Fixture s("T2-flat", "P-proj", "K-0");
  const auto f = scalar_field([](const auto& q) { return sin(q[0]) + cos(q[1]); });
  const auto p = pt(0.4, 1.2);
  const auto df = s.geo->nabla(f, p);
  EXPECT_NEAR(df(0), std::cos(0.4), 1e-15);
  EXPECT_NEAR(df(1), 0.0, 1e-15);
}

TEST(Diffops, IdentityReducesToLeviCivita) {
  Fixture s("S2-round", "P-id", "K-0");
  Rng rng(11);
  const RandomForm w = RandomForm::draw(s.m, 1, rng);
  const auto p = pt(1.1, 0.3);
  EXPECT_LT(max_abs(s.geo->nabla(w, p) - s.geo->lc(w, p)), 1e-14);
}

TEST(Diffops, ExteriorDerivativeClassical) {
  Fixture s("T2-warped", "P-id", "K-0");
  const auto a = [](const auto& q) { return sin(q[0]) * cos(2.0 * q[1]); };
  const auto b = [](const auto& q) { return cos(q[0] + q[1]); };
  const auto w = one_form(a, b);
  const double x = 0.5, y = 1.3;
  const auto dw = d_P(*s.geo, w, pt(x, y));
  // (dw)_{01} = d_x b - d_y a
  const double expect = -std::sin(x + y) + 2 * std::sin(x) * std::sin(2 * y);
  EXPECT_NEAR(dw(0, 1), expect, 1e-14);
  EXPECT_NEAR(dw(1, 0), -expect, 1e-14);
}

TEST(Diffops, DSquaredVanishes) {
  Fixture s("S2-round", "P-id", "K-0");
  Rng rng(5);
  const RandomForm f = RandomForm::draw(s.m, 0, rng);
  const auto df = [&](const auto& q) { return d_P(*s.geo, f, q); };
  EXPECT_LT(max_abs(d_P(*s.geo, df, pt(0.8, 2.0))), 1e-13);
}

TEST(Diffops, DerivationFormulaAgrees) {
  for (const char* k : {"K-0", "K-cubic(1,0.5)"}) {
    Fixture s("T2-flat", "P-wave", k);
    Rng rng(9);
    const RandomForm w = RandomForm::draw(s.m, 1, rng);
    const auto p = pt(0.3, 2.7);
    EXPECT_LT(max_abs(d_P(*s.geo, w, p) - d_P_derivation(*s.geo, w, p)), 1e-13) << k;
  }
}

TEST(Diffops, SphereCodifferential) {
  // w = cos t dt: w# = cos t d_t, div w# = cos 2t / sin t, delta w = -div w#
  Fixture s("S2-round", "P-id", "K-0");
  const auto w = one_form([](const auto& q) { return cos(q[0]); }, zero);
  const double t = 0.9;
  for (Variant v : {Variant::plain, Variant::bar, Variant::hat})
    EXPECT_NEAR(codifferential(*s.geo, w, pt(t, 0.4), v)(), -std::cos(2 * t) / std::sin(t), 1e-13);
  // w = sin t dp is co-closed
  const auto u = one_form(zero, [](const auto& q) { return sin(q[0]); });
  EXPECT_NEAR(codifferential(*s.geo, u, pt(t, 0.4))(), 0.0, 1e-14);
}

TEST(Diffops, DivergenceProjector) {
  Fixture s("T2-flat", "P-proj", "K-0");
  const auto X = vector_field([](const auto& q) { return sin(q[0]); }, [](const auto& q) { return cos(q[1]); });
  EXPECT_NEAR(div_P(*s.geo, X, pt(0.0, 0.0)), 1.0, 1e-15);
  EXPECT_NEAR(div_P(*s.geo, X, pt(1.2, 0.7)), std::cos(1.2), 1e-15);
  Fixture id("T2-flat", "P-id", "K-0");
  EXPECT_EQ(div_P(*id.geo, coord_field(2, 1), pt(1.2, 0.7)), 0.0);
}

TEST(Diffops, DivergenceLeibniz) {
  Fixture s("T2-flat", "P-wave", "K-cubic(1,0.5)");
  Rng rng(21);
  const RandomForm f = RandomForm::draw(s.m, 0, rng);
  const RandomVector Y = RandomVector::draw(s.m, rng);
  const auto fY = [&](const auto& q) { return scaled(Y(q), f(q)()); };
  for (const auto& p : sample_grid(s.m, 4)) {
    const auto nf = s.geo->nabla(f, p);
    double pairing = 0.0;
    const auto y = Y(p);
    for (int a = 0; a < 2; ++a) pairing += nf(a) * y(a);
    EXPECT_NEAR(div_P(*s.geo, fY, p), f(p)() * div_P(*s.geo, Y, p) + pairing, 1e-13);
  }
}

TEST(Diffops, HodgeLaplacianFlat) {
  Fixture s("T2-flat", "P-id", "K-0");
  const auto w = one_form([](const auto& q) { return sin(q[0]); }, zero);
  const auto L = laplacian(*s.geo, w, pt(0.7, 0.1));
  EXPECT_NEAR(L(0), std::sin(0.7), 1e-14);
  EXPECT_NEAR(L(1), 0.0, 1e-14);
  const auto c = one_form([](const auto& q) { return scalar_of<decltype(q)>(3.0); }, zero);
  EXPECT_EQ(max_abs(laplacian(*s.geo, c, pt(0.7, 0.1))), 0.0);
  Rng rng(4);
  const RandomForm r = RandomForm::draw(s.m, 1, rng);
  EXPECT_LT(max_abs(laplacian(*s.geo, r, pt(0.2, 0.9)) - rough_laplacian(*s.geo, r, pt(0.2, 0.9))), 1e-13);
}

TEST(Diffops, FunctionLaplacian) {
  Fixture id("T2-flat", "P-id", "K-0");
  const auto sx = scalar_field([](const auto& q) { return sin(q[0]); });
  EXPECT_NEAR(laplacian_fn(*id.geo, sx, pt(0.6, 0.2)), -std::sin(0.6), 1e-14);
  const auto c = scalar_field([](const auto& q) { return scalar_of<decltype(q)>(2.0); });
  EXPECT_EQ(laplacian_fn(*id.geo, c, pt(0.6, 0.2)), 0.0);
  Fixture proj("T2-flat", "P-proj", "K-0");
  const auto f = scalar_field([](const auto& q) { return sin(q[0]) + cos(q[1]); });
  EXPECT_NEAR(laplacian_fn(*proj.geo, f, pt(0.6, 0.2)), -std::sin(0.6), 1e-14);
  // cos y is annihilated by the projector
  const auto cy = scalar_field([](const auto& q) { return cos(q[1]); });
  EXPECT_EQ(max_abs(proj.geo->nabla(cy, pt(0.6, 0.2))), 0.0);
}

TEST(Diffops, SphereLaplaceBeltrami) {
  // z = cos t is a degree-1 spherical harmonic: Delta z = -2 z
  Fixture s("S2-round", "P-id", "K-0");
  const auto z = scalar_field([](const auto& q) { return cos(q[0]); });
  EXPECT_NEAR(laplacian_fn(*s.geo, z, pt(0.8, 1.0)), -2 * std::cos(0.8), 1e-13);
}

TEST(Diffops, LieDerivative) {
  Fixture s("S2-round", "P-id", "K-0");
  Rng rng(17);
  const RandomForm w = RandomForm::draw(s.m, 1, rng);
  const RandomVector V = RandomVector::draw(s.m, rng);
  const auto p = pt(1.4, 5.0);
  EXPECT_LT(max_abs(lie_P(*s.geo, V, w, p) - lie_classical(Diff{}, V, w, p)), 1e-13);
  const auto V0 = [](const auto& q) { return Tensor<scalar_of<decltype(q)>>(2, 1, true); };
  EXPECT_EQ(max_abs(lie_P(*s.geo, V0, w, p)), 0.0);
}

TEST(Diffops, AdjointnessIntegral) {
  for (const char* spec : {"P-proj:K-0", "P-id:K-cubic(1,0.5)"}) {
    const std::string sp(spec);
    Fixture s("T2-flat", sp.substr(0, sp.find(':')), sp.substr(sp.find(':') + 1));
    Rng rng(31);
    const RandomForm w1 = RandomForm::draw(s.m, 1, rng), w2 = RandomForm::draw(s.m, 2, rng);
    const double v = integrate(s.m, [&](const Point<double>& p) {
      const auto g = s.geo->g(p), gi = s.geo->ginv(p);
      return form_inner(g, gi, codifferential(*s.geo, w2, p, Variant::bar), w1(p)) -
             form_inner(g, gi, w2(p), d_P(*s.geo, w1, p));
    }, 128);
    EXPECT_LT(std::abs(v), 1e-6) << spec;
  }
}

TEST(Diffops, StokesAndNegativeControl) {
  Rng rng(2);
  Fixture ok("T2-flat", "P-wave", "K-0");
  for (int i = 0; i < 5; ++i) {
    const RandomVector X = RandomVector::draw(ok.m, rng);
    const auto divo = [&](const Point<double>& p) { return div_P(*ok.geo, X, p); };
    EXPECT_LT(std::abs(integrate(ok.m, divo, 128)), 1e-6);
  }
  // P-tilt: div_P X = div(PX) - eps cos x X^x, so X = cos x d_x integrates to -2 pi^2 eps
  Fixture bad("T2-flat", "P-tilt(0.3)", "K-0");
  const auto X = vector_field([](const auto& q) { return cos(q[0]); }, zero);
  const auto divb = [&](const Point<double>& p) { return div_P(*bad.geo, X, p); };
  EXPECT_NEAR(integrate(bad.m, divb, 128), -2 * std::numbers::pi * std::numbers::pi * 0.3, 1e-10);
}

TEST(Diffops, FiniteDifferenceBackendAgrees) {
  Fixture a("S2-round", "P-id", "K-0");
  Fixture f("S2-round", "P-id", "K-0", Diff{Backend::fd});
  Rng rng(8);
  const RandomForm w = RandomForm::draw(a.m, 1, rng);
  const auto p = pt(1.0, 2.0);
  EXPECT_LT(max_abs(laplacian(*a.geo, w, p) - laplacian(*f.geo, w, p)), 1e-5);
  EXPECT_LT(max_abs(d_P(*a.geo, w, p) - d_P(*f.geo, w, p)), 1e-7);
}
