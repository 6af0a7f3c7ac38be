#include <cmath>

#include <gtest/gtest.h>

#include "bochner/conditions.hpp"
#include "bochner/diffops.hpp"
#include "bochner/errors.hpp"
#include "support.hpp"

using namespace bochner;
using bochner::testing::pt;
using bochner::testing::Fixture;

namespace {

std::vector<Point<double>> grid(const Manifold& m) { return sample_grid(m, 8); }

}  // namespace

TEST(Structure, ParseNamedSpec) {
  const NamedSpec s = parse_named_spec("K-cubic(1,-0.5)");
  EXPECT_EQ(s.name, "K-cubic");
  ASSERT_EQ(s.args.size(), 2u);
  EXPECT_EQ(s.args[1], -0.5);
  EXPECT_EQ(parse_named_spec("P-id").args.size(), 0u);
  EXPECT_THROW(parse_named_spec("K-cubic(1,"), Error);
}

TEST(Structure, UnknownNameIsConfigError) {
  const Manifold m = ManifoldRegistry::builtin().get("T2-flat");
  try {
    (void)make_structure(m, parse_named_spec("P-bogus"), parse_named_spec("K-0"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::config);
    EXPECT_NE(std::string(e.what()).find("P-bogus"), std::string::npos);
  }
}

TEST(Structure, CubicFormIsStatistical) {
  Fixture s("T2-flat", "P-id", "K-cubic(1,0.5)");
  EXPECT_LT(check_statistical(*s.geo, grid(s.m), 1e-12).value, 1e-14);
  const auto A = s.geo->A(pt(0.2, 0.3));
  // hand-built components: A111 = a, A122 = -a, A112 = b, A222 = -b
  EXPECT_DOUBLE_EQ(A(0, 0, 0), 1.0);
  EXPECT_DOUBLE_EQ(A(0, 1, 1), -1.0);
  EXPECT_DOUBLE_EQ(A(1, 0, 1), -1.0);
  EXPECT_DOUBLE_EQ(A(0, 0, 1), 0.5);
  EXPECT_DOUBLE_EQ(A(1, 1, 1), -0.5);
}

TEST(Structure, TraceContorsionNotStatistical) {
  Fixture s("T2-flat", "P-id", "K-trace(1,0)");
  const auto r = check_statistical(*s.geo, grid(s.m), 1e-10);
  EXPECT_GT(r.value, 0.5);
  EXPECT_FALSE(r.witness.point.empty());
}

TEST(Structure, FieldE) {
  Fixture cubic("T2-flat", "P-id", "K-cubic(1,0.5)");
  EXPECT_LT(max_abs(field_E(*cubic.geo, pt(0.4, 1.1))), 1e-15);
  Fixture tr("T2-flat", "P-id", "K-trace(1,2)");
  const auto E = field_E(*tr.geo, pt(0.4, 1.1));
  // sum_i K_{e_i} e_i = sum_i <e_i, e_i> V = n V
  EXPECT_NEAR(E(0), 2.0, 1e-14);
  EXPECT_NEAR(E(1), 4.0, 1e-14);
  const auto t = trace_K(*tr.geo, pt(0.4, 1.1));
  EXPECT_NEAR(t(0), 1.0, 1e-14);
  EXPECT_NEAR(t(1), 2.0, 1e-14);
}

TEST(Structure, FrakDParallelStructures) {
  for (const char* p : {"P-id", "P-proj", "J-rot"}) {
    Fixture s("T2-flat", p, "K-0");
    EXPECT_LT(check_frak_D(*s.geo, grid(s.m), 1e-10).value, 1e-14) << p;
    EXPECT_LT(check_condPP_stat(*s.geo, grid(s.m), 1e-10).value, 1e-14) << p;
  }
}

TEST(Structure, FrakDSingularP) {
  // P = diag(1, sin^2 x): [P d_x, P d_y] = 2 sin x cos x d_y and [d_x, d_y]_P = 0
  Fixture s("T2-flat", "P-sing", "K-0");
  const double x = 0.7;
  const auto D = frak_D(*s.geo, coord_field(2, 0), coord_field(2, 1), pt(x, 0.2));
  EXPECT_NEAR(D(0), 0.0, 1e-14);
  EXPECT_NEAR(D(1), 2 * std::sin(x) * std::cos(x), 1e-13);
  EXPECT_GT(check_frak_D(*s.geo, grid(s.m), 1e-10).value, 0.5);
  // Lie-bracket and Levi-Civita forms of the Nijenhuis torsion agree
  const auto p = pt(1.3, 0.4);
  EXPECT_LT(max_abs(nijenhuis(*s.geo, coord_field(2, 0), coord_field(2, 1), p) -
                    nijenhuis_lc(*s.geo, coord_field(2, 0), coord_field(2, 1), p)),
            1e-13);
}

TEST(Structure, FrakDEquivalence) {
  // for symmetric K, D^P(X,Y) = (nabla_PX P)Y - (nabla_PY P)X
  Fixture s("T2-flat", "P-sing", "K-0");
  EXPECT_LT(check_frak_D_matches_condPP(*s.geo, grid(s.m), 1e-10).value, 1e-13);
}

TEST(Structure, FrakDTensorial) {
  Fixture s("T2-flat", "P-wave", "K-cubic(1,0)");
  const auto f = [](const auto& q) { return sin(q[0]) + 2.0; };
  const auto X = [](const auto& q) {
    using T = scalar_of<decltype(q)>;
    Tensor<T> v(2, 1, true);
    v(0) = cos(q[1]);
    v(1) = T(1.0);
    return v;
  };
  const auto fX = [&](const auto& q) { return scaled(X(q), f(q)); };
  const auto Y = coord_field(2, 1);
  const auto p = pt(0.9, 2.2);
  EXPECT_LT(max_abs(frak_D(*s.geo, fX, Y, p) - frak_D(*s.geo, X, Y, p) * f(p)), 1e-13);
}

TEST(Structure, DivConditions) {
  Fixture proj("T2-flat", "P-proj", "K-0");
  auto d = check_div_conditions(*proj.geo, grid(proj.m), 1e-10);
  EXPECT_TRUE(d.cond.pass());
  EXPECT_TRUE(d.cond2.pass());
  Fixture cubic("T2-flat", "P-id", "K-cubic(1,0)");
  d = check_div_conditions(*cubic.geo, grid(cubic.m), 1e-10);
  EXPECT_TRUE(d.cond.pass());
  EXPECT_TRUE(d.cond2.pass());
  // K = c nabla P with div P = 0
  Fixture grad("T2-flat", "P-wave", "K-grad(1)");
  EXPECT_TRUE(check_div_conditions(*grad.geo, grid(grad.m), 1e-10).cond.pass());
  Fixture tilt("T2-flat", "P-tilt(0.3)", "K-0");
  EXPECT_FALSE(check_div_conditions(*tilt.geo, grid(tilt.m), 1e-10).cond.pass());
}

TEST(Structure, Codazzi) {
  Fixture c("T2-flat", "P-id", "K-cubic(1,0.5)");
  EXPECT_LT(check_codazzi_K(*c.geo, grid(c.m), 1e-10).value, 1e-14);
  Fixture z("T2-flat", "P-id", "K-0");
  EXPECT_EQ(check_codazzi_K(*z.geo, grid(z.m), 1e-10).value, 0.0);
  Fixture s("T2-flat", "P-id", "K-trace-sin(1,0)");
  EXPECT_GT(check_codazzi_K(*s.geo, grid(s.m), 1e-10).value, 0.1);
}

TEST(Structure, ConjugateIsInvolution) {
  Fixture s("T2-flat", "P-wave", "K-cubic(1,0.5)");
  const PStructure back = conjugate(conjugate(s.ps));
  const auto p = pt(0.3, 0.8);
  EXPECT_EQ(max_abs(back.A(p) - s.ps.A(p)), 0.0);
  Fixture z("T2-flat", "P-id", "K-0");
  EXPECT_EQ(max_abs(conjugate(z.ps).A(p)), 0.0);
  // statistical: the conjugate contorsion is -K
  EXPECT_EQ(max_abs(conjugate(s.ps).A(p) + s.ps.A(p)), 0.0);
}

TEST(Structure, MetricityOfCubic) {
  // nabla^P g = -2A for a symmetric cubic form; metric only for skew K
  Fixture c("T2-flat", "P-id", "K-cubic(1,0.5)");
  EXPECT_LT(check_metricity_cubic(*c.geo, grid(c.m), 1e-10).value, 1e-14);
  EXPECT_FALSE(check_p_metric(*c.geo, grid(c.m), 1e-10).pass());
  Fixture k("T2-flat", "P-id", "K-skew(0.7)");
  EXPECT_TRUE(check_K_skew(*k.geo, grid(k.m), 1e-12).pass());
  EXPECT_TRUE(check_p_metric(*k.geo, grid(k.m), 1e-12).pass());
}

TEST(Structure, BracketGenerating) {
  Fixture id("T2-flat", "P-id", "K-0");
  EXPECT_EQ(bracket_generating_step2(*id.geo, pt(0.3, 0.4)), 2);
  Fixture proj("T2-flat", "P-proj", "K-0");
  EXPECT_EQ(bracket_generating_step2(*proj.geo, pt(0.3, 0.4)), 1);
  // [d_x, d_y + sin x d_z] = cos x d_z
  Fixture contact("T3-flat", "P-contact", "K-0");
  EXPECT_EQ(bracket_generating_step2(*contact.geo, pt(0.3, 0.4, 0.5)), 3);
}

TEST(Structure, PBracketProjector) {
  // P-proj, X = d_x, Y = f d_y: [X,Y]_P = (d_x f) d_y
  Fixture s("T2-flat", "P-proj", "K-0");
  const auto X = coord_field(2, 0);
  const auto Y = [](const auto& q) {
    using T = scalar_of<decltype(q)>;
    Tensor<T> v(2, 1, true);
    v(1) = sin(q[0]) * cos(q[1]);
    return v;
  };
  const auto p = pt(0.6, 1.4);
  const auto B = p_bracket(*s.geo, X, Y, p);
  EXPECT_NEAR(B(0), 0.0, 1e-15);
  EXPECT_NEAR(B(1), std::cos(0.6) * std::cos(1.4), 1e-15);
  Fixture id("T2-flat", "P-id", "K-0");
  EXPECT_LT(max_abs(p_bracket(*id.geo, X, Y, p) - lie_bracket(Diff{}, X, Y, p)), 1e-15);
}
