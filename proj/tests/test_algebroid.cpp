#include <cmath>

#include <gtest/gtest.h>

#include "bochner/algebroid.hpp"
#include "bochner/errors.hpp"
#include "bochner/random_fields.hpp"
#include "support.hpp"

using namespace bochner;
using bochner::testing::Fixture;
using bochner::testing::pt;

namespace {

struct Fields {
  RandomVector X, Y, Z;
  RandomForm f, w;
};

Fields draw(const Manifold& m, std::uint64_t seed) {
  Rng rng(seed);
  Fields F{RandomVector::draw(m, rng), RandomVector::draw(m, rng), RandomVector::draw(m, rng),
           RandomForm::draw(m, 0, rng), RandomForm::draw(m, 1, rng)};
  return F;
}

}  // namespace

TEST(Algebroid, TangentBundleIsLie) {
  Fixture s("S2-round", "P-id", "K-0");
  const AnchoredBracket ab = tangent_algebroid(s.m);
  const Fields F = draw(s.m, 1);
  for (const auto& p : {pt(0.7, 0.2), pt(2.0, 5.0)}) {
    const auto r = axiom_residuals(ab, F.X, F.Y, F.f, p);
    EXPECT_LT(r.antisymmetry, 1e-14);
    EXPECT_LT(r.leibniz, 1e-13);
    EXPECT_LT(r.anchor, 1e-12);
    EXPECT_LT(max_abs(jacobiator(ab, F.X, F.Y, F.Z, p)), 1e-11);
    EXPECT_LT(max_abs(d_rho_squared(ab, F.f, p)), 1e-13);
    EXPECT_LT(max_abs(d_rho_squared(ab, F.w, p)), 1e-12);
  }
}

TEST(Algebroid, IdentityStructureMatchesTangent) {
  Fixture s("T2-warped", "P-id", "K-0");
  const AnchoredBracket a = p_algebroid(s.m, s.ps), t = tangent_algebroid(s.m);
  const Fields F = draw(s.m, 2);
  const auto p = pt(1.0, 2.0);
  EXPECT_LT(max_abs(a.bracket(F.X, F.Y, p) - t.bracket(F.X, F.Y, p)), 1e-13);
}

TEST(Algebroid, ProjectorIsSkewAlgebroid) {
  Fixture s("T2-flat", "P-proj", "K-0");
  const AnchoredBracket ab = p_algebroid(s.m, s.ps);
  const Fields F = draw(s.m, 3);
  for (const auto& p : sample_grid(s.m, 4)) {
    const auto r = axiom_residuals(ab, F.X, F.Y, F.f, p);
    EXPECT_LT(std::max({r.antisymmetry, r.leibniz, r.anchor}), 1e-12);
    EXPECT_LT(max_abs(d_rho_squared(ab, F.f, p)), 1e-12);
    EXPECT_LT(max_abs(apply_endo(s.geo->P(p), jacobiator(ab, F.X, F.Y, F.Z, p))), 1e-11);
  }
}

TEST(Algebroid, SingularAnchorFails) {
  Fixture s("T2-flat", "P-sing", "K-0");
  const AnchoredBracket ab = p_algebroid(s.m, s.ps);
  const Fields F = draw(s.m, 4);
  double anchor = 0.0, d2 = 0.0;
  for (const auto& p : sample_grid(s.m, 8)) {
    anchor = std::max(anchor, axiom_residuals(ab, coord_field(2, 0), coord_field(2, 1), F.f, p).anchor);
    d2 = std::max(d2, max_abs(d_rho_squared(ab, F.f, p)));
  }
  EXPECT_GT(anchor, 1e-3);
  EXPECT_GT(d2, 1e-3);
  EXPECT_EQ(classify(d2, 0.0, 1e-8), AlgebroidClass::almost);
  EXPECT_EQ(classify(0.0, 1.0, 1e-8), AlgebroidClass::skew_symmetric);
  EXPECT_EQ(classify(0.0, 0.0, 1e-8), AlgebroidClass::lie);
}

TEST(Algebroid, DRhoMatchesDP) {
  Fixture s("T2-flat", "P-wave", "K-cubic(1,0.5)");
  const AnchoredBracket ab = p_algebroid(s.m, s.ps);
  const Fields F = draw(s.m, 5);
  const auto p = pt(0.4, 1.6);
  EXPECT_LT(max_abs(d_rho(ab, F.f, p) - d_P(*s.geo, F.f, p)), 1e-13);
  EXPECT_LT(max_abs(d_rho(ab, F.w, p) - d_P(*s.geo, F.w, p)), 1e-13);
}

TEST(Algebroid, PConnectionTorsionFree) {
  Fixture s("T2-flat", "P-id", "K-cubic(1,0.5)");
  const AnchoredBracket ab = p_algebroid(s.m, s.ps);
  const RhoConnection nc = p_rho_connection(s.m, s.ps);
  const Fields F = draw(s.m, 6);
  const auto tc = rho_connection_tc(ab, nc, F.X, F.Y, F.Z, F.f, pt(1.0, 1.0), 1e-10);
  EXPECT_LT(max_abs(tc.torsion), 1e-13);
  EXPECT_LT(tc.koszul_residual, 1e-13);
  EXPECT_LT(max_abs(bianchi_torsion_residual(ab, nc, F.X, F.Y, F.Z, pt(1.0, 1.0))), 1e-11);
}

TEST(Algebroid, BianchiWithTorsion) {
  Fixture s("T2-flat", "P-id", "K-cubic(1,0)");
  const AnchoredBracket ab = p_algebroid(s.m, s.ps);
  RhoConnection tw = p_rho_connection(s.m, s.ps);
  const Field base = tw.coeff;
  tw.coeff = Field::from<2>([base](const auto& q) {
    auto C = base(q);
    C(0, 1, 0) += 0.3;
    C(1, 0, 1) -= 0.7;
    return C;
  });
  const Fields F = draw(s.m, 7);
  const auto p = pt(0.5, 2.5);
  EXPECT_GT(max_abs(rho_torsion(ab, tw, F.X, F.Y, p)), 1e-3);
  EXPECT_LT(max_abs(bianchi_torsion_residual(ab, tw, F.X, F.Y, F.Z, p)), 1e-11);
}

TEST(Algebroid, KoszulFailureIsReported) {
  Fixture s("T2-flat", "P-proj", "K-0");
  const AnchoredBracket ab = p_algebroid(s.m, s.ps);
  RhoConnection bad = p_rho_connection(s.m, s.ps);
  bad.derivation = Field::from([](const auto& q) { return identity_endo<scalar_of<decltype(q)>>(2); });
  const Fields F = draw(s.m, 8);
  try {
    (void)rho_connection_tc(ab, bad, F.X, F.Y, F.Z, F.f, pt(0.3, 0.3), 1e-8);
    FAIL() << "expected invalid_connection";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_connection);
  }
}
