#include <gtest/gtest.h>

#include <cmath>

#include "hconvex/errors.hpp"
#include "hconvex/forward.hpp"
#include "hconvex/reconstruct.hpp"
#include "hconvex/verify.hpp"

using namespace hconvex;

// Quadratic components make the difference stencils exact, so c follows from the
// analytic derivatives: c = 1 + mean_l |Delta v + |grad v|^2 + 2 grad v . x~| / k^2.
TEST(RecoverDielectric, MatchesAnalyticDerivativesOfQuadraticState) {
  const DomainConfig cfg;
  const HarnessProblem hp(2, 1.1, 3, cfg);
  const auto& P = hp.problem();
  const auto& g = P.grid();
  const auto src = source_quadrature(cfg);
  ComplexField V(g, 2);
  // v_0 = 0.1 (x^2 + i z^2), v_1 = 0.05 x y - 0.2 i z
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto x = g.point(g.unflat(i));
    V(i, 0) = 0.1 * cplx{x[0] * x[0], x[2] * x[2]};
    V(i, 1) = cplx{0.05 * x[0] * x[1], -0.2 * x[2]};
  }
  const auto c = recover_dielectric(V, P, src);
  const double k2 = cfg.k * cfg.k;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto ix = g.unflat(i);
    if (g.on_boundary(ix)) {
      EXPECT_EQ(c(i), 1.0);
      continue;
    }
    const auto x = g.point(ix);
    double acc = 0.0;
    for (double a : src.nodes) {
      const double p0 = P.basis().value(0, a), p1 = P.basis().value(1, a);
      const cplx lap = p0 * 0.1 * cplx{2.0, 2.0};
      const std::array<cplx, 3> gv{p0 * 0.2 * x[0] + p1 * 0.05 * x[1], p1 * 0.05 * x[0],
                                   p0 * cplx{0.0, 0.2 * x[2]} + p1 * cplx{0.0, -0.2}};
      const auto xt = xtilde(x, a, cfg.k, cfg.d);
      cplx br = lap;
      for (int d = 0; d < 3; ++d) br += gv[d] * gv[d] + 2.0 * gv[d] * xt[d];
      acc += std::abs(br) / k2;
    }
    EXPECT_NEAR(c(i), 1.0 + acc / static_cast<double>(src.size()), 1e-10);
    EXPECT_GE(c(i), 1.0);
  }
}

TEST(RecoverDielectric, ZeroStateGivesVacuum) {
  const HarnessProblem hp(2, 1.1, 3);
  const auto c = recover_dielectric(hp.problem().zero_state(), hp.problem(), source_quadrature(DomainConfig{}));
  for (double v : c.values()) EXPECT_EQ(v, 1.0);
}

TEST(FinalizeField, ConstantUnchangedAndPeakPreserved) {
  const Grid3D g(9, 9, 1.0, 1.0);
  ScalarField ones(g, 1, 1.0);
  EXPECT_EQ(finalize_field(ones).values(), ones.values());

  ScalarField spike(g, 1, 1.0);
  spike(g.flat(4, 4, 4)) = 5.0;
  spike(g.flat(2, 3, 4)) = 2.0;
  const auto out = finalize_field(spike, 1.0);
  double mx = 0.0;
  for (double v : out.values()) mx = std::max(mx, v);
  EXPECT_NEAR(mx, 5.0, 1e-10);
  EXPECT_GT(out(g.flat(4, 5, 4)), 1.0);  // spread to neighbours
  for (double v : out.values()) EXPECT_GE(v, 1.0);
}

TEST(FinalizeField, UsesModulusOfRawField) {
  const Grid3D g(5, 5, 1.0, 1.0);
  ScalarField f(g, 1, 1.0);
  f(g.flat(2, 2, 2)) = -3.0;
  double mx = 0.0;
  for (double v : finalize_field(f).values()) mx = std::max(mx, v);
  EXPECT_NEAR(mx, 3.0, 1e-12);
}

TEST(ExtractInclusion, VacuumReportsNothing) {
  const Grid3D g(5, 5, 1.0, 1.0);
  const auto r = extract_inclusion(ScalarField(g, 1, 1.0));
  EXPECT_FALSE(r.found);
  EXPECT_EQ(r.voxels, 0u);
  EXPECT_THROW(extract_inclusion(ScalarField(g, 1, 1.0), 1.0), DomainError);
}

TEST(ExtractInclusion, BoxCentroidAndBoundingBox) {
  const auto g = Grid3D::over_domain(2.0, 2.0, 0.2, 0.2);
  Inclusion box;
  box.center = {0.4, -0.2, -1.0};
  box.half = {0.3, 0.3, 0.3};
  box.value = 4.0;
  const auto d = DielectricField::rasterize(g, {box});
  ScalarField c(g, 1);
  c.values() = d.c;
  const auto r = extract_inclusion(c, 0.5);
  ASSERT_TRUE(r.found);
  for (int a = 0; a < 3; ++a) EXPECT_NEAR(r.centroid[a], box.center[a], 0.1);
  EXPECT_NEAR(r.bbox_min[0], 0.2, 1e-9);
  EXPECT_NEAR(r.bbox_max[0], 0.6, 1e-9);
  EXPECT_DOUBLE_EQ(r.max_value, 4.0);
}

TEST(ExtractInclusion, HigherFractionGivesSubsetMask) {
  const Grid3D g(9, 9, 1.0, 1.0);
  ScalarField f(g, 1, 1.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto x = g.point(g.unflat(i));
    f(i) = 1.0 + 3.0 * std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
  }
  const auto lo = extract_inclusion(f, 0.2);
  const auto hi = extract_inclusion(f, 0.7);
  EXPECT_LT(hi.voxels, lo.voxels);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (hi.mask[i]) {
      EXPECT_TRUE(lo.mask[i]);
    }
  }
  const auto top = extract_inclusion(f, 0.999);
  EXPECT_EQ(top.voxels, 1u);
}
