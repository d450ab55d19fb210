#include <gtest/gtest.h>

#include <cmath>

#include "hconvex/errors.hpp"
#include "hconvex/preprocess.hpp"

using namespace hconvex;

namespace {

PlanarData bump(std::size_t n, double peak) {
  PlanarData p(Lattice2D::square(1.0, n), 1);
  const double c = 0.5 * static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double r2 = (i - c) * (i - c) + (j - c) * (j - c);
      p.at(0, i, j) = peak * std::exp(-r2 / 8.0) * cplx{0.6, 0.8};
    }
  }
  return p;
}

double max_abs(std::span<const cplx> v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST(Truncate, ZeroesBelowFractionOfPerSourceMaximum) {
  PlanarData p(Lattice2D::square(1.0, 2), 2);
  p.values = {1.0, 0.5, 0.39, 0.0, 10.0, 4.0, 3.0, 5.0};
  const auto t = truncate_field(p, 0.4);
  EXPECT_EQ(t.values, (std::vector<cplx>{1.0, 0.5, 0.0, 0.0, 10.0, 4.0, 0.0, 5.0}));
  EXPECT_THROW(truncate_field(p, 0.0), DomainError);
  EXPECT_THROW(truncate_field(p, 1.0), DomainError);
}

TEST(Gaussian, KernelNormalizedAndCutAtFourSigma) {
  const auto k = gaussian_half_kernel(1.5);
  EXPECT_EQ(k.size(), 7u);  // indices 0..ceil(4 sigma)
  double s = k[0];
  for (std::size_t i = 1; i < k.size(); ++i) s += 2.0 * k[i];
  EXPECT_NEAR(s, 1.0, 1e-15);
  EXPECT_NEAR(k[1] / k[0], std::exp(-1.0 / (2 * 1.5 * 1.5)), 1e-15);
}

TEST(Gaussian, ConstantFieldUnchangedIncludingEdges) {
  std::vector<cplx> v(7 * 5, cplx{2.0, -1.0});
  for (const auto& x : gaussian_smooth_2d(v, 7, 5, 1.3)) EXPECT_NEAR(std::abs(x - cplx{2.0, -1.0}), 0.0, 1e-14);
  std::vector<double> w(4 * 4 * 6, 3.0);
  for (double x : gaussian_smooth_3d(w, 4, 4, 6, 2.0)) EXPECT_NEAR(x, 3.0, 1e-14);
}

TEST(Retrieve, RestoresPeakModulus) {
  const auto p = bump(21, 3.0);
  const auto r = smooth_and_retrieve(p, 1.0);
  EXPECT_NEAR(max_abs(r.field.source(0)), max_abs(p.source(0)), 1e-12);
  EXPECT_GT(r.kappa2[0], 1.0);
}

TEST(Retrieve, ZeroSourceStaysZero) {
  PlanarData p(Lattice2D::square(1.0, 5), 1);
  const auto r = smooth_and_retrieve(p, 1.0);
  for (const auto& v : r.field.values) EXPECT_EQ(v, cplx{});
}

TEST(Preprocess, DerivativeInheritsTheMaskOfU) {
  NearField near;
  near.alphas = {0.3};
  near.value = bump(11, 1.0);
  near.dz = PlanarData(near.value.lattice, 1);
  for (auto& v : near.dz.values) v = 1.0;  // uniform: its own mask would keep everything
  const auto out = preprocess_near_field(near, {0.4, 1e-3});  // kernel collapses to a delta
  for (std::size_t i = 0; i < near.value.values.size(); ++i) {
    const bool kept = std::abs(near.value.values[i]) >= 0.4;
    EXPECT_EQ(out.value.values[i] != cplx{}, kept);
    EXPECT_EQ(out.dz.values[i] != cplx{}, kept);
  }
}

TEST(SubtractReference, SamplewiseAndShapeChecked) {
  MeasurementSet a, b;
  a.plane_z = b.plane_z = -14.0;
  a.alphas = b.alphas = {0.2};
  a.samples = PlanarData(Lattice2D::square(1.0, 2), 1);
  b.samples = a.samples;
  a.samples.values = {1.0, 2.0, 3.0, 4.0};
  b.samples.values = {1.0, 1.0, 1.0, 1.0};
  EXPECT_EQ(subtract_reference(a, b).samples.values, (std::vector<cplx>{0.0, 1.0, 2.0, 3.0}));
  b.alphas = {0.3};
  EXPECT_THROW(subtract_reference(a, b), ShapeError);
}
