#include <gtest/gtest.h>

#include "hconvex/config.hpp"
#include "hconvex/errors.hpp"
#include "hconvex/grid.hpp"

using namespace hconvex;

TEST(DomainConfig, DefaultsValidate) {
  DomainConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_DOUBLE_EQ(c.R, 5.0);
  EXPECT_DOUBLE_EQ(c.b, 2.0);
  EXPECT_DOUBLE_EQ(c.d, 9.0);
  EXPECT_DOUBLE_EQ(c.D, 14.0);
  EXPECT_DOUBLE_EQ(c.theta, 4.0);
}

TEST(DomainConfig, RejectsInvertedSourceInterval) {
  DomainConfig c;
  c.a1 = 0.6;
  c.a2 = 0.6;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(DomainConfig, RejectsSmallLambdaAndFewSources) {
  DomainConfig c;
  c.lambda = 0.5;
  EXPECT_THROW(c.validate(), ConfigError);
  c = DomainConfig{};
  c.n_src = 2;
  EXPECT_THROW(c.validate(), ConfigError);
}

// k = 2 pi f / c with lengths in units of 10 cm.
TEST(Wavenumber, MatchesTableFrequencies) {
  EXPECT_NEAR(frequency_from_wavenumber(6.62) / 1e9, 3.16, 5e-3);
  const double k = wavenumber_from_frequency(3.16e9);
  EXPECT_NEAR(k, 2.0 * 3.141592653589793 * 3.16e9 / 2.99792458e9, 1e-12);
  EXPECT_NEAR(frequency_from_wavenumber(k), 3.16e9, 1e-3);
  EXPECT_THROW(wavenumber_from_frequency(0.0), DomainError);
}

TEST(Grid3D, OverDomainCountsAndCoordinates) {
  const auto g = Grid3D::over_domain(5.0, 2.0, 0.2, 0.2);
  EXPECT_EQ(g.nx(), 51u);
  EXPECT_EQ(g.nz(), 21u);
  EXPECT_DOUBLE_EQ(g.x(0), -5.0);
  EXPECT_NEAR(g.x(50), 5.0, 1e-12);
  EXPECT_NEAR(g.z(20), 2.0, 1e-12);
  EXPECT_THROW(Grid3D::over_domain(5.0, 2.0, 0.3, 0.2), DomainError);
}

TEST(Grid3D, FlatIndexRoundTrip) {
  const Grid3D g(5, 4, 1.0, 1.0);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(g.flat(g.unflat(i)), i);
  EXPECT_EQ(g.flat(0, 0, 1), 1u);  // s fastest
  EXPECT_TRUE(g.on_boundary({0, 2, 2}));
  EXPECT_TRUE(g.on_boundary({2, 2, 0}));
  EXPECT_FALSE(g.on_boundary({2, 2, 2}));
}
