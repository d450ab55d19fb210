#include <gtest/gtest.h>

#include <cmath>

#include "hconvex/errors.hpp"
#include "hconvex/quadrature.hpp"
#include "hconvex/verify.hpp"

using namespace hconvex;

// u = (z+b)^2: u'' = 2, u' = 2(z+b); integrals against the normalized weight by an
// independent Gauss rule.
TEST(Carleman1D, SquareProfileAgainstGaussIntegrals) {
  const double b = 2.0, theta = 4.0, lambda = 2.0;
  const auto u = polynomial_profile({1.0}, b);
  const auto q = gauss_legendre(200, -b, b);
  double i2 = 0, i1 = 0, i0 = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double z = q.nodes[i], t = z + b;
    const double w = q.weights[i] * std::exp(2 * lambda * ((z - theta) * (z - theta) - (b + theta) * (b + theta)));
    i2 += w * 4.0;
    i1 += w * 4.0 * t * t;
    i0 += w * t * t * t * t;
  }
  const double ref = i2 / (i2 + lambda * i1 + lambda * lambda * lambda * i0);
  EXPECT_NEAR(carleman_1d_ratio(u, b, lambda, theta), ref, 1e-9 * ref);
  EXPECT_GT(ref, 0.0);
}

TEST(Carleman1D, ScaleInvariant) {
  const auto u = polynomial_profile({0.3, -1.2, 0.5}, 2.0);
  const auto u10 = polynomial_profile({3.0, -12.0, 5.0}, 2.0);
  for (double lambda : {1.0, 4.0}) {
    EXPECT_NEAR(carleman_1d_ratio(u, 2.0, lambda), carleman_1d_ratio(u10, 2.0, lambda), 1e-12);
  }
}

TEST(Carleman1D, ZeroIsDegenerateAndBoundaryChecked) {
  EXPECT_THROW(carleman_1d_ratio(polynomial_profile({0.0}, 2.0), 2.0, 1.0), DegenerateError);
  Profile1D shifted{[](double z) { return z * z; }, [](double z) { return 2 * z; }, [](double) { return 2.0; }};
  EXPECT_THROW(carleman_1d_ratio(shifted, 2.0, 1.0), PreconditionError);
}

TEST(Carleman1D, SampledVersionAgreesWithProfile) {
  const auto u = polynomial_profile({1.0, 0.5}, 2.0);
  std::vector<double> s(2001);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = u.u(-2.0 + 4.0 * i / 2000.0);
  EXPECT_NEAR(carleman_1d_ratio(s, 2.0, 2.0), carleman_1d_ratio(u, 2.0, 2.0), 1e-3);
}

TEST(Carleman1D, EnsembleBoundedAndSlowlyDecaying) {
  const auto r = carleman_1d_ensemble({1, 2, 4, 8}, 100, 2024);
  EXPECT_TRUE(r.pass);
  for (double m : r.min_ratio) EXPECT_GE(m, 0.01);
  EXPECT_LE(r.decay, 2.0);
}

TEST(CarlemanPfd, ZeroFieldTrivial) {
  const Grid3D g(7, 7, 2.0, 2.0);
  const auto r = carleman_pfd_check(ScalarField(g, 1), CWF{2.0, 4.0, 2.0});
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_EQ(r.d2z + r.dz + r.zeroth, 0.0);
}

TEST(CarlemanPfd, RejectsNonzeroBoundaryLayers) {
  const Grid3D g(7, 7, 2.0, 2.0);
  ScalarField u(g, 1);
  u(g.flat(3, 3, 1)) = 1.0;
  EXPECT_THROW(carleman_pfd_check(u, CWF{2.0, 4.0, 2.0}), PreconditionError);
}

TEST(CarlemanPfd, EnsembleFlagsEverywhere) {
  const Grid3D g(9, 9, 2.0, 2.0);
  const auto r = carleman_pfd_ensemble(g, {2, 4, 8}, 20, 5);
  for (double f : r.flag_rate) EXPECT_EQ(f, 1.0);
}

// With the nonlinearity off J is a convex quadratic, so no trial may violate.
TEST(Convexity, LinearProblemNeverViolates) {
  const DomainConfig cfg;
  const Grid3D grid(7, 7, 2.0, 2.0);
  const auto basis = build_basis(cfg.a1, cfg.a2, 2);
  const auto cd = random_cauchy(Lattice2D::square(2.0, 7), 2, 1);
  InversionOptions lin;
  lin.nonlinear = false;
  const InversionProblem P(grid, basis, cd, CWF{1.0, cfg.theta, 2.0}, cfg.k, cfg.d, lin);
  const auto r = convexity_trial(P, 50, 3);
  EXPECT_EQ(r.violations, 0u);
  EXPECT_THROW(convexity_trial(P, 10, 3), DomainError);
}

TEST(Convexity, SeededRunsAreReproducible) {
  const HarnessProblem a(2, 5.0, 4), b(2, 5.0, 4);
  const auto ra = convexity_trial(a.problem(), 50, 9);
  const auto rb = convexity_trial(b.problem(), 50, 9);
  EXPECT_EQ(ra.violations, rb.violations);
  EXPECT_EQ(ra.min_relative_gap, rb.min_relative_gap);
}

TEST(BasisReport, FormatsAllFields) {
  const auto text = format_basis_report(inspect_basis(build_basis(0.1, 0.6, 4)), 4);
  EXPECT_NE(text.find("N=4"), std::string::npos) << text;
}
