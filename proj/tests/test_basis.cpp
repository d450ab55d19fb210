#include <gtest/gtest.h>

#include <cmath>

#include "hconvex/basis.hpp"
#include "hconvex/errors.hpp"
#include "hconvex/quadrature.hpp"

using namespace hconvex;

namespace {

// Inner products by a quadrature unrelated to the basis' own rule.
double inner(const BasisSet& B, std::size_t m, std::size_t n, bool deriv_n) {
  const auto q = composite_simpson(4000, B.a1(), B.a2());
  return q.integrate([&](double a) { return B.value(m, a) * (deriv_n ? B.derivative(n, a) : B.value(n, a)); });
}

}  // namespace

class BasisSizes : public ::testing::TestWithParam<std::size_t> {};

TEST_P(BasisSizes, OrthonormalUnderIndependentQuadrature) {
  const auto B = build_basis(0.1, 0.6, GetParam());
  for (std::size_t m = 0; m < B.N(); ++m) {
    for (std::size_t n = 0; n < B.N(); ++n) EXPECT_NEAR(inner(B, m, n, false), m == n ? 1.0 : 0.0, 1e-8);
  }
}

TEST_P(BasisSizes, SIsUnitUpperTriangularWithUnitDeterminant) {
  const auto B = build_basis(0.1, 0.6, GetParam());
  const auto r = inspect_basis(B);
  EXPECT_LE(r.orthonormality_error, 1e-8);
  EXPECT_LE(r.s_triangular_error, 1e-8);
  EXPECT_NEAR(r.det_S, 1.0, 1e-6);
  EXPECT_LE(r.s_inverse_error, 1e-6);
}

// s_mn = <Psi_n', Psi_m> recomputed by Simpson on the evaluated derivative.
TEST_P(BasisSizes, SMatchesIndependentProjection) {
  const auto B = build_basis(0.1, 0.6, GetParam());
  for (std::size_t m = 0; m < B.N(); ++m) {
    for (std::size_t n = 0; n < B.N(); ++n) {
      const double s = inner(B, m, n, true);
      EXPECT_NEAR(B.S()(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)), s, 1e-7 * std::max(1.0, std::abs(s)));
      EXPECT_NEAR(B.B(m, n), s, 1e-7 * std::max(1.0, std::abs(s)));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(N, BasisSizes, ::testing::Values(2u, 4u, 8u));

TEST(Basis, FirstFunctionIsNormalizedExponential) {
  const auto B = build_basis(0.1, 0.6, 3);
  const double norm = std::sqrt((std::exp(1.2) - std::exp(0.2)) / 2.0);
  for (double a : {0.1, 0.3, 0.6}) EXPECT_NEAR(B.value(0, a), std::exp(a) / norm, 1e-12);
  // N = 1: the single function's S entry is its diagonal 1.
  const auto B1 = build_basis(0.1, 0.6, 1);
  EXPECT_NEAR(B1.S()(0, 0), 1.0, 1e-12);
}

TEST(Basis, DerivativeMatchesFiniteDifference) {
  const auto B = build_basis(0.1, 0.6, 5);
  const double e = 1e-6;
  for (std::size_t n = 0; n < 5; ++n) {
    for (double a : {0.2, 0.35, 0.5}) {
      EXPECT_NEAR(B.derivative(n, a), (B.value(n, a + e) - B.value(n, a - e)) / (2 * e), 1e-5);
    }
  }
}

TEST(Basis, TripleProductsAgreeWithQuadrature) {
  const auto B = build_basis(0.1, 0.6, 3);
  const auto q = composite_simpson(4000, 0.1, 0.6);
  for (std::size_t m = 0; m < 3; ++m) {
    for (std::size_t n = 0; n < 3; ++n) {
      for (std::size_t l = 0; l < 3; ++l) {
        const double ref = q.integrate([&](double a) { return B.value(m, a) * B.value(n, a) * B.derivative(l, a); });
        EXPECT_NEAR(B.A(m, n, l), ref, 1e-7 * std::max(1.0, std::abs(ref)));
      }
    }
  }
}

TEST(Basis, ProjectionRoundTrip) {
  const auto B = build_basis(0.1, 0.6, 4);
  std::vector<std::complex<double>> coeff{{1, 0}, {0.5, -0.25}, {0, 2}, {-1, 1}};
  std::vector<std::complex<double>> samples;
  for (double a : B.quadrature().nodes) samples.push_back(synthesize_from_basis(coeff, B, a));
  const auto back = project_onto_basis(samples, B);
  for (std::size_t n = 0; n < 4; ++n) EXPECT_NEAR(std::abs(back[n] - coeff[n]), 0.0, 1e-11);
}

TEST(Basis, ErrorsOnBadArguments) {
  EXPECT_THROW(build_basis(0.6, 0.1, 4), DomainError);
  EXPECT_THROW(build_basis(0.1, 0.6, 0), DomainError);
  const auto B = build_basis(0.1, 0.6, 2);
  std::vector<std::complex<double>> c{{1, 0}, {0, 0}};
  EXPECT_THROW(synthesize_from_basis(c, B, 0.9), DomainError);
  std::vector<std::complex<double>> wrong(3);
  EXPECT_THROW(project_onto_basis(wrong, B), ShapeError);
}

TEST(Basis, RejectsOversizedBasis) {
  EXPECT_THROW(build_basis(0.1, 0.6, kMaxBasisSize + 1), DomainError);
  EXPECT_THROW(build_basis(0.1, 0.6, 4, 16), DomainError);
}
