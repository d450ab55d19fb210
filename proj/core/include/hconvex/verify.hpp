#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hconvex/basis.hpp"
#include "hconvex/config.hpp"
#include "hconvex/grid.hpp"
#include "hconvex/inversion.hpp"

namespace hconvex {

// u(z) with its first two derivatives on [-b, b].
struct Profile1D {
  std::function<double(double)> u;
  std::function<double(double)> du;
  std::function<double(double)> d2u;
};

// u = sum_j c_j (z + b)^(j + 2), which vanishes to second order at z = -b.
Profile1D polynomial_profile(std::vector<double> coeffs, double b);

// int u''^2 mu / (int u''^2 mu + lambda int u'^2 mu + lambda^3 int u^2 mu), with mu the
// normalized weight. PreconditionError if u(-b) or u'(-b) is not zero,
// DegenerateError when every integral vanishes.
double carleman_1d_ratio(const Profile1D& u, double b, double lambda, double theta = 4.0,
                         std::size_t intervals = 20000);

// Same from samples on a uniform grid over [-b, b] (odd count), derivatives by differences.
double carleman_1d_ratio(const std::vector<double>& samples, double b, double lambda, double theta = 4.0);

struct CarlemanEnsembleReport {
  std::vector<double> lambdas;
  std::vector<double> min_ratio;  // per lambda
  double decay = 0.0;             // max(min_ratio) / min(min_ratio)
  bool pass = false;              // every min_ratio >= floor and decay <= 2
};

CarlemanEnsembleReport carleman_1d_ensemble(const std::vector<double>& lambdas, std::size_t count, std::uint64_t seed,
                                            double b = 2.0, double theta = 4.0, double floor = 0.01);

struct PfdReport {
  double lhs = 0.0;     // sum h^2 int (Delta^h u)^2 mu
  double d2z = 0.0;     // sum h^2 int (u_zz)^2 mu
  double dz = 0.0;      // lambda * sum h^2 int u_z^2 mu
  double zeroth = 0.0;  // lambda^3 * sum h^2 int (|grad^h u|^2 + u^2) mu
  bool holds = false;   // lhs >= eps * (d2z + dz + zeroth)
};

// u is a real field on the grid with u = 0 on the s = 0 and s = 1 layers.
PfdReport carleman_pfd_check(const ScalarField& u, const CWF& cwf, double eps = 1e-3);

struct PfdEnsembleReport {
  std::vector<double> lambdas;
  std::vector<double> flag_rate;
};
PfdEnsembleReport carleman_pfd_ensemble(const Grid3D& grid, const std::vector<double>& lambdas, std::size_t count,
                                        std::uint64_t seed, double theta = 4.0, double eps = 1e-3);

struct GradientCheckReport {
  std::size_t pairs = 0;
  double max_rel_error = 0.0;
  bool pass = false;
};

// Analytic directional derivative vs (J(V+er) - J(V-er)) / 2e at random admissible
// points and directions.
GradientCheckReport gradient_check(const InversionProblem& P, std::size_t pairs, std::uint64_t seed,
                                   double tol = 1e-5);

struct ConvexityReport {
  std::size_t trials = 0;
  std::size_t violations = 0;
  double fraction = 0.0;
  double min_relative_gap = 0.0;
};

// Bregman gap J(V+r) - J(V) - <J'(V), r> over random admissible pairs; a violation is a
// gap below -1e-12 max(J(V), J(V+r), |<J'(V), r>|). Entries of V and r are drawn with
// modulus <= 1.
ConvexityReport convexity_trial(const InversionProblem& P, std::size_t trials, std::uint64_t seed);

// Random complex Cauchy data, smooth across the lattice, for harness problems.
CauchyData random_cauchy(const Lattice2D& lattice, std::size_t N, std::uint64_t seed, double scale = 0.1);

// 7x7x7 problem over (-2,2)^3 with seeded random Cauchy data, used by the gradient and
// convexity harnesses. Source geometry (k, d, a1, a2, theta) comes from `cfg`.
class HarnessProblem {
public:
  HarnessProblem(std::size_t N, double lambda, std::uint64_t seed, const DomainConfig& cfg = {},
                 std::size_t nodes = 7);
  HarnessProblem(const HarnessProblem&) = delete;
  HarnessProblem& operator=(const HarnessProblem&) = delete;

  const InversionProblem& problem() const noexcept { return *problem_; }
  const CauchyData& cauchy() const noexcept { return cauchy_; }

private:
  std::unique_ptr<BasisSet> basis_;
  CauchyData cauchy_;
  std::unique_ptr<InversionProblem> problem_;
};

std::string format_basis_report(const BasisReport& r, std::size_t N);

}  // namespace hconvex
