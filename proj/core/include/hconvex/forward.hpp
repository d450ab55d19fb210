#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "hconvex/config.hpp"
#include "hconvex/grid.hpp"
#include "hconvex/measurement.hpp"
#include "hconvex/quadrature.hpp"

namespace hconvex {

// Axis-aligned box (half-extents) or sphere (radius) of constant dielectric value.
struct Inclusion {
  enum class Shape { box, sphere };
  Shape shape = Shape::box;
  std::array<double, 3> center{0.0, 0.0, 0.0};
  std::array<double, 3> half{0.25, 0.25, 0.25};
  double radius = 0.25;
  double value = 1.0;
};

// c >= 1 on a simulation grid over the domain; c == 1 off the inclusions.
struct DielectricField {
  Grid3D grid;
  std::vector<double> c;

  static DielectricField background(const Grid3D& grid);
  // Cell-averaged contrast: each node's cell is covered by the inclusions to some
  // volume fraction, and c - 1 is weighted by it.
  static DielectricField rasterize(const Grid3D& grid, const std::vector<Inclusion>& inclusions);

  double cell_volume() const noexcept { return grid.h() * grid.h() * grid.h_z(); }
  std::vector<std::size_t> support() const;  // nodes with c > 1
  void validate() const;
};

// Largest support the dense collocation solver accepts (matrix ~ n^2 * 16 bytes).
inline constexpr std::size_t kMaxSupportNodes = 6000;

/// e^{ik|x - x_a|} / (4 pi |x - x_a|) for the source x_a = (alpha, 0, -d).
cplx incident_wave(const std::array<double, 3>& x, double alpha, double k, double d);

/// Source abscissae: Gauss-Legendre nodes of [a1,a2].
Quadrature source_quadrature(const DomainConfig& cfg);

// Midpoint collocation of u = u_i + k^2 int G (c-1) u over the support of c - 1.
// The system is factored once; each source is then a back-substitution.
class LippmannSchwinger {
public:
  LippmannSchwinger(const DielectricField& c, double k, double d);

  std::size_t support_size() const noexcept { return support_.size(); }
  const std::vector<std::size_t>& support() const noexcept { return support_; }

  // Total field on the support nodes (in support() order). Throws SolverError when
  // the relative residual exceeds 1e-10.
  Eigen::VectorXcd solve(double alpha) const;

  // u_s(x) = k^2 sum_j G(x, x_j) (c_j - 1) V u_j for x off the support.
  cplx scattered_at(const std::array<double, 3>& x, const Eigen::VectorXcd& u_support) const;

  // Total field on every node of the simulation grid.
  ComplexField total_field(double alpha) const;

private:
  Grid3D grid_;
  double k_;
  double d_;
  std::vector<std::size_t> support_;
  std::vector<std::array<double, 3>> pos_;
  Eigen::VectorXcd weight_;  // k^2 (c_j - 1) V
  cplx self_;  // integral of G over the ball with the cell's volume
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;

  cplx kernel(std::size_t i, std::size_t j) const;
};

/// Total field on the simulation grid for one source.
ComplexField solve_lippmann_schwinger(const DielectricField& c, double alpha, double k, double d);

struct NoiseSpec {
  double level = 0.0;  // relative to the per-source RMS of u_s
  std::uint64_t seed = 0;
};

/// Scattered-field samples on the plane z = plane_z for every alpha.
MeasurementSet synthesize_measurements(const DielectricField& c, const std::vector<double>& alphas, double k,
                                       double d, double plane_z, const Lattice2D& lattice,
                                       const NoiseSpec& noise = {});

}  // namespace hconvex
