#include "hconvex/grid.hpp"

#include <cmath>
#include <string>

namespace hconvex {

namespace {

std::size_t intervals(double length, double step, const char* axis) {
  const double n = length / step;
  const double r = std::round(n);
  if (r < 1.0 || std::abs(n - r) > 1e-9 * std::max(1.0, n)) {
    throw DomainError(std::string("grid step does not divide the ") + axis + " extent");
  }
  return static_cast<std::size_t>(r);
}

}  // namespace

Grid3D::Grid3D(std::size_t nxy, std::size_t nz, double R, double b)
  : nxy_(nxy), nz_(nz), R_(R), b_(b) {
  if (nxy < 2 || nz < 2) throw DomainError("grid needs at least two points per axis");
  if (!(R > 0.0) || !(b > 0.0)) throw DomainError("grid extents must be positive");
  h_ = 2.0 * R / static_cast<double>(nxy - 1);
  hz_ = 2.0 * b / static_cast<double>(nz - 1);
}

Grid3D Grid3D::over_domain(double R, double b, double h, double h_z) {
  if (!(h > 0.0) || !(h_z > 0.0)) throw DomainError("grid steps must be positive");
  return Grid3D(intervals(2.0 * R, h, "x,y") + 1, intervals(2.0 * b, h_z, "z") + 1, R, b);
}

Lattice2D Lattice2D::square(double half_width, std::size_t n) {
  if (n < 2) throw DomainError("lattice needs at least two points per axis");
  Lattice2D lat;
  lat.nx = lat.ny = n;
  lat.x0 = lat.y0 = -half_width;
  lat.step = 2.0 * half_width / static_cast<double>(n - 1);
  return lat;
}

}  // namespace hconvex
