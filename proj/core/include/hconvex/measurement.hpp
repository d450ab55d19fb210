#pragma once

#include <filesystem>
#include <vector>

#include "hconvex/grid.hpp"

namespace hconvex {

// Backscatter samples u_s(x, y, -D, alpha) on the far-field plane.
struct MeasurementSet {
  double plane_z = 0.0;
  std::vector<double> alphas;
  PlanarData samples;

  std::size_t n_sources() const noexcept { return alphas.size(); }
};

// Dirichlet/Neumann pair per Fourier index on the Gamma lattice: psi0[n], psi1[n].
// Stored as PlanarData whose "source" axis is the Fourier index.
struct CauchyData {
  PlanarData psi0;
  PlanarData psi1;

  std::size_t n_modes() const noexcept { return psi0.n_sources; }
  const Lattice2D& lattice() const noexcept { return psi0.lattice; }
  void check() const;
};

// CSV with header `alpha,x,y,re,im`, one row per sample, any row order.
MeasurementSet load_measurements(const std::filesystem::path& path, double plane_z);
void save_measurements(const MeasurementSet& m, const std::filesystem::path& path);

// CSV with header `n,x,y,re0,im0,re1,im1`.
CauchyData load_cauchy(const std::filesystem::path& path);
void save_cauchy(const CauchyData& c, const std::filesystem::path& path);

// Near-field U and dU/dz per source: header `alpha,x,y,re,im,dre,dim`.
struct NearField {
  std::vector<double> alphas;
  PlanarData value;
  PlanarData dz;
};
NearField load_near_field(const std::filesystem::path& path);
void save_near_field(const NearField& f, const std::filesystem::path& path);

}  // namespace hconvex
