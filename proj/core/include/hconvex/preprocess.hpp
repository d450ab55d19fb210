#pragma once

#include <span>
#include <vector>

#include "hconvex/grid.hpp"
#include "hconvex/measurement.hpp"

namespace hconvex {

inline constexpr double kDefaultKappa1 = 0.4;

// Samplewise meas - reference; ShapeError unless lattices and source lists agree.
MeasurementSet subtract_reference(const MeasurementSet& meas, const MeasurementSet& reference);

// Zero every sample with |g| < kappa1 * max |g| of its own source.
PlanarData truncate_field(const PlanarData& g, double kappa1);

// Normalized discrete Gaussian, sigma in samples, cut at 4 sigma. Index 0 is the centre.
std::vector<double> gaussian_half_kernel(double sigma);

// Separable Gaussian filter on an nx x ny (row-major) array; weights are renormalized
// where the kernel leaves the lattice.
std::vector<cplx> gaussian_smooth_2d(std::span<const cplx> values, std::size_t nx, std::size_t ny, double sigma);

// Same on a 3D array laid out like Grid3D (s fastest).
std::vector<double> gaussian_smooth_3d(std::span<const double> values, std::size_t nx, std::size_t ny,
                                       std::size_t nz, double sigma);

struct Retrieved {
  PlanarData field;
  std::vector<double> kappa2;  // per source
};

// Gaussian smoothing followed by rescaling each source by
// kappa2 = max|g| / max|smooth g|, which restores the peak modulus.
Retrieved smooth_and_retrieve(const PlanarData& g, double sigma);

struct PreprocessOptions {
  double kappa1 = kDefaultKappa1;
  double sigma = 1.0;
};

// Truncate U, reuse its mask on dU/dz, then smooth and retrieve both.
NearField preprocess_near_field(const NearField& near, const PreprocessOptions& opts = {});

}  // namespace hconvex
