#pragma once

#include <span>
#include <vector>

#include "hconvex/basis.hpp"
#include "hconvex/config.hpp"
#include "hconvex/grid.hpp"
#include "hconvex/measurement.hpp"
#include "hconvex/quadrature.hpp"

namespace hconvex {

// Frequencies rho_i = (i - (n-1)/2) * step, symmetric about zero.
struct SpectralLattice {
  std::size_t n = 51;
  double step = 0.02;

  double rho(std::size_t i) const noexcept { return step * (static_cast<double>(i) - 0.5 * static_cast<double>(n - 1)); }
};

struct Spectrum {
  SpectralLattice freq;
  std::vector<cplx> values;  // index i1 * n + i2

  cplx& at(std::size_t i1, std::size_t i2) noexcept { return values[i1 * freq.n + i2]; }
  const cplx& at(std::size_t i1, std::size_t i2) const noexcept { return values[i1 * freq.n + i2]; }
};

// Vhat(rho1,rho2) = w^2 sum_ij u(x_i,y_j) exp(-i(x_i rho1 + y_j rho2)), w the lattice step.
Spectrum forward_dft2(std::span<const cplx> samples, const Lattice2D& lattice, const SpectralLattice& freq);

// (2pi)^-2 w_rho^2 sum_{|rho| < k} Vhat * transfer(rho) * exp(i(x rho1 + y rho2)) on `lattice`.
// DegenerateError when no frequency lies inside the propagating disc.
std::vector<cplx> inverse_dft2_band(const Spectrum& spec, const Lattice2D& lattice, double k,
                                    const std::vector<cplx>& transfer);

// Near-field U at z = -b for every source, and dU/dz there, from samples on the
// plane z = meas.plane_z. Each mode moves by exp(i k_z (plane_z + b)) with
// k_z = sqrt(k^2 - |rho|^2); the z-derivative brings -i k_z (the data travel toward -z).
NearField propagate_near_field(const MeasurementSet& meas, double k, double b, const SpectralLattice& freq = {});

PlanarData propagate_to_near_field(const MeasurementSet& meas, double k, double b, const SpectralLattice& freq = {});
PlanarData near_field_z_derivative(const MeasurementSet& meas, double k, double b, const SpectralLattice& freq = {});

// Ratio below which |u| on Gamma counts as vanishing, relative to max |u_i|.
inline constexpr double kNearZeroFieldRatio = 1e-6;

// psi0_n = <v, Psi_n>, psi1_n = <dv/dz, Psi_n> on Gamma with v = log(u/u_i), u = u_i + U.
// `sources` are the source abscissae (quadrature nodes) matching the near-field order.
CauchyData build_cauchy_data(const NearField& near, const BasisSet& basis, const Quadrature& sources, double k,
                             double b, double d);

}  // namespace hconvex
