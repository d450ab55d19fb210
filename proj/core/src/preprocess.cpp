#include "hconvex/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "hconvex/errors.hpp"

namespace hconvex {

namespace {

double max_modulus(std::span<const cplx> v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

// One pass of the 1D filter along an axis with `n` points and the given stride.
template <typename T>
void smooth_axis(std::vector<T>& data, std::size_t n, std::size_t stride, std::size_t lines_outer,
                 std::size_t outer_stride, std::size_t lines_inner, const std::vector<double>& kernel) {
  const auto r = static_cast<long>(kernel.size()) - 1;
  std::vector<T> line(n);
  for (std::size_t o = 0; o < lines_outer; ++o) {
    for (std::size_t in = 0; in < lines_inner; ++in) {
      const std::size_t base = o * outer_stride + in;
      for (std::size_t i = 0; i < n; ++i) line[i] = data[base + i * stride];
      for (std::size_t i = 0; i < n; ++i) {
        T acc{};
        double wsum = 0.0;
        for (long m = -r; m <= r; ++m) {
          const long j = static_cast<long>(i) + m;
          if (j < 0 || j >= static_cast<long>(n)) continue;
          const double w = kernel[static_cast<std::size_t>(std::abs(m))];
          acc += w * line[static_cast<std::size_t>(j)];
          wsum += w;
        }
        data[base + i * stride] = acc / wsum;
      }
    }
  }
}

}  // namespace

MeasurementSet subtract_reference(const MeasurementSet& meas, const MeasurementSet& reference) {
  if (!meas.samples.lattice.matches(reference.samples.lattice)) throw ShapeError("reference lattice differs");
  if (meas.alphas.size() != reference.alphas.size()) throw ShapeError("reference source count differs");
  for (std::size_t s = 0; s < meas.alphas.size(); ++s) {
    if (std::abs(meas.alphas[s] - reference.alphas[s]) > 1e-9) throw ShapeError("reference source positions differ");
  }
  MeasurementSet out = meas;
  for (std::size_t i = 0; i < out.samples.values.size(); ++i) out.samples.values[i] -= reference.samples.values[i];
  return out;
}

PlanarData truncate_field(const PlanarData& g, double kappa1) {
  if (!(kappa1 > 0.0 && kappa1 < 1.0)) throw DomainError("kappa1 must lie in (0,1)");
  PlanarData out = g;
  for (std::size_t s = 0; s < g.n_sources; ++s) {
    auto src = out.source(s);
    const double cut = kappa1 * max_modulus(src);
    for (auto& v : src) {
      if (std::abs(v) < cut) v = cplx{};
    }
  }
  return out;
}

std::vector<double> gaussian_half_kernel(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("smoothing width must be positive");
  const auto r = static_cast<std::size_t>(std::ceil(4.0 * sigma));
  std::vector<double> k(r + 1);
  for (std::size_t i = 0; i <= r; ++i) {
    const double x = static_cast<double>(i) / sigma;
    k[i] = std::exp(-0.5 * x * x);
  }
  double sum = k[0];
  for (std::size_t i = 1; i <= r; ++i) sum += 2.0 * k[i];
  for (auto& v : k) v /= sum;
  return k;
}

std::vector<cplx> gaussian_smooth_2d(std::span<const cplx> values, std::size_t nx, std::size_t ny, double sigma) {
  if (values.size() != nx * ny) throw ShapeError("gaussian_smooth_2d: size mismatch");
  const auto kernel = gaussian_half_kernel(sigma);
  std::vector<cplx> data(values.begin(), values.end());
  smooth_axis(data, ny, 1, nx, ny, 1, kernel);   // along y
  smooth_axis(data, nx, ny, 1, 0, ny, kernel);   // along x
  return data;
}

std::vector<double> gaussian_smooth_3d(std::span<const double> values, std::size_t nx, std::size_t ny,
                                       std::size_t nz, double sigma) {
  if (values.size() != nx * ny * nz) throw ShapeError("gaussian_smooth_3d: size mismatch");
  const auto kernel = gaussian_half_kernel(sigma);
  std::vector<double> data(values.begin(), values.end());
  smooth_axis(data, nz, 1, nx * ny, nz, 1, kernel);    // along z
  smooth_axis(data, ny, nz, nx, ny * nz, nz, kernel);  // along y
  smooth_axis(data, nx, ny * nz, 1, 0, ny * nz, kernel);
  return data;
}

Retrieved smooth_and_retrieve(const PlanarData& g, double sigma) {
  Retrieved out{g, std::vector<double>(g.n_sources, 1.0)};
  const auto& lat = g.lattice;
  for (std::size_t s = 0; s < g.n_sources; ++s) {
    const double peak = max_modulus(g.source(s));
    if (peak == 0.0) continue;
    auto sm = gaussian_smooth_2d(g.source(s), lat.nx, lat.ny, sigma);
    const double speak = max_modulus(sm);
    if (!(speak > 0.0)) throw DegenerateError("smoothing annihilated a nonzero field");
    const double kappa2 = peak / speak;
    out.kappa2[s] = kappa2;
    auto dst = out.field.source(s);
    for (std::size_t i = 0; i < sm.size(); ++i) dst[i] = kappa2 * sm[i];
  }
  return out;
}

NearField preprocess_near_field(const NearField& near, const PreprocessOptions& opts) {
  if (!near.value.lattice.matches(near.dz.lattice) || near.value.n_sources != near.dz.n_sources) {
    throw ShapeError("near-field arrays disagree in shape");
  }
  const PlanarData u = truncate_field(near.value, opts.kappa1);
  PlanarData du = near.dz;
  for (std::size_t i = 0; i < du.values.size(); ++i) {
    if (u.values[i] == cplx{}) du.values[i] = cplx{};
  }
  return NearField{near.alphas, smooth_and_retrieve(u, opts.sigma).field, smooth_and_retrieve(du, opts.sigma).field};
}

}  // namespace hconvex
