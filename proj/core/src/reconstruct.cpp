#include "hconvex/reconstruct.hpp"

#include <algorithm>
#include <cmath>

#include "hconvex/preprocess.hpp"

namespace hconvex {

ScalarField recover_dielectric(const ComplexField& V, const InversionProblem& P, const Quadrature& sources) {
  const auto& g = P.grid();
  const std::size_t N = P.N();
  if (V.components() != N || !(V.grid() == g)) throw ShapeError("recover_dielectric: state shape mismatch");
  const double k2 = P.k() * P.k();
  const std::size_t L = sources.size();
  if (L == 0) throw ShapeError("recover_dielectric: no source positions");

  std::vector<double> psi(L * N);
  for (std::size_t l = 0; l < L; ++l) {
    for (std::size_t n = 0; n < N; ++n) psi[l * N + n] = P.basis().value(n, sources.nodes[l]);
  }

  ScalarField c(g, 1, 1.0);
  std::vector<cplx> lap(N);
  std::vector<std::array<cplx, 3>> grad(N);
  for (std::size_t node = 0; node < g.size(); ++node) {
    if (!P.is_interior(node)) continue;
    for (std::size_t n = 0; n < N; ++n) {
      lap[n] = laplacian_at(V, n, node);
      grad[n] = gradient_at(V, n, node);
    }
    const auto x = g.point(g.unflat(node));
    double acc = 0.0;
    for (std::size_t l = 0; l < L; ++l) {
      cplx dv{};
      std::array<cplx, 3> gv{};
      for (std::size_t n = 0; n < N; ++n) {
        const double w = psi[l * N + n];
        dv += w * lap[n];
        for (int a = 0; a < 3; ++a) gv[a] += w * grad[n][a];
      }
      const auto xt = xtilde(x, sources.nodes[l], P.k(), P.d());
      cplx bracket = dv;
      for (int a = 0; a < 3; ++a) bracket += gv[a] * gv[a] + 2.0 * gv[a] * xt[a];
      acc += std::abs(-bracket / k2);
    }
    c(node) = acc / static_cast<double>(L) + 1.0;
  }
  return c;
}

ScalarField finalize_field(const ScalarField& c_raw, double sigma) {
  if (!c_raw.all_finite()) throw DomainError("finalize_field: non-finite input");
  const auto& g = c_raw.grid();
  std::vector<double> excess(g.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    excess[i] = std::abs(c_raw(i)) - 1.0;
    peak = std::max(peak, excess[i]);
  }
  const auto sm = gaussian_smooth_3d(excess, g.nx(), g.ny(), g.nz(), sigma);
  const double speak = *std::max_element(sm.begin(), sm.end());
  const double rho = (peak > 0.0 && speak > 0.0) ? peak / speak : 1.0;
  ScalarField out(g, 1);
  for (std::size_t i = 0; i < g.size(); ++i) out(i) = 1.0 + rho * sm[i];
  return out;
}

InclusionReport extract_inclusion(const ScalarField& c, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw DomainError("fraction must lie in (0,1)");
  const auto& g = c.grid();
  InclusionReport r;
  r.mask.assign(g.size(), 0);
  double peak = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) peak = std::max(peak, c(i) - 1.0);
  r.max_value = 1.0 + peak;
  if (!(peak > 0.0)) return r;
  r.threshold = fraction * peak;
  r.bbox_min = {1e300, 1e300, 1e300};
  r.bbox_max = {-1e300, -1e300, -1e300};
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (c(i) - 1.0 < r.threshold) continue;
    r.mask[i] = 1;
    ++r.voxels;
    const auto x = g.point(g.unflat(i));
    for (int a = 0; a < 3; ++a) {
      r.centroid[a] += x[a];
      r.bbox_min[a] = std::min(r.bbox_min[a], x[a]);
      r.bbox_max[a] = std::max(r.bbox_max[a], x[a]);
    }
  }
  r.found = r.voxels > 0;
  for (auto& v : r.centroid) v /= static_cast<double>(r.voxels);
  return r;
}

}  // namespace hconvex
