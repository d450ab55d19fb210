#include <benchmark/benchmark.h>

#include "hconvex/basis.hpp"
#include "hconvex/forward.hpp"
#include "hconvex/inversion.hpp"
#include "hconvex/propagation.hpp"
#include "hconvex/verify.hpp"

using namespace hconvex;

namespace {

// J and its gradient on the full 51 x 51 x 21 inversion grid with random Cauchy data.
void BM_GradientJ(benchmark::State& state) {
  const DomainConfig cfg;
  const auto grid = Grid3D::over_domain(cfg.R, cfg.b, cfg.h, cfg.h_z);
  const auto basis = build_basis(cfg.a1, cfg.a2, static_cast<std::size_t>(state.range(0)));
  const auto cd = random_cauchy(Lattice2D::square(cfg.R, grid.nx()), basis.N(), 1);
  const InversionProblem P(grid, basis, cd, CWF{cfg.lambda, cfg.theta, cfg.b}, cfg.k, cfg.d);
  const auto V = build_starting_point(P, cd);
  for (auto _ : state) {
    double J = 0.0;
    auto G = gradient_J(V, P, &J);
    benchmark::DoNotOptimize(G.values().data());
  }
}
BENCHMARK(BM_GradientJ)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

// Factorization plus one solve for a cube of side 0.5 at simulation step 0.1.
void BM_LippmannSchwinger(benchmark::State& state) {
  const double h = 1.0 / static_cast<double>(state.range(0));
  const auto g = Grid3D::over_domain(2.0, 2.0, h, h);
  Inclusion box;
  box.center = {0.0, 0.0, -1.55};
  box.value = 5.0;
  const auto c = DielectricField::rasterize(g, {box});
  for (auto _ : state) {
    const LippmannSchwinger ls(c, 6.62, 9.0);
    auto u = ls.solve(0.3);
    benchmark::DoNotOptimize(u.data());
  }
  state.counters["support"] = static_cast<double>(c.support().size());
}
BENCHMARK(BM_LippmannSchwinger)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_PropagateNearField(benchmark::State& state) {
  MeasurementSet m;
  m.plane_z = -14.0;
  m.alphas.assign(10, 0.3);
  m.samples = PlanarData(Lattice2D::square(5.0, 51), 10);
  for (std::size_t i = 0; i < m.samples.values.size(); ++i) m.samples.values[i] = {std::sin(0.01 * i), 1.0};
  for (auto _ : state) {
    auto near = propagate_near_field(m, 6.62, 2.0);
    benchmark::DoNotOptimize(near.value.values.data());
  }
}
BENCHMARK(BM_PropagateNearField)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
