#include "hconvex/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <string>

#include "hconvex/errors.hpp"
#include "hconvex/forward.hpp"

namespace hconvex {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// e^{sign * i * t_a * r_b}, row a, column b.
std::vector<cplx> phase_table(std::size_t na, double a0, double astep, const SpectralLattice& f, double sign) {
  std::vector<cplx> t(na * f.n);
  for (std::size_t a = 0; a < na; ++a) {
    const double x = a0 + astep * static_cast<double>(a);
    for (std::size_t r = 0; r < f.n; ++r) t[a * f.n + r] = std::polar(1.0, sign * x * f.rho(r));
  }
  return t;
}

std::vector<cplx> transfer_factors(const SpectralLattice& f, double k, double distance, bool derivative) {
  std::vector<cplx> t(f.n * f.n, cplx{});
  for (std::size_t i = 0; i < f.n; ++i) {
    for (std::size_t j = 0; j < f.n; ++j) {
      const double r2 = f.rho(i) * f.rho(i) + f.rho(j) * f.rho(j);
      if (r2 >= k * k) continue;
      const double kz = std::sqrt(k * k - r2);
      cplx v = std::polar(1.0, kz * distance);
      if (derivative) v *= cplx{0.0, -kz};
      t[i * f.n + j] = v;
    }
  }
  return t;
}

}  // namespace

Spectrum forward_dft2(std::span<const cplx> samples, const Lattice2D& lat, const SpectralLattice& freq) {
  if (samples.size() != lat.size()) throw ShapeError("forward_dft2: sample count differs from lattice size");
  if (!(lat.step > 0.0) || lat.nx < 1 || lat.ny < 1) throw ShapeError("forward_dft2: lattice must be uniform");
  if (freq.n == 0 || !(freq.step > 0.0)) throw ShapeError("forward_dft2: empty frequency lattice");
  const std::size_t n = freq.n;
  const auto ex = phase_table(lat.nx, lat.x0, lat.step, freq, -1.0);
  const auto ey = phase_table(lat.ny, lat.y0, lat.step, freq, -1.0);

  // T(i, r2) = sum_j u(i,j) e^{-i y_j rho_r2}
  std::vector<cplx> T(lat.nx * n, cplx{});
  for (std::size_t i = 0; i < lat.nx; ++i) {
    for (std::size_t j = 0; j < lat.ny; ++j) {
      const cplx u = samples[lat.flat(i, j)];
      if (u == cplx{}) continue;
      for (std::size_t r = 0; r < n; ++r) T[i * n + r] += u * ey[j * n + r];
    }
  }
  Spectrum s{freq, std::vector<cplx>(n * n, cplx{})};
  const double w2 = lat.step * lat.step;
  for (std::size_t r1 = 0; r1 < n; ++r1) {
    for (std::size_t i = 0; i < lat.nx; ++i) {
      const cplx e = ex[i * n + r1] * w2;
      for (std::size_t r2 = 0; r2 < n; ++r2) s.at(r1, r2) += e * T[i * n + r2];
    }
  }
  return s;
}

std::vector<cplx> inverse_dft2_band(const Spectrum& spec, const Lattice2D& lat, double k,
                                    const std::vector<cplx>& transfer) {
  const auto& f = spec.freq;
  const std::size_t n = f.n;
  if (transfer.size() != n * n || spec.values.size() != n * n) throw ShapeError("inverse_dft2_band: size mismatch");
  bool any = false;
  for (std::size_t i = 0; i < n && !any; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (f.rho(i) * f.rho(i) + f.rho(j) * f.rho(j) < k * k) {
        any = true;
        break;
      }
    }
  }
  if (!any) throw DegenerateError("no propagating frequency: every |rho| >= k");

  const double scale = f.step * f.step / (kTwoPi * kTwoPi);
  std::vector<cplx> filtered(n * n);
  for (std::size_t r1 = 0; r1 < n; ++r1) {
    for (std::size_t r2 = 0; r2 < n; ++r2) {
      const std::size_t m = r1 * n + r2;
      const bool propagating = f.rho(r1) * f.rho(r1) + f.rho(r2) * f.rho(r2) < k * k;
      filtered[m] = propagating ? spec.values[m] * transfer[m] * scale : cplx{};
    }
  }

  const auto ex = phase_table(lat.nx, lat.x0, lat.step, f, 1.0);
  const auto ey = phase_table(lat.ny, lat.y0, lat.step, f, 1.0);
  // W(i, r2) = sum_r1 F(r1, r2) e^{i x_i rho_r1}
  std::vector<cplx> W(lat.nx * n, cplx{});
  for (std::size_t i = 0; i < lat.nx; ++i) {
    for (std::size_t r1 = 0; r1 < n; ++r1) {
      const cplx e = ex[i * n + r1];
      for (std::size_t r2 = 0; r2 < n; ++r2) W[i * n + r2] += e * filtered[r1 * n + r2];
    }
  }
  std::vector<cplx> out(lat.size(), cplx{});
  for (std::size_t i = 0; i < lat.nx; ++i) {
    for (std::size_t j = 0; j < lat.ny; ++j) {
      cplx acc{};
      for (std::size_t r2 = 0; r2 < n; ++r2) acc += W[i * n + r2] * ey[j * n + r2];
      out[lat.flat(i, j)] = acc;
    }
  }
  return out;
}

NearField propagate_near_field(const MeasurementSet& meas, double k, double b, const SpectralLattice& freq) {
  if (!(k > 0.0)) throw DomainError("propagation: k must be positive");
  if (!(-meas.plane_z >= b)) throw DomainError("propagation: measurement plane must lie below z = -b");
  const double distance = meas.plane_z + b;  // -D + b
  const auto t0 = transfer_factors(freq, k, distance, false);
  const auto t1 = transfer_factors(freq, k, distance, true);
  const auto& lat = meas.samples.lattice;
  NearField out{meas.alphas, PlanarData(lat, meas.n_sources()), PlanarData(lat, meas.n_sources())};
  for (std::size_t s = 0; s < meas.n_sources(); ++s) {
    const Spectrum spec = forward_dft2(meas.samples.source(s), lat, freq);
    const auto u = inverse_dft2_band(spec, lat, k, t0);
    const auto du = inverse_dft2_band(spec, lat, k, t1);
    std::copy(u.begin(), u.end(), out.value.source(s).begin());
    std::copy(du.begin(), du.end(), out.dz.source(s).begin());
  }
  return out;
}

PlanarData propagate_to_near_field(const MeasurementSet& meas, double k, double b, const SpectralLattice& freq) {
  return propagate_near_field(meas, k, b, freq).value;
}

PlanarData near_field_z_derivative(const MeasurementSet& meas, double k, double b, const SpectralLattice& freq) {
  return propagate_near_field(meas, k, b, freq).dz;
}

CauchyData build_cauchy_data(const NearField& near, const BasisSet& basis, const Quadrature& sources, double k,
                             double b, double d) {
  const std::size_t ns = near.alphas.size();
  const auto& lat = near.value.lattice;
  if (ns != sources.size()) throw ShapeError("build_cauchy_data: source count differs from the quadrature");
  if (near.value.n_sources != ns || near.dz.n_sources != ns || !lat.matches(near.dz.lattice)) {
    throw ShapeError("build_cauchy_data: near-field arrays disagree in shape");
  }
  for (std::size_t s = 0; s < ns; ++s) {
    if (std::abs(near.alphas[s] - sources.nodes[s]) > 1e-9) {
      throw ShapeError("build_cauchy_data: source positions do not match the quadrature nodes");
    }
  }

  const double z = -b;
  const std::size_t np = lat.size();
  std::vector<cplx> v(np * ns);
  std::vector<cplx> dv(np * ns);
  std::vector<cplx> ui(np * ns);
  double max_ui = 0.0;
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t i = 0; i < lat.nx; ++i) {
      for (std::size_t j = 0; j < lat.ny; ++j) {
        const std::size_t node = lat.flat(i, j);
        ui[node * ns + s] = incident_wave({lat.x(i), lat.y(j), z}, near.alphas[s], k, d);
        max_ui = std::max(max_ui, std::abs(ui[node * ns + s]));
      }
    }
  }
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t i = 0; i < lat.nx; ++i) {
      for (std::size_t j = 0; j < lat.ny; ++j) {
        const std::size_t node = lat.flat(i, j);
        const cplx u_i = ui[node * ns + s];
        const cplx u = u_i + near.value.at(s, i, j);
        if (std::abs(u) < kNearZeroFieldRatio * max_ui) {
          throw NearZeroFieldError("total field vanishes on Gamma at node " + std::to_string(node) + ", source " +
                                       std::to_string(s),
                                   node, s);
        }
        // d/dz log u_i = (ik/r - 1/r^2) (z + d)
        const double dx = lat.x(i) - near.alphas[s];
        const double dy = lat.y(j);
        const double r = std::sqrt(dx * dx + dy * dy + (z + d) * (z + d));
        const cplx dlog_ui = (cplx{0.0, k / r} - 1.0 / (r * r)) * (z + d);
        const cplx du = u_i * dlog_ui + near.dz.at(s, i, j);
        v[node * ns + s] = std::log(u / u_i);
        dv[node * ns + s] = du / u - dlog_ui;
      }
    }
  }

  // Unwrap the phase of v along the source axis, anchored at the source where |v| is
  // smallest (principal branch there).
  auto column = [&](std::size_t node) { return std::span<cplx>(v.data() + node * ns, ns); };
  for (std::size_t node = 0; node < np; ++node) {
    auto col = column(node);
    std::size_t anchor = 0;
    for (std::size_t s = 1; s < ns; ++s) {
      if (std::abs(col[s]) < std::abs(col[anchor])) anchor = s;
    }
    for (std::size_t s = anchor + 1; s < ns; ++s) {
      const double jump = col[s].imag() - col[s - 1].imag();
      col[s] -= cplx{0.0, kTwoPi * std::round(jump / kTwoPi)};
    }
    for (std::size_t s = anchor; s-- > 0;) {
      const double jump = col[s].imag() - col[s + 1].imag();
      col[s] -= cplx{0.0, kTwoPi * std::round(jump / kTwoPi)};
    }
  }
  // Lateral pass: breadth-first from the quietest node, shifting whole columns by 2pi
  // multiples to agree with an already visited neighbour.
  auto mean_phase = [&](std::size_t node) {
    double acc = 0.0;
    for (const auto& c : column(node)) acc += c.imag();
    return acc / static_cast<double>(ns);
  };
  std::size_t seed = 0;
  double best = 1e300;
  for (std::size_t node = 0; node < np; ++node) {
    double m = 0.0;
    for (const auto& c : column(node)) m = std::max(m, std::abs(c));
    if (m < best) {
      best = m;
      seed = node;
    }
  }
  std::vector<char> seen(np, 0);
  std::deque<std::size_t> queue{seed};
  seen[seed] = 1;
  while (!queue.empty()) {
    const std::size_t node = queue.front();
    queue.pop_front();
    const std::size_t i = node / lat.ny;
    const std::size_t j = node % lat.ny;
    const double ref = mean_phase(node);
    const std::pair<long, long> steps[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (const auto& [di, dj] : steps) {
      const long ii = static_cast<long>(i) + di;
      const long jj = static_cast<long>(j) + dj;
      if (ii < 0 || jj < 0 || ii >= static_cast<long>(lat.nx) || jj >= static_cast<long>(lat.ny)) continue;
      const std::size_t nb = lat.flat(static_cast<std::size_t>(ii), static_cast<std::size_t>(jj));
      if (seen[nb]) continue;
      seen[nb] = 1;
      const double shift = kTwoPi * std::round((mean_phase(nb) - ref) / kTwoPi);
      if (shift != 0.0) {
        for (auto& c : column(nb)) c -= cplx{0.0, shift};
      }
      queue.push_back(nb);
    }
  }

  CauchyData out{PlanarData(lat, basis.N()), PlanarData(lat, basis.N())};
  for (std::size_t i = 0; i < lat.nx; ++i) {
    for (std::size_t j = 0; j < lat.ny; ++j) {
      const std::size_t node = lat.flat(i, j);
      const auto c0 = project_onto_basis(std::span<const cplx>(v.data() + node * ns, ns), basis, sources);
      const auto c1 = project_onto_basis(std::span<const cplx>(dv.data() + node * ns, ns), basis, sources);
      for (std::size_t n = 0; n < basis.N(); ++n) {
        out.psi0.at(n, i, j) = c0[n];
        out.psi1.at(n, i, j) = c1[n];
      }
    }
  }
  out.check();
  return out;
}

}  // namespace hconvex
