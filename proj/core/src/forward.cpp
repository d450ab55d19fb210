#include "hconvex/forward.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "hconvex/errors.hpp"

namespace hconvex {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

double dist(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

cplx green(double r, double k) { return std::polar(1.0 / (kFourPi * r), k * r); }

double overlap_1d(double lo, double hi, double a, double b) {
  return std::max(0.0, std::min(hi, b) - std::max(lo, a));
}

// Fraction of the cell [x +- hx] x [y +- hy] x [z +- hz] covered by the inclusion.
double covered_fraction(const Inclusion& inc, const std::array<double, 3>& x, const std::array<double, 3>& half_cell) {
  if (inc.shape == Inclusion::Shape::box) {
    double f = 1.0;
    for (int a = 0; a < 3; ++a) {
      const double o = overlap_1d(x[a] - half_cell[a], x[a] + half_cell[a], inc.center[a] - inc.half[a],
                                  inc.center[a] + inc.half[a]);
      f *= o / (2.0 * half_cell[a]);
      if (f == 0.0) return 0.0;
    }
    return f;
  }
  // Sphere: quick reject, then 4^3 subsampling.
  const double reach = inc.radius + std::sqrt(half_cell[0] * half_cell[0] + half_cell[1] * half_cell[1] +
                                              half_cell[2] * half_cell[2]);
  if (dist(x, inc.center) > reach) return 0.0;
  constexpr int n = 4;
  int inside = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l) {
        const std::array<double, 3> p{x[0] + half_cell[0] * (2.0 * (i + 0.5) / n - 1.0),
                                      x[1] + half_cell[1] * (2.0 * (j + 0.5) / n - 1.0),
                                      x[2] + half_cell[2] * (2.0 * (l + 0.5) / n - 1.0)};
        if (dist(p, inc.center) <= inc.radius) ++inside;
      }
    }
  }
  return static_cast<double>(inside) / (n * n * n);
}

}  // namespace

DielectricField DielectricField::background(const Grid3D& grid) { return {grid, std::vector<double>(grid.size(), 1.0)}; }

DielectricField DielectricField::rasterize(const Grid3D& grid, const std::vector<Inclusion>& inclusions) {
  DielectricField f = background(grid);
  const std::array<double, 3> half_cell{0.5 * grid.h(), 0.5 * grid.h(), 0.5 * grid.h_z()};
  for (const auto& inc : inclusions) {
    if (!(inc.value >= 1.0) || !std::isfinite(inc.value)) throw DomainError("inclusion value must be finite and >= 1");
    // Restrict the scan to the index range the inclusion can touch.
    const std::array<double, 3> ext = inc.shape == Inclusion::Shape::box
                                          ? inc.half
                                          : std::array<double, 3>{inc.radius, inc.radius, inc.radius};
    auto range = [](double lo, double hi, double origin, double step, std::size_t n) {
      const double a = std::floor((lo - origin) / step) - 1.0;
      const double b = std::ceil((hi - origin) / step) + 1.0;
      const auto i0 = static_cast<std::size_t>(std::clamp(a, 0.0, static_cast<double>(n - 1)));
      const auto i1 = static_cast<std::size_t>(std::clamp(b, 0.0, static_cast<double>(n - 1)));
      return std::pair{i0, i1};
    };
    const auto [p0, p1] = range(inc.center[0] - ext[0], inc.center[0] + ext[0], -grid.R(), grid.h(), grid.nx());
    const auto [q0, q1] = range(inc.center[1] - ext[1], inc.center[1] + ext[1], -grid.R(), grid.h(), grid.ny());
    const auto [s0, s1] = range(inc.center[2] - ext[2], inc.center[2] + ext[2], -grid.b(), grid.h_z(), grid.nz());
    for (std::size_t p = p0; p <= p1; ++p) {
      for (std::size_t q = q0; q <= q1; ++q) {
        for (std::size_t s = s0; s <= s1; ++s) {
          const double frac = covered_fraction(inc, grid.point({p, q, s}), half_cell);
          if (frac > 0.0) f.c[grid.flat(p, q, s)] += frac * (inc.value - 1.0);
        }
      }
    }
  }
  return f;
}

std::vector<std::size_t> DielectricField::support() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] > 1.0) out.push_back(i);
  }
  return out;
}

void DielectricField::validate() const {
  if (c.size() != grid.size()) throw ShapeError("dielectric field size differs from its grid");
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!std::isfinite(c[i]) || c[i] < 1.0) throw DomainError("dielectric field must be finite and >= 1");
    if (c[i] != 1.0 && grid.on_boundary(grid.unflat(i))) {
      throw DomainError("dielectric field must equal 1 on the grid boundary layer");
    }
  }
}

cplx incident_wave(const std::array<double, 3>& x, double alpha, double k, double d) {
  const double r = dist(x, {alpha, 0.0, -d});
  if (!(r > 0.0)) throw DomainError("incident_wave: evaluation point coincides with the source");
  return green(r, k);
}

Quadrature source_quadrature(const DomainConfig& cfg) {
  return gauss_legendre(static_cast<std::size_t>(cfg.n_src), cfg.a1, cfg.a2);
}

LippmannSchwinger::LippmannSchwinger(const DielectricField& c, double k, double d)
  : grid_(c.grid), k_(k), d_(d), support_(c.support()) {
  c.validate();
  if (!(k > 0.0)) throw DomainError("wavenumber must be positive");
  if (support_.size() > kMaxSupportNodes) {
    throw PreconditionError("inclusion support has " + std::to_string(support_.size()) + " nodes; the dense solver caps at " +
                            std::to_string(kMaxSupportNodes));
  }
  const auto n = static_cast<Eigen::Index>(support_.size());
  pos_.reserve(support_.size());
  weight_.resize(n);
  const double vol = c.cell_volume();
  for (Eigen::Index j = 0; j < n; ++j) {
    const std::size_t node = support_[static_cast<std::size_t>(j)];
    pos_.push_back(grid_.point(grid_.unflat(node)));
    weight_(j) = k * k * (c.c[node] - 1.0) * vol;
  }
  const double a = std::cbrt(3.0 * vol / kFourPi);
  const cplx ika{0.0, k * a};
  // Ball integral of G divided by the volume, so that self_ * weight_ matches the
  // off-diagonal G * weight_ scaling.
  self_ = (std::exp(ika) * (1.0 - ika) - 1.0) / (k * k) / vol;

  if (n == 0) return;
  Eigen::MatrixXcd A(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      A(i, j) = (i == j ? 1.0 : 0.0) - kernel(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) * weight_(j);
    }
  }
  lu_.compute(A);
}

cplx LippmannSchwinger::kernel(std::size_t i, std::size_t j) const {
  return i == j ? self_ : green(dist(pos_[i], pos_[j]), k_);
}

Eigen::VectorXcd LippmannSchwinger::solve(double alpha) const {
  const auto n = static_cast<Eigen::Index>(support_.size());
  Eigen::VectorXcd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) rhs(i) = incident_wave(pos_[static_cast<std::size_t>(i)], alpha, k_, d_);
  if (n == 0) return rhs;
  Eigen::VectorXcd u = lu_.solve(rhs);

  // Residual without storing the matrix.
  double res2 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    cplx acc = u(i) - rhs(i);
    for (Eigen::Index j = 0; j < n; ++j) {
      acc -= kernel(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) * weight_(j) * u(j);
    }
    res2 += std::norm(acc);
  }
  const double rel = std::sqrt(res2) / std::max(rhs.norm(), 1e-300);
  if (!(rel <= 1e-10)) throw SolverError("Lippmann-Schwinger solve residual " + std::to_string(rel), rel);
  return u;
}

cplx LippmannSchwinger::scattered_at(const std::array<double, 3>& x, const Eigen::VectorXcd& u) const {
  cplx acc{};
  for (std::size_t j = 0; j < pos_.size(); ++j) {
    const double r = dist(x, pos_[j]);
    if (!(r > 0.0)) throw DomainError("scattered_at: point coincides with a support node");
    acc += green(r, k_) * weight_(static_cast<Eigen::Index>(j)) * u(static_cast<Eigen::Index>(j));
  }
  return acc;
}

ComplexField LippmannSchwinger::total_field(double alpha) const {
  const Eigen::VectorXcd u = solve(alpha);
  ComplexField out(grid_, 1);
  std::vector<long> slot(grid_.size(), -1);
  for (std::size_t j = 0; j < support_.size(); ++j) slot[support_[j]] = static_cast<long>(j);
  for (std::size_t node = 0; node < grid_.size(); ++node) {
    if (slot[node] >= 0) {
      out(node) = u(slot[node]);
      continue;
    }
    const auto x = grid_.point(grid_.unflat(node));
    out(node) = incident_wave(x, alpha, k_, d_) + scattered_at(x, u);
  }
  return out;
}

ComplexField solve_lippmann_schwinger(const DielectricField& c, double alpha, double k, double d) {
  return LippmannSchwinger(c, k, d).total_field(alpha);
}

MeasurementSet synthesize_measurements(const DielectricField& c, const std::vector<double>& alphas, double k,
                                       double d, double plane_z, const Lattice2D& lattice, const NoiseSpec& noise) {
  if (!(noise.level >= 0.0)) throw DomainError("noise level must be non-negative");
  const LippmannSchwinger ls(c, k, d);
  MeasurementSet m;
  m.plane_z = plane_z;
  m.alphas = alphas;
  m.samples = PlanarData(lattice, alphas.size());

  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t s = 0; s < alphas.size(); ++s) {
    auto out = m.samples.source(s);
    if (ls.support_size() > 0) {
      const Eigen::VectorXcd u = ls.solve(alphas[s]);
      for (std::size_t i = 0; i < lattice.nx; ++i) {
        for (std::size_t j = 0; j < lattice.ny; ++j) {
          out[lattice.flat(i, j)] = ls.scattered_at({lattice.x(i), lattice.y(j), plane_z}, u);
        }
      }
    }
    if (noise.level > 0.0) {
      double ms = 0.0;
      for (const auto& v : out) ms += std::norm(v);
      const double scale = noise.level * std::sqrt(ms / static_cast<double>(out.size())) / std::sqrt(2.0);
      for (auto& v : out) {
        const double n1 = normal(rng);
        const double n2 = normal(rng);
        v += scale * cplx{n1, n2};
      }
    }
  }
  return m;
}

}  // namespace hconvex
