#include "hconvex/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "hconvex/quadrature.hpp"

namespace hconvex {

namespace {

double norm_weight(double z, double lambda, double theta, double b) {
  return std::exp(2.0 * lambda * ((z - theta) * (z - theta) - (b + theta) * (b + theta)));
}

double ratio_from_integrals(double i2, double i1, double i0, double lambda) {
  const double den = i2 + lambda * i1 + lambda * lambda * lambda * i0;
  if (!(den > 0.0)) throw DegenerateError("carleman ratio: u vanishes identically");
  return i2 / den;
}

cplx random_in_disk(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  while (true) {
    const double a = uni(rng);
    const double b = uni(rng);
    if (a * a + b * b <= 1.0) return {a, b};
  }
}

}  // namespace

Profile1D polynomial_profile(std::vector<double> c, double b) {
  Profile1D p;
  p.u = [c, b](double z) {
    const double t = z + b;
    double acc = 0.0;
    for (std::size_t j = c.size(); j-- > 0;) acc = acc * t + c[j];
    return acc * t * t;
  };
  p.du = [c, b](double z) {
    const double t = z + b;
    double acc = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) acc += c[j] * static_cast<double>(j + 2) * std::pow(t, static_cast<double>(j + 1));
    return acc;
  };
  p.d2u = [c, b](double z) {
    const double t = z + b;
    double acc = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
      acc += c[j] * static_cast<double>((j + 2) * (j + 1)) * std::pow(t, static_cast<double>(j));
    }
    return acc;
  };
  return p;
}

double carleman_1d_ratio(const Profile1D& u, double b, double lambda, double theta, std::size_t intervals) {
  if (!(lambda >= 1.0)) throw DomainError("lambda must be >= 1");
  if (intervals % 2) ++intervals;
  const Quadrature q = composite_simpson(intervals, -b, b);
  double scale = 0.0;
  for (std::size_t i = 0; i < q.size(); i += std::max<std::size_t>(1, q.size() / 64)) {
    scale = std::max(scale, std::abs(u.u(q.nodes[i])));
  }
  scale = std::max(scale, 1e-300);
  if (std::abs(u.u(-b)) > 1e-10 * scale || std::abs(u.du(-b)) > 1e-10 * scale) {
    throw PreconditionError("carleman_1d_ratio: u(-b) and u'(-b) must vanish");
  }
  double i2 = 0.0;
  double i1 = 0.0;
  double i0 = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double z = q.nodes[i];
    const double w = q.weights[i] * norm_weight(z, lambda, theta, b);
    const double a = u.d2u(z);
    const double d = u.du(z);
    const double v = u.u(z);
    i2 += w * a * a;
    i1 += w * d * d;
    i0 += w * v * v;
  }
  return ratio_from_integrals(i2, i1, i0, lambda);
}

double carleman_1d_ratio(const std::vector<double>& u, double b, double lambda, double theta) {
  if (!(lambda >= 1.0)) throw DomainError("lambda must be >= 1");
  const std::size_t n = u.size();
  if (n < 5 || n % 2 == 0) throw ShapeError("carleman_1d_ratio: need an odd sample count >= 5");
  const double h = 2.0 * b / static_cast<double>(n - 1);
  double scale = 0.0;
  for (double v : u) scale = std::max(scale, std::abs(v));
  scale = std::max(scale, 1e-300);
  const double du0 = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
  // The one-sided difference carries an O(h^2) error even when u'(-b) = 0.
  if (std::abs(u[0]) > 1e-10 * scale || std::abs(du0) * h > (1e-10 + h * h) * scale) {
    throw PreconditionError("carleman_1d_ratio: u(-b) and u'(-b) must vanish");
  }
  std::vector<double> d1(n), d2(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    d1[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
    d2[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h);
  }
  d1[0] = du0;
  d1[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h);
  d2[0] = (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) / (h * h);
  d2[n - 1] = (2.0 * u[n - 1] - 5.0 * u[n - 2] + 4.0 * u[n - 3] - u[n - 4]) / (h * h);
  const Quadrature q = composite_simpson(n - 1, -b, b);
  double i2 = 0.0, i1 = 0.0, i0 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = q.weights[i] * norm_weight(q.nodes[i], lambda, theta, b);
    i2 += w * d2[i] * d2[i];
    i1 += w * d1[i] * d1[i];
    i0 += w * u[i] * u[i];
  }
  return ratio_from_integrals(i2, i1, i0, lambda);
}

CarlemanEnsembleReport carleman_1d_ensemble(const std::vector<double>& lambdas, std::size_t count, std::uint64_t seed,
                                            double b, double theta, double floor) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Profile1D> ensemble;
  ensemble.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> c(4);
    for (auto& v : c) v = normal(rng);
    ensemble.push_back(polynomial_profile(c, b));
  }
  CarlemanEnsembleReport r;
  r.lambdas = lambdas;
  for (double lam : lambdas) {
    double m = 1e300;
    for (const auto& u : ensemble) m = std::min(m, carleman_1d_ratio(u, b, lam, theta));
    r.min_ratio.push_back(m);
  }
  const auto [lo, hi] = std::minmax_element(r.min_ratio.begin(), r.min_ratio.end());
  r.decay = *hi / *lo;
  r.pass = *lo >= floor && r.decay <= 2.0;
  return r;
}

PfdReport carleman_pfd_check(const ScalarField& u, const CWF& cwf, double eps) {
  const auto& g = u.grid();
  double scale = 0.0;
  for (double v : u.values()) scale = std::max(scale, std::abs(v));
  for (std::size_t p = 0; p < g.nx(); ++p) {
    for (std::size_t q = 0; q < g.ny(); ++q) {
      for (std::size_t s = 0; s < 2; ++s) {
        if (std::abs(u(g.flat(p, q, s))) > 1e-12 * std::max(scale, 1e-300)) {
          throw PreconditionError("carleman_pfd_check: u must vanish on the s = 0 and s = 1 layers");
        }
      }
    }
  }
  const std::size_t sx = g.ny() * g.nz();
  const std::size_t sy = g.nz();
  const double ih2 = 1.0 / (g.h() * g.h());
  const double iz2 = 1.0 / (g.h_z() * g.h_z());
  PfdReport r;
  double g0 = 0.0, g1 = 0.0, g2 = 0.0, lhs = 0.0;
  for (std::size_t node = 0; node < g.size(); ++node) {
    const NodeIndex ix = g.unflat(node);
    if (g.on_boundary(ix)) continue;
    const double tw = (ix.s == 1 || ix.s == g.nz() - 2) ? 0.5 * g.h_z() : g.h_z();
    const double w = g.h() * g.h() * tw * cwf.normalized(g.z(ix.s));
    const double c = u(node);
    const double uzz = (u(node + 1) + u(node - 1) - 2.0 * c) * iz2;
    const double lap = (u(node + sx) + u(node - sx) + u(node + sy) + u(node - sy) - 4.0 * c) * ih2 + uzz;
    const double gx = (u(node + sx) - u(node - sx)) * 0.5 / g.h();
    const double gy = (u(node + sy) - u(node - sy)) * 0.5 / g.h();
    const double gz = (u(node + 1) - u(node - 1)) * 0.5 / g.h_z();
    lhs += w * lap * lap;
    g2 += w * uzz * uzz;
    g1 += w * gz * gz;
    g0 += w * (gx * gx + gy * gy + gz * gz + c * c);
  }
  const double lam = cwf.lambda;
  r.lhs = lhs;
  r.d2z = g2;
  r.dz = lam * g1;
  r.zeroth = lam * lam * lam * g0;
  r.holds = r.lhs >= eps * (r.d2z + r.dz + r.zeroth);
  return r;
}

PfdEnsembleReport carleman_pfd_ensemble(const Grid3D& grid, const std::vector<double>& lambdas, std::size_t count,
                                        std::uint64_t seed, double theta, double eps) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<ScalarField> fields;
  const double pi = std::numbers::pi;
  for (std::size_t e = 0; e < count; ++e) {
    ScalarField u(grid, 1);
    double c[3], ax[2], ay[2], phx[2], phy[2];
    for (auto& v : c) v = normal(rng);
    for (int i = 0; i < 2; ++i) {
      ax[i] = normal(rng);
      ay[i] = normal(rng);
      phx[i] = pi * normal(rng);
      phy[i] = pi * normal(rng);
    }
    const double hz = grid.h_z();
    for (std::size_t node = 0; node < grid.size(); ++node) {
      const NodeIndex ix = grid.unflat(node);
      const auto x = grid.point(ix);
      const double t = x[2] + grid.b();
      // vanishes at s = 0 and s = 1
      const double prof = ix.s <= 1 ? 0.0 : t * (t - hz) * (c[0] + c[1] * t + c[2] * t * t);
      const double lat = 1.0 + 0.5 * (ax[0] * std::cos(pi * x[0] / grid.R() + phx[0]) +
                                      ay[0] * std::cos(pi * x[1] / grid.R() + phy[0])) +
                         0.25 * (ax[1] * std::cos(2.0 * pi * x[0] / grid.R() + phx[1]) *
                                 ay[1] * std::cos(2.0 * pi * x[1] / grid.R() + phy[1]));
      u(node) = prof * lat;
    }
    fields.push_back(std::move(u));
  }
  PfdEnsembleReport r;
  r.lambdas = lambdas;
  for (double lam : lambdas) {
    CWF cwf{lam, theta, grid.b()};
    std::size_t ok = 0;
    for (const auto& u : fields) ok += carleman_pfd_check(u, cwf, eps).holds ? 1 : 0;
    r.flag_rate.push_back(static_cast<double>(ok) / static_cast<double>(count));
  }
  return r;
}

GradientCheckReport gradient_check(const InversionProblem& P, std::size_t pairs, std::uint64_t seed, double tol) {
  std::mt19937_64 rng(seed);
  GradientCheckReport r;
  r.pairs = pairs;
  for (std::size_t t = 0; t < pairs; ++t) {
    ComplexField V = P.zero_state();
    for (auto& v : V.values()) v = 0.5 * random_in_disk(rng);
    P.constraints().apply(V);
    ComplexField dir = P.zero_state();
    for (auto& v : dir.values()) v = random_in_disk(rng);
    P.constraints().mask(dir);

    const ComplexField G = gradient_J(V, P);
    const double analytic = real_inner(G, dir);
    const double eps = 1e-4;
    ComplexField Vp = V, Vm = V;
    for (std::size_t i = 0; i < V.values().size(); ++i) {
      Vp.values()[i] += eps * dir.values()[i];
      Vm.values()[i] -= eps * dir.values()[i];
    }
    P.constraints().apply(Vp);
    P.constraints().apply(Vm);
    const double fd = (evaluate_J(Vp, P) - evaluate_J(Vm, P)) / (2.0 * eps);
    const double rel = std::abs(analytic - fd) / std::max(std::abs(fd), 1e-300);
    r.max_rel_error = std::max(r.max_rel_error, rel);
  }
  r.pass = r.max_rel_error <= tol;
  return r;
}

ConvexityReport convexity_trial(const InversionProblem& P, std::size_t trials, std::uint64_t seed) {
  if (trials < 50) throw DomainError("convexity_trial: need at least 50 trials");
  std::mt19937_64 rng(seed);
  ConvexityReport r;
  r.trials = trials;
  r.min_relative_gap = 1e300;
  for (std::size_t t = 0; t < trials; ++t) {
    ComplexField V = P.zero_state();
    for (auto& v : V.values()) v = random_in_disk(rng);
    P.constraints().apply(V);
    ComplexField dir = P.zero_state();
    for (auto& v : dir.values()) v = random_in_disk(rng);
    P.constraints().mask(dir);

    double J = 0.0;
    const ComplexField G = gradient_J(V, P, &J);
    ComplexField W = V;
    for (std::size_t i = 0; i < W.values().size(); ++i) W.values()[i] += dir.values()[i];
    P.constraints().apply(W);
    const double JW = evaluate_J(W, P);
    const double lin = real_inner(G, dir);
    const double gap = JW - J - lin;
    // Roundoff scale of the three terms; J itself can sit far below 1 under the
    // normalized weight, where a floor of 1 would hide every violation.
    const double scale = std::max({J, JW, std::abs(lin)});
    if (!(scale > 0.0)) continue;
    r.min_relative_gap = std::min(r.min_relative_gap, gap / scale);
    if (gap < -1e-12 * scale) ++r.violations;
  }
  r.fraction = static_cast<double>(r.violations) / static_cast<double>(trials);
  return r;
}

CauchyData random_cauchy(const Lattice2D& lat, std::size_t N, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CauchyData c{PlanarData(lat, N), PlanarData(lat, N)};
  const double L = std::max(1e-12, lat.step * static_cast<double>(std::max<std::size_t>(lat.nx, 2) - 1));
  const double pi = std::numbers::pi;
  for (auto* d : {&c.psi0, &c.psi1}) {
    for (std::size_t n = 0; n < N; ++n) {
      cplx a[3];
      for (auto& v : a) v = {normal(rng), normal(rng)};
      for (std::size_t i = 0; i < lat.nx; ++i) {
        for (std::size_t j = 0; j < lat.ny; ++j) {
          const double x = (lat.x(i) - lat.x0) / L;
          const double y = (lat.y(j) - lat.y0) / L;
          d->at(n, i, j) = scale * (a[0] + a[1] * std::cos(pi * x) + a[2] * std::cos(pi * y));
        }
      }
    }
  }
  return c;
}

HarnessProblem::HarnessProblem(std::size_t N, double lambda, std::uint64_t seed, const DomainConfig& cfg,
                               std::size_t nodes) {
  const double half = 2.0;
  const Grid3D grid(nodes, nodes, half, half);
  basis_ = std::make_unique<BasisSet>(build_basis(cfg.a1, cfg.a2, N));
  cauchy_ = random_cauchy(Lattice2D::square(half, nodes), N, seed);
  problem_ = std::make_unique<InversionProblem>(grid, *basis_, cauchy_, CWF{lambda, cfg.theta, half}, cfg.k, cfg.d);
}

std::string format_basis_report(const BasisReport& r, std::size_t N) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "N=%zu  orthonormality %.3e  S triangular %.3e  det(S) %.15f  S*S^-1-I %.3e  |B-S| %.3e", N,
                r.orthonormality_error, r.s_triangular_error, r.det_S, r.s_inverse_error, r.b_vs_s_error);
  return buf;
}

}  // namespace hconvex
