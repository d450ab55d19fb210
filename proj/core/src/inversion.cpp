#include "hconvex/inversion.hpp"

#include <algorithm>
#include <cmath>

namespace hconvex {

double CWF::mu(double z) const noexcept { return std::exp(log_mu(z)); }

std::array<cplx, 3> xtilde(const std::array<double, 3>& x, double alpha, double k, double d) {
  const double w[3] = {x[0] - alpha, x[1], x[2] + d};
  const double r2 = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
  const double r = std::sqrt(r2);
  const cplx phi = cplx{0.0, k / r} - 1.0 / r2;
  return {w[0] * phi, w[1] * phi, w[2] * phi};
}

std::array<cplx, 3> xhat(const std::array<double, 3>& x, double alpha, double k, double d) {
  const double w[3] = {x[0] - alpha, x[1], x[2] + d};
  const double r2 = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
  const double r = std::sqrt(r2);
  const cplx phi = cplx{0.0, k / r} - 1.0 / r2;
  // d/dalpha of w * phi(r): dw/dalpha = (-1,0,0), dr/dalpha = -w0/r.
  const cplx dphi = (cplx{0.0, -k / r2} + 2.0 / (r2 * r)) * (-w[0] / r);
  return {-phi + w[0] * dphi, w[1] * dphi, w[2] * dphi};
}

SourceGeometryTensors::SourceGeometryTensors(const Grid3D& grid, const BasisSet& basis, double k, double d)
  : N_(basis.N()) {
  const std::size_t N = N_;
  const auto& Sinv = basis.S_inv();
  Ahat_.assign(N * N * N, 0.0);
  for (std::size_t m = 0; m < N; ++m) {
    for (std::size_t n = 0; n < N; ++n) {
      for (std::size_t l = 0; l < N; ++l) {
        double acc = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
          acc += Sinv(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j)) * 2.0 * basis.A(j, n, l);
        }
        Ahat_[(m * N + n) * N + l] = acc;
      }
    }
  }

  const auto& q = basis.quadrature();
  const auto& psi = basis.psi_nodes();
  const auto& dpsi = basis.dpsi_nodes();
  const std::size_t M = q.size();
  Ghat_.assign(grid.size() * N * N * 3, cplx{});
  std::vector<cplx> raw(N * N * 3);
  for (std::size_t node = 0; node < grid.size(); ++node) {
    const NodeIndex ix = grid.unflat(node);
    if (grid.on_boundary(ix)) continue;
    const auto x = grid.point(ix);
    std::fill(raw.begin(), raw.end(), cplx{});
    for (std::size_t a = 0; a < M; ++a) {
      const auto xt = xtilde(x, q.nodes[a], k, d);
      const auto xh = xhat(x, q.nodes[a], k, d);
      const auto ai = static_cast<Eigen::Index>(a);
      for (std::size_t m = 0; m < N; ++m) {
        const double pm = 2.0 * q.weights[a] * psi(static_cast<Eigen::Index>(m), ai);
        for (std::size_t n = 0; n < N; ++n) {
          const double pn = psi(static_cast<Eigen::Index>(n), ai);
          const double dpn = dpsi(static_cast<Eigen::Index>(n), ai);
          cplx* out = &raw[(m * N + n) * 3];
          for (int c = 0; c < 3; ++c) out[c] += pm * (dpn * xt[c] + pn * xh[c]);
        }
      }
    }
    for (std::size_t m = 0; m < N; ++m) {
      for (std::size_t n = 0; n < N; ++n) {
        cplx* out = &Ghat_[((node * N + m) * N + n) * 3];
        for (std::size_t j = 0; j < N; ++j) {
          const double s = Sinv(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j));
          if (s == 0.0) continue;
          for (int c = 0; c < 3; ++c) out[c] += s * raw[(j * N + n) * 3 + c];
        }
      }
    }
  }
}

std::vector<cplx> nonlinear_term_K(std::span<const std::array<cplx, 3>> g, const SourceGeometryTensors& t,
                                   std::size_t node) {
  const std::size_t N = t.N();
  if (g.size() != N) throw ShapeError("nonlinear_term_K: expected N gradients");
  std::vector<cplx> dots(N * N);
  for (std::size_t n = 0; n < N; ++n) {
    for (std::size_t l = 0; l < N; ++l) dots[n * N + l] = g[n][0] * g[l][0] + g[n][1] * g[l][1] + g[n][2] * g[l][2];
  }
  std::vector<cplx> K(N);
  for (std::size_t m = 0; m < N; ++m) {
    cplx acc{};
    for (std::size_t n = 0; n < N; ++n) {
      for (std::size_t l = 0; l < N; ++l) acc += t.Ahat(m, n, l) * dots[n * N + l];
      const cplx* G = t.Ghat(node, m, n);
      acc += G[0] * g[n][0] + G[1] * g[n][1] + G[2] * g[n][2];
    }
    K[m] = acc;
  }
  return K;
}

cplx laplacian_at(const ComplexField& f, std::size_t comp, std::size_t node) {
  const auto& g = f.grid();
  const std::size_t sx = g.ny() * g.nz();
  const std::size_t sy = g.nz();
  const double ih2 = 1.0 / (g.h() * g.h());
  const double iz2 = 1.0 / (g.h_z() * g.h_z());
  const cplx c = f(node, comp);
  return (f(node + sx, comp) + f(node - sx, comp) - 2.0 * c) * ih2 +
         (f(node + sy, comp) + f(node - sy, comp) - 2.0 * c) * ih2 +
         (f(node + 1, comp) + f(node - 1, comp) - 2.0 * c) * iz2;
}

std::array<cplx, 3> gradient_at(const ComplexField& f, std::size_t comp, std::size_t node) {
  const auto& g = f.grid();
  const std::size_t sx = g.ny() * g.nz();
  const std::size_t sy = g.nz();
  const double i2h = 0.5 / g.h();
  const double i2z = 0.5 / g.h_z();
  return {(f(node + sx, comp) - f(node - sx, comp)) * i2h, (f(node + sy, comp) - f(node - sy, comp)) * i2h,
          (f(node + 1, comp) - f(node - 1, comp)) * i2z};
}

// ---------------------------------------------------------------------------

Constraints::Constraints(const Grid3D& grid, const CauchyData& cauchy, const InversionOptions& opts)
  : grid_(grid), cauchy_(cauchy), opts_(opts) {
  cauchy.check();
  if (grid.nx() < 3 || grid.nz() < 4) throw ShapeError("inversion grid needs nx >= 3 and nz >= 4");
  const auto& lat = cauchy.lattice();
  if (lat.nx != grid.nx() || lat.ny != grid.ny() || std::abs(lat.x0 + grid.R()) > 1e-6 ||
      std::abs(lat.y0 + grid.R()) > 1e-6 || std::abs(lat.step - grid.h()) > 1e-6) {
    throw ShapeError("Cauchy data lattice does not match the Gamma face of the grid");
  }
  if (opts.neumann_order != 1 && opts.neumann_order != 2) throw DomainError("neumann_order must be 1 or 2");

  const std::size_t nx = grid.nx();
  const std::size_t nz = grid.nz();
  free_.assign(grid.size(), 0);
  copy_from_.resize(grid.size());
  for (std::size_t node = 0; node < grid.size(); ++node) {
    const NodeIndex ix = grid.unflat(node);
    copy_from_[node] = node;
    if (ix.s <= 1) continue;
    const std::size_t p = std::clamp<std::size_t>(ix.p, 1, nx - 2);
    const std::size_t q = std::clamp<std::size_t>(ix.q, 1, nx - 2);
    const std::size_t s = std::min(ix.s, nz - 2);
    const std::size_t src = grid.flat(p, q, s);
    if (src != node) {
      copy_from_[node] = src;
      continue;
    }
    const bool in_omega1 = !opts.restrict_omega1 || grid.z(ix.s) <= -grid.b() + opts.omega1_height + 1e-12;
    free_[node] = in_omega1 ? 1 : 0;
  }
}

std::size_t Constraints::free_count() const noexcept {
  return static_cast<std::size_t>(std::count(free_.begin(), free_.end(), 1));
}

void Constraints::apply(ComplexField& V) const {
  const std::size_t N = V.components();
  const double hz = grid_.h_z();
  for (std::size_t p = 0; p < grid_.nx(); ++p) {
    for (std::size_t q = 0; q < grid_.ny(); ++q) {
      const std::size_t n0 = grid_.flat(p, q, 0);
      for (std::size_t n = 0; n < N; ++n) {
        const cplx psi0 = cauchy_.psi0.at(n, p, q);
        const cplx psi1 = cauchy_.psi1.at(n, p, q);
        V(n0, n) = psi0;
        if (opts_.neumann_order == 1) {
          V(n0 + 1, n) = psi0 + hz * psi1;
        }
      }
    }
  }
  // Copies read sources with s >= 2, which are never copies themselves.
  for (std::size_t node = 0; node < grid_.size(); ++node) {
    const std::size_t src = copy_from_[node];
    if (src == node) continue;
    for (std::size_t n = 0; n < N; ++n) V(node, n) = V(src, n);
  }
  if (opts_.neumann_order == 2) {
    for (std::size_t p = 0; p < grid_.nx(); ++p) {
      for (std::size_t q = 0; q < grid_.ny(); ++q) {
        const std::size_t n0 = grid_.flat(p, q, 0);
        for (std::size_t n = 0; n < N; ++n) {
          V(n0 + 1, n) = (2.0 * hz * cauchy_.psi1.at(n, p, q) + 3.0 * V(n0, n) + V(n0 + 2, n)) / 4.0;
        }
      }
    }
  }
}

void Constraints::fold(ComplexField& g) const {
  const std::size_t N = g.components();
  if (opts_.neumann_order == 2) {
    for (std::size_t p = 0; p < grid_.nx(); ++p) {
      for (std::size_t q = 0; q < grid_.ny(); ++q) {
        const std::size_t n1 = grid_.flat(p, q, 1);
        for (std::size_t n = 0; n < N; ++n) g(n1 + 1, n) += 0.25 * g(n1, n);
      }
    }
  }
  for (std::size_t node = 0; node < grid_.size(); ++node) {
    const std::size_t src = copy_from_[node];
    if (src == node) continue;
    for (std::size_t n = 0; n < N; ++n) g(src, n) += g(node, n);
  }
  mask(g);
}

void Constraints::mask(ComplexField& f) const {
  for (std::size_t node = 0; node < grid_.size(); ++node) {
    if (free_[node]) continue;
    for (auto& v : f.node(node)) v = cplx{};
  }
}

// ---------------------------------------------------------------------------

InversionProblem::InversionProblem(const Grid3D& grid, const BasisSet& basis, const CauchyData& cauchy,
                                   const CWF& cwf, double k, double d, const InversionOptions& opts)
  : grid_(grid), basis_(&basis), cwf_(cwf), k_(k), d_(d), opts_(opts), constraints_(grid, cauchy, opts) {
  if (cauchy.n_modes() != basis.N()) throw ShapeError("Cauchy data mode count differs from the basis size");
  if (!(cwf.theta > grid.b())) throw DomainError("CWF centre theta must exceed b");
  if (!(cwf.lambda >= 1.0)) throw DomainError("lambda must be >= 1");
  if (opts.nonlinear) tensors_ = SourceGeometryTensors(grid, basis, k, d);
  weight_.assign(grid.size(), 0.0);
  const std::size_t nz = grid.nz();
  for (std::size_t node = 0; node < grid.size(); ++node) {
    if (!is_interior(node)) continue;
    const std::size_t s = grid.unflat(node).s;
    const double tw = (s == 1 || s == nz - 2) ? 0.5 * grid.h_z() : grid.h_z();
    weight_[node] = grid.h() * grid.h() * tw * cwf.normalized(grid.z(s));
  }
}

bool InversionProblem::is_interior(std::size_t node) const noexcept {
  const NodeIndex ix = grid_.unflat(node);
  return !grid_.on_boundary(ix);
}

namespace {

constexpr std::size_t kMaxN = kMaxBasisSize;

// Residual and component gradients at one interior node. Returns false when the
// whole stencil is zero, in which case L = 0 exactly (K(0) = 0).
bool node_residual(const ComplexField& V, const InversionProblem& P, std::size_t node, cplx* L,
                   std::array<cplx, 3>* grad) {
  const auto& g = P.grid();
  const std::size_t N = P.N();
  const std::size_t sx = g.ny() * g.nz();
  const std::size_t sy = g.nz();
  const cplx* c0 = &V(node, 0);
  const cplx* xp = &V(node + sx, 0);
  const cplx* xm = &V(node - sx, 0);
  const cplx* yp = &V(node + sy, 0);
  const cplx* ym = &V(node - sy, 0);
  const cplx* zp = &V(node + 1, 0);
  const cplx* zm = &V(node - 1, 0);
  bool any = false;
  for (std::size_t n = 0; n < N && !any; ++n) {
    any = c0[n] != cplx{} || xp[n] != cplx{} || xm[n] != cplx{} || yp[n] != cplx{} || ym[n] != cplx{} ||
          zp[n] != cplx{} || zm[n] != cplx{};
  }
  if (!any) return false;
  const double ih2 = 1.0 / (g.h() * g.h());
  const double iz2 = 1.0 / (g.h_z() * g.h_z());
  const double i2h = 0.5 / g.h();
  const double i2z = 0.5 / g.h_z();
  for (std::size_t n = 0; n < N; ++n) {
    L[n] = (xp[n] + xm[n] + yp[n] + ym[n] - 4.0 * c0[n]) * ih2 + (zp[n] + zm[n] - 2.0 * c0[n]) * iz2;
    grad[n] = {(xp[n] - xm[n]) * i2h, (yp[n] - ym[n]) * i2h, (zp[n] - zm[n]) * i2z};
  }
  if (!P.options().nonlinear) return true;
  const auto& T = P.tensors();
  std::array<cplx, kMaxN * kMaxN> dots;
  for (std::size_t n = 0; n < N; ++n) {
    for (std::size_t l = n; l < N; ++l) {
      const cplx d = grad[n][0] * grad[l][0] + grad[n][1] * grad[l][1] + grad[n][2] * grad[l][2];
      dots[n * N + l] = d;
      dots[l * N + n] = d;
    }
  }
  for (std::size_t m = 0; m < N; ++m) {
    cplx acc{};
    for (std::size_t n = 0; n < N; ++n) {
      for (std::size_t l = 0; l < N; ++l) acc += T.Ahat(m, n, l) * dots[n * N + l];
      const cplx* G = T.Ghat(node, m, n);
      acc += G[0] * grad[n][0] + G[1] * grad[n][1] + G[2] * grad[n][2];
    }
    L[m] += acc;
  }
  return true;
}

}  // namespace

ComplexField residual_L(const ComplexField& V, const InversionProblem& P) {
  if (V.components() != P.N() || !(V.grid() == P.grid())) throw ShapeError("residual_L: state shape mismatch");
  ComplexField L(P.grid(), P.N());
  std::array<std::array<cplx, 3>, kMaxN> grad;
  for (std::size_t node = 0; node < P.grid().size(); ++node) {
    if (!P.is_interior(node)) continue;
    node_residual(V, P, node, &L(node, 0), grad.data());
  }
  return L;
}

double evaluate_J(const ComplexField& V, const InversionProblem& P) {
  if (V.components() != P.N() || !(V.grid() == P.grid())) throw ShapeError("evaluate_J: state shape mismatch");
  std::array<cplx, kMaxN> L;
  std::array<std::array<cplx, 3>, kMaxN> grad;
  double J = 0.0;
  for (std::size_t node = 0; node < P.grid().size(); ++node) {
    const double w = P.weight(node);
    if (w == 0.0 || !node_residual(V, P, node, L.data(), grad.data())) continue;
    double s = 0.0;
    for (std::size_t m = 0; m < P.N(); ++m) s += std::norm(L[m]);
    J += w * s;
  }
  return J;
}

ComplexField gradient_J(const ComplexField& V, const InversionProblem& P, double* J_out) {
  if (V.components() != P.N() || !(V.grid() == P.grid())) throw ShapeError("gradient_J: state shape mismatch");
  const auto& g = P.grid();
  const std::size_t N = P.N();
  const std::size_t sx = g.ny() * g.nz();
  const std::size_t sy = g.nz();
  const double ih2 = 1.0 / (g.h() * g.h());
  const double iz2 = 1.0 / (g.h_z() * g.h_z());
  const std::size_t offs[3] = {sx, sy, 1};
  const double dscale[3] = {0.5 / g.h(), 0.5 / g.h(), 0.5 / g.h_z()};
  const auto& T = P.tensors();
  const bool nonlinear = P.options().nonlinear;

  // Asym(m,n,l) = Ahat(m,n,l) + Ahat(m,l,n)
  std::vector<double> Asym(N * N * N, 0.0);
  if (nonlinear) {
    for (std::size_t m = 0; m < N; ++m) {
      for (std::size_t n = 0; n < N; ++n) {
        for (std::size_t l = 0; l < N; ++l) Asym[(m * N + n) * N + l] = T.Ahat(m, n, l) + T.Ahat(m, l, n);
      }
    }
  }

  ComplexField G(g, N);
  double J = 0.0;
  std::array<cplx, kMaxN> L;
  std::array<cplx, kMaxN> a;
  std::array<std::array<cplx, 3>, kMaxN> grad;
  for (std::size_t node = 0; node < g.size(); ++node) {
    const double w = P.weight(node);
    if (w == 0.0 || !node_residual(V, P, node, L.data(), grad.data())) continue;
    for (std::size_t m = 0; m < N; ++m) {
      J += w * std::norm(L[m]);
      a[m] = 2.0 * w * L[m];
    }
    // Laplacian part: symmetric stencil with real coefficients.
    cplx* gc = &G(node, 0);
    cplx* gxp = &G(node + sx, 0);
    cplx* gxm = &G(node - sx, 0);
    cplx* gyp = &G(node + sy, 0);
    cplx* gym = &G(node - sy, 0);
    cplx* gzp = &G(node + 1, 0);
    cplx* gzm = &G(node - 1, 0);
    for (std::size_t m = 0; m < N; ++m) {
      const cplx ah = a[m] * ih2;
      const cplx az = a[m] * iz2;
      gc[m] -= 4.0 * ah + 2.0 * az;
      gxp[m] += ah;
      gxm[m] += ah;
      gyp[m] += ah;
      gym[m] += ah;
      gzp[m] += az;
      gzm[m] += az;
    }
    if (!nonlinear) continue;
    // b_nd = sum_m a_m conj(T_mnd), T_mnd = sum_l Asym(m,n,l) g_ld + Ghat_mnd; then D_d^T b_d.
    for (std::size_t n = 0; n < N; ++n) {
      cplx b0{}, b1{}, b2{};
      for (std::size_t m = 0; m < N; ++m) {
        const cplx* Gh = T.Ghat(node, m, n);
        cplx t0 = Gh[0], t1 = Gh[1], t2 = Gh[2];
        const double* As = &Asym[(m * N + n) * N];
        for (std::size_t l = 0; l < N; ++l) {
          t0 += As[l] * grad[l][0];
          t1 += As[l] * grad[l][1];
          t2 += As[l] * grad[l][2];
        }
        b0 += a[m] * std::conj(t0);
        b1 += a[m] * std::conj(t1);
        b2 += a[m] * std::conj(t2);
      }
      const cplx bs[3] = {b0 * dscale[0], b1 * dscale[1], b2 * dscale[2]};
      for (int c = 0; c < 3; ++c) {
        G(node + offs[c], n) += bs[c];
        G(node - offs[c], n) -= bs[c];
      }
    }
  }
  P.constraints().fold(G);
  if (J_out) *J_out = J;
  return G;
}

double real_inner(const ComplexField& a, const ComplexField& b) {
  if (a.values().size() != b.values().size()) throw ShapeError("real_inner: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) acc += (std::conj(a.values()[i]) * b.values()[i]).real();
  return acc;
}

double cutoff_chi(double z, double b) {
  if (z >= 0.0) return 0.0;
  const double t = (z + b) * (z + b);
  return std::exp(2.0 * t / (t - b * b));
}

ComplexField build_starting_point(const InversionProblem& P, const CauchyData& cauchy) {
  const auto& g = P.grid();
  ComplexField V(g, P.N());
  for (std::size_t p = 0; p < g.nx(); ++p) {
    for (std::size_t q = 0; q < g.ny(); ++q) {
      for (std::size_t s = 0; s < g.nz(); ++s) {
        const double z = g.z(s);
        const double chi = cutoff_chi(z, g.b());
        if (chi == 0.0) continue;
        const std::size_t node = g.flat(p, q, s);
        for (std::size_t n = 0; n < P.N(); ++n) {
          V(node, n) = (cauchy.psi0.at(n, p, q) + cauchy.psi1.at(n, p, q) * (z + g.b())) * chi;
        }
      }
    }
  }
  P.constraints().apply(V);
  return V;
}

}  // namespace hconvex
