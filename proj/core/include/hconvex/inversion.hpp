#pragma once

#include <array>
#include <filesystem>
#include <memory>
#include <string>
#include <span>
#include <vector>

#include "hconvex/basis.hpp"
#include "hconvex/errors.hpp"
#include "hconvex/grid.hpp"
#include "hconvex/measurement.hpp"

namespace hconvex {

// mu(z) = exp(2 lambda (z - theta)^2). Evaluation goes through the weight divided by
// its value at z = -b, which lies in (0, 1] on [-b, b].
struct CWF {
  double lambda = 1.1;
  double theta = 4.0;
  double b = 2.0;

  double log_mu(double z) const noexcept { return 2.0 * lambda * (z - theta) * (z - theta); }
  double mu(double z) const noexcept;  // may overflow to inf for large lambda
  double normalized(double z) const noexcept {
    return std::exp(2.0 * lambda * ((z - theta) * (z - theta) - (b + theta) * (b + theta)));
  }
};

// x~_a = ik w/|w| - w/|w|^2 with w = x - (a, 0, -d), and its alpha-derivative x^_a.
std::array<cplx, 3> xtilde(const std::array<double, 3>& x, double alpha, double k, double d);
std::array<cplx, 3> xhat(const std::array<double, 3>& x, double alpha, double k, double d);

// Per-node coupling tensors of the nonlinearity, already multiplied by S^-1:
//   K_m(g) = sum_{n,l} Ahat(m,n,l) g_n . g_l + sum_n Ghat(node,m,n) . g_n
// with Ahat = S^-1 (2A) and Ghat = S^-1 2 int Psi_m (Psi_n' x~ + Psi_n x^) dalpha.
class SourceGeometryTensors {
public:
  SourceGeometryTensors() = default;
  SourceGeometryTensors(const Grid3D& grid, const BasisSet& basis, double k, double d);

  std::size_t N() const noexcept { return N_; }
  double Ahat(std::size_t m, std::size_t n, std::size_t l) const noexcept { return Ahat_[(m * N_ + n) * N_ + l]; }
  // Three components, contiguous.
  const cplx* Ghat(std::size_t node, std::size_t m, std::size_t n) const noexcept {
    return &Ghat_[((node * N_ + m) * N_ + n) * 3];
  }

private:
  std::size_t N_ = 0;
  std::vector<double> Ahat_;
  std::vector<cplx> Ghat_;
};

// K(grad V) at one node. `grad` holds N gradients (3 components each).
std::vector<cplx> nonlinear_term_K(std::span<const std::array<cplx, 3>> grad, const SourceGeometryTensors& t,
                                   std::size_t node);

// Finite-difference stencils on Grid3D; `node` must be interior in x, y and z.
cplx laplacian_at(const ComplexField& f, std::size_t comp, std::size_t node);
std::array<cplx, 3> gradient_at(const ComplexField& f, std::size_t comp, std::size_t node);

struct InversionOptions {
  int neumann_order = 1;        // 1: V1 = psi0 + h_z psi1; 2: one-sided second-order
  bool restrict_omega1 = true;  // only nodes with z <= -b + omega1_height move
  double omega1_height = 2.0;
  bool nonlinear = true;        // false drops K (linear-operator diagnostics)
};

// Cauchy data and Neumann-zero conditions expressed as pinned and copied nodes.
//   s = 0        : psi0
//   s = 1        : psi0 + h_z psi1 (or the second-order formula through s = 2)
//   lateral, top : copy of the nearest node inside
class Constraints {
public:
  Constraints() = default;
  Constraints(const Grid3D& grid, const CauchyData& cauchy, const InversionOptions& opts);

  bool is_free(std::size_t node) const noexcept { return free_[node] != 0; }
  std::size_t free_count() const noexcept;
  void apply(ComplexField& V) const;
  // Chain rule through pinned/copied nodes; the result is zero off the free set.
  void fold(ComplexField& grad) const;
  // Zero everything but the free set.
  void mask(ComplexField& f) const;

private:
  Grid3D grid_;
  CauchyData cauchy_;
  InversionOptions opts_;
  std::vector<char> free_;
  std::vector<std::size_t> copy_from_;  // lateral/top copy source (node itself when none)
};

// Everything needed to evaluate J and its gradient for fixed data.
class InversionProblem {
public:
  InversionProblem(const Grid3D& grid, const BasisSet& basis, const CauchyData& cauchy, const CWF& cwf, double k,
                   double d, const InversionOptions& opts = {});

  const Grid3D& grid() const noexcept { return grid_; }
  const BasisSet& basis() const noexcept { return *basis_; }
  const CWF& cwf() const noexcept { return cwf_; }
  const Constraints& constraints() const noexcept { return constraints_; }
  const SourceGeometryTensors& tensors() const noexcept { return tensors_; }
  const InversionOptions& options() const noexcept { return opts_; }
  std::size_t N() const noexcept { return basis_->N(); }
  double k() const noexcept { return k_; }
  double d() const noexcept { return d_; }

  bool is_interior(std::size_t node) const noexcept;
  // h^2 * trapezoid weight * normalized CWF at the node's z; 0 off the interior.
  double weight(std::size_t node) const noexcept { return weight_[node]; }

  ComplexField zero_state() const { return ComplexField(grid_, N()); }

private:
  Grid3D grid_;
  const BasisSet* basis_;
  CWF cwf_;
  double k_;
  double d_;
  InversionOptions opts_;
  Constraints constraints_;
  SourceGeometryTensors tensors_;
  std::vector<double> weight_;
};

// L = Delta^h V + K(grad^h V) at interior nodes, zero elsewhere.
ComplexField residual_L(const ComplexField& V, const InversionProblem& P);

double evaluate_J(const ComplexField& V, const InversionProblem& P);

// Gradient with respect to the free degrees of freedom, packed as dJ/dRe + i dJ/dIm,
// so that dJ(V; r) = Re sum conj(G) r for admissible r.
ComplexField gradient_J(const ComplexField& V, const InversionProblem& P, double* J_out = nullptr);

// Re sum conj(a) b over all entries.
double real_inner(const ComplexField& a, const ComplexField& b);

// chi(z) = exp(2 (z+b)^2 / ((z+b)^2 - b^2)) for z < 0, 0 otherwise.
double cutoff_chi(double z, double b);

// v_n = (psi0_n + psi1_n (z + b)) chi(z), then constraints applied.
ComplexField build_starting_point(const InversionProblem& P, const CauchyData& cauchy);

struct DescentSchedule {
  double gamma0 = 0.1;
  double gamma_min = 1e-10;
  double dj_tol = 1e-10;
  std::size_t max_iter = 10000;
};

struct TraceEntry {
  std::size_t iter = 0;
  double gamma = 0.0;
  double J = 0.0;
  bool accepted = false;
  double norm = 0.0;  // ||V|| of the current iterate
};

enum class StopReason { step_underflow, small_change };

struct MinimizeResult {
  ComplexField V;
  std::vector<TraceEntry> trace;
  StopReason reason = StopReason::small_change;
  double J0 = 0.0;
  double J = 0.0;
};

class NonConvergenceError : public Error {
public:
  NonConvergenceError(const std::string& what, std::vector<TraceEntry> trace,
                      std::shared_ptr<const ComplexField> last = nullptr)
    : Error(what), trace_(std::move(trace)), last_(std::move(last)) {}
  const std::vector<TraceEntry>& trace() const noexcept { return trace_; }
  // Iterate held when the cap was reached; may be null.
  const ComplexField* last_iterate() const noexcept { return last_.get(); }

private:
  std::vector<TraceEntry> trace_;
  std::shared_ptr<const ComplexField> last_;
};

// Gradient descent with step halving on increase. The first trial uses gamma0.
MinimizeResult minimize(const ComplexField& V0, const InversionProblem& P, const DescentSchedule& schedule = {});

// Minimizer components as CSV `n,p,q,s,re,im`; trace as `iter,gamma,J,accepted,norm`.
void save_state(const ComplexField& V, const std::filesystem::path& path);
ComplexField load_state(const std::filesystem::path& path, const Grid3D& grid);
void save_trace(const std::vector<TraceEntry>& trace, const std::filesystem::path& path);

}  // namespace hconvex
