#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hconvex/quadrature.hpp"

namespace hconvex {

// Orthonormal basis {Psi_n} of L2(a1,a2) from Gram-Schmidt on alpha^n e^alpha.
//
// Each Psi_n is kept both as values on the internal Gauss-Legendre nodes and as
// coefficients in Psi_n = e^alpha * sum_j coeff(n,j) alpha^j, so it can be evaluated
// (with its derivative) anywhere in [a1,a2].
class BasisSet {
public:
  std::size_t N() const noexcept { return N_; }
  double a1() const noexcept { return quad_.a; }
  double a2() const noexcept { return quad_.b; }
  const Quadrature& quadrature() const noexcept { return quad_; }

  // Values on the internal quadrature nodes; row n, column node.
  const Eigen::MatrixXd& psi_nodes() const noexcept { return psi_; }
  const Eigen::MatrixXd& dpsi_nodes() const noexcept { return dpsi_; }
  const Eigen::MatrixXd& coefficients() const noexcept { return coeff_; }

  double value(std::size_t n, double alpha) const;
  double derivative(std::size_t n, double alpha) const;

  // s_mn = <Psi_n', Psi_m>, unit upper triangular.
  const Eigen::MatrixXd& S() const noexcept { return S_; }
  const Eigen::MatrixXd& S_inv() const noexcept { return S_inv_; }

  // A(m,n,l) = int Psi_m Psi_n Psi_l'; B(m,n) = int Psi_m Psi_n'; C(m,n) = int Psi_m Psi_n.
  double A(std::size_t m, std::size_t n, std::size_t l) const noexcept { return A_[(m * N_ + n) * N_ + l]; }
  double B(std::size_t m, std::size_t n) const noexcept { return B_(m, n); }
  double C(std::size_t m, std::size_t n) const noexcept { return C_(m, n); }
  const Eigen::MatrixXd& B() const noexcept { return B_; }
  const Eigen::MatrixXd& C() const noexcept { return C_; }

  friend BasisSet build_basis(double a1, double a2, std::size_t N, std::size_t quad_points);

private:
  std::size_t N_ = 0;
  Quadrature quad_;
  Eigen::MatrixXd psi_;
  Eigen::MatrixXd dpsi_;
  Eigen::MatrixXd coeff_;
  Eigen::MatrixXd S_;
  Eigen::MatrixXd S_inv_;
  std::vector<double> A_;
  Eigen::MatrixXd B_;
  Eigen::MatrixXd C_;
};

inline constexpr std::size_t kMaxBasisSize = 12;

inline std::size_t default_quad_points(std::size_t N) { return N * 8 > 64 ? N * 8 : 64; }

// Throws DomainError on bad arguments, ConditioningError(index) when Gram-Schmidt
// meets a (numerically) dependent function.
BasisSet build_basis(double a1, double a2, std::size_t N, std::size_t quad_points);
inline BasisSet build_basis(double a1, double a2, std::size_t N) {
  return build_basis(a1, a2, N, default_quad_points(N));
}

// Fourier coefficients <f, Psi_n> from samples f(alpha_l) at the nodes of `nodes`.
// ShapeError when the sample count differs from the node count.
std::vector<std::complex<double>> project_onto_basis(std::span<const std::complex<double>> samples,
                                                     const BasisSet& basis, const Quadrature& nodes);
// Same, with samples on the basis' own quadrature nodes.
std::vector<std::complex<double>> project_onto_basis(std::span<const std::complex<double>> samples,
                                                     const BasisSet& basis);

// sum_n coeffs[n] Psi_n(alpha); DomainError outside [a1,a2].
std::complex<double> synthesize_from_basis(std::span<const std::complex<double>> coeffs, const BasisSet& basis,
                                           double alpha);

// Diagnostics used by `verify basis` and the acceptance run.
struct BasisReport {
  double orthonormality_error = 0.0;  // max |<Psi_n,Psi_m> - delta_nm|
  double s_triangular_error = 0.0;    // max over diagonal |s_nn - 1| and strict lower |s_mn|
  double det_S = 0.0;
  double s_inverse_error = 0.0;  // max |S S^-1 - I|
  double b_vs_s_error = 0.0;     // max |B - S|
};
BasisReport inspect_basis(const BasisSet& basis);

}  // namespace hconvex
