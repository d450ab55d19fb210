#include "hconvex/basis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hconvex/errors.hpp"

namespace hconvex {

namespace {

// e^alpha * sum_j c_j alpha^j and its derivative e^alpha * sum_j c_j (alpha^j + j alpha^{j-1}).
std::pair<double, double> eval_coeffs(const Eigen::MatrixXd& coeff, std::size_t n, double alpha) {
  const auto cols = static_cast<std::size_t>(coeff.cols());
  double poly = 0.0;
  double dpoly = 0.0;
  for (std::size_t j = cols; j-- > 0;) {
    dpoly = dpoly * alpha + poly;
    poly = poly * alpha + coeff(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(j));
  }
  const double e = std::exp(alpha);
  return {e * poly, e * (poly + dpoly)};
}

}  // namespace

double BasisSet::value(std::size_t n, double alpha) const { return eval_coeffs(coeff_, n, alpha).first; }

double BasisSet::derivative(std::size_t n, double alpha) const { return eval_coeffs(coeff_, n, alpha).second; }

BasisSet build_basis(double a1, double a2, std::size_t N, std::size_t quad_points) {
  if (!(a1 < a2)) throw DomainError("build_basis: need a1 < a2");
  if (N < 1 || N > kMaxBasisSize) throw DomainError("build_basis: N must lie in 1.." + std::to_string(kMaxBasisSize));
  if (quad_points < 8 * N) throw DomainError("build_basis: need at least 8N quadrature points");

  BasisSet B;
  B.N_ = N;
  B.quad_ = gauss_legendre(quad_points, a1, a2);
  const auto& q = B.quad_;
  const auto M = static_cast<Eigen::Index>(quad_points);
  const auto n_ = static_cast<Eigen::Index>(N);
  Eigen::Map<const Eigen::VectorXd> w(q.weights.data(), M);

  B.psi_.resize(n_, M);
  B.coeff_ = Eigen::MatrixXd::Zero(n_, n_);

  for (Eigen::Index n = 0; n < n_; ++n) {
    Eigen::VectorXd v(M);
    for (Eigen::Index i = 0; i < M; ++i) {
      const double a = q.nodes[static_cast<std::size_t>(i)];
      v(i) = std::pow(a, static_cast<double>(n)) * std::exp(a);
    }
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n_);
    c(n) = 1.0;
    const double norm0 = std::sqrt(v.cwiseProduct(v).dot(w));

    // Two sweeps of modified Gram-Schmidt.
    for (int sweep = 0; sweep < 2; ++sweep) {
      for (Eigen::Index m = 0; m < n; ++m) {
        const double r = v.cwiseProduct(w).dot(B.psi_.row(m));
        v -= r * B.psi_.row(m).transpose();
        c -= r * B.coeff_.row(m).transpose();
      }
    }
    const double norm = std::sqrt(v.cwiseProduct(v).dot(w));
    if (!(norm > 1e-13 * norm0)) {
      throw ConditioningError("Gram-Schmidt breakdown at index " + std::to_string(n), static_cast<std::size_t>(n));
    }
    B.psi_.row(n) = v.transpose() / norm;
    B.coeff_.row(n) = c.transpose() / norm;
  }

  B.dpsi_.resize(n_, M);
  for (Eigen::Index n = 0; n < n_; ++n) {
    for (Eigen::Index i = 0; i < M; ++i) {
      B.dpsi_(n, i) = eval_coeffs(B.coeff_, static_cast<std::size_t>(n), q.nodes[static_cast<std::size_t>(i)]).second;
    }
  }

  const Eigen::MatrixXd Pw = B.psi_ * w.asDiagonal();
  B.C_ = Pw * B.psi_.transpose();
  B.B_ = Pw * B.dpsi_.transpose();  // B(m,n) = <Psi_m, Psi_n'>
  B.S_ = B.B_;                      // s_mn = <Psi_n', Psi_m>
  B.S_inv_ = B.S_.inverse();

  B.A_.assign(N * N * N, 0.0);
  for (std::size_t m = 0; m < N; ++m) {
    for (std::size_t n = 0; n < N; ++n) {
      for (std::size_t l = 0; l < N; ++l) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < M; ++i) {
          acc += w(i) * B.psi_(static_cast<Eigen::Index>(m), i) * B.psi_(static_cast<Eigen::Index>(n), i) *
                 B.dpsi_(static_cast<Eigen::Index>(l), i);
        }
        B.A_[(m * N + n) * N + l] = acc;
      }
    }
  }
  return B;
}

std::vector<std::complex<double>> project_onto_basis(std::span<const std::complex<double>> samples,
                                                     const BasisSet& basis, const Quadrature& nodes) {
  if (samples.size() != nodes.size()) {
    throw ShapeError("project_onto_basis: " + std::to_string(samples.size()) + " samples for " +
                     std::to_string(nodes.size()) + " nodes");
  }
  std::vector<std::complex<double>> out(basis.N());
  for (std::size_t l = 0; l < nodes.size(); ++l) {
    const std::complex<double> f = nodes.weights[l] * samples[l];
    for (std::size_t n = 0; n < basis.N(); ++n) out[n] += f * basis.value(n, nodes.nodes[l]);
  }
  return out;
}

std::vector<std::complex<double>> project_onto_basis(std::span<const std::complex<double>> samples,
                                                     const BasisSet& basis) {
  const auto& q = basis.quadrature();
  if (samples.size() != q.size()) throw ShapeError("project_onto_basis: samples must sit on the basis nodes");
  std::vector<std::complex<double>> out(basis.N());
  for (std::size_t l = 0; l < q.size(); ++l) {
    const std::complex<double> f = q.weights[l] * samples[l];
    for (std::size_t n = 0; n < basis.N(); ++n) {
      out[n] += f * basis.psi_nodes()(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(l));
    }
  }
  return out;
}

std::complex<double> synthesize_from_basis(std::span<const std::complex<double>> coeffs, const BasisSet& basis,
                                           double alpha) {
  if (coeffs.size() != basis.N()) throw ShapeError("synthesize_from_basis: coefficient count differs from N");
  const double tol = 1e-12 * (basis.a2() - basis.a1());
  if (!(alpha >= basis.a1() - tol && alpha <= basis.a2() + tol)) {
    throw DomainError("synthesize_from_basis: alpha outside [a1,a2]");
  }
  std::complex<double> acc{};
  for (std::size_t n = 0; n < coeffs.size(); ++n) acc += coeffs[n] * basis.value(n, alpha);
  return acc;
}

BasisReport inspect_basis(const BasisSet& basis) {
  BasisReport r;
  const auto n_ = static_cast<Eigen::Index>(basis.N());
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n_, n_);
  r.orthonormality_error = (basis.C() - I).cwiseAbs().maxCoeff();
  const auto& S = basis.S();
  for (Eigen::Index m = 0; m < n_; ++m) {
    r.s_triangular_error = std::max(r.s_triangular_error, std::abs(S(m, m) - 1.0));
    for (Eigen::Index n = 0; n < m; ++n) r.s_triangular_error = std::max(r.s_triangular_error, std::abs(S(m, n)));
  }
  r.det_S = S.determinant();
  r.s_inverse_error = (S * basis.S_inv() - I).cwiseAbs().maxCoeff();
  r.b_vs_s_error = (basis.B() - S).cwiseAbs().maxCoeff();
  return r;
}

}  // namespace hconvex
