#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

#include "hconvex/errors.hpp"

namespace hconvex {

using cplx = std::complex<double>;

struct NodeIndex {
  std::size_t p = 0;
  std::size_t q = 0;
  std::size_t s = 0;

  friend bool operator==(const NodeIndex&, const NodeIndex&) = default;
};

// Uniform lattice over [-R,R] x [-R,R] x [-b,b]; x,y share the step h, z uses h_z.
// Flat index is lexicographic in (p, q, s) with s fastest.
class Grid3D {
public:
  Grid3D() = default;
  Grid3D(std::size_t nxy, std::size_t nz, double R, double b);

  // Point counts derived from the steps; throws DomainError when 2R/h or 2b/h_z is
  // not (numerically) an integer.
  static Grid3D over_domain(double R, double b, double h, double h_z);

  std::size_t nx() const noexcept { return nxy_; }
  std::size_t ny() const noexcept { return nxy_; }
  std::size_t nz() const noexcept { return nz_; }
  std::size_t size() const noexcept { return nxy_ * nxy_ * nz_; }

  double R() const noexcept { return R_; }
  double b() const noexcept { return b_; }
  double h() const noexcept { return h_; }
  double h_z() const noexcept { return hz_; }

  double x(std::size_t p) const noexcept { return -R_ + h_ * static_cast<double>(p); }
  double y(std::size_t q) const noexcept { return -R_ + h_ * static_cast<double>(q); }
  double z(std::size_t s) const noexcept { return -b_ + hz_ * static_cast<double>(s); }
  std::array<double, 3> point(const NodeIndex& n) const noexcept { return {x(n.p), y(n.q), z(n.s)}; }

  std::size_t flat(std::size_t p, std::size_t q, std::size_t s) const noexcept {
    return (p * nxy_ + q) * nz_ + s;
  }
  std::size_t flat(const NodeIndex& n) const noexcept { return flat(n.p, n.q, n.s); }
  NodeIndex unflat(std::size_t i) const noexcept {
    return {i / (nxy_ * nz_), (i / nz_) % nxy_, i % nz_};
  }

  // Gamma_h is the z = -b face.
  bool on_gamma(std::size_t s) const noexcept { return s == 0; }
  bool on_boundary(const NodeIndex& n) const noexcept {
    return n.p == 0 || n.q == 0 || n.s == 0 || n.p + 1 == nxy_ || n.q + 1 == nxy_ || n.s + 1 == nz_;
  }

  friend bool operator==(const Grid3D& a, const Grid3D& b) {
    return a.nxy_ == b.nxy_ && a.nz_ == b.nz_ && a.R_ == b.R_ && a.b_ == b.b_;
  }

private:
  std::size_t nxy_ = 0;
  std::size_t nz_ = 0;
  double R_ = 0.0;
  double b_ = 0.0;
  double h_ = 0.0;
  double hz_ = 0.0;
};

// Values on a Grid3D with `components` entries per node, node-major.
template <typename T>
class GridField {
public:
  GridField() = default;
  GridField(const Grid3D& grid, std::size_t components, T fill = T{})
    : grid_(grid), components_(components), data_(grid.size() * components, fill) {}

  const Grid3D& grid() const noexcept { return grid_; }
  std::size_t components() const noexcept { return components_; }

  T& operator()(std::size_t node, std::size_t c = 0) noexcept { return data_[node * components_ + c]; }
  const T& operator()(std::size_t node, std::size_t c = 0) const noexcept {
    return data_[node * components_ + c];
  }

  std::span<T> node(std::size_t i) noexcept { return {data_.data() + i * components_, components_}; }
  std::span<const T> node(std::size_t i) const noexcept {
    return {data_.data() + i * components_, components_};
  }

  std::vector<T>& values() noexcept { return data_; }
  const std::vector<T>& values() const noexcept { return data_; }

  bool all_finite() const {
    for (const auto& v : data_) {
      if constexpr (std::is_same_v<T, cplx>) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
      } else {
        if (!std::isfinite(v)) return false;
      }
    }
    return true;
  }

private:
  Grid3D grid_;
  std::size_t components_ = 0;
  std::vector<T> data_;
};

using ComplexField = GridField<cplx>;
using ScalarField = GridField<double>;

// Uniform 2D sampling lattice used for planar data (far-field plane, Gamma).
struct Lattice2D {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double x0 = 0.0;
  double y0 = 0.0;
  double step = 0.0;

  std::size_t size() const noexcept { return nx * ny; }
  double x(std::size_t i) const noexcept { return x0 + step * static_cast<double>(i); }
  double y(std::size_t j) const noexcept { return y0 + step * static_cast<double>(j); }
  std::size_t flat(std::size_t i, std::size_t j) const noexcept { return i * ny + j; }

  // n x n lattice spanning [-half_width, half_width]^2.
  static Lattice2D square(double half_width, std::size_t n);

  bool matches(const Lattice2D& o, double tol = 1e-9) const noexcept {
    return nx == o.nx && ny == o.ny && std::abs(x0 - o.x0) <= tol && std::abs(y0 - o.y0) <= tol &&
           std::abs(step - o.step) <= tol;
  }
};

// Complex samples on a lattice for each source position, source-major.
struct PlanarData {
  Lattice2D lattice;
  std::size_t n_sources = 0;
  std::vector<cplx> values;

  PlanarData() = default;
  PlanarData(const Lattice2D& lat, std::size_t sources)
    : lattice(lat), n_sources(sources), values(lat.size() * sources) {}

  cplx& at(std::size_t src, std::size_t i, std::size_t j) noexcept {
    return values[src * lattice.size() + lattice.flat(i, j)];
  }
  const cplx& at(std::size_t src, std::size_t i, std::size_t j) const noexcept {
    return values[src * lattice.size() + lattice.flat(i, j)];
  }
  std::span<cplx> source(std::size_t src) noexcept {
    return {values.data() + src * lattice.size(), lattice.size()};
  }
  std::span<const cplx> source(std::size_t src) const noexcept {
    return {values.data() + src * lattice.size(), lattice.size()};
  }
};

}  // namespace hconvex
