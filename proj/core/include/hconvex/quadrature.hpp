#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace hconvex {

// Nodes ascending, weights positive; integrates over [a, b].
struct Quadrature {
  double a = 0.0;
  double b = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }

  template <typename F>
  auto integrate(F&& f) const {
    using R = decltype(f(0.0));
    R acc{};
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
    return acc;
  }
};

/// n-point Gauss-Legendre rule on [a,b] (Newton iteration on P_n).
Quadrature gauss_legendre(std::size_t n, double a, double b);

/// Composite Simpson rule with `intervals` (even, >= 2) subintervals.
Quadrature composite_simpson(std::size_t intervals, double a, double b);

}  // namespace hconvex
