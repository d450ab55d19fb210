#include "hconvex/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <tuple>
#include <utility>

#include "hconvex/errors.hpp"

namespace hconvex {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(std::size_t n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (std::size_t k = 2; k <= n; ++k) {
    const double kk = static_cast<double>(k);
    const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
    p0 = p1;
    p1 = p2;
  }
  return {p1, static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

Quadrature gauss_legendre(std::size_t n, double a, double b) {
  if (n == 0) throw DomainError("gauss_legendre: need at least one node");
  if (!(a < b)) throw DomainError("gauss_legendre: empty interval");
  Quadrature q{a, b, std::vector<double>(n), std::vector<double>(n)};
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    // Tricomi's initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    auto [p, dp] = legendre(n, x);
    for (int it = 0; it < 100; ++it) {
      const double dx = p / dp;
      x -= dx;
      std::tie(p, dp) = legendre(n, x);
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.nodes[i] = mid - half * x;
    q.nodes[n - 1 - i] = mid + half * x;
    q.weights[i] = half * w;
    q.weights[n - 1 - i] = half * w;
  }
  return q;
}

Quadrature composite_simpson(std::size_t intervals, double a, double b) {
  if (intervals < 2 || intervals % 2 != 0) throw DomainError("composite_simpson: intervals must be even and >= 2");
  if (!(a < b)) throw DomainError("composite_simpson: empty interval");
  Quadrature q{a, b, std::vector<double>(intervals + 1), std::vector<double>(intervals + 1)};
  const double step = (b - a) / static_cast<double>(intervals);
  for (std::size_t i = 0; i <= intervals; ++i) {
    q.nodes[i] = a + step * static_cast<double>(i);
    const double c = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    q.weights[i] = c * step / 3.0;
  }
  q.nodes.back() = b;
  return q;
}

}  // namespace hconvex
