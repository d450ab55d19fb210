#include "hconvex/config.hpp"

#include <cmath>
#include <numbers>

#include "hconvex/errors.hpp"

namespace hconvex {

double wavenumber_from_frequency(double f_hz) {
  if (!(f_hz > 0.0) || !std::isfinite(f_hz)) {
    throw DomainError("frequency must be positive, got " + std::to_string(f_hz));
  }
  return 2.0 * std::numbers::pi * f_hz / kLightSpeedUnitsPerSecond;
}

double frequency_from_wavenumber(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("wavenumber must be positive");
  return k * kLightSpeedUnitsPerSecond / (2.0 * std::numbers::pi);
}

void DomainConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid configuration: ") + what);
  };
  require(R > 0.0, "R must be > 0");
  require(b > 0.0, "b must be > 0");
  require(d > b, "d must exceed b");
  require(D > b, "D must exceed b");
  require(theta > b, "theta must exceed b");
  require(a1 < a2, "a1 must be < a2");
  require(k > 0.0, "k must be > 0");
  require(lambda >= 1.0, "lambda must be >= 1");
  require(N >= 1, "N must be >= 1");
  require(n_src >= N, "n_src must be >= N");
  require(h > 0.0, "h must be > 0");
  require(h_z > 0.0, "h_z must be > 0");
}

}  // namespace hconvex
