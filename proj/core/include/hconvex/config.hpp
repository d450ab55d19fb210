#pragma once

#include <string>

namespace hconvex {

// Speed of light expressed in the dimensionless length unit (1 unit = 10 cm) per second.
inline constexpr double kLightSpeedUnitsPerSecond = 2997924580.0;

// Dimensionless wavenumber for a frequency in Hz. Throws DomainError for f_hz <= 0.
double wavenumber_from_frequency(double f_hz);

// Inverse of wavenumber_from_frequency.
double frequency_from_wavenumber(double k);

// Geometry and discretization of the problem, all in dimensionless units.
//
// The domain is the prism (-R,R) x (-R,R) x (-b,b). Point sources sit on the line
// {(alpha, 0, -d) : a1 <= alpha <= a2}; far-field data live on the plane z = -D and
// the near-field (Cauchy) data on the face z = -b.
struct DomainConfig {
  double R = 5.0;
  double b = 2.0;
  double d = 9.0;
  double a1 = 0.1;
  double a2 = 0.6;
  double D = 14.0;
  double theta = 4.0;
  double k = 6.62;
  double lambda = 1.1;
  int N = 4;
  int n_src = 10;
  double h = 0.2;
  double h_z = 0.2;

  // Throws ConfigError naming the first violated constraint.
  void validate() const;
};

}  // namespace hconvex
