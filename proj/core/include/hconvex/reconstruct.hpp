#pragma once

#include <array>
#include <vector>

#include "hconvex/grid.hpp"
#include "hconvex/inversion.hpp"
#include "hconvex/quadrature.hpp"

namespace hconvex {

// c = mean_l |-(Delta v + (grad v)^2 + 2 grad v . x~_l) / k^2| + 1 with
// v(x, alpha_l) = sum_n Psi_n(alpha_l) v_n(x). Boundary nodes get c = 1.
ScalarField recover_dielectric(const ComplexField& V, const InversionProblem& P, const Quadrature& sources);

// c_comp = 1 + rho * smooth(|c| - 1), rho chosen so that max c_comp = max |c|.
// sigma is in grid steps.
ScalarField finalize_field(const ScalarField& c_raw, double sigma = 1.0);

struct InclusionReport {
  bool found = false;
  std::vector<char> mask;  // Grid3D flat order
  std::size_t voxels = 0;
  double max_value = 1.0;
  double threshold = 0.0;  // on c - 1
  std::array<double, 3> centroid{0.0, 0.0, 0.0};
  std::array<double, 3> bbox_min{0.0, 0.0, 0.0};
  std::array<double, 3> bbox_max{0.0, 0.0, 0.0};
};

// Mask {c - 1 >= fraction * max(c - 1)}; an all-ones field reports found = false.
InclusionReport extract_inclusion(const ScalarField& c_comp, double fraction = 0.1);

}  // namespace hconvex
