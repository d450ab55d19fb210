#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hconvex/grid.hpp"

namespace hconvex {

struct VtkScalars {
  std::string name;
  std::vector<double> values;  // Grid3D flat order
};

struct VtkVolume {
  Grid3D grid;
  std::vector<VtkScalars> blocks;

  const VtkScalars* find(const std::string& name) const;
};

// Legacy ASCII STRUCTURED_POINTS, one SCALARS block per entry (double, LOOKUP_TABLE default).
void write_vtk(const Grid3D& grid, const std::vector<VtkScalars>& blocks, const std::filesystem::path& path);
VtkVolume read_vtk(const std::filesystem::path& path);

// Writes `path` with a single block named `name` plus `<path>.meta.json` holding the
// maximum and the isosurface level (fraction of the maximum). `extra` blocks follow the field.
void export_scalar_field(const ScalarField& field, const std::filesystem::path& path,
                         const std::string& name = "c_comp", double iso_fraction = 0.1,
                         const std::vector<VtkScalars>& extra = {});

}  // namespace hconvex
