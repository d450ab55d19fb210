#include "hconvex/vtk_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hconvex {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

const VtkScalars* VtkVolume::find(const std::string& name) const {
  for (const auto& b : blocks) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

void write_vtk(const Grid3D& grid, const std::vector<VtkScalars>& blocks, const std::filesystem::path& path) {
  for (const auto& b : blocks) {
    if (b.values.size() != grid.size()) throw ShapeError("vtk block '" + b.name + "' has wrong length");
    if (b.name.empty() || b.name.find(' ') != std::string::npos) throw ShapeError("vtk block names must be one word");
    for (double v : b.values) {
      if (!std::isfinite(v)) throw DomainError("refusing to write non-finite value in '" + b.name + "'");
    }
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "# vtk DataFile Version 3.0\n"
      << "hconvex scalar field\n"
      << "ASCII\n"
      << "DATASET STRUCTURED_POINTS\n"
      << "DIMENSIONS " << grid.nx() << ' ' << grid.ny() << ' ' << grid.nz() << '\n'
      << "ORIGIN " << fmt(-grid.R()) << ' ' << fmt(-grid.R()) << ' ' << fmt(-grid.b()) << '\n'
      << "SPACING " << fmt(grid.h()) << ' ' << fmt(grid.h()) << ' ' << fmt(grid.h_z()) << '\n'
      << "POINT_DATA " << grid.size() << '\n';
  for (const auto& b : blocks) {
    out << "SCALARS " << b.name << " double 1\nLOOKUP_TABLE default\n";
    // VTK orders points with x fastest.
    for (std::size_t s = 0; s < grid.nz(); ++s) {
      for (std::size_t q = 0; q < grid.ny(); ++q) {
        for (std::size_t p = 0; p < grid.nx(); ++p) out << fmt(b.values[grid.flat(p, q, s)]) << '\n';
      }
    }
  }
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

VtkVolume read_vtk(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  for (int i = 0; i < 3; ++i) std::getline(in, line);
  if (line.rfind("ASCII", 0) != 0) throw ParseError("only ASCII legacy VTK is supported", 3);

  std::size_t dims[3] = {0, 0, 0};
  double origin[3] = {0, 0, 0};
  double spacing[3] = {0, 0, 0};
  std::size_t npoints = 0;
  VtkVolume vol;
  std::string tok;
  while (in >> tok) {
    if (tok == "DATASET") {
      in >> tok;
      if (tok != "STRUCTURED_POINTS") throw ParseError("expected STRUCTURED_POINTS", 0);
    } else if (tok == "DIMENSIONS") {
      in >> dims[0] >> dims[1] >> dims[2];
    } else if (tok == "ORIGIN") {
      in >> origin[0] >> origin[1] >> origin[2];
    } else if (tok == "SPACING") {
      in >> spacing[0] >> spacing[1] >> spacing[2];
    } else if (tok == "POINT_DATA") {
      in >> npoints;
      if (dims[0] != dims[1] || dims[0] < 2 || dims[2] < 2) throw ParseError("unsupported lattice shape", 0);
      vol.grid = Grid3D(dims[0], dims[2], -origin[0], -origin[2]);
      if (npoints != vol.grid.size()) throw ParseError("POINT_DATA count disagrees with DIMENSIONS", 0);
    } else if (tok == "SCALARS") {
      VtkScalars b;
      std::string type;
      in >> b.name >> type;
      std::getline(in, line);  // optional component count
      std::getline(in, line);
      if (line.rfind("LOOKUP_TABLE", 0) != 0) throw ParseError("expected LOOKUP_TABLE after SCALARS", 0);
      b.values.assign(npoints, 0.0);
      const auto& g = vol.grid;
      for (std::size_t s = 0; s < g.nz(); ++s) {
        for (std::size_t q = 0; q < g.ny(); ++q) {
          for (std::size_t p = 0; p < g.nx(); ++p) {
            if (!(in >> b.values[g.flat(p, q, s)])) throw ParseError("truncated scalar block '" + b.name + "'", 0);
          }
        }
      }
      vol.blocks.push_back(std::move(b));
    }
  }
  if (npoints == 0) throw ParseError("no POINT_DATA section", 0);
  (void)spacing;
  return vol;
}

void export_scalar_field(const ScalarField& field, const std::filesystem::path& path, const std::string& name,
                         double iso_fraction, const std::vector<VtkScalars>& extra) {
  if (field.components() != 1) throw ShapeError("export_scalar_field expects one component");
  if (!field.all_finite()) throw DomainError("export_scalar_field: field has non-finite values");
  std::vector<VtkScalars> blocks{{name, field.values()}};
  blocks.insert(blocks.end(), extra.begin(), extra.end());
  write_vtk(field.grid(), blocks, path);

  const auto& v = field.values();
  const double mx = v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
  nlohmann::ordered_json meta;
  meta["field"] = name;
  meta["max"] = mx;
  meta["iso_fraction"] = iso_fraction;
  meta["isovalue"] = iso_fraction * mx;
  auto meta_path = path;
  meta_path += ".meta.json";
  std::ofstream out(meta_path);
  if (!out) throw IoError("cannot write " + meta_path.string());
  out << meta.dump(2) << '\n';
}

}  // namespace hconvex
