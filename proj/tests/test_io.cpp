#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "hconvex/errors.hpp"
#include "hconvex/measurement.hpp"
#include "hconvex/vtk_io.hpp"

using namespace hconvex;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "hconvex_test_io";
  fs::create_directories(dir);
  return dir / name;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

MeasurementSet sample_set() {
  MeasurementSet m;
  m.plane_z = -14.0;
  m.alphas = {0.1, 0.35};
  m.samples = PlanarData(Lattice2D::square(1.0, 3), 2);
  for (std::size_t i = 0; i < m.samples.values.size(); ++i) {
    m.samples.values[i] = {0.1 * static_cast<double>(i) + 1.0 / 3.0, -1e-17 * static_cast<double>(i)};
  }
  return m;
}

}  // namespace

TEST(MeasurementIo, RoundTripIsBitExact) {
  const auto m = sample_set();
  const auto p = scratch("m.csv");
  save_measurements(m, p);
  const auto back = load_measurements(p, -14.0);
  ASSERT_EQ(back.alphas, m.alphas);
  ASSERT_TRUE(back.samples.lattice.matches(m.samples.lattice));
  EXPECT_EQ(back.samples.values, m.samples.values);
}

TEST(MeasurementIo, RowOrderDoesNotMatter) {
  const auto p = scratch("shuffled.csv");
  write(p,
        "alpha,x,y,re,im\n"
        "0.2,1,1,4,0\n0.2,0,0,1,0\n0.2,1,0,3,0\n0.2,0,1,2,0\n");
  const auto m = load_measurements(p, -14.0);
  EXPECT_EQ(m.samples.at(0, 0, 0), cplx(1, 0));
  EXPECT_EQ(m.samples.at(0, 0, 1), cplx(2, 0));
  EXPECT_EQ(m.samples.at(0, 1, 0), cplx(3, 0));
  EXPECT_EQ(m.samples.at(0, 1, 1), cplx(4, 0));
}

TEST(MeasurementIo, MalformedRowReportsLine) {
  const auto p = scratch("bad.csv");
  write(p, "alpha,x,y,re,im\n0.2,0,0,1,0\n0.2,0,1,abc,0\n");
  try {
    load_measurements(p, -14.0);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(MeasurementIo, MissingSampleIsInconsistentLattice) {
  const auto p = scratch("hole.csv");
  write(p, "alpha,x,y,re,im\n0.2,0,0,1,0\n0.2,0,1,1,0\n0.2,1,0,1,0\n");
  EXPECT_THROW(load_measurements(p, -14.0), ParseError);
}

TEST(MeasurementIo, DuplicateAndNonFiniteRejected) {
  const auto p = scratch("dup.csv");
  write(p, "alpha,x,y,re,im\n0.2,0,0,1,0\n0.2,0,0,1,0\n");
  EXPECT_THROW(load_measurements(p, -14.0), ParseError);
  write(p, "alpha,x,y,re,im\n0.2,0,0,nan,0\n");
  EXPECT_THROW(load_measurements(p, -14.0), ParseError);
  EXPECT_THROW(load_measurements(scratch("absent.csv"), -14.0), IoError);
}

TEST(CauchyIo, RoundTripAndModeIndexCheck) {
  CauchyData c{PlanarData(Lattice2D::square(1.0, 3), 2), PlanarData(Lattice2D::square(1.0, 3), 2)};
  for (std::size_t i = 0; i < c.psi0.values.size(); ++i) {
    c.psi0.values[i] = {1.0 / (i + 1.0), 2.0};
    c.psi1.values[i] = {-3.0, 0.1 * i};
  }
  const auto p = scratch("c.csv");
  save_cauchy(c, p);
  const auto back = load_cauchy(p);
  EXPECT_EQ(back.psi0.values, c.psi0.values);
  EXPECT_EQ(back.psi1.values, c.psi1.values);

  write(p, "n,x,y,re0,im0,re1,im1\n1,0,0,1,0,1,0\n1,0,1,1,0,1,0\n1,1,0,1,0,1,0\n1,1,1,1,0,1,0\n");
  EXPECT_THROW(load_cauchy(p), ParseError);
}

TEST(NearFieldIo, RoundTrip) {
  NearField f;
  f.alphas = {0.3};
  f.value = PlanarData(Lattice2D::square(2.0, 5), 1);
  f.dz = PlanarData(Lattice2D::square(2.0, 5), 1);
  for (std::size_t i = 0; i < 25; ++i) {
    f.value.values[i] = {double(i), -1.0};
    f.dz.values[i] = {0.5, double(i) * 1e-3};
  }
  const auto p = scratch("nf.csv");
  save_near_field(f, p);
  const auto back = load_near_field(p);
  EXPECT_EQ(back.value.values, f.value.values);
  EXPECT_EQ(back.dz.values, f.dz.values);
}

TEST(Vtk, RoundTripPreservesValuesAndOrdering) {
  const Grid3D g(4, 3, 1.5, 1.0);
  ScalarField f(g, 1);
  for (std::size_t i = 0; i < g.size(); ++i) f(i) = 1.0 + 0.1 * static_cast<double>(i) / 3.0;
  const auto p = scratch("f.vtk");
  std::vector<double> mask(g.size(), 0.0);
  mask[g.flat(1, 2, 0)] = 1.0;
  export_scalar_field(f, p, "c_comp", 0.1, {{"mask", mask}});
  const auto vol = read_vtk(p);
  EXPECT_TRUE(vol.grid == g);
  ASSERT_NE(vol.find("c_comp"), nullptr);
  ASSERT_NE(vol.find("mask"), nullptr);
  EXPECT_EQ(vol.find("c_comp")->values, f.values());
  EXPECT_EQ(vol.find("mask")->values, mask);

  // x runs fastest in the file: the second value is node (p=1, q=0, s=0).
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line) && line.rfind("LOOKUP_TABLE", 0) != 0) {
  }
  std::getline(in, line);
  std::getline(in, line);
  EXPECT_DOUBLE_EQ(std::stod(line), f(g.flat(1, 0, 0)));
}

TEST(Vtk, MetadataRecordsTenPercentIsovalue) {
  const Grid3D g(3, 3, 1.0, 1.0);
  ScalarField f(g, 1, 1.0);
  f(g.flat(1, 1, 1)) = 10.0;
  const auto p = scratch("iso.vtk");
  export_scalar_field(f, p);
  std::ifstream in(p.string() + ".meta.json");
  const auto meta = nlohmann::json::parse(in);
  EXPECT_DOUBLE_EQ(meta.at("max").get<double>(), 10.0);
  EXPECT_DOUBLE_EQ(meta.at("isovalue").get<double>(), 1.0);
}

TEST(Vtk, RefusesNonFinite) {
  const Grid3D g(3, 3, 1.0, 1.0);
  ScalarField f(g, 1, 1.0);
  f(0) = std::nan("");
  EXPECT_THROW(export_scalar_field(f, scratch("nan.vtk")), DomainError);
}
