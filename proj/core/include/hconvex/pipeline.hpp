#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hconvex/config.hpp"
#include "hconvex/forward.hpp"
#include "hconvex/inversion.hpp"
#include "hconvex/reconstruct.hpp"

namespace hconvex {

// Everything a staged run needs. Text form: `key = value` lines, `#` comments,
// `inclusion = box cx cy cz sx sy sz c` (full side lengths) or
// `inclusion = sphere cx cy cz r c`, repeatable.
struct PipelineConfig {
  DomainConfig domain;

  // simulate
  std::vector<Inclusion> inclusions;
  double sim_h = 0.1;
  std::size_t lattice_n = 51;
  double noise = 0.05;
  std::uint64_t seed = 1;

  // preprocess
  double kappa1 = 0.4;
  double sigma = 1.0;

  // invert
  DescentSchedule descent;
  InversionOptions inversion;

  // reconstruct
  double finalize_sigma = 1.0;
  double iso_fraction = 0.1;

  void validate() const;
};

// Throws ParseError("line L, column C: ...") on malformed input and ConfigError on
// values that parse but are inconsistent.
PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);

// Every resolved parameter, one per line, defaults included.
std::string describe_config(const PipelineConfig& cfg);

enum class Stage { simulate, propagate, preprocess, invert, reconstruct };

inline constexpr Stage kAllStages[] = {Stage::simulate, Stage::propagate, Stage::preprocess, Stage::invert,
                                       Stage::reconstruct};

const char* stage_name(Stage s);
Stage parse_stage(std::string_view name);

// Artifact file names inside the output directory.
namespace artifact {
inline constexpr const char* measurements = "measurements.csv";
inline constexpr const char* reference = "reference.csv";
inline constexpr const char* near_field = "nearfield.csv";
inline constexpr const char* cauchy_raw = "cauchy_raw.csv";
inline constexpr const char* near_field_pre = "nearfield_pre.csv";
inline constexpr const char* cauchy = "cauchy.csv";
inline constexpr const char* minimizer = "minimizer.csv";
inline constexpr const char* trace = "trace.csv";
inline constexpr const char* last_iterate = "last_iterate.csv";  // written when descent hits its cap
inline constexpr const char* c_comp = "c_comp.vtk";
inline constexpr const char* summary = "summary.json";
inline constexpr const char* manifest = "manifest.json";
}  // namespace artifact

struct ManifestEntry {
  std::string stage;
  std::string input_hash;   // FNV-1a over the resolved config and the stage inputs
  std::string output;       // primary artifact, relative to the output directory
  std::string output_hash;
  double wall_seconds = 0.0;
};

// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);
std::string hash_file(const std::filesystem::path& path);

// Runs one stage. Missing inputs raise StageError naming the stage to run first.
// `reference` (optional) replaces the simulated reference measurement.
ManifestEntry run_stage(Stage stage, const PipelineConfig& cfg, const std::filesystem::path& out_dir,
                        const std::filesystem::path& reference = {});

// Runs the stages in order and rewrites manifest.json (entries of earlier runs for
// other stages are kept).
std::vector<ManifestEntry> run_pipeline(const PipelineConfig& cfg, const std::vector<Stage>& stages,
                                        const std::filesystem::path& out_dir,
                                        const std::filesystem::path& reference = {});

// c_comp from a saved state (the minimizer, or the last iterate of a capped descent).
ScalarField reconstruct_field(const PipelineConfig& cfg, const std::filesystem::path& cauchy_path,
                              const std::filesystem::path& state_path);

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);
void save_manifest(const std::vector<ManifestEntry>& entries, const std::filesystem::path& path);

}  // namespace hconvex
