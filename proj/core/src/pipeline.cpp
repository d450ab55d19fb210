#include "hconvex/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "hconvex/basis.hpp"
#include "hconvex/errors.hpp"
#include "hconvex/measurement.hpp"
#include "hconvex/preprocess.hpp"
#include "hconvex/propagation.hpp"
#include "hconvex/reconstruct.hpp"
#include "hconvex/vtk_io.hpp"

namespace hconvex {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Whitespace-separated tokens with their 1-based columns.
struct Token {
  std::string_view text;
  std::size_t column;
};

std::vector<Token> split(std::string_view line, std::size_t offset) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back({line.substr(start, i - start), offset + start + 1});
  }
  return out;
}

[[noreturn]] void fail(std::size_t line, std::size_t column, const std::string& what) {
  throw ParseError("column " + std::to_string(column) + ": " + what, line);
}

double to_double(const Token& t, std::size_t line) {
  double v = 0.0;
  const auto* end = t.text.data() + t.text.size();
  const auto r = std::from_chars(t.text.data(), end, v);
  if (r.ec != std::errc{} || r.ptr != end || !std::isfinite(v)) {
    fail(line, t.column, "expected a number, got '" + std::string(t.text) + "'");
  }
  return v;
}

long long to_int(const Token& t, std::size_t line) {
  long long v = 0;
  const auto* end = t.text.data() + t.text.size();
  const auto r = std::from_chars(t.text.data(), end, v);
  if (r.ec != std::errc{} || r.ptr != end) fail(line, t.column, "expected an integer, got '" + std::string(t.text) + "'");
  return v;
}

bool to_bool(const Token& t, std::size_t line) {
  if (t.text == "true" || t.text == "1" || t.text == "on") return true;
  if (t.text == "false" || t.text == "0" || t.text == "off") return false;
  fail(line, t.column, "expected true/false, got '" + std::string(t.text) + "'");
}

Inclusion parse_inclusion(const std::vector<Token>& tok, std::size_t line) {
  Inclusion inc;
  if (tok.empty()) fail(line, 1, "empty inclusion");
  auto num = [&](std::size_t i) { return to_double(tok[i], line); };
  if (tok[0].text == "box") {
    if (tok.size() != 8) fail(line, tok[0].column, "box needs: cx cy cz sx sy sz c");
    inc.shape = Inclusion::Shape::box;
    inc.center = {num(1), num(2), num(3)};
    inc.half = {0.5 * num(4), 0.5 * num(5), 0.5 * num(6)};
    inc.value = num(7);
  } else if (tok[0].text == "sphere") {
    if (tok.size() != 6) fail(line, tok[0].column, "sphere needs: cx cy cz r c");
    inc.shape = Inclusion::Shape::sphere;
    inc.center = {num(1), num(2), num(3)};
    inc.radius = num(4);
    inc.value = num(5);
  } else {
    fail(line, tok[0].column, "unknown inclusion shape '" + std::string(tok[0].text) + "'");
  }
  return inc;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

void PipelineConfig::validate() const {
  domain.validate();
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid configuration: ") + what);
  };
  require(sim_h > 0.0, "sim_h must be > 0");
  require(lattice_n >= 3, "lattice must have at least 3 samples per side");
  // Propagated data land on the Gamma face of the inversion grid.
  require(std::abs(2.0 * domain.R / domain.h + 1.0 - static_cast<double>(lattice_n)) < 1e-9,
          "lattice_n must equal 2R/h + 1");
  require(noise >= 0.0, "noise must be >= 0");
  require(kappa1 > 0.0 && kappa1 < 1.0, "kappa1 must lie in (0,1)");
  require(sigma > 0.0, "sigma must be > 0");
  require(finalize_sigma >= 0.0, "finalize_sigma must be >= 0");
  require(iso_fraction > 0.0 && iso_fraction < 1.0, "iso_fraction must lie in (0,1)");
  require(descent.gamma0 > 0.0, "gamma0 must be > 0");
  require(descent.max_iter >= 1, "max_iter must be >= 1");
  require(inversion.neumann_order == 1 || inversion.neumann_order == 2, "neumann_order must be 1 or 2");
  require(static_cast<std::size_t>(domain.N) <= kMaxBasisSize, "N exceeds the supported basis size");
  for (const auto& inc : inclusions) {
    require(inc.value >= 1.0, "inclusion value must be >= 1");
    if (inc.shape == Inclusion::Shape::box) {
      require(inc.half[0] > 0.0 && inc.half[1] > 0.0 && inc.half[2] > 0.0, "box sides must be > 0");
    } else {
      require(inc.radius > 0.0, "sphere radius must be > 0");
    }
  }
}

PipelineConfig parse_config(std::string_view text) {
  PipelineConfig cfg;
  auto& dm = cfg.domain;
  using Setter = std::function<void(const Token&, std::size_t)>;
  auto real = [](double& dst) -> Setter { return [&dst](const Token& t, std::size_t l) { dst = to_double(t, l); }; };
  auto integer = [](int& dst) -> Setter {
    return [&dst](const Token& t, std::size_t l) { dst = static_cast<int>(to_int(t, l)); };
  };
  auto count = [](std::size_t& dst) -> Setter {
    return [&dst](const Token& t, std::size_t l) {
      const long long v = to_int(t, l);
      if (v < 0) fail(l, t.column, "expected a non-negative integer");
      dst = static_cast<std::size_t>(v);
    };
  };
  auto flag = [](bool& dst) -> Setter { return [&dst](const Token& t, std::size_t l) { dst = to_bool(t, l); }; };

  const std::map<std::string, Setter, std::less<>> setters = {
      {"R", real(dm.R)},
      {"b", real(dm.b)},
      {"d", real(dm.d)},
      {"a1", real(dm.a1)},
      {"a2", real(dm.a2)},
      {"D", real(dm.D)},
      {"theta", real(dm.theta)},
      {"k", real(dm.k)},
      {"frequency_ghz", [&dm](const Token& t, std::size_t l) { dm.k = wavenumber_from_frequency(to_double(t, l) * 1e9); }},
      {"lambda", real(dm.lambda)},
      {"N", integer(dm.N)},
      {"n_src", integer(dm.n_src)},
      {"h", real(dm.h)},
      {"h_z", real(dm.h_z)},
      {"sim_h", real(cfg.sim_h)},
      {"lattice_n", count(cfg.lattice_n)},
      {"noise", real(cfg.noise)},
      {"seed",
       [&cfg](const Token& t, std::size_t l) {
         const long long v = to_int(t, l);
         if (v < 0) fail(l, t.column, "seed must be non-negative");
         cfg.seed = static_cast<std::uint64_t>(v);
       }},
      {"kappa1", real(cfg.kappa1)},
      {"sigma", real(cfg.sigma)},
      {"gamma0", real(cfg.descent.gamma0)},
      {"gamma_min", real(cfg.descent.gamma_min)},
      {"dj_tol", real(cfg.descent.dj_tol)},
      {"max_iter", count(cfg.descent.max_iter)},
      {"neumann_order", integer(cfg.inversion.neumann_order)},
      {"restrict_omega1", flag(cfg.inversion.restrict_omega1)},
      {"omega1_height", real(cfg.inversion.omega1_height)},
      {"nonlinear", flag(cfg.inversion.nonlinear)},
      {"finalize_sigma", real(cfg.finalize_sigma)},
      {"iso_fraction", real(cfg.iso_fraction)},
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(line_no, line.find_first_not_of(" \t") + 1, "expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) fail(line_no, 1, "missing key before '='");
    const auto tokens = split(line.substr(eq + 1), eq + 1);
    if (tokens.empty()) fail(line_no, eq + 2, "missing value for '" + std::string(key) + "'");
    if (key == "inclusion") {
      cfg.inclusions.push_back(parse_inclusion(tokens, line_no));
      continue;
    }
    const auto it = setters.find(key);
    if (it == setters.end()) {
      fail(line_no, line.find_first_not_of(" \t") + 1, "unknown key '" + std::string(key) + "'");
    }
    if (tokens.size() != 1) fail(line_no, tokens[1].column, "unexpected extra value");
    it->second(tokens[0], line_no);
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string describe_config(const PipelineConfig& cfg) {
  const auto& d = cfg.domain;
  std::ostringstream o;
  o << "# domain\n"
    << "R = " << num(d.R) << '\n'
    << "b = " << num(d.b) << '\n'
    << "d = " << num(d.d) << '\n'
    << "a1 = " << num(d.a1) << '\n'
    << "a2 = " << num(d.a2) << '\n'
    << "D = " << num(d.D) << '\n'
    << "theta = " << num(d.theta) << '\n'
    << "k = " << num(d.k) << "  # implied frequency " << num(std::round(frequency_from_wavenumber(d.k) / 1e7) / 100.0)
    << " GHz\n"
    << "lambda = " << num(d.lambda) << '\n'
    << "N = " << d.N << '\n'
    << "n_src = " << d.n_src << '\n'
    << "h = " << num(d.h) << '\n'
    << "h_z = " << num(d.h_z) << '\n'
    << "# simulate\n"
    << "sim_h = " << num(cfg.sim_h) << '\n'
    << "lattice_n = " << cfg.lattice_n << '\n'
    << "noise = " << num(cfg.noise) << '\n'
    << "seed = " << cfg.seed << '\n';
  for (const auto& inc : cfg.inclusions) {
    const auto& c = inc.center;
    if (inc.shape == Inclusion::Shape::box) {
      o << "inclusion = box " << num(c[0]) << ' ' << num(c[1]) << ' ' << num(c[2]) << ' ' << num(2 * inc.half[0]) << ' '
        << num(2 * inc.half[1]) << ' ' << num(2 * inc.half[2]) << ' ' << num(inc.value) << '\n';
    } else {
      o << "inclusion = sphere " << num(c[0]) << ' ' << num(c[1]) << ' ' << num(c[2]) << ' ' << num(inc.radius) << ' '
        << num(inc.value) << '\n';
    }
  }
  o << "# preprocess\n"
    << "kappa1 = " << num(cfg.kappa1) << '\n'
    << "sigma = " << num(cfg.sigma) << '\n'
    << "# invert\n"
    << "gamma0 = " << num(cfg.descent.gamma0) << '\n'
    << "gamma_min = " << num(cfg.descent.gamma_min) << '\n'
    << "dj_tol = " << num(cfg.descent.dj_tol) << '\n'
    << "max_iter = " << cfg.descent.max_iter << '\n'
    << "neumann_order = " << cfg.inversion.neumann_order << '\n'
    << "restrict_omega1 = " << (cfg.inversion.restrict_omega1 ? "true" : "false") << '\n'
    << "omega1_height = " << num(cfg.inversion.omega1_height) << '\n'
    << "nonlinear = " << (cfg.inversion.nonlinear ? "true" : "false") << '\n'
    << "# reconstruct\n"
    << "finalize_sigma = " << num(cfg.finalize_sigma) << '\n'
    << "iso_fraction = " << num(cfg.iso_fraction) << '\n';
  return o.str();
}

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::simulate: return "simulate";
    case Stage::propagate: return "propagate";
    case Stage::preprocess: return "preprocess";
    case Stage::invert: return "invert";
    case Stage::reconstruct: return "reconstruct";
  }
  return "?";
}

Stage parse_stage(std::string_view name) {
  for (Stage s : kAllStages) {
    if (name == stage_name(s)) return s;
  }
  throw ConfigError("unknown stage '" + std::string(name) + "'");
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string hash_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return fnv1a_hex(ss.str());
}

namespace {

void require_artifact(const fs::path& path, const std::string& message) {
  if (!fs::exists(path)) throw StageError(message + " (expected " + path.string() + ")");
}

std::string input_hash(const PipelineConfig& cfg, Stage stage, const std::vector<fs::path>& inputs) {
  std::string acc = std::string(stage_name(stage)) + '\n' + describe_config(cfg);
  for (const auto& p : inputs) acc += hash_file(p);
  return fnv1a_hex(acc);
}

Grid3D inversion_grid(const PipelineConfig& cfg) {
  return Grid3D::over_domain(cfg.domain.R, cfg.domain.b, cfg.domain.h, cfg.domain.h_z);
}

// The Gamma face of the inversion grid doubles as the near-field lattice.
Lattice2D near_lattice(const PipelineConfig& cfg) {
  const Grid3D g = inversion_grid(cfg);
  return Lattice2D::square(cfg.domain.R, g.nx());
}

void write_json(const nlohmann::ordered_json& j, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

ManifestEntry do_simulate(const PipelineConfig& cfg, const fs::path& dir) {
  const auto& dm = cfg.domain;
  const Grid3D sim = Grid3D::over_domain(dm.R, dm.b, cfg.sim_h, cfg.sim_h);
  const auto c = DielectricField::rasterize(sim, cfg.inclusions);
  const auto sources = source_quadrature(dm);
  const auto lattice = Lattice2D::square(dm.R, cfg.lattice_n);
  const auto meas = synthesize_measurements(c, sources.nodes, dm.k, dm.d, -dm.D, lattice, {cfg.noise, cfg.seed});
  save_measurements(meas, dir / artifact::measurements);
  // The background is vacuum, so the reference scan is the c == 1 simulation.
  const auto ref = synthesize_measurements(DielectricField::background(sim), sources.nodes, dm.k, dm.d, -dm.D,
                                           lattice, {cfg.noise, cfg.seed + 1});
  save_measurements(ref, dir / artifact::reference);
  return {"simulate", input_hash(cfg, Stage::simulate, {}), artifact::measurements, "", 0.0};
}

ManifestEntry do_propagate(const PipelineConfig& cfg, const fs::path& dir, const fs::path& reference) {
  const auto& dm = cfg.domain;
  const fs::path mpath = dir / artifact::measurements;
  require_artifact(mpath, "missing measurements; run simulate");
  std::vector<fs::path> inputs{mpath};
  auto meas = load_measurements(mpath, -dm.D);
  const fs::path rpath = reference.empty() ? dir / artifact::reference : reference;
  if (fs::exists(rpath)) {
    meas = subtract_reference(meas, load_measurements(rpath, -dm.D));
    inputs.push_back(rpath);
  } else if (!reference.empty()) {
    throw StageError("reference measurement " + reference.string() + " does not exist");
  }
  const auto near = propagate_near_field(meas, dm.k, dm.b);
  save_near_field(near, dir / artifact::near_field);

  const auto basis = build_basis(dm.a1, dm.a2, static_cast<std::size_t>(dm.N));
  const auto sources = source_quadrature(dm);
  save_cauchy(build_cauchy_data(near, basis, sources, dm.k, dm.b, dm.d), dir / artifact::cauchy_raw);
  return {"propagate", input_hash(cfg, Stage::propagate, inputs), artifact::near_field, "", 0.0};
}

ManifestEntry do_preprocess(const PipelineConfig& cfg, const fs::path& dir) {
  const auto& dm = cfg.domain;
  const fs::path npath = dir / artifact::near_field;
  require_artifact(npath, "missing near field; run propagate");
  const auto near = load_near_field(npath);
  if (!near.value.lattice.matches(near_lattice(cfg))) {
    throw StageError("near field lattice does not match the inversion grid; rerun propagate");
  }
  const auto pre = preprocess_near_field(near, {cfg.kappa1, cfg.sigma});
  save_near_field(pre, dir / artifact::near_field_pre);
  const auto basis = build_basis(dm.a1, dm.a2, static_cast<std::size_t>(dm.N));
  const auto sources = source_quadrature(dm);
  save_cauchy(build_cauchy_data(pre, basis, sources, dm.k, dm.b, dm.d), dir / artifact::cauchy);
  return {"preprocess", input_hash(cfg, Stage::preprocess, {npath}), artifact::cauchy, "", 0.0};
}

ManifestEntry do_invert(const PipelineConfig& cfg, const fs::path& dir) {
  const auto& dm = cfg.domain;
  const fs::path cpath = dir / artifact::cauchy;
  if (!fs::exists(cpath)) {
    if (fs::exists(dir / artifact::cauchy_raw)) {
      throw StageError("missing preprocessed CauchyData; run preprocess");
    }
    throw StageError("missing CauchyData; run propagate");
  }
  const auto cauchy = load_cauchy(cpath);
  const auto basis = build_basis(dm.a1, dm.a2, static_cast<std::size_t>(dm.N));
  const InversionProblem P(inversion_grid(cfg), basis, cauchy, CWF{dm.lambda, dm.theta, dm.b}, dm.k, dm.d,
                           cfg.inversion);
  const auto V0 = build_starting_point(P, cauchy);
  nlohmann::ordered_json report;
  try {
    const auto res = minimize(V0, P, cfg.descent);
    save_trace(res.trace, dir / artifact::trace);
    save_state(res.V, dir / artifact::minimizer);
    report["converged"] = true;
    report["stop_reason"] = res.reason == StopReason::step_underflow ? "step_underflow" : "small_change";
    report["iterations"] = res.trace.size();
    report["J0"] = res.J0;
    report["J"] = res.J;
  } catch (const NonConvergenceError& e) {
    save_trace(e.trace(), dir / artifact::trace);
    if (e.last_iterate()) save_state(*e.last_iterate(), dir / artifact::last_iterate);
    report["converged"] = false;
    report["stop_reason"] = "iteration_cap";
    report["iterations"] = e.trace().size();
    report["J"] = e.trace().empty() ? 0.0 : e.trace().back().J;
    write_json(report, dir / "invert.json");
    throw;
  }
  write_json(report, dir / "invert.json");
  return {"invert", input_hash(cfg, Stage::invert, {cpath}), artifact::minimizer, "", 0.0};
}

}  // namespace

ScalarField reconstruct_field(const PipelineConfig& cfg, const fs::path& cauchy_path, const fs::path& state_path) {
  const auto& dm = cfg.domain;
  const auto cauchy = load_cauchy(cauchy_path);
  const auto basis = build_basis(dm.a1, dm.a2, static_cast<std::size_t>(dm.N));
  const Grid3D grid = inversion_grid(cfg);
  const InversionProblem P(grid, basis, cauchy, CWF{dm.lambda, dm.theta, dm.b}, dm.k, dm.d, cfg.inversion);
  const auto V = load_state(state_path, grid);
  const auto c_raw = recover_dielectric(V, P, source_quadrature(dm));
  return finalize_field(c_raw, cfg.finalize_sigma);
}

namespace {

ManifestEntry do_reconstruct(const PipelineConfig& cfg, const fs::path& dir) {
  const auto& dm = cfg.domain;
  const fs::path vpath = dir / artifact::minimizer;
  const fs::path cpath = dir / artifact::cauchy;
  require_artifact(cpath, "missing CauchyData; run propagate");
  require_artifact(vpath, "missing minimizer; run invert");
  ScalarField c_comp = reconstruct_field(cfg, cpath, vpath);
  const auto inc = extract_inclusion(c_comp, cfg.iso_fraction);

  std::vector<double> mask(inc.mask.size(), 0.0);
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = inc.mask[i] ? 1.0 : 0.0;
  export_scalar_field(c_comp, dir / artifact::c_comp, "c_comp", cfg.iso_fraction, {{"mask", mask}});

  nlohmann::ordered_json s;
  s["max_c"] = inc.max_value;
  s["isovalue"] = cfg.iso_fraction * inc.max_value;
  s["mask_threshold"] = 1.0 + inc.threshold;
  s["inclusion_found"] = inc.found;
  s["voxels"] = inc.voxels;
  if (inc.found) {
    s["centroid"] = inc.centroid;
    s["bbox_min"] = inc.bbox_min;
    s["bbox_max"] = inc.bbox_max;
  }
  write_json(s, dir / artifact::summary);
  return {"reconstruct", input_hash(cfg, Stage::reconstruct, {cpath, vpath}), artifact::c_comp, "", 0.0};
}

}  // namespace

ManifestEntry run_stage(Stage stage, const PipelineConfig& cfg, const fs::path& out_dir, const fs::path& reference) {
  fs::create_directories(out_dir);
  const auto t0 = std::chrono::steady_clock::now();
  ManifestEntry e;
  switch (stage) {
    case Stage::simulate: e = do_simulate(cfg, out_dir); break;
    case Stage::propagate: e = do_propagate(cfg, out_dir, reference); break;
    case Stage::preprocess: e = do_preprocess(cfg, out_dir); break;
    case Stage::invert: e = do_invert(cfg, out_dir); break;
    case Stage::reconstruct: e = do_reconstruct(cfg, out_dir); break;
  }
  e.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  e.output_hash = hash_file(out_dir / e.output);
  return e;
}

std::vector<ManifestEntry> run_pipeline(const PipelineConfig& cfg, const std::vector<Stage>& stages,
                                        const fs::path& out_dir, const fs::path& reference) {
  fs::create_directories(out_dir);
  const fs::path mpath = out_dir / artifact::manifest;
  std::vector<ManifestEntry> manifest = fs::exists(mpath) ? load_manifest(mpath) : std::vector<ManifestEntry>{};
  std::vector<ManifestEntry> ran;
  for (Stage s : stages) {
    auto e = run_stage(s, cfg, out_dir, reference);
    std::erase_if(manifest, [&](const ManifestEntry& m) { return m.stage == e.stage; });
    manifest.push_back(e);
    // Keep pipeline order regardless of which stages were rerun.
    std::stable_sort(manifest.begin(), manifest.end(), [](const ManifestEntry& a, const ManifestEntry& b) {
      return parse_stage(a.stage) < parse_stage(b.stage);
    });
    save_manifest(manifest, mpath);
    ran.push_back(std::move(e));
  }
  return ran;
}

std::vector<ManifestEntry> load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what(), 0);
  }
  std::vector<ManifestEntry> out;
  for (const auto& item : j.at("stages")) {
    out.push_back({item.at("stage").get<std::string>(), item.at("input_hash").get<std::string>(),
                   item.at("output").get<std::string>(), item.at("output_hash").get<std::string>(),
                   item.at("wall_seconds").get<double>()});
  }
  return out;
}

void save_manifest(const std::vector<ManifestEntry>& entries, const fs::path& path) {
  nlohmann::ordered_json j;
  j["stages"] = nlohmann::ordered_json::array();
  for (const auto& e : entries) {
    nlohmann::ordered_json item;
    item["stage"] = e.stage;
    item["input_hash"] = e.input_hash;
    item["output"] = e.output;
    item["output_hash"] = e.output_hash;
    item["wall_seconds"] = e.wall_seconds;
    j["stages"].push_back(item);
  }
  write_json(j, path);
}

}  // namespace hconvex
