// hconvex: staged reconstruction pipeline and verification harness.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hconvex/basis.hpp"
#include "hconvex/errors.hpp"
#include "hconvex/pipeline.hpp"
#include "hconvex/verify.hpp"

namespace {

using namespace hconvex;

struct Overrides {
  std::string config;
  std::string out_dir = "out";
  std::string reference;
  std::optional<std::uint64_t> seed;
  std::optional<double> kappa1;
  std::optional<double> lambda;
  std::optional<int> nsrc;
  std::optional<int> nbasis;
  std::optional<double> sigma;

  PipelineConfig resolve() const {
    PipelineConfig cfg = config.empty() ? PipelineConfig{} : load_config(config);
    if (seed) cfg.seed = *seed;
    if (kappa1) cfg.kappa1 = *kappa1;
    if (lambda) cfg.domain.lambda = *lambda;
    if (nsrc) cfg.domain.n_src = *nsrc;
    if (nbasis) cfg.domain.N = *nbasis;
    if (sigma) cfg.sigma = *sigma;
    cfg.validate();
    return cfg;
  }
};

void add_common(CLI::App* app, Overrides& o, bool with_out_dir = true) {
  app->add_option("--config", o.config, "config file (key = value lines)");
  if (with_out_dir) app->add_option("--out-dir", o.out_dir, "artifact directory")->capture_default_str();
  app->add_option("--seed", o.seed, "noise and ensemble seed");
  app->add_option("--kappa1", o.kappa1, "truncation level of the near field");
  app->add_option("--lambda", o.lambda, "Carleman weight parameter");
  app->add_option("--nsrc", o.nsrc, "number of source positions");
  app->add_option("--nbasis", o.nbasis, "number of basis functions N");
  app->add_option("--sigma", o.sigma, "Gaussian smoothing width in samples");
}

void print_entry(const ManifestEntry& e) {
  std::printf("%-12s %s -> %s (%s) %.2fs\n", e.stage.c_str(), e.input_hash.c_str(), e.output.c_str(),
              e.output_hash.c_str(), e.wall_seconds);
}

int verify_basis(const PipelineConfig& cfg, bool explicit_n) {
  std::vector<std::size_t> sizes = explicit_n ? std::vector<std::size_t>{static_cast<std::size_t>(cfg.domain.N)}
                                              : std::vector<std::size_t>{2, 4, 8};
  bool ok = true;
  for (std::size_t N : sizes) {
    const auto r = inspect_basis(build_basis(cfg.domain.a1, cfg.domain.a2, N));
    const bool pass = r.orthonormality_error <= 1e-8 && r.s_triangular_error <= 1e-8 && std::abs(r.det_S - 1.0) <= 1e-6;
    std::printf("%s%s\n", format_basis_report(r, N).c_str(), pass ? "  PASS" : "  FAIL");
    ok = ok && pass;
  }
  return ok ? 0 : 1;
}

int verify_carleman(const PipelineConfig& cfg) {
  const auto& dm = cfg.domain;
  const auto one = carleman_1d_ensemble({1, 2, 4, 8}, 100, cfg.seed, dm.b, dm.theta);
  std::printf("1D Carleman ratio, 100 profiles\n");
  for (std::size_t i = 0; i < one.lambdas.size(); ++i) {
    std::printf("  lambda %-4g min ratio %.6g\n", one.lambdas[i], one.min_ratio[i]);
  }
  std::printf("  decay %.4g  %s\n", one.decay, one.pass ? "PASS" : "FAIL");

  const Grid3D grid(9, 9, dm.b, dm.b);
  const auto pfd = carleman_pfd_ensemble(grid, {2, 4, 8}, 20, cfg.seed, dm.theta);
  bool pfd_ok = true;
  std::printf("partial finite difference estimate, eps 1e-3\n");
  for (std::size_t i = 0; i < pfd.lambdas.size(); ++i) {
    std::printf("  lambda %-4g flag rate %.3f\n", pfd.lambdas[i], pfd.flag_rate[i]);
    pfd_ok = pfd_ok && pfd.flag_rate[i] == 1.0;
  }
  std::printf("  %s\n", pfd_ok ? "PASS" : "FAIL");
  return one.pass && pfd_ok ? 0 : 1;
}

int verify_convexity(const PipelineConfig& cfg, std::size_t trials) {
  const std::vector<double> lambdas{1, 2, 5, 10};
  double prev = 2.0;
  bool monotone = true;
  double last = 1.0;
  std::printf("Bregman gap violations, N=2, 7x7x7 grid, %zu trials\n", trials);
  for (double lambda : lambdas) {
    const HarnessProblem hp(2, lambda, cfg.seed, cfg.domain);
    const auto r = convexity_trial(hp.problem(), trials, cfg.seed);
    std::printf("  lambda %-4g violations %zu/%zu (%.4f) min relative gap %.3g\n", lambda, r.violations, r.trials,
                r.fraction, r.min_relative_gap);
    monotone = monotone && r.fraction <= prev;
    prev = r.fraction;
    last = r.fraction;
  }
  const bool pass = monotone && last <= 0.01;
  std::printf("  non-increasing %s, fraction at lambda 10 %.4f  %s\n", monotone ? "yes" : "no", last,
              pass ? "PASS" : "FAIL");
  return pass ? 0 : 1;
}

int verify_gradient(const PipelineConfig& cfg) {
  const HarnessProblem hp(2, cfg.domain.lambda, cfg.seed, cfg.domain);
  const auto r = gradient_check(hp.problem(), 30, cfg.seed);
  std::printf("gradient vs central differences, N=2, 7x7x7 grid: %zu pairs, max relative error %.3g  %s\n", r.pairs,
              r.max_rel_error, r.pass ? "PASS" : "FAIL");
  return r.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Globally convergent reconstruction of buried dielectric targets from backscatter data"};
  app.require_subcommand(1);
  Overrides o;

  auto* describe = app.add_subcommand("describe-config", "print every resolved parameter");
  add_common(describe, o, false);

  std::vector<std::pair<Stage, CLI::App*>> stage_cmds;
  for (Stage s : kAllStages) {
    auto* cmd = app.add_subcommand(stage_name(s), std::string("run the ") + stage_name(s) + " stage");
    add_common(cmd, o);
    if (s == Stage::propagate) cmd->add_option("--reference", o.reference, "reference scan to subtract");
    stage_cmds.emplace_back(s, cmd);
  }

  auto* run = app.add_subcommand("run", "run stages in order (default: all)");
  add_common(run, o);
  run->add_option("--reference", o.reference, "reference scan to subtract");
  std::vector<std::string> stage_list;
  run->add_option("--stages", stage_list, "subset of stages");

  auto* verify = app.add_subcommand("verify", "empirical checks");
  add_common(verify, o, false);
  std::string what;
  std::size_t trials = 200;
  verify->add_option("check", what, "basis | carleman | convexity | gradient")
      ->required()
      ->check(CLI::IsMember({"basis", "carleman", "convexity", "gradient"}));
  verify->add_option("--trials", trials, "convexity trials (>= 50)")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    const PipelineConfig cfg = o.resolve();
    if (describe->parsed()) {
      std::cout << describe_config(cfg);
      return 0;
    }
    if (verify->parsed()) {
      if (what == "basis") return verify_basis(cfg, o.nbasis.has_value());
      if (what == "carleman") return verify_carleman(cfg);
      if (what == "convexity") return verify_convexity(cfg, trials);
      return verify_gradient(cfg);
    }
    std::vector<Stage> stages;
    if (run->parsed()) {
      for (const auto& s : stage_list) stages.push_back(parse_stage(s));
      if (stages.empty()) stages.assign(std::begin(kAllStages), std::end(kAllStages));
    }
    for (const auto& [s, cmd] : stage_cmds) {
      if (cmd->parsed()) stages.push_back(s);
    }
    for (const auto& e : run_pipeline(cfg, stages, o.out_dir, o.reference)) print_entry(e);
    return 0;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  } catch (const NonConvergenceError& e) {
    std::fprintf(stderr, "invert: %s (trace written)\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
