// Command-line front end: ensemble runs, validity checks, theory reports,
// and the momentum sweep.

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "ila/harness.hpp"
#include "ila/metrics.hpp"
#include "ila/theory.hpp"

namespace {

void print_validity(const ila::ValidityReport& v, double eps, double dt) {
  std::printf("eps = %g: friction range [4/3, 7/4] %s\n", eps,
              v.friction_ok ? "ok" : "VIOLATED");
  for (const auto& b : v.bounds)
    std::printf("  bound %-24s dt < %-12.6g %s\n", b.name.c_str(), b.limit,
                b.pass ? "ok" : "VIOLATED");
  std::printf("max admissible dt = %.6g (binding: %s); dt = %g -> %s\n",
              v.max_dt, v.binding.c_str(), dt, v.pass ? "PASS" : "FAIL");
}

void print_contraction(const ila::ContractionReport& r) {
  std::printf("%s contraction check (eps=%g, dt=%g, kappa=%g, grid=%d)\n",
              r.kind.c_str(), r.eps, r.dt, r.kappa, r.grid_size);
  std::printf("  min tile A            = % .6e\n", r.min_tile_a);
  std::printf("  min tile det          = % .6e\n", r.min_tile_det);
  if (r.kind == "discrete") {
    std::printf("  min proof-route det   = % .6e\n", r.min_proof_det);
    std::printf("  step bound            = %s\n",
                r.step_bound_ok ? "ok" : "VIOLATED");
    std::printf("  worst factor exact    = %.9f (measured %.9f, target %.9f)\n",
                r.exact_worst_factor, r.measured_worst_factor, r.target_factor);
  }
  std::printf("  => %s\n", r.pass ? "PASS" : "FAIL");
}

int cmd_run(const std::string& preset_name, const std::string& config_path,
            const std::string& sampler, long chains, long steps, long stride,
            std::uint64_t seed, bool have_seed, const std::string& out,
            bool force, int workers) {
  ila::ExperimentConfig cfg = config_path.empty()
                                  ? ila::preset(preset_name)
                                  : ila::load_config(config_path);
  if (!sampler.empty())
    cfg.schemes = {ila::scheme_from_name(sampler)};
  if (chains > 0) cfg.n_chains = chains;
  if (steps > 0) cfg.n_steps = steps;
  if (stride > 0) cfg.metric_stride = stride;
  if (have_seed) cfg.seed = seed;
  if (!out.empty()) cfg.out_path = out;
  if (force) cfg.force = true;
  if (workers > 0) cfg.workers = workers;
  if (cfg.out_path.empty()) cfg.out_path = cfg.name + ".csv";

  const ila::RunRecord record = ila::run_ensemble(cfg);
  ila::export_csv(record, cfg.out_path);
  for (const auto& [scheme, secs] : record.wall_clock)
    std::printf("%-10s %8.2fs%s\n", scheme.c_str(), secs,
                record.aborted_at.count(scheme) ? "  [aborted: NaN]" : "");
  std::printf("wrote %s\n", cfg.out_path.c_str());
  return 0;
}

int cmd_theory(double eps, double dt, double kappa, int grid,
               const std::string& out) {
  const auto cont = ila::continuous_contraction_check(eps, kappa, grid);
  print_contraction(cont);
  const auto cfg = ila::derive_params(dt, eps, 1.0);
  const auto disc = ila::discrete_contraction_check(cfg, kappa, grid);
  print_contraction(disc);

  const auto bias = ila::bias_constants(eps, 1.0, dt, 1, kappa, {0.0, 0.0});
  std::printf("bias machinery (eps=%g, theta=1, dt=%g, kappa=%g)\n", eps, dt,
              kappa);
  std::printf("  rho_k (zero moments)  = %.6g\n", bias.rho_k);
  std::printf("  asymptotic constant   = %.6g\n", bias.asymptotic_constant);
  std::printf("  k(dt)                 = %ld\n", bias.k_of_dt);
  std::printf("  dt(delta=0.1)         = %.6g\n", bias.dt_of_delta);
  std::printf("  K(delta=0.1)          = %ld\n", bias.K_of_delta);

  if (!out.empty()) {
    ila::RunRecord record;
    auto push = [&](const std::string& name, double value) {
      record.rows.push_back({"theory", 0, name, value});
    };
    push("continuous_min_tile_a", cont.min_tile_a);
    push("continuous_min_tile_det", cont.min_tile_det);
    push("discrete_min_tile_a", disc.min_tile_a);
    push("discrete_min_tile_det", disc.min_tile_det);
    push("discrete_min_proof_det", disc.min_proof_det);
    push("discrete_exact_worst_factor", disc.exact_worst_factor);
    push("discrete_target_factor", disc.target_factor);
    push("rho_k", bias.rho_k);
    push("asymptotic_constant", bias.asymptotic_constant);
    push("k_of_dt", static_cast<double>(bias.k_of_dt));
    push("dt_of_delta", bias.dt_of_delta);
    push("K_of_delta", static_cast<double>(bias.K_of_delta));
    ila::export_csv(record, out);
    std::printf("wrote %s\n", out.c_str());
  }
  return (cont.pass && disc.pass) ? 0 : 1;
}

int cmd_sweep_beta(const std::vector<double>& betas, long chains, long steps,
                   double dt, int lag, std::uint64_t seed,
                   const std::string& out) {
  // 2D standard Gaussian target; beta = 1 - eps dt fixes the friction.
  ila::ExperimentConfig cfg;
  cfg.name = "sweep-beta";
  cfg.potential = std::make_shared<ila::DiagGaussianPotential>(
      ila::Vec::Zero(2), ila::Vec::Ones(2));
  cfg.n_chains = chains;
  cfg.n_steps = steps;
  cfg.seed = seed;
  cfg.init.mean = ila::Vec::Zero(2);
  cfg.init.std = 1.0;

  ila::RunRecord record;
  for (const double beta : betas) {
    if (beta < 0.0 || beta >= 1.0) {
      std::fprintf(stderr, "beta must lie in [0, 1): %g\n", beta);
      return 1;
    }
    const double eps = (1.0 - beta) / dt;
    cfg.sampler_configs[ila::Scheme::Ila] = ila::derive_params(dt, eps, 1.0);
    const ila::Mat series = ila::run_coordinate_series(
        cfg, ila::Scheme::Ila, /*coord=*/0, /*burn_in=*/2000);

    double acf_sum = 0.0, ess_sum = 0.0;
    for (Eigen::Index c = 0; c < series.rows(); ++c) {
      const auto r = ila::acf_ess(series.row(c).transpose(), lag);
      acf_sum += r.acf[lag];
      ess_sum += r.ess;
    }
    const double n = static_cast<double>(series.rows());
    std::printf("beta=%.3f  mean lag-%d ACF = %.4f  mean ESS = %.1f\n", beta,
                lag, acf_sum / n, ess_sum / n);
    const long tag = static_cast<long>(std::lround(1000.0 * beta));
    record.rows.push_back({"ila", tag, "lag_acf", acf_sum / n});
    record.rows.push_back({"ila", tag, "ess", ess_sum / n});
  }
  if (!out.empty()) {
    ila::export_csv(record, out);
    std::printf("wrote %s\n", out.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inertial Langevin sampler toolbox"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run an ensemble experiment");
  std::string preset_name, config_path, sampler, out;
  long chains = 0, steps = 0, stride = 0;
  std::uint64_t seed = 0;
  bool force = false;
  int workers = 0;
  auto* preset_opt = run->add_option("--preset", preset_name, "Preset experiment");
  auto* config_opt = run->add_option("--config", config_path, "Config file");
  preset_opt->excludes(config_opt);
  run->add_option("--sampler", sampler, "Run a single scheme");
  run->add_option("--chains", chains, "Override chain count");
  run->add_option("--steps", steps, "Override step count");
  run->add_option("--metric-stride", stride, "Override metric stride");
  auto* seed_opt = run->add_option("--seed", seed, "Master seed");
  run->add_option("--out", out, "Output CSV path");
  run->add_flag("--force", force, "Skip validity checks");
  run->add_option("--workers", workers, "Worker threads (0 = hardware)");

  // validate
  auto* validate = app.add_subcommand("validate", "Check (eps, dt) validity");
  double v_eps = 1.5, v_dt = 0.05, v_kappa = 1.0;
  validate->add_option("--eps", v_eps, "Friction")->required();
  validate->add_option("--dt", v_dt, "Step size")->required();
  validate->add_option("--kappa", v_kappa, "Condition number");

  // theory
  auto* theory = app.add_subcommand("theory", "Contraction and bias reports");
  double t_eps = 1.5, t_dt = 0.05, t_kappa = 1.0;
  int t_grid = 1024;
  std::string t_out;
  theory->add_option("--eps", t_eps, "Friction");
  theory->add_option("--dt", t_dt, "Step size");
  theory->add_option("--kappa", t_kappa, "Condition number");
  theory->add_option("--grid", t_grid, "Curvature grid size");
  theory->add_option("--out", t_out, "CSV output path");

  // sweep-beta
  auto* sweep = app.add_subcommand("sweep-beta", "Momentum sweep diagnostics");
  std::vector<double> betas = {0.0, 0.5, 0.9};
  long s_chains = 100, s_steps = 20000;
  double s_dt = 0.05;
  int s_lag = 10;
  std::uint64_t s_seed = 42;
  std::string s_out;
  sweep->add_option("--betas", betas, "Momentum values")->delimiter(',');
  sweep->add_option("--chains", s_chains, "Chains");
  sweep->add_option("--steps", s_steps, "Recorded steps per chain");
  sweep->add_option("--dt", s_dt, "Step size");
  sweep->add_option("--lag", s_lag, "ACF lag to report");
  sweep->add_option("--seed", s_seed, "Master seed");
  sweep->add_option("--out", s_out, "CSV output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      if (preset_name.empty() && config_path.empty()) {
        std::fprintf(stderr, "run: need --preset or --config\n");
        return 1;
      }
      return cmd_run(preset_name, config_path, sampler, chains, steps, stride,
                     seed, seed_opt->count() > 0, out, force, workers);
    }
    if (validate->parsed()) {
      const auto cfg = ila::derive_params(v_dt, v_eps, 1.0);
      const auto v = ila::validate_config(cfg, v_kappa);
      print_validity(v, v_eps, v_dt);
      return v.pass ? 0 : 1;
    }
    if (theory->parsed()) return cmd_theory(t_eps, t_dt, t_kappa, t_grid, t_out);
    if (sweep->parsed())
      return cmd_sweep_beta(betas, s_chains, s_steps, s_dt, s_lag, s_seed, s_out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
