#ifndef ILA_HARNESS_HPP
#define ILA_HARNESS_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ila/common.hpp"
#include "ila/metrics.hpp"
#include "ila/potentials.hpp"
#include "ila/samplers.hpp"

namespace ila {

struct InitSpec {
  Vec mean;
  double std = 0.0;  // 0 = point mass
};

struct ExperimentConfig {
  std::string name;
  std::shared_ptr<Potential> potential;
  std::vector<Scheme> schemes;
  std::map<Scheme, SamplerConfig> sampler_configs;

  long n_chains = 1;
  long n_steps = 1;
  long metric_stride = 1;
  std::uint64_t seed = 0;

  InitSpec init;
  bool gaussian_velocity_init = false;  // V^0 ~ N(0, theta I) instead of 0

  std::vector<std::string> metrics;  // potential_mean, potential_std,
                                     // frechet_w2, second_moment
  std::optional<GaussianSummary> target;  // reference for frechet_w2

  std::string out_path;
  bool force = false;  // run schemes that fail their validity check
  int workers = 0;     // 0 = hardware
};

struct MetricRow {
  std::string scheme;
  long iteration = 0;
  std::string metric;
  double value = 0.0;
};

struct RunRecord {
  std::vector<MetricRow> rows;                 // sorted (scheme, iter, metric)
  std::map<std::string, Mat> final_samples;    // scheme -> N x d positions
  std::map<std::string, double> wall_clock;    // seconds per scheme
  std::map<std::string, long> aborted_at;      // scheme -> iteration of NaN
};

// Runs every scheme from identical initial draws; deterministic in
// (seed, config) regardless of worker count.
RunRecord run_ensemble(const ExperimentConfig& cfg);

// Runs one scheme and returns ensemble position snapshots at the requested
// iterations (pooled row-wise), e.g. to build reference histograms.
Mat run_snapshots(const ExperimentConfig& cfg, Scheme scheme,
                  const std::vector<long>& snapshot_iters);

// Per-chain scalar series of coordinate `coord` for ACF diagnostics:
// returns n_chains x n_steps.
Mat run_coordinate_series(const ExperimentConfig& cfg, Scheme scheme,
                          int coord, long burn_in);

// Desk-scale presets: laplace2d, gmm2d, gauss100, tv_denoise.
ExperimentConfig preset(const std::string& name);
const std::vector<std::string>& preset_names();

// CSV rows "iteration,scheme,metric,value" at 17 significant digits, plus
// sidecar sample files <stem>_<scheme>.bin/.shape per final batch.
void export_csv(const RunRecord& record, const std::string& path);
std::vector<MetricRow> parse_csv(const std::string& path);

// Flat key-value config file ("key = value", arrays as comma lists).
ExperimentConfig load_config(const std::string& path);

}  // namespace ila

#endif
