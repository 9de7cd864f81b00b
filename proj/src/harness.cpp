#include "ila/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>

#include "ila/rng.hpp"
#include "ila/theory.hpp"

namespace ila {

namespace {

Vec initial_position(const ExperimentConfig& cfg, const NoiseStream& stream,
                     int dim) {
  Vec x = cfg.init.mean;
  require(x.size() == dim, "init: mean dimension mismatch");
  if (cfg.init.std > 0.0) {
    Vec n(dim);
    stream.fill_normals(NoiseStream::kInitStep, n);
    x += cfg.init.std * n;
  }
  return x;
}

Vec initial_velocity(const ExperimentConfig& cfg, const SamplerConfig& sc,
                     const NoiseStream& stream, int dim) {
  if (!cfg.gaussian_velocity_init) return Vec::Zero(dim);
  Vec n(dim);
  for (int i = 0; i < dim; ++i)
    n[i] = stream.normal(NoiseStream::kInitStep,
                         static_cast<std::uint32_t>(dim + i));
  return std::sqrt(sc.inv_mass) * n;
}

struct Ensemble {
  std::vector<ChainState> chains;
  bool has_nan = false;
};

// Advances every chain from step `from` to `to` (chain-parallel, noise
// addressed by (seed, chain, step) so scheduling cannot change results).
void advance(Ensemble& e, Scheme scheme, const ExperimentConfig& cfg,
             const SamplerConfig& sc, const Potential& u, long from, long to) {
  const int d = u.dim();
  const int n_noise = noise_per_step(scheme, d);
  parallel_for(
      static_cast<std::int64_t>(e.chains.size()),
      [&](std::int64_t lo, std::int64_t hi) {
        Vec noise(n_noise), scratch(d);
        for (std::int64_t c = lo; c < hi; ++c) {
          NoiseStream stream(cfg.seed, static_cast<std::uint64_t>(c));
          ChainState& state = e.chains[c];
          for (long k = from; k < to; ++k) {
            stream.fill_normals(static_cast<std::uint32_t>(k), noise);
            step_inplace(scheme, state, sc, u, noise, scratch);
          }
        }
      },
      cfg.workers);
}

Mat positions_matrix(const Ensemble& e) {
  const Eigen::Index n = static_cast<Eigen::Index>(e.chains.size());
  const Eigen::Index d = e.chains.empty() ? 0 : e.chains[0].position.size();
  Mat m(n, d);
  for (Eigen::Index c = 0; c < n; ++c)
    m.row(c) = e.chains[c].position.transpose();
  return m;
}

bool ensemble_finite(const Ensemble& e) {
  for (const auto& s : e.chains)
    if (!s.position.allFinite() || !s.velocity.allFinite()) return false;
  return true;
}

void emit_metrics(std::vector<MetricRow>& rows, const std::string& scheme,
                  long iteration, const ExperimentConfig& cfg,
                  const Ensemble& e, const Potential& u) {
  const Mat pos = positions_matrix(e);
  bool want_mean = false, want_std = false;
  for (const auto& metric : cfg.metrics) {
    if (metric == "potential_mean") {
      want_mean = true;
    } else if (metric == "potential_std") {
      want_std = true;
    } else if (metric == "frechet_w2") {
      require(cfg.target.has_value(), "frechet_w2 metric needs a target");
      const GaussianSummary fit = cfg.target->diagonal
                                      ? GaussianSummary::fit_diag(pos)
                                      : GaussianSummary::fit(pos);
      rows.push_back(
          {scheme, iteration, "frechet_w2", frechet_w2(fit, *cfg.target)});
    } else if (metric == "second_moment") {
      Vec center = Vec::Zero(u.dim());
      if (auto star = u.minimizer()) center = *star;
      double acc = 0.0;
      for (const auto& s : e.chains)
        acc += (s.position - center).squaredNorm() + s.velocity.squaredNorm();
      rows.push_back({scheme, iteration, "second_moment",
                      acc / static_cast<double>(e.chains.size())});
    } else {
      throw std::invalid_argument("unknown metric '" + metric + "'");
    }
  }
  if (want_mean || want_std) {
    const auto [mean, sd] = expected_potential(SampleBatch::uniform(pos), u);
    if (want_mean) rows.push_back({scheme, iteration, "potential_mean", mean});
    if (want_std) rows.push_back({scheme, iteration, "potential_std", sd});
  }
}

std::vector<long> metric_ticks(const ExperimentConfig& cfg) {
  std::vector<long> ticks = {0};
  for (long k = cfg.metric_stride; k < cfg.n_steps; k += cfg.metric_stride)
    ticks.push_back(k);
  ticks.push_back(cfg.n_steps);
  return ticks;
}

Ensemble init_ensemble(const ExperimentConfig& cfg, const SamplerConfig& sc) {
  const int d = cfg.potential->dim();
  Ensemble e;
  e.chains.resize(cfg.n_chains);
  parallel_for(
      cfg.n_chains,
      [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t c = lo; c < hi; ++c) {
          NoiseStream stream(cfg.seed, static_cast<std::uint64_t>(c));
          ChainState s;
          s.position = initial_position(cfg, stream, d);
          s.velocity = initial_velocity(cfg, sc, stream, d);
          e.chains[c] = std::move(s);
        }
      },
      cfg.workers);
  return e;
}

}  // namespace

RunRecord run_ensemble(const ExperimentConfig& cfg) {
  require(cfg.potential != nullptr, "run_ensemble: no potential");
  require(cfg.n_chains >= 1 && cfg.n_steps >= 1 && cfg.metric_stride >= 1,
          "run_ensemble: chains, steps, and stride must be >= 1");
  require(!cfg.schemes.empty(), "run_ensemble: no schemes selected");

  RunRecord record;
  const Potential& u = *cfg.potential;

  for (const Scheme scheme : cfg.schemes) {
    const auto it = cfg.sampler_configs.find(scheme);
    require(it != cfg.sampler_configs.end(),
            std::string("run_ensemble: no sampler config for ") +
                std::string(scheme_name(scheme)));
    const SamplerConfig& sc = it->second;

    if (!cfg.force) {
      const double kappa =
          u.strong_convexity() > 0.0 ? u.condition_number() : 1.0;
      const double l_theta = sc.inv_mass * u.lipschitz();
      const ValidityReport v = validate_scheme(scheme, sc, kappa, l_theta);
      if (!v.pass)
        throw std::invalid_argument(
            std::string("run_ensemble: ") + std::string(scheme_name(scheme)) +
            " fails its validity check (binding bound " + v.binding +
            ", max dt " + std::to_string(v.max_dt) + "); use force to override");
    }

    const auto t0 = std::chrono::steady_clock::now();
    Ensemble e = init_ensemble(cfg, sc);
    const std::string name(scheme_name(scheme));

    long done = 0;
    bool aborted = false;
    for (const long tick : metric_ticks(cfg)) {
      if (tick > done) {
        advance(e, scheme, cfg, sc, u, done, tick);
        done = tick;
      }
      if (!ensemble_finite(e)) {
        record.rows.push_back({name, done, "nan_abort", 1.0});
        record.aborted_at[name] = done;
        aborted = true;
        break;
      }
      emit_metrics(record.rows, name, tick, cfg, e, u);
    }
    if (!aborted) record.final_samples[name] = positions_matrix(e);
    record.wall_clock[name] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
  }

  std::sort(record.rows.begin(), record.rows.end(),
            [](const MetricRow& a, const MetricRow& b) {
              return std::tie(a.scheme, a.iteration, a.metric) <
                     std::tie(b.scheme, b.iteration, b.metric);
            });
  return record;
}

Mat run_snapshots(const ExperimentConfig& cfg, Scheme scheme,
                  const std::vector<long>& snapshot_iters) {
  require(!snapshot_iters.empty(), "run_snapshots: no snapshots requested");
  const auto it = cfg.sampler_configs.find(scheme);
  require(it != cfg.sampler_configs.end(), "run_snapshots: no sampler config");
  const SamplerConfig& sc = it->second;
  const Potential& u = *cfg.potential;

  std::vector<long> iters = snapshot_iters;
  std::sort(iters.begin(), iters.end());

  Ensemble e = init_ensemble(cfg, sc);
  Mat pool(static_cast<Eigen::Index>(iters.size()) * cfg.n_chains, u.dim());
  long done = 0;
  Eigen::Index row = 0;
  for (const long k : iters) {
    advance(e, scheme, cfg, sc, u, done, k);
    done = k;
    require(ensemble_finite(e), "run_snapshots: chain diverged");
    pool.middleRows(row, cfg.n_chains) = positions_matrix(e);
    row += cfg.n_chains;
  }
  return pool;
}

Mat run_coordinate_series(const ExperimentConfig& cfg, Scheme scheme,
                          int coord, long burn_in) {
  const auto it = cfg.sampler_configs.find(scheme);
  require(it != cfg.sampler_configs.end(), "run_coordinate_series: no config");
  const SamplerConfig& sc = it->second;
  const Potential& u = *cfg.potential;
  require(coord >= 0 && coord < u.dim(), "run_coordinate_series: bad coordinate");

  Mat series(cfg.n_chains, cfg.n_steps);
  const int d = u.dim();
  const int n_noise = noise_per_step(scheme, d);
  parallel_for(
      cfg.n_chains,
      [&](std::int64_t lo, std::int64_t hi) {
        Vec noise(n_noise), scratch(d);
        for (std::int64_t c = lo; c < hi; ++c) {
          NoiseStream stream(cfg.seed, static_cast<std::uint64_t>(c));
          ChainState state;
          state.position = initial_position(cfg, stream, d);
          state.velocity = initial_velocity(cfg, sc, stream, d);
          for (long k = 0; k < burn_in + cfg.n_steps; ++k) {
            stream.fill_normals(static_cast<std::uint32_t>(k), noise);
            step_inplace(scheme, state, sc, u, noise, scratch);
            if (k >= burn_in) series(c, k - burn_in) = state.position[coord];
          }
        }
      },
      cfg.workers);
  return series;
}

// ---------------------------------------------------------------------------
// Presets

namespace {

// Table-derived sampler configs for every scheme at theta = 1/L.
std::map<Scheme, SamplerConfig> table_configs(double dt, double lipschitz) {
  const double theta = 1.0 / lipschitz;
  std::map<Scheme, SamplerConfig> m;
  m[Scheme::Ila] = derive_params(dt, 1.5, theta);
  m[Scheme::SorGibbs] = m[Scheme::Ila];
  m[Scheme::Em] = derive_params(dt, reference_friction(Scheme::Em, 1.0, dt), theta);
  m[Scheme::Oba] = derive_params(dt, reference_friction(Scheme::Oba, 1.0, dt), theta);
  m[Scheme::Baoab] =
      derive_params(dt, reference_friction(Scheme::Baoab, 1.0, dt), theta);
  m[Scheme::Ses] = derive_params(dt, reference_friction(Scheme::Ses, 1.0, dt), theta);
  // ULA runs on the matched step tau = theta dt^2, i.e. the momentum-free
  // member of the family (eps = 1/dt).
  m[Scheme::Ula] = derive_params(dt, 1.0 / dt, theta);
  return m;
}

std::shared_ptr<SmoothLaplacePotential> laplace2d_potential() {
  SmoothLaplaceParams p;
  p.atoms = Mat(2, 2);
  const double s = std::sqrt(2.0) / 2.0;
  p.atoms << 3.0 * s, -3.0 * s, 7.0 * s, 7.0 * s;
  p.offsets = Vec::Zero(2);
  p.delta = 0.05;
  // Working constant from the source experiment; the formula value
  // delta^{-1} sum ||a_j||^2 = 1160 is kept as the default elsewhere.
  p.lipschitz_override = 200.0;
  return std::make_shared<SmoothLaplacePotential>(p);
}

std::shared_ptr<GmmPotential> gmm2d_potential() {
  GmmParams p;
  p.weights = Vec::Constant(9, 1.0 / 9.0);
  p.means = Mat(9, 2);
  int r = 0;
  for (double x : {-3.0, 0.0, 3.0})
    for (double y : {-3.0, 0.0, 3.0}) p.means.row(r++) << x, y;
  p.isotropic_std = 0.5;
  p.assumed_lipschitz = 32.0;
  return std::make_shared<GmmPotential>(p);
}

std::shared_ptr<DiagGaussianPotential> gauss100_potential() {
  const int d = 100;
  Vec mean = Vec::Constant(d, 5.0);
  Vec variances = Vec::LinSpaced(d, 5e-3, 1.0);
  return std::make_shared<DiagGaussianPotential>(std::move(mean),
                                                 std::move(variances));
}

std::shared_ptr<TvDenoisePotential> tv16_potential(std::uint64_t seed) {
  const int n = 16;
  Mat clean = Mat::Zero(n, n);
  clean.block(4, 4, 8, 8).setConstant(1.0);
  clean.block(6, 6, 4, 4).setConstant(0.5);
  TvDenoiseParams p;
  p.noise_level = 0.1;
  p.reg_weight = 12.58714;
  p.assumed_lipschitz = 400.0;
  // y = x + sigma * nu on a dedicated noise stream.
  NoiseStream stream(seed, /*stream=*/0x0b5e7a7100ULL);
  p.observation = clean;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      p.observation(i, j) +=
          p.noise_level *
          stream.normal(0, static_cast<std::uint32_t>(i * n + j));
  return std::make_shared<TvDenoisePotential>(p);
}

const std::vector<std::string> kPresets = {"laplace2d", "gmm2d", "gauss100",
                                           "tv_denoise"};

}  // namespace

const std::vector<std::string>& preset_names() { return kPresets; }

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig cfg;
  cfg.name = name;
  cfg.seed = 42;
  cfg.metrics = {"potential_mean", "potential_std"};
  cfg.schemes = {Scheme::Ila, Scheme::Em,  Scheme::Oba,
                 Scheme::Baoab, Scheme::Ses, Scheme::Ula};
  const double dt = 0.05;

  if (name == "laplace2d") {
    auto u = laplace2d_potential();
    cfg.potential = u;
    cfg.sampler_configs = table_configs(dt, u->lipschitz());
    cfg.init.mean = Vec(2);
    cfg.init.mean << 3.0, 1.0;
    cfg.init.std = 0.1;
    cfg.n_chains = 10000;
    cfg.n_steps = 5000;
    cfg.metric_stride = 100;
    return cfg;
  }
  if (name == "gmm2d") {
    auto u = gmm2d_potential();
    cfg.potential = u;
    cfg.sampler_configs = table_configs(dt, u->lipschitz());
    cfg.init.mean = Vec(2);
    cfg.init.mean << 1.5, 1.5;
    cfg.init.std = 0.1;
    cfg.n_chains = 10000;
    cfg.n_steps = 20000;
    cfg.metric_stride = 200;
    return cfg;
  }
  if (name == "gauss100") {
    auto u = gauss100_potential();
    cfg.potential = u;
    cfg.sampler_configs = table_configs(dt, u->lipschitz());
    cfg.init.mean = Vec::Zero(100);
    cfg.init.std = 0.1;
    cfg.n_chains = 10000;
    cfg.n_steps = 5000;
    cfg.metric_stride = 50;
    cfg.metrics = {"potential_mean", "potential_std", "frechet_w2"};
    cfg.target = GaussianSummary::diag(u->mean(), u->variances());
    return cfg;
  }
  if (name == "tv_denoise") {
    auto u = tv16_potential(cfg.seed);
    cfg.potential = u;
    cfg.sampler_configs = table_configs(dt, u->lipschitz());
    cfg.init.mean = Vec(u->dim());
    for (int i = 0; i < u->rows(); ++i)
      for (int j = 0; j < u->cols(); ++j)
        cfg.init.mean[i * u->cols() + j] = u->params().observation(i, j);
    cfg.init.std = 0.0;
    cfg.n_chains = 200;
    cfg.n_steps = 500;
    cfg.metric_stride = 10;
    return cfg;
  }
  std::string known;
  for (const auto& p : kPresets) known += (known.empty() ? "" : ", ") + p;
  throw std::invalid_argument("unknown preset '" + name + "' (available: " +
                              known + ")");
}

// ---------------------------------------------------------------------------
// CSV and config files

namespace {

std::string format_value(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_stem(const std::string& path) {
  const auto dot = path.rfind(".csv");
  return dot == std::string::npos ? path : path.substr(0, dot);
}

}  // namespace

void export_csv(const RunRecord& record, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), "export_csv: cannot write " + path);
  out << "iteration,scheme,metric,value\n";
  for (const auto& row : record.rows)
    out << row.iteration << ',' << row.scheme << ',' << row.metric << ','
        << format_value(row.value) << '\n';
  require(out.good(), "export_csv: write failed for " + path);

  for (const auto& [scheme, samples] : record.final_samples) {
    const std::string base = csv_stem(path) + "_" + scheme + ".bin";
    std::ofstream bin(base, std::ios::binary);
    require(bin.good(), "export_csv: cannot write " + base);
    std::vector<double> buf(static_cast<size_t>(samples.rows()) *
                            samples.cols());
    for (Eigen::Index i = 0; i < samples.rows(); ++i)
      for (Eigen::Index j = 0; j < samples.cols(); ++j)
        buf[static_cast<size_t>(i) * samples.cols() + j] = samples(i, j);
    bin.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(double)));
    std::ofstream shape(base + ".shape");
    shape << samples.rows() << " " << samples.cols() << "\n";
  }
}

std::vector<MetricRow> parse_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "parse_csv: cannot open " + path);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)),
          "parse_csv: empty file " + path);
  require(line == "iteration,scheme,metric,value",
          "parse_csv: unexpected header in " + path);
  std::vector<MetricRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string iter, scheme, metric, value;
    std::getline(ss, iter, ',');
    std::getline(ss, scheme, ',');
    std::getline(ss, metric, ',');
    std::getline(ss, value);
    rows.push_back({scheme, std::stol(iter), metric, std::stod(value)});
  }
  return rows;
}

namespace {

std::map<std::string, std::string> parse_kv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "config: cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) kv[key] = value;
  }
  return kv;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

Vec parse_vec(const std::string& s) {
  const auto parts = split(s, ',');
  Vec v(parts.size());
  for (size_t i = 0; i < parts.size(); ++i) v[i] = std::stod(parts[i]);
  return v;
}

Mat parse_mat(const std::string& s) {
  const auto rows = split(s, ';');
  require(!rows.empty(), "config: empty matrix");
  std::vector<Vec> parsed;
  for (const auto& r : rows) parsed.push_back(parse_vec(r));
  Mat m(parsed.size(), parsed[0].size());
  for (size_t i = 0; i < parsed.size(); ++i) {
    require(parsed[i].size() == m.cols(), "config: ragged matrix");
    m.row(i) = parsed[i].transpose();
  }
  return m;
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
  const auto kv = parse_kv(path);
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };
  auto need = [&](const std::string& key) {
    const auto v = get(key);
    require(v.has_value(), "config: missing key '" + key + "'");
    return *v;
  };

  ExperimentConfig cfg;
  cfg.name = get("name").value_or("custom");

  const std::string kind = need("potential");
  if (kind == "gaussian") {
    cfg.potential = std::make_shared<DiagGaussianPotential>(
        parse_vec(need("mean")), parse_vec(need("variances")));
  } else if (kind == "smooth_laplace") {
    SmoothLaplaceParams p;
    p.atoms = parse_mat(need("atoms"));
    p.offsets = get("offsets") ? parse_vec(*get("offsets"))
                               : Vec(Vec::Zero(p.atoms.rows()));
    p.delta = std::stod(get("delta").value_or("0.05"));
    if (auto L = get("lipschitz")) p.lipschitz_override = std::stod(*L);
    cfg.potential = std::make_shared<SmoothLaplacePotential>(p);
  } else if (kind == "gmm") {
    GmmParams p;
    p.means = parse_mat(need("means"));
    p.weights = get("weights")
                    ? parse_vec(*get("weights"))
                    : Vec(Vec::Constant(p.means.rows(), 1.0 / p.means.rows()));
    p.isotropic_std = std::stod(get("sigma").value_or("0.5"));
    if (auto L = get("lipschitz")) p.assumed_lipschitz = std::stod(*L);
    cfg.potential = std::make_shared<GmmPotential>(p);
  } else if (kind == "tv_denoise") {
    TvDenoiseParams p;
    p.observation = load_image(need("image"));
    p.noise_level = std::stod(get("sigma").value_or("0.1"));
    p.reg_weight = std::stod(get("lambda").value_or("12.58714"));
    if (auto L = get("lipschitz")) p.assumed_lipschitz = std::stod(*L);
    cfg.potential = std::make_shared<TvDenoisePotential>(p);
  } else {
    throw std::invalid_argument("config: unknown potential '" + kind + "'");
  }

  const double dt = std::stod(get("dt").value_or("0.05"));
  const double L = cfg.potential->lipschitz();
  cfg.sampler_configs = table_configs(dt, L);
  if (auto eps = get("eps")) {
    // Explicit friction applies to the momentum schemes.
    const double e = std::stod(*eps);
    for (auto s : {Scheme::Ila, Scheme::Em, Scheme::Oba, Scheme::Baoab,
                   Scheme::Ses, Scheme::SorGibbs})
      cfg.sampler_configs[s] = derive_params(dt, e, 1.0 / L);
  }
  if (auto theta = get("theta")) {
    const double th = std::stod(*theta);
    for (auto& [s, sc] : cfg.sampler_configs)
      sc = derive_params(sc.dt, s == Scheme::Ula ? 1.0 / dt : sc.friction, th);
  }

  for (const auto& s : split(get("schemes").value_or("ila"), ','))
    cfg.schemes.push_back(scheme_from_name(s));

  cfg.n_chains = std::stol(get("chains").value_or("1000"));
  cfg.n_steps = std::stol(get("steps").value_or("1000"));
  cfg.metric_stride = std::stol(get("metric_stride").value_or("100"));
  cfg.seed = std::stoull(get("seed").value_or("42"));
  cfg.init.mean = get("init_mean") ? parse_vec(*get("init_mean"))
                                   : Vec(Vec::Zero(cfg.potential->dim()));
  if (cfg.init.mean.size() == 1 && cfg.potential->dim() > 1)
    cfg.init.mean = Vec::Constant(cfg.potential->dim(), cfg.init.mean[0]);
  cfg.init.std = std::stod(get("init_std").value_or("0"));
  cfg.gaussian_velocity_init =
      get("velocity_init").value_or("zero") == "gaussian";
  cfg.metrics = split(get("metrics").value_or("potential_mean,potential_std"), ',');
  if (auto tm = get("target_mean")) {
    require(kv.count("target_variances") > 0,
            "config: target_mean needs target_variances");
    cfg.target = GaussianSummary::diag(parse_vec(*tm),
                                       parse_vec(need("target_variances")));
  }
  cfg.out_path = get("out").value_or("");
  cfg.force = get("force").value_or("false") == "true";
  cfg.workers = static_cast<int>(std::stol(get("workers").value_or("0")));
  return cfg;
}

}  // namespace ila
