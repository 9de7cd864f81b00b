#include "ila/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ila/rng.hpp"

namespace ila {

// ---------------------------------------------------------------------------
// Gaussian summaries and the Frechet distance

GaussianSummary GaussianSummary::diag(Vec mean, Vec variances) {
  require(mean.size() == variances.size(), "summary: mean/variance mismatch");
  require((variances.array() >= 0.0).all(), "summary: negative variance");
  GaussianSummary s;
  s.covariance = variances.asDiagonal();
  s.mean = std::move(mean);
  s.diagonal = true;
  return s;
}

GaussianSummary GaussianSummary::fit(const Mat& samples) {
  require(samples.rows() > 0, "summary: empty sample set");
  GaussianSummary s;
  s.mean = samples.colwise().mean().transpose();
  const Mat centered = samples.rowwise() - s.mean.transpose();
  s.covariance =
      (centered.transpose() * centered) / static_cast<double>(samples.rows());
  s.diagonal = false;
  return s;
}

GaussianSummary GaussianSummary::fit_diag(const Mat& samples) {
  require(samples.rows() > 0, "summary: empty sample set");
  Vec mean = samples.colwise().mean().transpose();
  const Mat centered = samples.rowwise() - mean.transpose();
  Vec var = centered.array().square().colwise().mean().transpose();
  return diag(std::move(mean), std::move(var));
}

namespace {

constexpr double kEigenFloor = -1e-10;

// Eigenvalues clamped at the PSD floor; anything more negative is an error.
Vec clamped_eigs(const Vec& eigs, const char* what) {
  Vec out = eigs;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (out[i] < kEigenFloor)
      throw std::invalid_argument(std::string(what) +
                                  ": covariance not PSD after clamping");
    out[i] = std::max(0.0, out[i]);
  }
  return out;
}

}  // namespace

double frechet_w2(const GaussianSummary& a, const GaussianSummary& b) {
  require(a.mean.size() == b.mean.size(), "frechet_w2: dimension mismatch");
  const double mean_sq = (a.mean - b.mean).squaredNorm();

  if (a.diagonal && b.diagonal) {
    const Vec la = clamped_eigs(a.covariance.diagonal(), "frechet_w2");
    const Vec lb = clamped_eigs(b.covariance.diagonal(), "frechet_w2");
    const double trace_term = (la.array().sqrt() - lb.array().sqrt()).square().sum();
    return std::sqrt(std::max(0.0, mean_sq + trace_term));
  }

  const Mat sa = 0.5 * (a.covariance + a.covariance.transpose());
  const Mat sb = 0.5 * (b.covariance + b.covariance.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es_b(sb);
  const Vec lb = clamped_eigs(es_b.eigenvalues(), "frechet_w2");
  const Mat sqrt_b = es_b.eigenvectors() *
                     lb.array().sqrt().matrix().asDiagonal() *
                     es_b.eigenvectors().transpose();
  Mat inner = sqrt_b * sa * sqrt_b;
  inner = 0.5 * (inner + inner.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Mat> es_m(inner);
  const Vec lm = clamped_eigs(es_m.eigenvalues(), "frechet_w2");
  const double tr_sqrt = lm.array().sqrt().sum();
  const double w2_sq = mean_sq + sa.trace() + sb.trace() - 2.0 * tr_sqrt;
  return std::sqrt(std::max(0.0, w2_sq));
}

// ---------------------------------------------------------------------------
// Sample batches and empirical W2

SampleBatch SampleBatch::uniform(Mat samples) {
  require(samples.rows() > 0, "batch: empty sample set");
  SampleBatch b;
  b.weights = Vec::Constant(samples.rows(), 1.0 / static_cast<double>(samples.rows()));
  b.samples = std::move(samples);
  return b;
}

SampleBatch SampleBatch::weighted(Mat samples, Vec weights) {
  require(samples.rows() == weights.size(), "batch: samples/weights mismatch");
  require(samples.rows() > 0, "batch: empty sample set");
  require((weights.array() >= 0.0).all(), "batch: negative weight");
  require(std::abs(weights.sum() - 1.0) <= 1e-12, "batch: weights must sum to 1");
  SampleBatch b;
  b.samples = std::move(samples);
  b.weights = std::move(weights);
  return b;
}

namespace {

struct WeightedPoints {
  std::vector<double> value;
  std::vector<double> cum;  // cumulative mass, last entry 1
};

WeightedPoints sorted_quantiles(const Vec& values, const Vec& weights) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return values[i] < values[j]; });
  WeightedPoints w;
  w.value.reserve(order.size());
  w.cum.reserve(order.size());
  double total = 0.0;
  for (const int i : order) {
    if (weights[i] <= 0.0) continue;
    total += weights[i];
    w.value.push_back(values[i]);
    w.cum.push_back(total);
  }
  require(!w.value.empty(), "w2_1d: batch has no mass");
  for (auto& c : w.cum) c /= total;
  w.cum.back() = 1.0;
  return w;
}

// Exact squared 1D W2 by integrating the squared quantile gap over merged
// mass breakpoints.
double w2_1d_sq(const WeightedPoints& a, const WeightedPoints& b) {
  size_t ia = 0, ib = 0;
  double cum = 0.0, acc = 0.0;
  while (ia < a.value.size() && ib < b.value.size()) {
    const double next = std::min(a.cum[ia], b.cum[ib]);
    const double gap = a.value[ia] - b.value[ib];
    acc += (next - cum) * gap * gap;
    cum = next;
    if (a.cum[ia] <= next) ++ia;
    if (b.cum[ib] <= next) ++ib;
  }
  return acc;
}

}  // namespace

double w2_1d(const SampleBatch& a, const SampleBatch& b) {
  require(a.dim() == 1 && b.dim() == 1, "w2_1d: batches must be 1D");
  const auto qa = sorted_quantiles(a.samples.col(0), a.weights);
  const auto qb = sorted_quantiles(b.samples.col(0), b.weights);
  return std::sqrt(std::max(0.0, w2_1d_sq(qa, qb)));
}

double w2_1d(const Vec& a, const Vec& b) {
  return w2_1d(SampleBatch::uniform(a), SampleBatch::uniform(b));
}

double sliced_w2_fixed(const SampleBatch& a, const SampleBatch& b,
                       const Vec& direction) {
  require(a.dim() == b.dim(), "sliced_w2: dimension mismatch");
  require(direction.size() == a.dim(), "sliced_w2: direction dimension mismatch");
  const double norm = direction.norm();
  require(norm > 0.0, "sliced_w2: zero direction");
  const Vec unit = direction / norm;
  SampleBatch pa = SampleBatch::weighted(a.samples * unit, a.weights);
  SampleBatch pb = SampleBatch::weighted(b.samples * unit, b.weights);
  return w2_1d(pa, pb);
}

double sliced_w2(const SampleBatch& a, const SampleBatch& b, int n_proj,
                 std::uint64_t seed) {
  require(n_proj >= 1, "sliced_w2: n_proj must be >= 1");
  require(a.dim() == b.dim(), "sliced_w2: dimension mismatch");
  const int d = a.dim();
  NoiseStream dirs(seed, /*stream=*/0);
  Vec v(d);
  double acc = 0.0;
  std::uint32_t step = 0;
  for (int p = 0; p < n_proj; ++p) {
    do {
      dirs.fill_normals(step++, v);
    } while (v.norm() < 1e-12);
    const double w = sliced_w2_fixed(a, b, v);
    acc += w * w;
  }
  return std::sqrt(acc / n_proj);
}

Vec top_eigenvector(const Mat& covariance) {
  Eigen::SelfAdjointEigenSolver<Mat> es(
      0.5 * (covariance + covariance.transpose()));
  return es.eigenvectors().col(covariance.cols() - 1);
}

double w2_vmax(const SampleBatch& samples, const SampleBatch& reference) {
  const GaussianSummary ref = GaussianSummary::fit(reference.samples);
  return sliced_w2_fixed(samples, reference, top_eigenvector(ref.covariance));
}

// ---------------------------------------------------------------------------
// Histograms

Histogram2D Histogram2D::build(const Mat& points, int bins_x, int bins_y,
                               double lo_x, double hi_x, double lo_y,
                               double hi_y) {
  require(points.cols() == 2, "histogram: points must be 2D");
  require(points.rows() > 0, "histogram: no points");
  require(bins_x >= 1 && bins_y >= 1, "histogram: bad bin counts");
  require(hi_x > lo_x && hi_y > lo_y, "histogram: bad range");

  Histogram2D h;
  h.edges_x = Vec::LinSpaced(bins_x + 1, lo_x, hi_x);
  h.edges_y = Vec::LinSpaced(bins_y + 1, lo_y, hi_y);
  h.mass = Mat::Zero(bins_x, bins_y);
  const double wx = (hi_x - lo_x) / bins_x;
  const double wy = (hi_y - lo_y) / bins_y;
  for (Eigen::Index r = 0; r < points.rows(); ++r) {
    int i = static_cast<int>(std::floor((points(r, 0) - lo_x) / wx));
    int j = static_cast<int>(std::floor((points(r, 1) - lo_y) / wy));
    i = std::clamp(i, 0, bins_x - 1);
    j = std::clamp(j, 0, bins_y - 1);
    h.mass(i, j) += 1.0;
  }
  h.mass /= static_cast<double>(points.rows());
  return h;
}

// ---------------------------------------------------------------------------
// Autocorrelation / ESS

AcfResult acf_ess(const Vec& series, int max_lag) {
  const Eigen::Index n = series.size();
  require(n >= 10, "acf_ess: series too short");
  require(max_lag >= 0, "acf_ess: negative max_lag");
  max_lag = std::min<int>(max_lag, static_cast<int>(n) - 1);

  const double mean = series.mean();
  const Vec c = series.array() - mean;
  const double var0 = c.squaredNorm();
  if (var0 <= 0.0)
    throw std::invalid_argument("acf_ess: series has zero variance");

  AcfResult r;
  r.acf = Vec(max_lag + 1);
  for (int l = 0; l <= max_lag; ++l)
    r.acf[l] = c.head(n - l).dot(c.tail(n - l)) / var0;

  // Initial-positive-sequence truncation: sum lags until the first
  // nonpositive autocorrelation.
  double s = 0.0;
  for (int l = 1; l <= max_lag && r.acf[l] > 0.0; ++l) s += r.acf[l];
  r.ess = static_cast<double>(n) / (1.0 + 2.0 * s);
  return r;
}

std::pair<double, double> expected_potential(const SampleBatch& batch,
                                             const Potential& u) {
  require(batch.dim() == u.dim(), "expected_potential: dimension mismatch");
  const Eigen::Index n = batch.size();
  Vec values(n);
  for (Eigen::Index i = 0; i < n; ++i)
    values[i] = u.value(batch.samples.row(i).transpose());
  const double mean = values.dot(batch.weights);
  const double var = (values.array() - mean).square().matrix().dot(batch.weights);
  return {mean, std::sqrt(std::max(0.0, var))};
}

}  // namespace ila
