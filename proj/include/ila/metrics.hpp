#ifndef ILA_METRICS_HPP
#define ILA_METRICS_HPP

#include <cstdint>
#include <utility>

#include "ila/common.hpp"
#include "ila/potentials.hpp"

namespace ila {

// Gaussian fitted to an ensemble, for Frechet-W2 evaluation. Diagonal
// summaries keep the variances and take the cheap path.
struct GaussianSummary {
  Vec mean;
  Mat covariance;  // d x d, symmetric
  bool diagonal = false;

  static GaussianSummary diag(Vec mean, Vec variances);
  static GaussianSummary fit(const Mat& samples);       // N x d, full covariance
  static GaussianSummary fit_diag(const Mat& samples);  // N x d, per-coordinate
};

// W2 between Gaussians via the Frechet formula
// ||mu_a - mu_b||^2 + tr(Sa + Sb - 2 (Sb^1/2 Sa Sb^1/2)^1/2).
double frechet_w2(const GaussianSummary& a, const GaussianSummary& b);

struct SampleBatch {
  Mat samples;  // N x d
  Vec weights;  // N, nonnegative, sums to 1

  static SampleBatch uniform(Mat samples);
  static SampleBatch weighted(Mat samples, Vec weights);
  Eigen::Index size() const { return samples.rows(); }
  int dim() const { return static_cast<int>(samples.cols()); }
};

// Exact 1D W2 by quantile matching; handles unequal sizes and weights.
double w2_1d(const SampleBatch& a, const SampleBatch& b);
double w2_1d(const Vec& a, const Vec& b);

// Root-mean of squared 1D distances over n_proj uniformly random unit
// directions (deterministic in seed).
double sliced_w2(const SampleBatch& a, const SampleBatch& b, int n_proj,
                 std::uint64_t seed);
// Single fixed direction.
double sliced_w2_fixed(const SampleBatch& a, const SampleBatch& b,
                       const Vec& direction);
// Projection protocol on the top eigenvector of the reference covariance.
Vec top_eigenvector(const Mat& covariance);
double w2_vmax(const SampleBatch& samples, const SampleBatch& reference);

struct Histogram2D {
  Vec edges_x, edges_y;  // bin edges, sizes B1+1 and B2+1
  Mat mass;              // B1 x B2, normalized to 1

  // Points outside the range are clamped into the border bins.
  static Histogram2D build(const Mat& points, int bins_x, int bins_y,
                           double lo_x, double hi_x, double lo_y, double hi_y);
  double center_x(int i) const { return 0.5 * (edges_x[i] + edges_x[i + 1]); }
  double center_y(int j) const { return 0.5 * (edges_y[j] + edges_y[j + 1]); }
};

// Exact W2 between histograms on identical grids: squared-Euclidean optimal
// transport between bin-center atoms (network simplex), zero-mass bins
// pruned. Throws if the combined support exceeds kEmdMaxSupport atoms.
inline constexpr int kEmdMaxSupport = 4096;
double emd_w2(const Histogram2D& a, const Histogram2D& b);

// Exact optimal transport cost (sum of squared distances) between weighted
// atom sets; the solver behind emd_w2, exposed for direct use and testing.
double transport_cost_sq(const Mat& pos_a, const Vec& mass_a, const Mat& pos_b,
                         const Vec& mass_b);

struct AcfResult {
  Vec acf;     // rho_0 .. rho_max_lag
  double ess;  // N / (1 + 2 sum rho_l), initial-positive-sequence truncation
};

AcfResult acf_ess(const Vec& series, int max_lag);

// Sample mean and standard deviation of U over the batch.
std::pair<double, double> expected_potential(const SampleBatch& batch,
                                             const Potential& u);

}  // namespace ila

#endif
