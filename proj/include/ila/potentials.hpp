#ifndef ILA_POTENTIALS_HPP
#define ILA_POTENTIALS_HPP

#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "ila/common.hpp"

namespace ila {

// A potential U with whatever curvature information is known about it.
// strong_convexity() == 0 means "not (known to be) strongly convex"; theory
// checks that need kappa are disabled in that case. grad() returns the
// gradient, or a chosen subgradient for nonsmooth potentials.
class Potential {
 public:
  virtual ~Potential() = default;

  virtual int dim() const = 0;
  virtual double value(const Vec& x) const = 0;
  virtual void grad(const Vec& x, Vec& out) const = 0;
  virtual double lipschitz() const = 0;
  virtual double strong_convexity() const = 0;
  virtual std::optional<Vec> minimizer() const { return std::nullopt; }
  virtual bool smooth() const { return true; }
  virtual std::string name() const = 0;

  Vec grad(const Vec& x) const {
    Vec g(dim());
    grad(x, g);
    return g;
  }
  double condition_number() const;
};

// U(x) = 1/2 sum_i (x_i - mu_i)^2 / lambda_i, the Gaussian N(mu, diag(lambda)).
class DiagGaussianPotential final : public Potential {
 public:
  DiagGaussianPotential(Vec mean, Vec variances);

  int dim() const override { return static_cast<int>(mean_.size()); }
  double value(const Vec& x) const override;
  void grad(const Vec& x, Vec& out) const override;
  double lipschitz() const override { return lipschitz_; }
  double strong_convexity() const override { return strong_convexity_; }
  std::optional<Vec> minimizer() const override { return mean_; }
  std::string name() const override { return "gaussian"; }

  const Vec& mean() const { return mean_; }
  const Vec& variances() const { return variances_; }

 private:
  Vec mean_, variances_, inv_variances_;
  double lipschitz_, strong_convexity_;
};

struct SmoothLaplaceParams {
  Mat atoms;    // J x d, rows a_j
  Vec offsets;  // b_j
  double delta = 0.05;
  // L defaults to delta^{-1} sum_j ||a_j||^2; callers may override it (the
  // only use is scaling theta = 1/L downstream).
  std::optional<double> lipschitz_override;
  // Optional strong-convexity penalty (delta/2) dist(x, B_R(0))^2, off by
  // default.
  bool convexity_penalty = false;
  double penalty_radius = 10.0;
};

class SmoothLaplacePotential final : public Potential {
 public:
  explicit SmoothLaplacePotential(SmoothLaplaceParams params);

  int dim() const override { return static_cast<int>(params_.atoms.cols()); }
  double value(const Vec& x) const override;
  void grad(const Vec& x, Vec& out) const override;
  double lipschitz() const override { return lipschitz_; }
  double strong_convexity() const override { return 0.0; }
  std::string name() const override { return "smooth_laplace"; }

  const SmoothLaplaceParams& params() const { return params_; }
  double formula_lipschitz() const { return formula_lipschitz_; }

 private:
  SmoothLaplaceParams params_;
  double formula_lipschitz_, lipschitz_;
};

struct GmmParams {
  Vec weights;        // alpha_j >= 0, sum = 1
  Mat means;          // J x d, rows mu_j
  double isotropic_std = 0.5;
  // The mixture is not log-concave; this is an assumed working constant.
  double assumed_lipschitz = 32.0;
};

class GmmPotential final : public Potential {
 public:
  explicit GmmPotential(GmmParams params);

  int dim() const override { return static_cast<int>(params_.means.cols()); }
  double value(const Vec& x) const override;
  void grad(const Vec& x, Vec& out) const override;
  double lipschitz() const override { return params_.assumed_lipschitz; }
  double strong_convexity() const override { return 0.0; }
  std::string name() const override { return "gmm"; }

  const GmmParams& params() const { return params_; }

 private:
  // log alpha_j - d/2 log(2 pi sigma^2), reused by value() and grad().
  void log_component_weights(const Vec& x, Vec& logw) const;

  GmmParams params_;
  Vec log_alpha_;
  double log_norm_;
};

struct TvDenoiseParams {
  Mat observation;  // d1 x d2 image y
  double noise_level = 0.1;   // sigma
  double reg_weight = 12.58714;  // lambda
  double assumed_lipschitz = 400.0;
};

// ROF posterior potential U(x) = ||x - y||^2 / (2 sigma^2) + lambda TV(x)
// with anisotropic TV built from circular padding and forward differences.
// States are images flattened row-major to length d1*d2. grad() returns the
// subgradient g(x) with sgn(0) := 0.
class TvDenoisePotential final : public Potential {
 public:
  explicit TvDenoisePotential(TvDenoiseParams params);

  int dim() const override { return rows_ * cols_; }
  double value(const Vec& x) const override;
  void grad(const Vec& x, Vec& out) const override;
  double lipschitz() const override { return params_.assumed_lipschitz; }
  double strong_convexity() const override { return 0.0; }
  bool smooth() const override { return false; }
  std::string name() const override { return "tv_denoise"; }

  const TvDenoiseParams& params() const { return params_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

 private:
  TvDenoiseParams params_;
  Vec observation_flat_;
  int rows_, cols_;
};

// Operation-style entry points.
std::pair<double, Vec> eval_gaussian(const Vec& x, const Vec& mean,
                                     const Vec& variances);
std::pair<double, Vec> eval_smooth_laplace(const Vec& x,
                                           const SmoothLaplaceParams& p);
std::pair<double, Vec> eval_gmm(const Vec& x, const GmmParams& p);
Vec tv_subgradient(const Vec& x, const TvDenoiseParams& p);

// Image files: headerless float64 little-endian `.bin` with a sidecar
// `.shape` text line "d1 d2", or `.csv` for small images.
Mat load_image(const std::string& path);
void save_image(const Mat& image, const std::string& path);

}  // namespace ila

#endif
