#include "ila/potentials.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace ila {

double Potential::condition_number() const {
  const double m = strong_convexity();
  require(m > 0.0, name() + ": condition number needs strong convexity > 0");
  return lipschitz() / m;
}

// ---------------------------------------------------------------------------
// Diagonal Gaussian

DiagGaussianPotential::DiagGaussianPotential(Vec mean, Vec variances)
    : mean_(std::move(mean)), variances_(std::move(variances)) {
  require(mean_.size() == variances_.size(),
          "gaussian: mean/variance dimension mismatch");
  require(mean_.size() > 0, "gaussian: empty dimension");
  require((variances_.array() > 0.0).all(), "gaussian: nonpositive variance");
  inv_variances_ = variances_.cwiseInverse();
  lipschitz_ = 1.0 / variances_.minCoeff();
  strong_convexity_ = 1.0 / variances_.maxCoeff();
}

double DiagGaussianPotential::value(const Vec& x) const {
  require(x.size() == mean_.size(), "gaussian: dimension mismatch");
  return 0.5 * ((x - mean_).array().square() * inv_variances_.array()).sum();
}

void DiagGaussianPotential::grad(const Vec& x, Vec& out) const {
  require(x.size() == mean_.size(), "gaussian: dimension mismatch");
  out = (x - mean_).cwiseProduct(inv_variances_);
}

std::pair<double, Vec> eval_gaussian(const Vec& x, const Vec& mean,
                                     const Vec& variances) {
  DiagGaussianPotential u(mean, variances);
  return {u.value(x), u.grad(x)};
}

// ---------------------------------------------------------------------------
// Smooth bivariate-Laplace family: U(x) = sum_j phi_delta(a_j^T x - b_j)

SmoothLaplacePotential::SmoothLaplacePotential(SmoothLaplaceParams params)
    : params_(std::move(params)) {
  require(params_.delta > 0.0, "smooth_laplace: delta must be positive");
  require(params_.atoms.rows() == params_.offsets.size(),
          "smooth_laplace: atoms/offsets mismatch");
  require(params_.atoms.rows() >= params_.atoms.cols(),
          "smooth_laplace: needs at least d atoms");
  formula_lipschitz_ = params_.atoms.rowwise().squaredNorm().sum() / params_.delta;
  lipschitz_ = params_.lipschitz_override.value_or(formula_lipschitz_);
  require(lipschitz_ > 0.0, "smooth_laplace: nonpositive lipschitz");
}

double SmoothLaplacePotential::value(const Vec& x) const {
  require(x.size() == params_.atoms.cols(), "smooth_laplace: dimension mismatch");
  const double d2 = params_.delta * params_.delta;
  const Vec r = params_.atoms * x - params_.offsets;
  double v = (r.array().square() + d2).sqrt().sum() -
             params_.delta * static_cast<double>(r.size());
  if (params_.convexity_penalty) {
    const double excess = x.norm() - params_.penalty_radius;
    if (excess > 0.0) v += 0.5 * params_.delta * excess * excess;
  }
  return v;
}

void SmoothLaplacePotential::grad(const Vec& x, Vec& out) const {
  require(x.size() == params_.atoms.cols(), "smooth_laplace: dimension mismatch");
  const double d2 = params_.delta * params_.delta;
  const Vec r = params_.atoms * x - params_.offsets;
  const Vec scale = (r.array() / (r.array().square() + d2).sqrt()).matrix();
  out.noalias() = params_.atoms.transpose() * scale;
  if (params_.convexity_penalty) {
    const double norm = x.norm();
    const double excess = norm - params_.penalty_radius;
    if (excess > 0.0) out += (params_.delta * excess / norm) * x;
  }
}

std::pair<double, Vec> eval_smooth_laplace(const Vec& x,
                                           const SmoothLaplaceParams& p) {
  SmoothLaplacePotential u(p);
  return {u.value(x), u.grad(x)};
}

// ---------------------------------------------------------------------------
// Gaussian mixture, U = -log sum_j alpha_j N(x | mu_j, sigma^2 I)

GmmPotential::GmmPotential(GmmParams params) : params_(std::move(params)) {
  require(params_.means.rows() == params_.weights.size(),
          "gmm: weights/means mismatch");
  require(params_.weights.size() > 0, "gmm: empty mixture");
  require((params_.weights.array() >= 0.0).all(), "gmm: negative weight");
  require(std::abs(params_.weights.sum() - 1.0) <= 1e-12,
          "gmm: weights must sum to 1");
  require(params_.isotropic_std > 0.0, "gmm: nonpositive std");
  const double sig2 = params_.isotropic_std * params_.isotropic_std;
  log_norm_ = -0.5 * params_.means.cols() * std::log(2.0 * M_PI * sig2);
  log_alpha_ = params_.weights.array().max(1e-300).log().matrix();
}

void GmmPotential::log_component_weights(const Vec& x, Vec& logw) const {
  const double sig2 = params_.isotropic_std * params_.isotropic_std;
  logw = (log_alpha_.array() + log_norm_ -
          (params_.means.rowwise() - x.transpose())
                  .rowwise()
                  .squaredNorm()
                  .array() /
              (2.0 * sig2))
             .matrix();
}

double GmmPotential::value(const Vec& x) const {
  require(x.size() == params_.means.cols(), "gmm: dimension mismatch");
  Vec logw;
  log_component_weights(x, logw);
  const double lmax = logw.maxCoeff();
  return -(lmax + std::log((logw.array() - lmax).exp().sum()));
}

void GmmPotential::grad(const Vec& x, Vec& out) const {
  require(x.size() == params_.means.cols(), "gmm: dimension mismatch");
  Vec logw;
  log_component_weights(x, logw);
  const double lmax = logw.maxCoeff();
  Vec resp = (logw.array() - lmax).exp().matrix();
  resp /= resp.sum();
  const double sig2 = params_.isotropic_std * params_.isotropic_std;
  out = (x - params_.means.transpose() * resp) / sig2;
}

std::pair<double, Vec> eval_gmm(const Vec& x, const GmmParams& p) {
  GmmPotential u(p);
  return {u.value(x), u.grad(x)};
}

// ---------------------------------------------------------------------------
// TV denoising. Images are row-major flat vectors; the padding operator P
// wraps one pixel on each side and D_h, D_v are the forward differences
// x[i, j+1] - x[i, j] and x[i+1, j] - x[i, j] on the padded grid.

namespace {

inline double sgn0(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

inline int wrap(int i, int n) { return i < 0 ? i + n : (i >= n ? i - n : i); }

}  // namespace

TvDenoisePotential::TvDenoisePotential(TvDenoiseParams params)
    : params_(std::move(params)),
      rows_(static_cast<int>(params_.observation.rows())),
      cols_(static_cast<int>(params_.observation.cols())) {
  require(rows_ >= 2 && cols_ >= 2, "tv_denoise: image must be at least 2x2");
  require(params_.noise_level > 0.0, "tv_denoise: nonpositive noise level");
  require(params_.reg_weight >= 0.0, "tv_denoise: negative regularization");
  observation_flat_ = Vec(rows_ * cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      observation_flat_[i * cols_ + j] = params_.observation(i, j);
}

double TvDenoisePotential::value(const Vec& x) const {
  require(x.size() == dim(), "tv_denoise: shape mismatch");
  const double inv_sig2 = 1.0 / (params_.noise_level * params_.noise_level);
  double tv = 0.0;
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) {
      const double c = x[i * cols_ + j];
      tv += std::abs(x[i * cols_ + wrap(j + 1, cols_)] - c);
      tv += std::abs(x[wrap(i + 1, rows_) * cols_ + j] - c);
    }
  }
  return 0.5 * inv_sig2 * (x - observation_flat_).squaredNorm() +
         params_.reg_weight * tv;
}

void TvDenoisePotential::grad(const Vec& x, Vec& out) const {
  require(x.size() == dim(), "tv_denoise: shape mismatch");
  const double inv_sig2 = 1.0 / (params_.noise_level * params_.noise_level);
  out = inv_sig2 * (x - observation_flat_);
  // (D P)^T sgn(D P x) for both directions; the adjoint of a circular
  // forward difference is the negative circular backward difference.
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) {
      const double c = x[i * cols_ + j];
      const double sh = sgn0(x[i * cols_ + wrap(j + 1, cols_)] - c);
      const double sv = sgn0(x[wrap(i + 1, rows_) * cols_ + j] - c);
      out[i * cols_ + j] -= params_.reg_weight * (sh + sv);
      out[i * cols_ + wrap(j + 1, cols_)] += params_.reg_weight * sh;
      out[wrap(i + 1, rows_) * cols_ + j] += params_.reg_weight * sv;
    }
  }
}

Vec tv_subgradient(const Vec& x, const TvDenoiseParams& p) {
  TvDenoisePotential u(p);
  return u.grad(x);
}

// ---------------------------------------------------------------------------
// Image files

Mat load_image(const std::string& path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
    std::ifstream in(path);
    require(in.good(), "cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::vector<double> row;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
      rows.push_back(std::move(row));
    }
    require(!rows.empty(), path + ": empty image");
    Mat img(rows.size(), rows[0].size());
    for (size_t i = 0; i < rows.size(); ++i) {
      require(rows[i].size() == rows[0].size(), path + ": ragged csv");
      for (size_t j = 0; j < rows[i].size(); ++j) img(i, j) = rows[i][j];
    }
    return img;
  }

  std::ifstream shape(path + ".shape");
  require(shape.good(), "cannot open " + path + ".shape");
  int d1 = 0, d2 = 0;
  shape >> d1 >> d2;
  require(d1 > 0 && d2 > 0, path + ".shape: bad dimensions");
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open " + path);
  std::vector<double> buf(static_cast<size_t>(d1) * d2);
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(buf.size() * sizeof(double)));
  require(in.gcount() ==
              static_cast<std::streamsize>(buf.size() * sizeof(double)),
          path + ": truncated image data");
  Mat img(d1, d2);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d2; ++j) img(i, j) = buf[static_cast<size_t>(i) * d2 + j];
  return img;
}

void save_image(const Mat& image, const std::string& path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
    std::ofstream out(path);
    require(out.good(), "cannot write " + path);
    char buf[64];
    for (Eigen::Index i = 0; i < image.rows(); ++i) {
      for (Eigen::Index j = 0; j < image.cols(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g", image(i, j));
        out << buf << (j + 1 < image.cols() ? "," : "");
      }
      out << "\n";
    }
    return;
  }

  std::ofstream out(path, std::ios::binary);
  require(out.good(), "cannot write " + path);
  std::vector<double> buf(static_cast<size_t>(image.rows()) * image.cols());
  for (Eigen::Index i = 0; i < image.rows(); ++i)
    for (Eigen::Index j = 0; j < image.cols(); ++j)
      buf[static_cast<size_t>(i) * image.cols() + j] = image(i, j);
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(double)));
  std::ofstream shape(path + ".shape");
  require(shape.good(), "cannot write " + path + ".shape");
  shape << image.rows() << " " << image.cols() << "\n";
}

}  // namespace ila
