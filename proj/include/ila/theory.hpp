#ifndef ILA_THEORY_HPP
#define ILA_THEORY_HPP

#include <array>
#include <string>
#include <utility>

#include "ila/common.hpp"
#include "ila/samplers.hpp"

namespace ila {

// ||z||^2_{a,b} = z^T G z with G = [[1, b], [b, a]] (x) I_d; requires a > b^2.
struct WeightedNorm {
  double a = 1.0;
  double b = 0.0;

  static WeightedNorm standard(double eps);  // a = 1, b = 1/eps

  Eigen::Matrix2d G() const;
  double lambda_min() const;
  double lambda_max() const;
  double cond() const;  // kappa(G)
  double sq(double zx, double zv) const {
    return zx * zx + 2.0 * b * zx * zv + a * zv * zv;
  }
};

// -2 eps^3 + 4 eps^2 + 2 eps - 5; the continuous contraction proof needs
// this positive, which holds between its two larger roots.
double friction_polynomial(double eps);
// The two larger roots, by bisection to the given tolerance.
std::pair<double, double> friction_positive_range(double tol = 1e-6);

// The four admissible-step expressions of the discrete contraction theorem,
// in order: 1/8, 1/(1+eps), 2/eps - 1, rational polynomial bound.
std::array<double, 4> step_bounds(double eps);
double max_step(double eps);  // their minimum

struct ContractionReport {
  std::string kind;  // "continuous" or "discrete"
  double eps = 0.0, dt = 0.0, kappa = 1.0;
  int grid_size = 0;

  // Minima over the curvature grid of the positive-definiteness quantities:
  // the leading tile P_A(h) and the tile determinant P_A P_C - P_B^2.
  double min_tile_a = 0.0;
  double min_tile_det = 0.0;
  // Discrete only: minimum of the contraction proof's own lower bound on the
  // determinant (the estimates that produce the step-size restriction). This
  // is the quantity that turns negative exactly when dt exceeds max_step.
  double min_proof_det = 0.0;
  bool step_bound_ok = true;  // discrete only: dt within all four bounds

  // Discrete only: coupled difference map Delta z -> P Delta z. `measured`
  // samples random differences, `exact` is the worst factor over all
  // directions (largest G-generalized eigenvalue), both maxima over the grid.
  double measured_worst_factor = 0.0;
  double exact_worst_factor = 0.0;
  double target_factor = 0.0;  // 1 - dt / kappa

  bool pass = false;
};

// Appendix-A check of M - kappa^{-1} G > 0 over theta*h in [1/kappa, 1].
ContractionReport continuous_contraction_check(double eps, double kappa,
                                               int grid_size = 1024);
// Appendix-B check of (1 - kappa^{-1} dt) G - P^T G P > 0 plus the proof's
// step-size route and the measured coupling decay.
ContractionReport discrete_contraction_check(const SamplerConfig& cfg,
                                             double kappa,
                                             int grid_size = 1024);

// The coupled one-step difference map of ILA on curvature h (proof form,
// gradient evaluated at X + dt V).
Eigen::Matrix2d ila_difference_map(const SamplerConfig& cfg, double h);

// Solves Sigma = P Sigma P^T + Q. Direct 3-unknown linear solve.
Eigen::Matrix2d lyapunov_stationary(const Eigen::Matrix2d& P,
                                    const Eigen::Matrix2d& Q);
// Same by fixed-point iteration, for cross-checking.
Eigen::Matrix2d lyapunov_stationary_fixpoint(const Eigen::Matrix2d& P,
                                             const Eigen::Matrix2d& Q,
                                             double tol = 1e-14);

// One step of a scheme on U = h x^2 / 2 is linear: z' = M z + w with
// w ~ N(0, noise_cov). Per-coordinate model used as the exact-law oracle.
struct LinearStepModel {
  Eigen::Matrix2d map;
  Eigen::Matrix2d noise_cov;
};

LinearStepModel scheme_linear_model(Scheme s, const SamplerConfig& cfg,
                                    double h);
// Its stationary covariance from the Lyapunov equation.
Eigen::Matrix2d scheme_stationary_cov(Scheme s, const SamplerConfig& cfg,
                                      double h);

// W2 between the scheme's exact stationary law on U = h x^2 / 2 and the
// target N(0, diag(1/h, theta)), via the 2x2 Frechet formula.
double quadratic_bias_w2(Scheme s, const SamplerConfig& cfg, double h);

struct BiasBound {
  double rho_k = 0.0;               // one-step error coefficient
  double asymptotic_constant = 0.0; // lim W2(pi_dt, pi) / sqrt(dt) bound
  long k_of_dt = 0;                 // iterations to halve the warm-start gap
  double dt_of_delta = 0.0;         // delta^2 / (4 c^2)
  long K_of_delta = 0;              // iterations to reach delta
};

// rho_k from the discretization-error bound, the asymptotic bias constant,
// and the non-asymptotic corollary quantities. moment_bounds carries
// (E||V||^2, E||X - x*||^2); delta and w2_init parameterize the corollary.
BiasBound bias_constants(double eps, double theta, double dt, int d,
                         double kappa,
                         std::pair<double, double> moment_bounds,
                         double delta = 0.1, double w2_init = 1.0);

}  // namespace ila

#endif
