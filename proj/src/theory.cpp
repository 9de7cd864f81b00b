#include "ila/theory.hpp"

#include <cmath>
#include <limits>

#include "ila/metrics.hpp"
#include "ila/rng.hpp"

namespace ila {

WeightedNorm WeightedNorm::standard(double eps) {
  require(eps > 1.0, "weighted norm: a=1, b=1/eps needs eps > 1");
  return {1.0, 1.0 / eps};
}

Eigen::Matrix2d WeightedNorm::G() const {
  require(a > b * b, "weighted norm: requires a > b^2");
  Eigen::Matrix2d g;
  g << 1.0, b, b, a;
  return g;
}

double WeightedNorm::lambda_min() const {
  const double mid = 0.5 * (1.0 + a);
  const double rad = std::sqrt(0.25 * (1.0 - a) * (1.0 - a) + b * b);
  return mid - rad;
}

double WeightedNorm::lambda_max() const {
  const double mid = 0.5 * (1.0 + a);
  const double rad = std::sqrt(0.25 * (1.0 - a) * (1.0 - a) + b * b);
  return mid + rad;
}

double WeightedNorm::cond() const { return lambda_max() / lambda_min(); }

double friction_polynomial(double eps) {
  return -2.0 * eps * eps * eps + 4.0 * eps * eps + 2.0 * eps - 5.0;
}

std::pair<double, double> friction_positive_range(double tol) {
  auto bisect = [&](double lo, double hi) {
    // friction_polynomial changes sign across [lo, hi]
    const bool rising = friction_polynomial(lo) < 0.0;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      const bool pos = friction_polynomial(mid) > 0.0;
      (pos == rising ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  };
  return {bisect(1.0, 1.5), bisect(1.5, 2.0)};
}

std::array<double, 4> step_bounds(double eps) {
  require(eps > 1.0 && eps < 2.0, "step_bounds: eps must lie in (1, 2)");
  const double num = eps * friction_polynomial(eps);  // -2e^4 + 4e^3 + 2e^2 - 5e
  const double den = -std::pow(eps, 5) + 2.0 * std::pow(eps, 4) +
                     3.0 * std::pow(eps, 3) - 3.0 * eps - 2.0;
  if (den <= 0.0)
    throw std::domain_error("step_bounds: rational bound has nonpositive denominator");
  return {1.0 / 8.0, 1.0 / (1.0 + eps), 2.0 / eps - 1.0, num / den};
}

double max_step(double eps) {
  const auto b = step_bounds(eps);
  return std::min(std::min(b[0], b[1]), std::min(b[2], b[3]));
}

// ---------------------------------------------------------------------------
// Contraction checks

namespace {

// Scalar tiles of M - kappa^{-1} G for the continuous generator.
struct Tiles {
  double a_tile, b_tile, c_tile;
};

Tiles continuous_tiles(double th, double eps, double inv_kappa) {
  const double a = 1.0, b = 1.0 / eps;
  Tiles t;
  t.a_tile = 2.0 * b * th - inv_kappa;
  t.b_tile = -1.0 + eps * b + a * th - inv_kappa * b;
  t.c_tile = 2.0 * (eps * a - b) - inv_kappa * a;
  return t;
}

// Scalar tiles of H = (1 - kappa^{-1} dt) G - P^T G P for the discrete kernel
// (th = theta * h).
Tiles discrete_tiles(double th, double eps, double dt, double inv_kappa) {
  const double a = 1.0, b = 1.0 / eps;
  Tiles t;
  t.a_tile = dt * (2.0 * b * th - inv_kappa) - dt * dt * a * th * th;
  t.b_tile = dt * (-b * inv_kappa - 1.0 + eps * b + a * th) +
             dt * dt * (2.0 * b * th - eps * a * th) -
             dt * dt * dt * a * th * th;
  t.c_tile = dt * (-a * inv_kappa - 2.0 * b + 2.0 * eps * a) +
             dt * dt * (-1.0 + 2.0 * eps * b - eps * eps * a + 2.0 * a * th) +
             2.0 * dt * dt * dt * (b * th - eps * a * th) -
             dt * dt * dt * dt * a * th * th;
  return t;
}

// The contraction proof's own lower bound on P_A P_C - P_B^2 (the estimate
// chain that yields the step-size restriction; uses dt <= 1/eps).
double proof_det_lower_bound(double th, double eps, double dt,
                             double inv_kappa) {
  const double e2 = eps * eps;
  const double quad = 4.0 * th - 4.0 * th / e2 - 2.0 * inv_kappa * eps +
                      2.0 * inv_kappa / eps + inv_kappa * inv_kappa -
                      th * th - inv_kappa * inv_kappa / e2;
  const double cubic =
      -th * th * (2.0 * eps - inv_kappa - 2.0 / eps) +
      (2.0 * th / eps - inv_kappa) * (1.0 - e2 + th / e2) -
      2.0 * (-inv_kappa / eps + th) * (-eps * th + 2.0 * th / eps);
  return dt * dt * quad + dt * dt * dt * cubic;
}

// The kappa-uniform endpoint estimate whose positivity is exactly the
// rational step bound.
double proof_endpoint_bound(double eps, double dt, double inv_kappa) {
  const double quad = inv_kappa / (eps * eps) * friction_polynomial(eps);
  const double cubic = inv_kappa / (eps * eps * eps) *
                       (std::pow(eps, 5) - 2.0 * std::pow(eps, 4) -
                        3.0 * std::pow(eps, 3) + 3.0 * eps + 2.0);
  return dt * dt * quad + dt * dt * dt * cubic;
}

}  // namespace

Eigen::Matrix2d ila_difference_map(const SamplerConfig& cfg, double h) {
  Eigen::Matrix2d P;
  const double th = cfg.inv_mass * h;
  P << 1.0, cfg.dt, -cfg.dt * th, 1.0 - cfg.friction * cfg.dt - cfg.dt * cfg.dt * th;
  return P;
}

ContractionReport continuous_contraction_check(double eps, double kappa,
                                               int grid_size) {
  require(kappa >= 1.0, "contraction: kappa must be >= 1");
  require(grid_size >= 1, "contraction: empty grid");
  ContractionReport r;
  r.kind = "continuous";
  r.eps = eps;
  r.kappa = kappa;
  r.grid_size = grid_size;
  r.min_tile_a = std::numeric_limits<double>::infinity();
  r.min_tile_det = std::numeric_limits<double>::infinity();
  const double inv_kappa = 1.0 / kappa;
  for (int i = 0; i < grid_size; ++i) {
    const double th =
        grid_size == 1
            ? inv_kappa
            : inv_kappa + (1.0 - inv_kappa) * i / (grid_size - 1.0);
    const auto t = continuous_tiles(th, eps, inv_kappa);
    r.min_tile_a = std::min(r.min_tile_a, t.a_tile);
    r.min_tile_det =
        std::min(r.min_tile_det, t.a_tile * t.c_tile - t.b_tile * t.b_tile);
  }
  r.pass = r.min_tile_a > 0.0 && r.min_tile_det > 0.0 &&
           friction_polynomial(eps) > 0.0;
  return r;
}

ContractionReport discrete_contraction_check(const SamplerConfig& cfg,
                                             double kappa, int grid_size) {
  require(kappa >= 1.0, "contraction: kappa must be >= 1");
  require(grid_size >= 1, "contraction: empty grid");
  ContractionReport r;
  r.kind = "discrete";
  r.eps = cfg.friction;
  r.dt = cfg.dt;
  r.kappa = kappa;
  r.grid_size = grid_size;
  r.target_factor = 1.0 - cfg.dt / kappa;
  r.min_tile_a = std::numeric_limits<double>::infinity();
  r.min_tile_det = std::numeric_limits<double>::infinity();
  r.min_proof_det = std::numeric_limits<double>::infinity();
  r.measured_worst_factor = 0.0;
  r.exact_worst_factor = 0.0;

  const WeightedNorm norm = WeightedNorm::standard(cfg.friction);
  const Eigen::Matrix2d G = norm.G();
  const Eigen::Matrix2d L = G.llt().matrixL();  // G = L L^T
  const double inv_kappa = 1.0 / kappa;
  NoiseStream probes(/*seed=*/0x1a2b3c4d, /*stream=*/7);
  Vec z(2);

  for (int i = 0; i < grid_size; ++i) {
    const double th =
        grid_size == 1
            ? inv_kappa
            : inv_kappa + (1.0 - inv_kappa) * i / (grid_size - 1.0);
    const auto t = discrete_tiles(th, cfg.friction, cfg.dt, inv_kappa);
    r.min_tile_a = std::min(r.min_tile_a, t.a_tile);
    r.min_tile_det =
        std::min(r.min_tile_det, t.a_tile * t.c_tile - t.b_tile * t.b_tile);
    r.min_proof_det = std::min(
        {r.min_proof_det,
         proof_det_lower_bound(th, cfg.friction, cfg.dt, inv_kappa),
         proof_endpoint_bound(cfg.friction, cfg.dt, inv_kappa)});

    // Coupled difference map on curvature h = th / theta; noise cancels
    // under synchronous coupling so the decay is deterministic. The worst
    // one-step factor of ||.||^2_G is the top eigenvalue of
    // L^{-1} P^T G P L^{-T}.
    const Eigen::Matrix2d P = ila_difference_map(cfg, th / cfg.inv_mass);
    const Eigen::Matrix2d X =
        L.triangularView<Eigen::Lower>().solve(P.transpose() * G * P);
    const Eigen::Matrix2d W = L.triangularView<Eigen::Lower>()
                                  .solve(X.transpose())
                                  .transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(0.5 * (W + W.transpose()));
    r.exact_worst_factor = std::max(r.exact_worst_factor, es.eigenvalues()(1));

    // Direct iteration from a few random differences.
    for (int rep = 0; rep < 4; ++rep) {
      probes.fill_normals(static_cast<std::uint32_t>(i * 4 + rep), z);
      double prev = norm.sq(z[0], z[1]);
      for (int it = 0; it < 8; ++it) {
        z = P * z;
        const double cur = norm.sq(z[0], z[1]);
        if (prev > 0.0)
          r.measured_worst_factor = std::max(r.measured_worst_factor, cur / prev);
        prev = cur;
      }
    }
  }

  r.step_bound_ok = cfg.dt < max_step(cfg.friction);
  r.pass = r.min_tile_a > 0.0 && r.min_tile_det > 0.0 &&
           r.min_proof_det > 0.0 && r.step_bound_ok &&
           r.exact_worst_factor <= r.target_factor + 1e-12;
  return r;
}

// ---------------------------------------------------------------------------
// Discrete Lyapunov oracle

Eigen::Matrix2d lyapunov_stationary(const Eigen::Matrix2d& P,
                                    const Eigen::Matrix2d& Q) {
  const Eigen::Vector2cd eigs = P.eigenvalues();
  require(std::max(std::abs(eigs(0)), std::abs(eigs(1))) < 1.0,
          "lyapunov: spectral radius must be < 1");
  // Three unknowns (xx, xv, vv); (P S P^T)_{ij} is linear in them.
  auto row = [&](int i, int j) {
    return Eigen::Vector3d(P(i, 0) * P(j, 0),
                           P(i, 0) * P(j, 1) + P(i, 1) * P(j, 0),
                           P(i, 1) * P(j, 1));
  };
  Eigen::Matrix3d A;
  A.row(0) = (Eigen::Vector3d(1, 0, 0) - row(0, 0)).transpose();
  A.row(1) = (Eigen::Vector3d(0, 1, 0) - row(0, 1)).transpose();
  A.row(2) = (Eigen::Vector3d(0, 0, 1) - row(1, 1)).transpose();
  const Eigen::Vector3d rhs(Q(0, 0), 0.5 * (Q(0, 1) + Q(1, 0)), Q(1, 1));
  const Eigen::Vector3d s = A.fullPivLu().solve(rhs);
  Eigen::Matrix2d S;
  S << s(0), s(1), s(1), s(2);
  return S;
}

Eigen::Matrix2d lyapunov_stationary_fixpoint(const Eigen::Matrix2d& P,
                                             const Eigen::Matrix2d& Q,
                                             double tol) {
  const Eigen::Vector2cd eigs = P.eigenvalues();
  require(std::max(std::abs(eigs(0)), std::abs(eigs(1))) < 1.0,
          "lyapunov: spectral radius must be < 1");
  Eigen::Matrix2d S = Q;
  for (int it = 0; it < 100000; ++it) {
    const Eigen::Matrix2d next = P * S * P.transpose() + Q;
    const double delta = (next - S).cwiseAbs().maxCoeff();
    S = next;
    if (delta <= tol) break;
  }
  return S;
}

LinearStepModel scheme_linear_model(Scheme s, const SamplerConfig& cfg,
                                    double h) {
  const double dt = cfg.dt, eps = cfg.friction, th = cfg.inv_mass;
  const double thh = th * h;
  LinearStepModel m;
  switch (s) {
    case Scheme::Ila:
    case Scheme::SorGibbs: {
      // Position update uses the already-updated velocity, so the kick noise
      // enters both components.
      const double s2 = 2.0 * eps * th * dt;
      m.map << 1.0 - dt * dt * thh, dt * (1.0 - eps * dt),
               -dt * thh, 1.0 - eps * dt;
      m.noise_cov << s2 * dt * dt, s2 * dt, s2 * dt, s2;
      return m;
    }
    case Scheme::Ula: {
      // Velocity slot unused; treat it as an independent stationary OU target
      // placeholder so downstream 2x2 algebra stays well-posed.
      const double tau = cfg.tau;
      m.map << 1.0 - tau * h, 0.0, 0.0, 0.0;
      m.noise_cov << 2.0 * tau, 0.0, 0.0, th;
      return m;
    }
    case Scheme::Em: {
      const double s2 = 2.0 * eps * th * dt;
      m.map << 1.0, dt, -dt * thh, 1.0 - eps * dt;
      m.noise_cov << 0.0, 0.0, 0.0, s2;
      return m;
    }
    case Scheme::Oba: {
      const double eta = std::exp(-eps * dt);
      const double s2 = th * (1.0 - eta * eta);
      m.map << 1.0 - dt * dt * thh, dt * eta, -dt * thh, eta;
      m.noise_cov << s2 * dt * dt, s2 * dt, s2 * dt, s2;
      return m;
    }
    case Scheme::Baoab: {
      const double a = 0.5 * dt;
      const double eta = std::exp(-eps * dt);
      const double s2 = th * (1.0 - eta * eta);
      Eigen::Matrix2d B, A, O;
      B << 1.0, 0.0, -a * thh, 1.0;  // kick: v -= (dt/2) theta h x
      A << 1.0, a, 0.0, 1.0;
      O << 1.0, 0.0, 0.0, eta;
      m.map = B * A * O * A * B;
      // Noise injected at O, propagated through A then B.
      Eigen::Vector2d w(a, 1.0 - a * a * thh);
      m.noise_cov = s2 * w * w.transpose();
      return m;
    }
    case Scheme::Ses: {
      const double eta = std::exp(-eps * dt);
      const double span = (1.0 - eta) / eps;
      m.map << 1.0 - (thh / eps) * (dt - span), span, -(thh / eps) * (1.0 - eta),
               eta;
      const double cxx = th * (2.0 * eps * dt - 3.0 + 4.0 * eta - eta * eta) /
                         (eps * eps);
      const double cxv = th * (1.0 - eta) * (1.0 - eta) / eps;
      const double cvv = th * (1.0 - eta * eta);
      m.noise_cov << cxx, cxv, cxv, cvv;
      return m;
    }
  }
  throw std::invalid_argument("scheme_linear_model: unknown scheme");
}

Eigen::Matrix2d scheme_stationary_cov(Scheme s, const SamplerConfig& cfg,
                                      double h) {
  const auto m = scheme_linear_model(s, cfg, h);
  return lyapunov_stationary(m.map, m.noise_cov);
}

double quadratic_bias_w2(Scheme s, const SamplerConfig& cfg, double h) {
  const Eigen::Matrix2d S = scheme_stationary_cov(s, cfg, h);
  GaussianSummary law;
  law.mean = Vec::Zero(2);
  law.covariance = S;
  GaussianSummary target;
  target.mean = Vec::Zero(2);
  target.covariance = Eigen::Matrix2d::Zero();
  target.covariance(0, 0) = 1.0 / h;
  target.covariance(1, 1) = cfg.inv_mass;
  return frechet_w2(law, target);
}

BiasBound bias_constants(double eps, double theta, double dt, int d,
                         double kappa, std::pair<double, double> moment_bounds,
                         double delta, double w2_init) {
  if (eps <= 1.0)
    throw std::domain_error("bias_constants: kappa(G) undefined for eps <= 1");
  require(theta > 0.0 && dt > 0.0 && d > 0 && kappa >= 1.0,
          "bias_constants: nonnegative inputs required");
  require(moment_bounds.first >= 0.0 && moment_bounds.second >= 0.0,
          "bias_constants: moment bounds must be nonnegative");

  const auto [ev2, ex2] = moment_bounds;
  const double e2 = eps * eps;
  BiasBound b;
  b.rho_k = ((1.0 + e2 + e2 * e2) * ev2 + (2.0 + e2) * ex2 +
             d * eps * theta) *
                (2.0 * dt / 3.0) +
            eps * theta * (1.0 + e2);

  const double kappa_g = (eps + 1.0) / (eps - 1.0);
  // L = 1/theta under the theta = 1/L convention used by the bound.
  b.asymptotic_constant =
      std::sqrt(4.0 * theta * eps * (1.0 + e2) * kappa *
                std::log(4.0 * kappa_g)) *
      std::pow(2.0 * std::sqrt(kappa_g), 3.0 * kappa);

  b.k_of_dt = static_cast<long>(
      std::ceil(-std::log(4.0 * kappa_g) / std::log1p(-dt / kappa)));

  const double c = b.asymptotic_constant;
  b.dt_of_delta = delta * delta / (4.0 * c * c);
  // Iterations to push the warm-start term below delta/2 at step dt(delta).
  const double arg = delta / (2.0 * std::sqrt(kappa_g) * w2_init);
  if (arg < 1.0) {
    b.K_of_delta = static_cast<long>(std::ceil(
        2.0 * std::log(arg) / std::log1p(-b.dt_of_delta / kappa)));
  } else {
    b.K_of_delta = 0;  // already within the target
  }
  return b;
}

}  // namespace ila
