#ifndef ILA_SAMPLERS_HPP
#define ILA_SAMPLERS_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ila/common.hpp"
#include "ila/potentials.hpp"

namespace ila {

enum class Scheme { Ila, Ula, Em, Oba, Baoab, Ses, SorGibbs };

Scheme scheme_from_name(std::string_view name);
std::string_view scheme_name(Scheme s);
const std::vector<Scheme>& all_schemes();

// Normals consumed per step (SES draws 2d, everything else d).
int noise_per_step(Scheme s, int dim);

// Step-size/friction/mass triple with the derived quantities every scheme
// reads. tau = theta dt^2 and beta = 1 - eps dt exactly as stored.
struct SamplerConfig {
  double dt = 0.05;       // time step
  double friction = 1.5;  // eps
  double inv_mass = 1.0;  // theta

  double tau = 0.0;               // theta dt^2
  double beta = 0.0;              // 1 - eps dt
  double kick_noise = 0.0;        // sqrt(2 theta eps dt), velocity kick
  double heavy_ball_noise = 0.0;  // dt sqrt(2 theta eps dt) = sqrt(2 tau (1-beta))
  double ou_decay = 0.0;          // exp(-eps dt)
  double ou_noise = 0.0;          // sqrt(theta (1 - exp(-2 eps dt)))
};

SamplerConfig derive_params(double dt, double friction, double inv_mass);

struct BoundCheck {
  std::string name;
  double limit;  // admissible upper bound on dt
  bool pass;
};

struct ValidityReport {
  std::vector<BoundCheck> bounds;
  bool friction_ok = false;  // eps in [4/3, 7/4]
  double max_dt = 0.0;       // min over the bounds
  std::string binding;       // name of the binding bound
  bool pass = false;
};

// Checks the friction range and all four step-size bounds backing the
// discrete contraction theorem (the ILA validity conditions).
ValidityReport validate_config(const SamplerConfig& cfg, double kappa);

// Literature validity conditions for the comparison schemes at the given
// L*theta; Ila defers to validate_config, Ula checks step stability.
ValidityReport validate_scheme(Scheme s, const SamplerConfig& cfg, double kappa,
                               double l_theta = 1.0);

// Lowest admissible friction for a scheme at given L*theta and dt, following
// the constraint column of the comparison table (Ila returns 1.5).
double reference_friction(Scheme s, double l_theta, double dt);

struct ChainState {
  Vec position;
  Vec velocity;
  // Heavy-ball bookkeeping X^{k-1}; unset means X^{-1} = X^0.
  std::optional<Vec> prev_position;
};

ChainState make_state(Vec position);
ChainState make_state(Vec position, Vec velocity);

// One-step transitions. Each is a pure function of (state, config, noise);
// `noise` holds noise_per_step() standard normals.
ChainState ila_step(const ChainState& s, const SamplerConfig& cfg,
                    const Potential& u, const Vec& noise);
ChainState ila_heavy_ball_step(const ChainState& s, const SamplerConfig& cfg,
                               const Potential& u, const Vec& noise);
// Generic noisy heavy-ball update x' = x - gamma g + beta (x - x_prev)
// + sqrt(2 gamma (1-beta)) n, shared by the ILA adapter and the SOR map.
ChainState heavy_ball_step(const ChainState& s, double beta, double gamma,
                           const Potential& u, const Vec& noise);
ChainState ula_step(const ChainState& s, double tau, const Potential& u,
                    const Vec& noise);
ChainState em_kinetic_step(const ChainState& s, const SamplerConfig& cfg,
                           const Potential& u, const Vec& noise);
ChainState oba_step(const ChainState& s, const SamplerConfig& cfg,
                    const Potential& u, const Vec& noise);
ChainState baoab_step(const ChainState& s, const SamplerConfig& cfg,
                      const Potential& u, const Vec& noise);

struct SesMoments {
  Vec mean_position;
  Vec mean_velocity;
  // Sigma_t = [[xx, xv], [xv, vv]] (x) I_d
  double cov_xx = 0.0;
  double cov_xv = 0.0;
  double cov_vv = 0.0;
  // Covariance block replaced by its leading-order expansion (only reachable
  // for eps*dt below ~1e-8 where the exact scalars cancel catastrophically).
  bool taylor_fallback = false;
};

SesMoments ses_moments(const ChainState& s, const SamplerConfig& cfg,
                       const Potential& u);
// noise carries 2d normals: slots [0, d) pair with [d, 2d) per coordinate.
ChainState ses_step(const ChainState& s, const SamplerConfig& cfg,
                    const Potential& u, const Vec& noise);

struct SorConfig {
  double omega = 1.0;  // relaxation, in (0, 2)
  double tau = 0.0;
  double sigma1_sq = 0.0;  // = tau
  double sigma2_sq = 0.0;  // = 0
  Vec aux;                 // Y^k
};

SorConfig make_sor_config(double omega, double tau, Vec aux);
// SOR parameters whose X-trajectory reproduces ILA: beta = (1-omega)^2,
// gamma = omega^2 tau.
SorConfig sor_from_heavy_ball(double beta, double gamma, Vec aux);

std::pair<Vec, SorConfig> gibbs_sor_step(const Vec& x, const SorConfig& sor,
                                         const Potential& u, const Vec& noise);

// Fused multi-step BAOAB: reuses the gradient of the trailing half-kick so
// each iteration needs one evaluation ((BAOAB)^n = BAOA(BBAOA)^{n-1}B).
class BaoabRunner {
 public:
  BaoabRunner(const SamplerConfig& cfg, const Potential& u);
  void reset(const ChainState& s);
  void step(const Vec& noise);
  const ChainState& state() const { return state_; }

 private:
  SamplerConfig cfg_;
  const Potential* u_;
  ChainState state_;
  Vec grad_;  // gradient at state_.position
  Vec scratch_;
};

// In-place kernel for ensemble loops: no allocation, scratch is the gradient
// buffer. Ula uses the matched step size cfg.tau; SorGibbs runs with
// omega = 1 - sqrt(beta) (the ILA-equivalent relaxation) and reuses
// state.velocity as the auxiliary variable Y.
void step_inplace(Scheme s, ChainState& state, const SamplerConfig& cfg,
                  const Potential& u, const Vec& noise, Vec& scratch);

}  // namespace ila

#endif
