#include "ila/samplers.hpp"

#include <cmath>
#include <limits>

#include "ila/theory.hpp"

namespace ila {

namespace {

const std::vector<Scheme> kAllSchemes = {
    Scheme::Ila, Scheme::Ula, Scheme::Em,  Scheme::Oba,
    Scheme::Baoab, Scheme::Ses, Scheme::SorGibbs};

void check_dims(const ChainState& s, const Potential& u, const Vec& noise,
                int needed) {
  require(s.position.size() == u.dim(), "step: state/potential dimension mismatch");
  require(s.velocity.size() == s.position.size(),
          "step: position/velocity dimension mismatch");
  require(noise.size() >= needed, "step: noise vector too short");
}

}  // namespace

Scheme scheme_from_name(std::string_view name) {
  for (Scheme s : kAllSchemes)
    if (name == scheme_name(s)) return s;
  throw std::invalid_argument("unknown scheme '" + std::string(name) +
                              "' (expected ila, ula, em, oba, baoab, ses, sor-gibbs)");
}

std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::Ila: return "ila";
    case Scheme::Ula: return "ula";
    case Scheme::Em: return "em";
    case Scheme::Oba: return "oba";
    case Scheme::Baoab: return "baoab";
    case Scheme::Ses: return "ses";
    case Scheme::SorGibbs: return "sor-gibbs";
  }
  return "?";
}

const std::vector<Scheme>& all_schemes() { return kAllSchemes; }

int noise_per_step(Scheme s, int dim) {
  return s == Scheme::Ses ? 2 * dim : dim;
}

SamplerConfig derive_params(double dt, double friction, double inv_mass) {
  require(dt > 0.0, "derive_params: dt must be positive");
  require(friction > 0.0, "derive_params: friction must be positive");
  require(inv_mass > 0.0, "derive_params: inv_mass must be positive");
  SamplerConfig c;
  c.dt = dt;
  c.friction = friction;
  c.inv_mass = inv_mass;
  c.tau = inv_mass * dt * dt;
  c.beta = 1.0 - friction * dt;
  c.kick_noise = std::sqrt(2.0 * inv_mass * friction * dt);
  c.heavy_ball_noise = dt * c.kick_noise;
  c.ou_decay = std::exp(-friction * dt);
  c.ou_noise = std::sqrt(inv_mass * (1.0 - std::exp(-2.0 * friction * dt)));
  return c;
}

ValidityReport validate_config(const SamplerConfig& cfg, double kappa) {
  require(kappa >= 1.0, "validate_config: kappa must be >= 1");
  ValidityReport r;
  const double eps = cfg.friction;
  r.friction_ok = eps >= 4.0 / 3.0 && eps <= 7.0 / 4.0;

  const auto bounds = step_bounds(eps);
  const char* names[4] = {"1/8", "1/(1+eps)", "2/eps-1", "polynomial"};
  r.max_dt = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    r.bounds.push_back({names[i], bounds[i], cfg.dt < bounds[i]});
    if (bounds[i] < r.max_dt) {
      r.max_dt = bounds[i];
      r.binding = names[i];
    }
  }
  bool all_bounds = true;
  for (const auto& b : r.bounds) all_bounds = all_bounds && b.pass;
  r.pass = r.friction_ok && all_bounds;
  return r;
}

double reference_friction(Scheme s, double l_theta, double dt) {
  const double root = std::sqrt(l_theta);
  switch (s) {
    case Scheme::Ila:
      return 1.5;
    case Scheme::Em:
      return 2.0 * root;
    case Scheme::Oba: {
      const double arg = 1.0 - std::sqrt(6.0 * l_theta) * dt;
      require(arg > 0.0, "oba friction constraint undefined: sqrt(6 L theta) dt >= 1");
      return -std::log(arg) / dt;
    }
    case Scheme::Baoab: {
      const double arg = 1.0 - 2.0 * root * dt;
      require(arg > 0.0, "baoab friction constraint undefined: 2 sqrt(L theta) dt >= 1");
      return -std::log(arg) / dt;
    }
    case Scheme::Ses:
      return 5.0 * root;
    default:
      throw std::invalid_argument("no reference friction for scheme");
  }
}

ValidityReport validate_scheme(Scheme s, const SamplerConfig& cfg, double kappa,
                               double l_theta) {
  if (s == Scheme::Ila || s == Scheme::SorGibbs) return validate_config(cfg, kappa);

  ValidityReport r;
  r.friction_ok = true;
  const double slack = 1e-9;
  auto push = [&](const std::string& name, double limit, bool pass) {
    r.bounds.push_back({name, limit, pass});
  };
  switch (s) {
    case Scheme::Ula: {
      // Stability of x' = (1 - tau h) x for h <= L: tau L < 2, i.e.
      // dt^2 L theta < 2 on the matched step tau = theta dt^2.
      const double limit = std::sqrt(2.0 / l_theta);
      push("ula-stability", limit, cfg.dt < limit);
      break;
    }
    case Scheme::Em: {
      r.friction_ok =
          cfg.friction + slack >= reference_friction(Scheme::Em, l_theta, cfg.dt);
      push("dt<1/(2eps)", 1.0 / (2.0 * cfg.friction), cfg.dt < 1.0 / (2.0 * cfg.friction));
      break;
    }
    case Scheme::Oba: {
      const double limit = 1.0 / std::sqrt(6.0 * l_theta);
      r.friction_ok =
          cfg.friction + slack >= reference_friction(Scheme::Oba, l_theta, cfg.dt);
      push("sqrt(6 L theta) dt < 1", limit, cfg.dt < limit);
      break;
    }
    case Scheme::Baoab: {
      const double limit = 0.5 / std::sqrt(l_theta);
      r.friction_ok = cfg.friction + slack >=
                      reference_friction(Scheme::Baoab, l_theta, cfg.dt);
      push("2 sqrt(L theta) dt < 1", limit, cfg.dt < limit);
      break;
    }
    case Scheme::Ses: {
      r.friction_ok =
          cfg.friction + slack >= reference_friction(Scheme::Ses, l_theta, cfg.dt);
      push("dt<=1/(2eps)", 1.0 / (2.0 * cfg.friction),
           cfg.dt <= 1.0 / (2.0 * cfg.friction));
      break;
    }
    default:
      break;
  }
  r.max_dt = std::numeric_limits<double>::infinity();
  bool all = true;
  for (const auto& b : r.bounds) {
    all = all && b.pass;
    if (b.limit < r.max_dt) {
      r.max_dt = b.limit;
      r.binding = b.name;
    }
  }
  r.pass = r.friction_ok && all;
  return r;
}

ChainState make_state(Vec position) {
  ChainState s;
  s.velocity = Vec::Zero(position.size());
  s.position = std::move(position);
  return s;
}

ChainState make_state(Vec position, Vec velocity) {
  require(position.size() == velocity.size(),
          "make_state: position/velocity dimension mismatch");
  ChainState s;
  s.position = std::move(position);
  s.velocity = std::move(velocity);
  return s;
}

// ---------------------------------------------------------------------------
// One-step kernels (in-place cores + pure wrappers)

namespace {

// ILA in position-velocity form: the velocity update is explicit
// Euler-Maruyama, the position update already uses V^{k+1}.
void ila_core(ChainState& s, const SamplerConfig& c, const Potential& u,
              const Vec& noise, Vec& g) {
  u.grad(s.position, g);
  s.velocity = c.beta * s.velocity - (c.dt * c.inv_mass) * g +
               c.kick_noise * noise.head(g.size());
  s.position += c.dt * s.velocity;
}

void ula_core(ChainState& s, double tau, const Potential& u, const Vec& noise,
              Vec& g) {
  u.grad(s.position, g);
  s.position += -tau * g + std::sqrt(2.0 * tau) * noise.head(g.size());
}

void em_core(ChainState& s, const SamplerConfig& c, const Potential& u,
             const Vec& noise, Vec& g) {
  u.grad(s.position, g);
  s.position += c.dt * s.velocity;  // drift with V^k
  s.velocity = c.beta * s.velocity - (c.dt * c.inv_mass) * g +
               c.kick_noise * noise.head(g.size());
}

void oba_core(ChainState& s, const SamplerConfig& c, const Potential& u,
              const Vec& noise, Vec& g) {
  u.grad(s.position, g);
  s.velocity = c.ou_decay * s.velocity + c.ou_noise * noise.head(g.size()) -
               (c.dt * c.inv_mass) * g;
  s.position += c.dt * s.velocity;
}

void baoab_core(ChainState& s, const SamplerConfig& c, const Potential& u,
                const Vec& noise, Vec& g) {
  const double half = 0.5 * c.dt;
  u.grad(s.position, g);
  s.velocity -= (half * c.inv_mass) * g;          // B
  s.position += half * s.velocity;                // A
  s.velocity = c.ou_decay * s.velocity +          // O
               c.ou_noise * noise.head(g.size());
  s.position += half * s.velocity;                // A
  u.grad(s.position, g);
  s.velocity -= (half * c.inv_mass) * g;          // B
}

struct SesScalars {
  double cxx, cxv, cvv;
  bool taylor;
};

SesScalars ses_cov_scalars(const SamplerConfig& c) {
  const double eps = c.friction, th = c.inv_mass, t = c.dt;
  const double e1 = std::exp(-eps * t);
  SesScalars s;
  s.cxx = th * (2.0 * eps * t - 3.0 + 4.0 * e1 - e1 * e1) / (eps * eps);
  s.cxv = th * (1.0 - e1) * (1.0 - e1) / eps;
  s.cvv = th * (1.0 - e1 * e1);
  s.taylor = false;
  // Cholesky feasibility; the exact scalars cancel catastrophically for
  // eps*t near rounding, fall back to the leading-order expansion.
  if (!(s.cxx > 0.0) || !(s.cvv - (s.cxv * s.cxv) / s.cxx > 0.0)) {
    const double u = eps * t;
    s.cxx = th * (2.0 / 3.0) * u * t * t;
    s.cxv = th * u * t;
    s.cvv = 2.0 * th * u;
    s.taylor = true;
  }
  return s;
}

void ses_core(ChainState& s, const SamplerConfig& c, const Potential& u,
              const Vec& noise, Vec& g) {
  const double eps = c.friction, th = c.inv_mass, t = c.dt;
  const double e1 = std::exp(-eps * t);
  const double vel_span = (1.0 - e1) / eps;
  const double grad_span_x = (th / eps) * (t - vel_span);
  const double grad_span_v = (th / eps) * (1.0 - e1);

  const auto cov = ses_cov_scalars(c);
  const double c11 = std::sqrt(cov.cxx);
  const double c21 = cov.cxv / c11;
  const double c22 = std::sqrt(cov.cvv - c21 * c21);

  u.grad(s.position, g);
  const auto d = g.size();
  s.position += vel_span * s.velocity - grad_span_x * g +
                c11 * noise.head(d);
  s.velocity = e1 * s.velocity - grad_span_v * g + c21 * noise.head(d) +
               c22 * noise.segment(d, d);
}

void heavy_ball_core(ChainState& s, double beta, double gamma,
                     const Potential& u, const Vec& noise, Vec& g) {
  require(gamma > 0.0, "heavy_ball: step size must be positive");
  u.grad(s.position, g);
  Vec next = s.position - gamma * g +
             std::sqrt(2.0 * gamma * (1.0 - beta)) * noise.head(g.size());
  if (s.prev_position)
    next += beta * (s.position - *s.prev_position);
  s.prev_position = s.position;
  s.position = std::move(next);
}

void sor_core(Vec& x, Vec& y, double omega, double tau, const Potential& u,
              const Vec& noise, Vec& g) {
  require(omega > 0.0 && omega < 2.0, "sor: omega must lie in (0, 2)");
  u.grad(x, g);
  y = (1.0 - omega) * y + omega * (x - tau * g) +
      std::sqrt(omega * (2.0 - omega) * 2.0 * tau) * noise.head(g.size());
  x = (1.0 - omega) * x + omega * y;
}

}  // namespace

ChainState ila_step(const ChainState& s, const SamplerConfig& cfg,
                    const Potential& u, const Vec& noise) {
  check_dims(s, u, noise, u.dim());
  ChainState out = s;
  Vec g(u.dim());
  ila_core(out, cfg, u, noise, g);
  return out;
}

ChainState heavy_ball_step(const ChainState& s, double beta, double gamma,
                           const Potential& u, const Vec& noise) {
  check_dims(s, u, noise, u.dim());
  ChainState out = s;
  Vec g(u.dim());
  heavy_ball_core(out, beta, gamma, u, noise, g);
  // Keep the velocity view consistent: V^{k+1} = (X^{k+1} - X^k) / dt is the
  // caller's job when it knows dt; here we leave velocity untouched.
  return out;
}

ChainState ila_heavy_ball_step(const ChainState& s, const SamplerConfig& cfg,
                               const Potential& u, const Vec& noise) {
  return heavy_ball_step(s, cfg.beta, cfg.tau, u, noise);
}

ChainState ula_step(const ChainState& s, double tau, const Potential& u,
                    const Vec& noise) {
  require(tau > 0.0, "ula_step: tau must be positive");
  check_dims(s, u, noise, u.dim());
  ChainState out = s;
  Vec g(u.dim());
  ula_core(out, tau, u, noise, g);
  return out;
}

ChainState em_kinetic_step(const ChainState& s, const SamplerConfig& cfg,
                           const Potential& u, const Vec& noise) {
  check_dims(s, u, noise, u.dim());
  ChainState out = s;
  Vec g(u.dim());
  em_core(out, cfg, u, noise, g);
  return out;
}

ChainState oba_step(const ChainState& s, const SamplerConfig& cfg,
                    const Potential& u, const Vec& noise) {
  check_dims(s, u, noise, u.dim());
  ChainState out = s;
  Vec g(u.dim());
  oba_core(out, cfg, u, noise, g);
  return out;
}

ChainState baoab_step(const ChainState& s, const SamplerConfig& cfg,
                      const Potential& u, const Vec& noise) {
  check_dims(s, u, noise, u.dim());
  ChainState out = s;
  Vec g(u.dim());
  baoab_core(out, cfg, u, noise, g);
  return out;
}

SesMoments ses_moments(const ChainState& s, const SamplerConfig& cfg,
                       const Potential& u) {
  require(cfg.friction * cfg.dt > 0.0, "ses_moments: eps dt must be positive");
  require(s.position.size() == u.dim(), "ses_moments: dimension mismatch");
  const double eps = cfg.friction, th = cfg.inv_mass, t = cfg.dt;
  const double e1 = std::exp(-eps * t);
  const Vec g = u.grad(s.position);

  SesMoments m;
  m.mean_position = s.position + ((1.0 - e1) / eps) * s.velocity -
                    (th / eps) * (t - 1.0 / eps + e1 / eps) * g;
  m.mean_velocity = e1 * s.velocity - (th / eps) * (1.0 - e1) * g;
  const auto cov = ses_cov_scalars(cfg);
  m.cov_xx = cov.cxx;
  m.cov_xv = cov.cxv;
  m.cov_vv = cov.cvv;
  m.taylor_fallback = cov.taylor;
  return m;
}

ChainState ses_step(const ChainState& s, const SamplerConfig& cfg,
                    const Potential& u, const Vec& noise) {
  check_dims(s, u, noise, 2 * u.dim());
  ChainState out = s;
  Vec g(u.dim());
  ses_core(out, cfg, u, noise, g);
  return out;
}

SorConfig make_sor_config(double omega, double tau, Vec aux) {
  require(omega > 0.0 && omega < 2.0, "sor: omega must lie in (0, 2)");
  require(tau > 0.0, "sor: tau must be positive");
  SorConfig c;
  c.omega = omega;
  c.tau = tau;
  c.sigma1_sq = tau;
  c.sigma2_sq = 0.0;
  c.aux = std::move(aux);
  return c;
}

SorConfig sor_from_heavy_ball(double beta, double gamma, Vec aux) {
  require(beta >= 0.0 && beta < 1.0, "sor: beta must lie in [0, 1)");
  const double omega = 1.0 - std::sqrt(beta);
  return make_sor_config(omega, gamma / (omega * omega), std::move(aux));
}

std::pair<Vec, SorConfig> gibbs_sor_step(const Vec& x, const SorConfig& sor,
                                         const Potential& u, const Vec& noise) {
  require(x.size() == u.dim(), "sor: dimension mismatch");
  require(sor.aux.size() == x.size(), "sor: aux dimension mismatch");
  Vec xn = x;
  SorConfig next = sor;
  Vec g(u.dim());
  sor_core(xn, next.aux, sor.omega, sor.tau, u, noise, g);
  return {std::move(xn), std::move(next)};
}

BaoabRunner::BaoabRunner(const SamplerConfig& cfg, const Potential& u)
    : cfg_(cfg), u_(&u), grad_(u.dim()), scratch_(u.dim()) {}

void BaoabRunner::reset(const ChainState& s) {
  require(s.position.size() == u_->dim(), "baoab runner: dimension mismatch");
  state_ = s;
  u_->grad(state_.position, grad_);
}

void BaoabRunner::step(const Vec& noise) {
  const double half = 0.5 * cfg_.dt;
  state_.velocity -= (half * cfg_.inv_mass) * grad_;  // B (cached gradient)
  state_.position += half * state_.velocity;          // A
  state_.velocity = cfg_.ou_decay * state_.velocity +
                    cfg_.ou_noise * noise.head(grad_.size());  // O
  state_.position += half * state_.velocity;          // A
  u_->grad(state_.position, grad_);                   // one evaluation per step
  state_.velocity -= (half * cfg_.inv_mass) * grad_;  // B
}

void step_inplace(Scheme s, ChainState& state, const SamplerConfig& cfg,
                  const Potential& u, const Vec& noise, Vec& scratch) {
  switch (s) {
    case Scheme::Ila:
      ila_core(state, cfg, u, noise, scratch);
      return;
    case Scheme::Ula:
      ula_core(state, cfg.tau, u, noise, scratch);
      return;
    case Scheme::Em:
      em_core(state, cfg, u, noise, scratch);
      return;
    case Scheme::Oba:
      oba_core(state, cfg, u, noise, scratch);
      return;
    case Scheme::Baoab:
      baoab_core(state, cfg, u, noise, scratch);
      return;
    case Scheme::Ses:
      ses_core(state, cfg, u, noise, scratch);
      return;
    case Scheme::SorGibbs: {
      require(cfg.beta >= 0.0, "sor-gibbs: needs beta = 1 - eps dt >= 0");
      const double omega = 1.0 - std::sqrt(cfg.beta);
      sor_core(state.position, state.velocity, omega,
               cfg.tau / (omega * omega), u, noise, scratch);
      return;
    }
  }
}

}  // namespace ila
