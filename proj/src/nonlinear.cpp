#include "radialwave/nonlinear.hpp"

#include <algorithm>
#include <cmath>

namespace radialwave {

namespace {

// Discrete quadrature weights of the basis inner product (h r^{d-1} on interior nodes).
Vec basis_weights(const SpectralBasis& basis) {
  const Grid& g = *basis.grid();
  Vec w = Vec::Zero(g.size());
  for (Eigen::Index i = 1; i < g.size() - 1; ++i) w[i] = g.spacing() * g.radial_weight()[i];
  return w;
}

double potential(const Vec& u, const Vec& w, int p) {
  return w.dot(u.cwiseAbs().array().pow(p + 1).matrix()) / (p + 1);
}

struct Diagnostics {
  double energy, crit, y, yp, sup;
};

Diagnostics diagnose(const ModalState& m, const Vec& u, const Vec& ut, const Vec& w, const ModelParams& prm,
                     const SpectralBasis& basis) {
  const Vec& lam = basis.eigenvalues();
  const double grad = lam.dot(m.a.cwiseAbs2());
  const double kin = m.b.squaredNorm();
  const double pot = potential(u, w, prm.p);
  Diagnostics d;
  d.energy = 0.5 * (grad + kin) - pot;
  d.crit = std::sqrt((lam.array().pow(prm.s_p) * m.a.array().square()).sum() +
                     (lam.array().pow(prm.s_p - 1.0) * m.b.array().square()).sum());
  d.y = w.dot(u.cwiseAbs2());
  d.yp = 2.0 * w.dot(u.cwiseProduct(ut));
  d.sup = u.cwiseAbs().maxCoeff();
  return d;
}

}  // namespace

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Completed: return "completed";
    case Outcome::BlowupDetected: return "blowup_detected";
    case Outcome::CausalityStop: return "causality_stop";
  }
  return "unknown";
}

Vec focusing_term(const Vec& u, int p) {
  if (p % 2 == 1) return u.array().pow(p).matrix();
  return (u.cwiseAbs().array().pow(p - 1) * u.array()).matrix();
}

std::pair<Trajectory, RunReport> evolve(const State& s0, const ModelParams& params, const EvolveConfig& cfg,
                                        const SpectralBasis& basis) {
  require(cfg.dt > 0.0 && cfg.T >= cfg.dt, ErrorKind::InvalidParams, "need dt > 0 and T >= dt");
  require(cfg.blowup_threshold > 0.0, ErrorKind::InvalidParams, "blow-up threshold must be positive");
  require(cfg.save_every >= 1, ErrorKind::InvalidParams, "save_every must be >= 1");
  require(cfg.method == "strang", ErrorKind::InvalidParams, "unknown splitting method " + cfg.method);
  require(s0.grid()->same_as(*basis.grid()), ErrorKind::GridMismatch, "state and basis grids differ");
  require(s0.grid()->dim() == params.d, ErrorKind::InvalidParams, "grid dimension differs from model dimension");

  const GridPtr<double>& grid = basis.grid();
  const double sign = cfg.reverse ? -1.0 : 1.0;
  const State start{s0.pos, sign * s0.vel};
  const long nsteps = std::max(1L, static_cast<long>(std::ceil(cfg.T / cfg.dt - 1e-9)));
  const double dt = cfg.T / nsteps;
  const Vec w = basis_weights(basis);
  const int p = params.p;

  Eigen::Index layer_start = grid->size();
  for (Eigen::Index i = 0; i < grid->size(); ++i)
    if (grid->nodes()[i] >= grid->r_max() - cfg.boundary_layer) {
      layer_start = i;
      break;
    }

  Trajectory traj;
  traj.params = params;
  RunReport rep;
  std::vector<double> t_raw;
  std::vector<State> s_raw;

  ModalState m = to_modal(start, basis);
  Vec u = basis.synthesize(m.a);
  const double sup0 = std::max(u.cwiseAbs().maxCoeff(), 1e-300);
  Vec fk = basis.analyze(focusing_term(u, p));
  double scale0 = 0.0;

  auto save = [&](double t) {
    const Vec ut = basis.synthesize(m.b);
    const Diagnostics dg = diagnose(m, u, ut, w, params, basis);
    if (t_raw.empty()) {
      rep.initial_energy = dg.energy;
      const double grad = basis.eigenvalues().dot(m.a.cwiseAbs2());
      scale0 = 0.5 * (grad + m.b.squaredNorm()) + potential(u, w, p);
    }
    t_raw.push_back(t);
    s_raw.emplace_back(Field(grid, u), Field(grid, ut));
    rep.times.push_back(sign * t);
    rep.energy.push_back(dg.energy);
    rep.critical_norm.push_back(dg.crit);
    rep.y.push_back(dg.y);
    rep.y_prime.push_back(sign * dg.yp);
    rep.sup_norm.push_back(dg.sup);
  };

  save(0.0);
  ModalState prev = m;
  Vec prev_u = u;
  for (long n = 1; n <= nsteps; ++n) {
    prev = m;
    prev_u = u;
    m.b += 0.5 * dt * fk;
    advance_modal(m, dt, basis);
    u = basis.synthesize(m.a);
    rep.steps = n;
    const double t = n * dt;
    const bool finite = u.allFinite();
    if (!finite || u.cwiseAbs().maxCoeff() > cfg.blowup_threshold) {
      rep.outcome = Outcome::BlowupDetected;
      const double t_prev = (n - 1) * dt;
      rep.blowup_time = sign * t_prev;
      traj.terminated_by_blowup = true;
      if (t_raw.back() < t_prev) {
        m = prev;
        u = prev_u;
        save(t_prev);
      }
      break;
    }
    fk = basis.analyze(focusing_term(u, p));
    m.b += 0.5 * dt * fk;
    bool stop = false;
    if (cfg.causality_check && layer_start < grid->size()) {
      const double edge = u.tail(grid->size() - layer_start).cwiseAbs().maxCoeff();
      if (edge > cfg.causality_tol * sup0) {
        rep.outcome = Outcome::CausalityStop;
        stop = true;
      }
    }
    if (n % cfg.save_every == 0 || n == nsteps || stop) save(t);
    if (stop) break;
  }

  const double e0 = rep.energy.front();
  const double denom = std::max({std::abs(e0), scale0, 1e-300});
  for (double e : rep.energy) rep.energy_drift = std::max(rep.energy_drift, std::abs(e - e0) / denom);
  if (e0 == 0.0 && scale0 == 0.0) rep.energy_drift = 0.0;

  if (cfg.reverse) {
    auto flip = [](auto& v) { std::reverse(v.begin(), v.end()); };
    for (std::size_t i = 0; i < s_raw.size(); ++i) s_raw[i].vel = -1.0 * s_raw[i].vel;
    flip(t_raw);
    flip(s_raw);
    flip(rep.times);
    flip(rep.energy);
    flip(rep.critical_norm);
    flip(rep.y);
    flip(rep.y_prime);
    flip(rep.sup_norm);
    for (std::size_t i = 0; i < t_raw.size(); ++i) traj.push(-t_raw[i], std::move(s_raw[i]));
  } else {
    for (std::size_t i = 0; i < t_raw.size(); ++i) traj.push(t_raw[i], std::move(s_raw[i]));
  }
  return {std::move(traj), std::move(rep)};
}

double conserved_energy(const State& s, const ModelParams& params) {
  const double pot = std::pow(lq_norm(s.pos, double(params.p + 1)), params.p + 1) / (params.p + 1);
  return 0.5 * (h1_seminorm_sq(s.pos) + weighted_l2(s.vel, s.vel)) - pot;
}

double conserved_energy(const State& s, const ModelParams& params, const SpectralBasis& basis) {
  const ModalState m = to_modal(s, basis);
  const double grad = basis.eigenvalues().dot(m.a.cwiseAbs2());
  return 0.5 * (grad + m.b.squaredNorm()) - potential(s.pos.values, basis_weights(basis), params.p);
}

Virial virial(const State& s, const ModelParams& params) {
  const int p = params.p;
  Virial v;
  v.y = weighted_l2(s.pos, s.pos);
  v.y_prime = 2.0 * weighted_l2(s.pos, s.vel);
  v.y_second = 2.0 * weighted_l2(s.vel, s.vel) - 2.0 * h1_seminorm_sq(s.pos) +
               2.0 * std::pow(lq_norm(s.pos, double(p + 1)), p + 1);
  return v;
}

Virial virial(const State& s, const ModelParams& params, const SpectralBasis& basis) {
  const Vec w = basis_weights(basis);
  const ModalState m = to_modal(s, basis);
  const Vec& u = s.pos.values;
  Virial v;
  v.y = w.dot(u.cwiseAbs2());
  v.y_prime = 2.0 * w.dot(u.cwiseProduct(s.vel.values));
  v.y_second = 2.0 * m.b.squaredNorm() - 2.0 * basis.eigenvalues().dot(m.a.cwiseAbs2()) +
               2.0 * (params.p + 1) * potential(u, w, params.p);
  return v;
}

namespace {

CauchySchwarzMargin margin_from(const Virial& v, double energy, double scale, const ModelParams& params,
                                double energy_tol) {
  require(std::abs(energy) <= energy_tol * std::max(scale, 1e-300) || scale == 0.0, ErrorKind::PreconditionError,
          "Cauchy-Schwarz check needs a zero-energy state");
  CauchySchwarzMargin out;
  out.energy = energy;
  const double a = 4.0 / (params.p + 3) * v.y * v.y_second;
  out.margin = a - v.y_prime * v.y_prime;
  const double den = std::abs(a) + v.y_prime * v.y_prime;
  out.normalized = den > 0.0 ? out.margin / den : 0.0;
  return out;
}

}  // namespace

CauchySchwarzMargin cauchy_schwarz_check(const State& s, const ModelParams& params, double energy_tol) {
  const double kin = 0.5 * weighted_l2(s.vel, s.vel);
  const double grad = 0.5 * h1_seminorm_sq(s.pos);
  const double pot = std::pow(lq_norm(s.pos, double(params.p + 1)), params.p + 1) / (params.p + 1);
  return margin_from(virial(s, params), kin + grad - pot, kin + grad + pot, params, energy_tol);
}

CauchySchwarzMargin cauchy_schwarz_check(const State& s, const ModelParams& params, const SpectralBasis& basis,
                                         double energy_tol) {
  const ModalState m = to_modal(s, basis);
  const double kin = 0.5 * m.b.squaredNorm();
  const double grad = 0.5 * basis.eigenvalues().dot(m.a.cwiseAbs2());
  const double pot = potential(s.pos.values, basis_weights(basis), params.p);
  return margin_from(virial(s, params, basis), kin + grad - pot, kin + grad + pot, params, energy_tol);
}

double critical_norm(const State& s, const ModelParams& params, const SpectralBasis& basis) {
  const double a = sobolev_norm(s.pos, params.s_p, basis);
  const double b = sobolev_norm(s.vel, params.s_p - 1.0, basis);
  return std::hypot(a, b);
}

SpNorm sp_norm(const Trajectory& traj, const ModelParams& params) {
  SpNorm out;
  if (traj.size() < 2) return out;
  const double qx = 2.0 * params.d * (params.p - 1) / 3.0;
  const double qt = 2.0 * (params.p - 1);
  std::vector<double> f(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) f[i] = std::pow(lq_norm(traj.states[i].pos, qx), qt);
  auto trap = [&](const std::vector<std::size_t>& idx) {
    double acc = 0.0;
    for (std::size_t k = 1; k < idx.size(); ++k)
      acc += 0.5 * (f[idx[k]] + f[idx[k - 1]]) * (traj.times[idx[k]] - traj.times[idx[k - 1]]);
    return std::pow(acc, 1.0 / qt);
  };
  std::vector<std::size_t> all(traj.size()), half;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    all[i] = i;
    if (i % 2 == 0) half.push_back(i);
  }
  if (half.back() != traj.size() - 1) half.push_back(traj.size() - 1);
  out.value = trap(all);
  out.half_stride_value = trap(half);
  out.stride_change = out.value > 0.0 ? std::abs(out.value - out.half_stride_value) / out.value : 0.0;
  return out;
}

ScatteringFit scattering_fit(const Trajectory& traj, const SpectralBasis& basis) {
  require(!traj.terminated_by_blowup, ErrorKind::PreconditionError, "trajectory ended in blow-up");
  require(!traj.empty(), ErrorKind::PreconditionError, "empty trajectory");
  ScatteringFit fit;
  const double T = traj.times.back();
  const double t0 = traj.times.front();
  fit.profile = free_flow(traj.states.back(), t0 - T, basis);
  const ModalState prof = to_modal(fit.profile, basis);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    ModalState m = prof;
    advance_modal(m, traj.times[i] - t0, basis);
    const State diff = traj.states[i] - from_modal(m, basis);
    fit.times.push_back(traj.times[i]);
    fit.residual.push_back(critical_norm(diff, traj.params, basis));
  }
  return fit;
}

RunReport levine_experiment(const State& s0, const ModelParams& params, const EvolveConfig& cfg,
                            const SpectralBasis& basis) {
  const double e = conserved_energy(s0, params, basis);
  require(e < 0.0, ErrorKind::PreconditionError, "Levine experiment needs negative energy");
  RunReport rep = evolve(s0, params, cfg, basis).second;
  if (rep.outcome == Outcome::BlowupDetected) {
    EvolveConfig fine = cfg;
    fine.dt = 0.5 * cfg.dt;
    fine.save_every = 2 * cfg.save_every;
    const RunReport r2 = evolve(s0, params, fine, basis).second;
    rep.blowup_time_refined = r2.blowup_time;
  }
  return rep;
}

double ode_blowup_constant(int p) {
  return std::pow(2.0 * (p + 1) / ((p - 1.0) * (p - 1.0)), 1.0 / (p - 1));
}

}  // namespace radialwave
