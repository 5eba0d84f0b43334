#include "lab/criteria.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <sstream>

#include "lab/oracles.hpp"
#include "lab/parallel.hpp"
#include "radialwave/channels.hpp"
#include "radialwave/envelope.hpp"
#include "radialwave/linear_wave.hpp"
#include "radialwave/nonlinear.hpp"
#include "radialwave/samples.hpp"
#include "radialwave/stationary.hpp"

namespace lab {

using namespace radialwave;

bool Metric::pass() const {
  if (relation == "<=") return value <= threshold;
  if (relation == ">=") return value >= threshold;
  if (relation == "==") return value == threshold;
  return true;  // "info"
}

bool CriterionResult::pass() const {
  return std::all_of(metrics.begin(), metrics.end(), [](const Metric& m) { return m.pass(); });
}

std::string CriterionResult::summary() const {
  std::ostringstream os;
  os << (pass() ? "PASS" : "FAIL") << " [" << id << "] " << title;
  for (const auto& m : metrics) {
    if (m.relation == "info") continue;
    os << " | " << m.name << "=" << format_number(m.value) << (m.pass() ? "" : "!") << " (" << m.relation << " "
       << format_number(m.threshold) << ")";
  }
  return os.str();
}

json to_json(const CriterionResult& r) {
  json j;
  j["id"] = r.id;
  j["title"] = r.title;
  j["pass"] = r.pass();
  j["seconds"] = r.seconds;
  j["metrics"] = json::array();
  for (const auto& m : r.metrics)
    j["metrics"].push_back({{"name", m.name}, {"value", m.value}, {"threshold", m.threshold}, {"relation", m.relation},
                            {"timing", m.timing}, {"pass", m.pass()}});
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

BasisPtr shared_basis(int d, long n, double r_max, const SuiteContext& ctx) {
  static std::mutex m;
  static std::map<std::tuple<int, long, double>, BasisPtr> memo;
  std::lock_guard lock(m);
  auto& slot = memo[{d, n, r_max}];
  if (!slot) {
    auto grid = Grid::uniform(d, n, r_max);
    slot = ctx.cache_dir.empty() ? build_basis(grid) : build_basis(grid, std::filesystem::path(ctx.cache_dir));
  }
  return slot;
}

std::mt19937_64 stream(const SuiteContext& ctx, int id) { return std::mt19937_64(ctx.seed * 1000003ull + id); }

CriterionResult start(int id, std::string title) {
  CriterionResult r;
  r.id = id;
  r.title = std::move(title);
  return r;
}

Metric le(std::string n, double v, double t) { return {std::move(n), v, t, "<="}; }
Metric ge(std::string n, double v, double t) { return {std::move(n), v, t, ">="}; }
Metric info(std::string n, double v) { return {std::move(n), v, 0.0, "info"}; }
Metric runtime(double secs, double limit) { return {"runtime_s", secs, limit, "<=", true}; }

constexpr int kD = 7;
constexpr double kR = 4.0;
constexpr double kT = 24.0;

// Scale so the basis energy vanishes: E(a s) = a^2 A - a^{p+1} B.
State zero_energy(const State& s, const ModelParams& params, const SpectralBasis& basis) {
  const double e1 = conserved_energy(s, params, basis);
  const double e2 = conserved_energy(2.0 * s, params, basis);
  const double b = (4.0 * e1 - e2) / (std::pow(2.0, params.p + 1) - 4.0);
  const double a = e1 + b;
  return std::pow(a / b, 1.0 / (params.p - 1)) * s;
}

}  // namespace

CriterionResult channel_inequality(const SuiteContext& ctx) {
  const auto t0 = Clock::now();
  CriterionResult res = start(1, "channel-of-energy inequality, d=7 R=4 T=24, 30 random data");
  auto basis = shared_basis(kD, 4096, 64.0, ctx);
  auto rng = stream(ctx, 1);
  std::vector<State> data;
  for (int i = 0; i < 30; ++i) data.push_back(random_state(rng, 2.0, 8.0).sample(basis->grid()));
  std::vector<ChannelReport> reps(data.size());
  parallel_for(data.size(), ctx.threads, [&](std::size_t i) { reps[i] = channel_verify(data[i], kR, kT, *basis); });
  int passing = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < reps.size(); ++i) {
    passing += reps[i].verdict;
    const double n2 = std::pow(energy_pair_norm(data[i]), 2);
    worst = std::min(worst, reps[i].margin / n2);
  }
  res.metrics = {ge("samples_passing", passing, 30), ge("min_margin_over_norm2", worst, -1e-3)};
  res.seconds = since(t0);
  res.metrics.push_back(runtime(res.seconds, 120.0));
  return res;
}

CriterionResult degenerate_direction(const SuiteContext& ctx) {
  const auto t0 = Clock::now();
  CriterionResult res = start(2, "exterior energy of truncated P(R) data at T=24 below 1e-3 of the initial exterior norm");
  auto basis = shared_basis(kD, 4096, 64.0, ctx);
  const auto& g = basis->grid();
  const PlaneSpec spec = plane_spec(kD);
  struct Case {
    std::string name;
    State s;
  };
  std::vector<Case> cases;
  for (int e : spec.pos_exponents) {
    PlaneDatum pd{kD, e, kR};
    cases.push_back({"pos_r^" + std::to_string(e), {pd.sample(g), Field::zero(g)}});
  }
  for (int e : spec.vel_exponents) {
    PlaneDatum pd{kD, e, kR};
    cases.push_back({"vel_r^" + std::to_string(e), {Field::zero(g), pd.sample(g)}});
  }
  for (const auto& c : cases) {
    const double e0 = exterior_energy(c.s, kR, 0.0);
    const double ep = exterior_energy(free_flow(c.s, kT, *basis), kR, kT);
    const double em = exterior_energy(free_flow(c.s, -kT, *basis), kR, kT);
    res.metrics.push_back(le("ratio_" + c.name, std::max(ep, em) / e0, 1e-3));
  }
  res.note =
      "Only the harmonic element (r^{2-d},0) is static. The other elements evolve in the exterior cone as "
      "polynomials in t (r^{-3} - 3t^2 r^{-5} and t r^{-5} for d=7), so their exterior energy decays only "
      "algebraically and stays far above 1e-3 at T=24; the limit statement holds only as T -> infinity.";
  res.seconds = since(t0);
  return res;
}

CriterionResult equality_cases(const SuiteContext& ctx) {
  const auto t0 = Clock::now();
  CriterionResult res = start(3, "equality cases (V0,0) and (0,V1): max exterior energy within 5% of 0.5 ||pi_perp||^2");
  auto basis = shared_basis(kD, 4096, 64.0, ctx);
  const auto& g = basis->grid();
  auto rng = stream(ctx, 3);
  std::vector<State> data;
  for (int i = 0; i < 4; ++i) {
    const State s = random_state(rng, kR, 8.0).sample(g);
    data.push_back({s.pos, Field::zero(g)});
    data.push_back({Field::zero(g), s.vel});
  }
  // deviation at the default horizon and at the causality budget
  const double t_far = 64.0 - 8.0;
  std::vector<double> dev(data.size()), far(data.size());
  parallel_for(data.size(), ctx.threads, [&](std::size_t i) {
    const auto rep = channel_verify(data[i], kR, kT, *basis);
    dev[i] = std::abs(rep.max_exterior() / rep.bound - 1.0);
    const auto late = channel_verify(data[i], kR, t_far, *basis);
    far[i] = std::abs(late.max_exterior() / late.bound - 1.0);
  });
  double worst_pos = 0.0, worst_vel = 0.0, far_vel = 0.0;
  std::size_t hardest = 1;
  for (std::size_t i = 0; i < dev.size(); ++i) {
    if (i % 2 == 0) {
      worst_pos = std::max(worst_pos, dev[i]);
      continue;
    }
    if (dev[i] > dev[hardest]) hardest = i;
    worst_vel = std::max(worst_vel, dev[i]);
    far_vel = std::max(far_vel, far[i]);
  }
  res.metrics = {le("max_rel_dev_V0", worst_pos, 0.05), le("max_rel_dev_V1", worst_vel, 0.05),
                 info("max_rel_dev_V1_T56", far_vel),
                 info("decay_exponent_V1", std::log(dev[hardest] / far[hardest]) / std::log(t_far / kT))};
  res.note =
      "Equality holds for the t -> infinity limit of the exterior energy. For (0,V1) data the finite-T excess "
      "decays algebraically (about T^-1.4) and some draws are still above 5% at T=24; the deviation keeps "
      "shrinking up to the causality budget T=56.";
  res.seconds = since(t0);
  return res;
}

CriterionResult projection_algebra(const SuiteContext& ctx) {
  const auto t0 = Clock::now();
  CriterionResult res = start(4, "projection algebra over 50 random states x 3 cutoffs");
  auto grid = Grid::uniform(kD, 4096, 64.0);
  auto rng = stream(ctx, 4);
  std::vector<AnalyticState> states;
  for (int i = 0; i < 50; ++i) states.push_back(random_state(rng, 1.0, 10.0));
  const std::vector<double> cutoffs{3.0, 5.0, 7.0};

  double gram_err = 0.0;
  for (double R : cutoffs) {
    const Eigen::MatrixXd a = plane_gram(kD, R), b = oracle::gram(kD, R);
    gram_err = std::max(gram_err, (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff());
  }

  struct Row {
    double coeff = 0, continuum = 0, pyth = 0, idem = 0, ortho = 0, ident = 0;
  };
  auto rel_gap = [](const ChannelCoeffs& c, const Vec& ref) {
    Vec mine(c.lambda.size() + c.mu.size());
    mine << c.lambda, c.mu;
    return (mine - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff();
  };
  std::vector<Row> rows(states.size() * cutoffs.size());
  parallel_for(rows.size(), ctx.threads, [&](std::size_t k) {
    const auto& as = states[k / cutoffs.size()];
    const double R = cutoffs[k % cutoffs.size()];
    const State s = as.sample(grid);
    Row& row = rows[k];
    const ExteriorState ext = ExteriorState::from_state(s, R);
    const ChannelCoeffs c = projection_coeffs(s, R);
    Vec mine(c.lambda.size() + c.mu.size());
    mine << c.lambda, c.mu;
    row.coeff = rel_gap(c, oracle::projection(exterior_moments(ext), kD, R));
    row.continuum = rel_gap(c, oracle::projection(as, kD, R));

    const Projection pr = project(s, R);
    const double n2 = exterior_inner(ext, ext);
    row.pyth = std::abs(n2 - exterior_inner(pr.pi, pr.pi) - exterior_inner(pr.pi_perp, pr.pi_perp)) / n2;

    const ChannelCoeffs again = project(pr.pi).coeffs;
    const ChannelCoeffs rest = project(pr.pi_perp).coeffs;
    Vec a2(mine.size()), r2(mine.size()), c1(mine.size());
    a2 << again.lambda, again.mu;
    r2 << rest.lambda, rest.mu;
    c1 << pr.coeffs.lambda, pr.coeffs.mu;
    row.idem = std::max((a2 - c1).cwiseAbs().maxCoeff(), r2.cwiseAbs().maxCoeff()) / c1.cwiseAbs().maxCoeff();

    const double ns = std::sqrt(n2);
    for (Eigen::Index i = 0; i < mine.size(); ++i) {
      const ExteriorState e = plane_element(grid, R, static_cast<int>(i));
      row.ortho = std::max(row.ortho, std::abs(exterior_inner(pr.pi_perp, e)) / (ns * exterior_norm(e)));
    }
    row.ident = moment_identities_check(s, R).max();
  });
  Row worst;
  std::size_t hardest = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Row& r = rows[k];
    if (r.continuum > rows[hardest].continuum) hardest = k;
    worst.coeff = std::max(worst.coeff, r.coeff);
    worst.continuum = std::max(worst.continuum, r.continuum);
    worst.pyth = std::max(worst.pyth, r.pyth);
    worst.idem = std::max(worst.idem, r.idem);
    worst.ortho = std::max(worst.ortho, r.ortho);
    worst.ident = std::max(worst.ident, r.ident);
  }
  // discretisation error against the continuum oracle, and its order under
  // grid refinement on the hardest state
  const auto& hard = states[hardest / cutoffs.size()];
  const double hard_R = cutoffs[hardest % cutoffs.size()];
  const double coarse =
      rel_gap(projection_coeffs(hard.sample(Grid::uniform(kD, 2048, 64.0)), hard_R), oracle::projection(hard, kD, hard_R));
  const double order = std::log2(coarse / rows[hardest].continuum);
  res.metrics = {le("gram_rel_err", gram_err, 1e-6),
                 le("coeff_vs_gram_system_rel", worst.coeff, 1e-6),
                 info("coeff_vs_continuum_rel", worst.continuum),
                 ge("continuum_convergence_order", order, 2.0),
                 le("pythagoras_rel", worst.pyth, 1e-8), le("idempotence_rel", worst.idem, 1e-8),
                 le("orthogonality", worst.ortho, 1e-8), le("identity_residual", worst.ident, 1e-5)};
  res.seconds = since(t0);
  res.metrics.push_back(runtime(res.seconds, 60.0));
  return res;
}

namespace {

// Z of `a` at the radii of `b`, by linear interpolation in s; compared on [r_lo, r_hi].
double profile_mismatch(const StationaryProfile& a, const StationaryProfile& b, double r_lo, double r_hi) {
  double diff = 0.0, scale = 0.0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double s = b.s[i];
    if (s < std::log(r_lo) || s > std::log(r_hi)) continue;
    while (j + 1 < a.size() && a.s[j + 1] < s) ++j;
    if (j + 1 >= a.size() || a.s[j] > s) continue;
    const double w = (s - a.s[j]) / (a.s[j + 1] - a.s[j]);
    const double phi = (1 - w) * a.phi[j] + w * a.phi[j + 1];
    diff = std::max(diff, std::abs(phi - b.phi[i]) * std::exp(-s));
    scale = std::max(scale, std::abs(b.Z(i)));
  }
  return diff / scale;
}

}  // namespace

CriterionResult stationary_family(const SuiteContext&) {
  const auto t0 = Clock::now();
  CriterionResult res = start(5, "stationary family (7,3): residual, tail rate, scaling law");
  const StationaryProfile prof = shoot_stable(0.01, 7, 3);
  const double resid = elliptic_residual(prof, std::exp(-8.0), std::exp(6.0));
  const TailFit tail = fit_tail(prof);
  const double expected = 7.0 - 3.0 * (7 - 2);
  res.metrics = {le("elliptic_residual", resid, 1e-6), le("tail_rate_rel_err", std::abs(tail.rate - expected) / std::abs(expected), 0.1),
                 info("tail_rate", tail.rate)};

  const double x0 = 0.005;
  const StationaryProfile base = shoot_stable(x0, 7, 3);
  const double ell0 = fit_tail(base).ell;
  for (double lam : {0.5, 2.0}) {
    const StationaryProfile sc = rescale(base, lam);
    const double ratio = fit_tail(sc).ell / ell0;
    const std::string tag = lam < 1 ? "lam_half" : "lam_2";
    res.metrics.push_back(le("ell_ratio_rel_err_" + tag, std::abs(ratio / std::pow(lam, 4) - 1.0), 0.02));
    // the rescaled member must coincide with the member shot directly at the scaled seed
    const StationaryProfile direct = shoot_stable(x0 * std::pow(lam, 4), 7, 3);
    res.metrics.push_back(le("profile_mismatch_" + tag, profile_mismatch(sc, direct, std::exp(-4.0), std::exp(4.0)), 0.02));
  }
  res.seconds = since(t0);
  res.metrics.push_back(runtime(res.seconds, 10.0));
  return res;
}

CriterionResult non_membership(const SuiteContext&) {
  const auto t0 = Clock::now();
  CriterionResult res = start(6, "int_eps^1 |Z|^{q_p} r^{d-1} dr grows without saturation over 3 decades of eps");
  const StationaryProfile prof = shoot_stable(0.01, 7, 3);
  const SingularityReport rep = singularity_diagnostic(prof);
  res.metrics = {ge("increasing", rep.lq_increasing, 1), ge("unsaturated", rep.lq_unsaturated, 1),
                 ge("decades", std::log10(rep.eps.front() / rep.eps.back()), 3.0)};
  for (std::size_t i = 0; i < rep.eps.size(); ++i)
    res.metrics.push_back(info("I_eps_" + format_number(rep.eps[i]), rep.lq_integrals[i]));
  res.seconds = since(t0);
  return res;
}

namespace {

std::function<double(double)> plateau(double c) {
  return [c](double r) { return c * (1.0 - smooth_step((r - 3.0) / 2.0)); };
}

}  // namespace

CriterionResult nonlinear_solver(const SuiteContext& ctx) {
  const auto t0 = Clock::now();
  CriterionResult res = start(7, "nonlinear solver: scalar ODE oracle, blow-up time, energy drift");
  const ModelParams params = make_params(7, 3);
  auto basis = shared_basis(7, 1024, 16.0, ctx);
  const auto& g = basis->grid();

  // plateau of height 1 at rest: r = 0 sees only the plateau for t < 3
  {
    const State s{Field::sample(g, plateau(1.0)), Field::zero(g)};
    EvolveConfig cfg;
    cfg.dt = 1e-3;
    cfg.T = 1.5;
    cfg.save_every = 10;
    const auto [traj, rep] = evolve(s, params, cfg, *basis);
    const auto ref = oracle::scalar_ode(1.0, 0.0, 3, traj.times);
    double err = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i)
      err = std::max(err, std::abs(traj.states[i].pos.values[0] - ref[i]) / std::abs(ref[i]));
    res.metrics.push_back(le("plateau_vs_ode_rel", err, 1e-4));
  }

  // explicit blow-up solution c_p (1 - t)^{-1}: data (c_p, c_p)
  const double cp = ode_blowup_constant(3);
  std::vector<double> dts{2e-3, 1e-3, 5e-4};
  std::vector<double> tb(dts.size(), -1.0);
  parallel_for(dts.size(), ctx.threads, [&](std::size_t i) {
    const State s{Field::sample(g, plateau(cp)), Field::sample(g, plateau(cp))};
    EvolveConfig cfg;
    cfg.dt = dts[i];
    cfg.T = 1.5;
    cfg.save_every = 1000;
    const auto [traj, rep] = evolve(s, params, cfg, *basis);
    if (rep.blowup_time) tb[i] = *rep.blowup_time;
  });
  for (std::size_t i = 0; i < dts.size(); ++i)
    res.metrics.push_back(le("blowup_time_rel_err_dt_" + format_number(dts[i]), std::abs(tb[i] - 1.0), 0.05));

  {
    const BumpSum bump = central_bump(2.0, 0.5);
    const State s{bump.sample(g), Field::zero(g)};
    EvolveConfig cfg;
    cfg.dt = 1e-3;
    cfg.T = 4.0;
    const auto [traj, rep] = evolve(s, params, cfg, *basis);
    res.metrics.push_back(ge("drift_run_completed", rep.outcome == Outcome::Completed, 1));
    res.metrics.push_back(le("energy_drift", rep.energy_drift, 1e-5));
  }
  res.seconds = since(t0);
  return res;
}

CriterionResult levine_criterion(const SuiteContext& ctx) {
  const auto t0 = Clock::now();
  CriterionResult res = start(8, "negative-energy datum blows up; small positive sibling completes with T-stable S_p norm");
  const ModelParams params = make_params(7, 3);
  auto basis = shared_basis(7, 1024, 16.0, ctx);
  const auto& g = basis->grid();
  EvolveConfig cfg;
  cfg.dt = 1e-3;
  cfg.T = 4.0;
  {
    const State s{central_bump(2.0, 10.0).sample(g), Field::zero(g)};
    const RunReport rep = levine_experiment(s, params, cfg, *basis);
    res.metrics.push_back(le("initial_energy", rep.initial_energy, 0.0));
    res.metrics.push_back(ge("blowup_detected", rep.outcome == Outcome::BlowupDetected, 1));
    res.metrics.push_back(info("blowup_time", rep.blowup_time.value_or(-1.0)));
  }
  {
    const State s{central_bump(2.0, 0.5).sample(g), Field::zero(g)};
    cfg.T = 8.0;
    const auto [traj, rep] = evolve(s, params, cfg, *basis);
    Trajectory half;
    half.params = traj.params;
    for (std::size_t i = 0; i < traj.size() && traj.times[i] <= 4.0 + 1e-9; ++i) half.push(traj.times[i], traj.states[i]);
    const double full = sp_norm(traj, params).value, part = sp_norm(half, params).value;
    res.metrics.push_back(ge("sibling_energy_positive", rep.initial_energy > 0.0, 1));
    res.metrics.push_back(ge("sibling_completed", rep.outcome == Outcome::Completed, 1));
    res.metrics.push_back(ge("sp_norm_finite", std::isfinite(full), 1));
    res.metrics.push_back(le("sp_norm_change_T4_to_T8", std::abs(full - part) / full, 0.05));
  }
  res.seconds = since(t0);
  return res;
}

CriterionResult virial_suite(const SuiteContext& ctx) {
  const auto t0 = Clock::now();
  CriterionResult res = start(9, "virial identities: finite-difference consistency and zero-energy Cauchy-Schwarz margin");
  const ModelParams params = make_params(7, 3);
  auto basis = shared_basis(7, 1024, 16.0, ctx);
  const auto& g = basis->grid();
  auto rng = stream(ctx, 9);
  {
    const State s = 0.2 * random_state(rng, 0.5, 5.0).sample(g);
    EvolveConfig cfg;
    cfg.dt = 2e-4;
    cfg.T = 0.5;
    cfg.save_every = 5;
    const auto [traj, rep] = evolve(s, params, cfg, *basis);
    double e1 = 0, e2 = 0, s1 = 0, s2 = 0;
    std::vector<Virial> v;
    for (const auto& st : traj.states) v.push_back(virial(st, params, *basis));
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
      const double h = traj.times[i + 1] - traj.times[i - 1];
      e1 = std::max(e1, std::abs((v[i + 1].y - v[i - 1].y) / h - v[i].y_prime));
      e2 = std::max(e2, std::abs((v[i + 1].y_prime - v[i - 1].y_prime) / h - v[i].y_second));
      s1 = std::max(s1, std::abs(v[i].y_prime));
      s2 = std::max(s2, std::abs(v[i].y_second));
    }
    res.metrics.push_back(le("fd_rel_err_y_prime", e1 / s1, 1e-3));
    res.metrics.push_back(le("fd_rel_err_y_second", e2 / s2, 1e-3));
  }
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 20; ++i) {
    const State s = zero_energy(random_state(rng, 0.5, 6.0).sample(g), params, *basis);
    worst = std::min(worst, cauchy_schwarz_check(s, params, *basis).normalized);
  }
  res.metrics.push_back(ge("min_cs_margin", worst, -1e-6));
  res.seconds = since(t0);
  return res;
}

CriterionResult harmonic_analysis(const SuiteContext& ctx) {
  const auto t0 = Clock::now();
  CriterionResult res = start(10, "Parseval, LP partition of unity, Bernstein, v-norm identity, envelope slow variation");
  auto rng = stream(ctx, 10);
  {
    auto b3 = shared_basis(3, 2048, 32.0, ctx);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const Field f = random_bumps(rng, 1.0, 20.0, 4).sample(b3->grid());
      const double l2 = weighted_l2(f, f);
      worst = std::max(worst, std::abs(l2 - b3->analyze(f.values).squaredNorm()) / l2);
    }
    res.metrics.push_back(le("parseval_rel_d3", worst, 1e-6));
  }
  auto basis = shared_basis(7, 1024, 32.0, ctx);
  const auto& g = basis->grid();
  const ModelParams params = make_params(7, 3);
  const DyadicBand band = resolved_band(*basis);
  {
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      // band-limited: keep the lowest third of the spectrum
      Vec a = basis->analyze(random_bumps(rng, 1.0, 25.0, 4).sample(g).values);
      a.tail(a.size() - a.size() / 3).setZero();
      const Field f{g, basis->synthesize(a)};
      Field sum = Field::zero(g);
      for (int j = band.j_min; j <= band.j_max; ++j) sum = sum + lp_project(f, std::ldexp(1.0, j), *basis);
      worst = std::max(worst, std::sqrt(basis->inner(sum - f, sum - f) / basis->inner(f, f)));
    }
    res.metrics.push_back(le("lp_reconstruction_rel", worst, 1e-8));
  }
  {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Field f = random_bumps(rng, 1.0, 25.0, 3).sample(g);
      const int j = band.j_min + 1 + i % std::max(1, band.count() - 2);
      const auto rep = bernstein_check(f, std::ldexp(1.0, j), 1.0, *basis);
      lo = std::min(lo, rep.ratio);
      hi = std::max(hi, rep.ratio);
    }
    res.metrics.push_back(ge("bernstein_min_ratio", lo, 0.5));
    res.metrics.push_back(le("bernstein_max_ratio", hi, 4.0));
  }
  {
    double worst = 0.0;
    bool slow = true;
    for (int i = 0; i < 10; ++i) {
      const State s = random_state(rng, 1.0, 20.0).sample(g);
      const double lhs = complex_sobolev_norm(make_v(s, *basis), params.s_p, *basis);
      const double rhs = std::hypot(sobolev_norm(s.pos, params.s_p, *basis), sobolev_norm(s.vel, params.s_p - 1.0, *basis));
      worst = std::max(worst, std::abs(lhs - rhs) / rhs);
      slow = slow && envelope(s, params, *basis).slow_variation;
    }
    res.metrics.push_back(le("v_norm_identity_rel", worst, 1e-10));
    res.metrics.push_back(ge("envelope_slow_variation", slow, 1));
  }
  res.seconds = since(t0);
  return res;
}

std::vector<CriterionResult> run_property_suite(const SuiteContext& ctx) {
  return {channel_inequality(ctx), degenerate_direction(ctx), equality_cases(ctx),   projection_algebra(ctx),
          stationary_family(ctx),  non_membership(ctx),       nonlinear_solver(ctx), levine_criterion(ctx),
          virial_suite(ctx),       harmonic_analysis(ctx)};
}

}  // namespace lab
