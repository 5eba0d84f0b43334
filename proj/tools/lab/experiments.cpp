#include "lab/experiments.hpp"

#include <cmath>
#include <cstdlib>
#include <ostream>
#include <random>

#include "lab/parallel.hpp"
#include "radialwave/channels.hpp"
#include "radialwave/envelope.hpp"
#include "radialwave/nonlinear.hpp"
#include "radialwave/samples.hpp"
#include "radialwave/stationary.hpp"

namespace lab {

using namespace radialwave;

namespace {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NumericalFailure:
    case ErrorKind::IllConditioned:
    case ErrorKind::EmptyBlock:
    case ErrorKind::SourceError:
    case ErrorKind::ShootFailure:
      return kNumerical;
    default:
      return kValidation;
  }
}

BasisPtr make_basis(const ExperimentConfig& cfg) {
  auto grid = Grid::uniform(cfg.d, cfg.N, cfg.R_max);
  const std::string cache = cache_dir(cfg);
  return cache.empty() ? build_basis(grid) : build_basis(grid, fs::path(cache));
}

double opt_or_nan(const std::optional<double>& v) { return v.value_or(std::nan("")); }

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_history(const RunReport& rep, const fs::path& file, const std::string& schema) {
  CsvWriter csv(schema, 1, {"t", "energy", "critical_norm", "y", "y_prime", "sup_norm"});
  for (std::size_t i = 0; i < rep.times.size(); ++i)
    csv.row({rep.times[i], rep.energy[i], rep.critical_norm[i], rep.y[i], rep.y_prime[i], rep.sup_norm[i]});
  csv.write(file);
}

json run_json(const RunReport& rep) {
  return {{"outcome", to_string(rep.outcome)},
          {"blowup_time", nullable(opt_or_nan(rep.blowup_time))},
          {"blowup_time_refined", nullable(opt_or_nan(rep.blowup_time_refined))},
          {"energy_drift", nullable(rep.energy_drift)},
          {"initial_energy", rep.initial_energy},
          {"steps", rep.steps}};
}

int run_channels(const ExperimentConfig& cfg, const fs::path& dir, Manifest& man, std::ostream& log) {
  const auto& k = cfg.channels;
  auto basis = make_basis(cfg);
  std::mt19937_64 rng(cfg.seed);
  std::vector<State> data;
  for (int i = 0; i < k.samples; ++i) data.push_back(random_state(rng, k.support_lo, k.support_hi, k.bumps).sample(basis->grid()));
  std::vector<ChannelReport> reps(data.size());
  parallel_for(data.size(), 0, [&](std::size_t i) { reps[i] = channel_verify(data[i], k.R, k.T, *basis, k.tol_factor, cfg.p); });

  CsvWriter csv("channel_samples", 1,
                {"sample", "exterior_plus", "exterior_minus", "exterior_plus_half", "exterior_minus_half", "bound", "tol",
                 "margin", "verdict"});
  json samples = json::array();
  bool all = true;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    const auto& r = reps[i];
    csv.row({double(i), r.exterior_plus, r.exterior_minus, r.exterior_plus_half, r.exterior_minus_half, r.bound, r.tol,
             r.margin, double(r.verdict)});
    samples.push_back({{"d", r.d}, {"p", r.p}, {"R", r.R}, {"T", r.T}, {"exterior_plus", r.exterior_plus},
                       {"exterior_minus", r.exterior_minus}, {"bound", r.bound}, {"margin", r.margin}, {"verdict", r.verdict}});
    all = all && r.verdict;
  }
  csv.write(dir / "channel_samples.csv");
  write_json(dir / "channel_report.json", {{"all_verdicts_true", all}, {"samples", samples}});
  man.add(dir / "channel_samples.csv");
  man.add(dir / "channel_report.json");
  log << "channels: " << reps.size() << " samples, all verdicts " << (all ? "true" : "false") << "\n";
  return all ? kOk : kAcceptance;
}

int run_stationary(const ExperimentConfig& cfg, const fs::path& dir, Manifest& man, std::ostream& log) {
  const auto& k = cfg.stationary;
  ShootOptions opt;
  opt.s0 = k.s0;
  opt.s_min = k.s_min;
  opt.tol = k.tol;
  const StationaryProfile prof = shoot_stable(k.x0, cfg.d, cfg.p, opt);
  const TailFit tail = fit_tail(prof);

  // the integrator keeps ~1e6 nodes; the CSV keeps at most ~20000 of them
  const std::size_t stride = std::max<std::size_t>(1, prof.size() / 20000);
  CsvWriter csv("stationary_profile", 1, {"r", "Z", "dZ_dr", "r_pow_d_minus_2_Z"});
  for (std::size_t i = 0; i < prof.size(); i += stride) csv.row({prof.r(i), prof.Z(i), prof.dZ(i), prof.tail_value(i)});
  csv.write(dir / "profile.csv");

  json rep{{"d", cfg.d},
           {"p", cfg.p},
           {"x0", k.x0},
           {"nodes", prof.size()},
           {"csv_stride", stride},
           {"ell", tail.ell},
           {"tail_rate", nullable(tail.rate_defined ? tail.rate : std::nan(""))},
           {"tail_rate_expected", cfg.d - cfg.p * (cfg.d - 2.0)},
           {"tail_window", {tail.window_lo, tail.window_hi}},
           {"forward_rate", prof.forward_rate},
           {"correction_slope", prof.correction_slope},
           {"elliptic_residual", elliptic_residual(prof, std::exp(std::max(-8.0, k.s_min)), std::exp(std::min(6.0, k.s0)))}};
  if (prof.s.front() <= std::log(1e-4)) {
    const SingularityReport sing = singularity_diagnostic(prof);
    rep["singularity"] = {{"envelope_floor", sing.envelope_floor}, {"envelope_non_decaying", sing.envelope_non_decaying},
                          {"energy_min", sing.energy_min},         {"eps", sing.eps},
                          {"lq_integrals", sing.lq_integrals},     {"lq_increasing", sing.lq_increasing},
                          {"lq_unsaturated", sing.lq_unsaturated}};
  }
  write_json(dir / "report.json", rep);
  man.add(dir / "profile.csv");
  man.add(dir / "report.json");
  log << "stationary: ell=" << tail.ell << " tail_rate=" << tail.rate << "\n";
  return kOk;
}

State evolve_datum(const ExperimentConfig& cfg, const GridPtr<double>& g) {
  const auto& k = cfg.evolve;
  if (k.datum == "plateau") {
    const double w = k.width;
    auto shape = [w](double r) { return 1.0 - smooth_step((r - 1.5 * w) / w); };
    return {Field::sample(g, [&](double r) { return k.amplitude * shape(r); }),
            Field::sample(g, [&](double r) { return k.velocity * shape(r); })};
  }
  return {central_bump(k.width, k.amplitude).sample(g), Field::zero(g)};
}

int run_evolve(const ExperimentConfig& cfg, const fs::path& dir, Manifest& man, std::ostream& log) {
  const auto& k = cfg.evolve;
  auto basis = make_basis(cfg);
  const ModelParams params = make_params(cfg.d, cfg.p);
  EvolveConfig ec;
  ec.dt = k.dt;
  ec.T = k.T;
  ec.save_every = k.save_every;
  ec.blowup_threshold = k.blowup_threshold;
  ec.reverse = k.reverse;
  const auto [traj, rep] = evolve(evolve_datum(cfg, basis->grid()), params, ec, *basis);
  write_history(rep, dir / "evolve.csv", "evolve_history");
  json out = run_json(rep);
  if (rep.outcome == Outcome::Completed && traj.size() >= 3) {
    const SpNorm sp = sp_norm(traj, params);
    out["sp_norm"] = sp.value;
    out["sp_norm_stride_change"] = sp.stride_change;
  }
  write_json(dir / "report.json", out);
  man.add(dir / "evolve.csv");
  man.add(dir / "report.json");
  log << "evolve: " << to_string(rep.outcome) << "\n";
  return kOk;
}

int run_levine(const ExperimentConfig& cfg, const fs::path& dir, Manifest& man, std::ostream& log) {
  const auto& k = cfg.levine;
  auto basis = make_basis(cfg);
  const ModelParams params = make_params(cfg.d, cfg.p);
  EvolveConfig ec;
  ec.dt = k.dt;
  ec.T = k.T;
  const State s{central_bump(k.width, k.amplitude).sample(basis->grid()), Field::zero(basis->grid())};
  const RunReport rep = levine_experiment(s, params, ec, *basis);
  write_history(rep, dir / "levine.csv", "levine_history");
  write_json(dir / "report.json", run_json(rep));
  man.add(dir / "levine.csv");
  man.add(dir / "report.json");
  log << "levine: E=" << rep.initial_energy << " " << to_string(rep.outcome) << "\n";
  return kOk;
}

int run_envelope(const ExperimentConfig& cfg, const fs::path& dir, Manifest& man, std::ostream& log) {
  const auto& k = cfg.envelope;
  auto basis = make_basis(cfg);
  const ModelParams params = make_params(cfg.d, cfg.p);
  const State s{central_bump(k.width, k.amplitude).sample(basis->grid()), Field::zero(basis->grid())};
  const EnvelopeReport env = envelope(s, params, *basis);
  CsvWriter csv("envelope", 1, {"j", "a", "beta"});
  for (std::size_t i = 0; i < env.j.size(); ++i) csv.row({double(env.j[i]), env.a[i], env.beta[i]});
  csv.write(dir / "envelope.csv");
  CsvWriter tails("tails", 1, {"eta", "c_eta", "C_eta", "degenerate"});
  for (double eta : k.eta) {
    const TailsReport t = tails_report(s, params, *basis, eta);
    tails.row({eta, t.c_eta, t.C_eta, double(t.degenerate)});
  }
  tails.write(dir / "tails.csv");
  write_json(dir / "report.json", {{"resolved_band", {env.band.j_min, env.band.j_max}},
                                   {"l2_weighted", env.l2_weighted},
                                   {"slow_variation", env.slow_variation},
                                   {"slow_variation_across_zero", env.slow_variation_across_zero}});
  for (const char* f : {"envelope.csv", "tails.csv", "report.json"}) man.add(dir / f);
  log << "envelope: band [" << env.band.j_min << ", " << env.band.j_max << "]\n";
  return kOk;
}

}  // namespace

std::vector<CriterionResult> verify_all(const ExperimentConfig& cfg, const fs::path& dir, Manifest* man, std::ostream& log) {
  SuiteContext ctx;
  ctx.seed = cfg.seed;
  ctx.cache_dir = cache_dir(cfg);
  std::vector<CriterionResult> results;
  for (auto fn : {channel_inequality, degenerate_direction, equality_cases, projection_algebra, stationary_family,
                  non_membership, nonlinear_solver, levine_criterion, virial_suite, harmonic_analysis}) {
    results.push_back(fn(ctx));
    log << results.back().summary() << "\n" << std::flush;
  }
  CsvWriter csv("verify", 1, {"criterion", "metric", "relation", "value", "threshold", "pass"});
  json all = json::array();
  for (const auto& r : results) {
    for (const auto& m : r.metrics)
      if (!m.timing) csv.row({std::to_string(r.id), m.name, m.relation}, {m.value, m.threshold, double(m.pass())});
    all.push_back(to_json(r));
  }
  csv.write(dir / "verify.csv");
  write_json(dir / "verify_report.json", {{"seed", cfg.seed}, {"criteria", all}});
  if (man) {
    man->add(dir / "verify.csv");
    man->add(dir / "verify_report.json");
  }
  return results;
}

int run(const json& doc, std::ostream& log) {
  const std::string exp = doc.value("experiment", std::string("unknown"));
  fs::path dir = doc.contains("output") && doc["output"].is_string() ? fs::path(doc["output"].get<std::string>()) : fs::path(exp);
  if (dir.is_relative())
    if (const char* root = std::getenv("RADIALWAVE_OUT"); root && *root) dir = fs::path(root) / dir;
  Manifest man(dir, doc);
  auto fail = [&](int code, const std::string& kind, const std::string& msg) {
    log << "error (" << kind << "): " << msg << "\n";
    const json err{{"kind", kind}, {"message", msg}, {"exit_code", code}};
    try {
      fs::create_directories(dir);
      write_json(dir / "error.json", err);
      man.add(dir / "error.json");
    } catch (...) {
    }
    man.finish(code, err);
    return code;
  };
  if (doc.contains("__config_error__")) return fail(kValidation, "ConfigError", doc["__config_error__"].get<std::string>());
  try {
    const ExperimentConfig cfg = parse_config(doc);
    validate(cfg);
    fs::create_directories(dir);
    int code = kOk;
    if (cfg.experiment == "channels")
      code = run_channels(cfg, dir, man, log);
    else if (cfg.experiment == "stationary")
      code = run_stationary(cfg, dir, man, log);
    else if (cfg.experiment == "evolve")
      code = run_evolve(cfg, dir, man, log);
    else if (cfg.experiment == "levine")
      code = run_levine(cfg, dir, man, log);
    else if (cfg.experiment == "envelope")
      code = run_envelope(cfg, dir, man, log);
    else {
      const auto res = verify_all(cfg, dir, &man, log);
      code = std::all_of(res.begin(), res.end(), [](const CriterionResult& r) { return r.pass(); }) ? kOk : kAcceptance;
    }
    man.finish(code);
    return code;
  } catch (const Error& e) {
    return fail(exit_code(e.kind()), to_string(e.kind()), e.what());
  } catch (const json::exception& e) {
    return fail(kValidation, "ConfigError", e.what());
  } catch (const std::exception& e) {
    return fail(kNumerical, "InternalError", e.what());
  }
}

}  // namespace lab
