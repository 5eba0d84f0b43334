#include <cmath>

#include "radialwave/nonlinear.hpp"
#include "radialwave/ode.hpp"
#include "radialwave/samples.hpp"
#include "lab/oracles.hpp"
#include "support.hpp"

using namespace radialwave;
using testing::rel;

namespace {

Field plateau(const GridPtr<double>& g, double c) {
  return Field::sample(g, [c](double r) { return c * (1.0 - smooth_step((r - 3.0) / 2.0)); });
}

// a * s with zero grid energy: E(a s) = a^2 A - a^{p+1} B
State zero_energy(const State& s, const ModelParams& params) {
  const double A = 0.5 * (weighted_l2(s.vel, s.vel) + h1_seminorm_sq(s.pos));
  const double B = std::pow(lq_norm(s.pos, double(params.p + 1)), params.p + 1) / (params.p + 1);
  return std::pow(A / B, 1.0 / (params.p - 1)) * s;
}

}  // namespace

TEST_CASE("Dormand-Prince is fifth order") {
  using DP = DormandPrince<1>;
  const DP::Rhs f = [](double t, const DP::V& y) { return DP::V(std::cos(t) * y); };
  auto err = [&](double h) {
    DP::V y = DP::V::Constant(1.0);
    double t = 0.0;
    for (int i = 0; i < int(std::round(2.0 / h)); ++i, t += h) y = DP::step(f, t, y, h).y;
    return std::abs(y[0] - std::exp(std::sin(2.0)));
  };
  CHECK(err(0.1) / err(0.05) > 25.0);

  DP::Options opt;
  opt.rtol = 1e-12;
  const auto res = DP::integrate(f, 0.0, DP::V::Constant(1.0), 5.0, opt);
  CHECK(res.status == DP::Status::Done);
  CHECK(rel(res.y[0], std::exp(std::sin(5.0))) < 1e-10);
}

TEST_CASE("zero data and trivial energies") {
  const auto b = testing::basis(7, 256, 8.0);
  const auto& g = b->grid();
  const ModelParams params = make_params(7, 3);
  EvolveConfig cfg;
  cfg.T = 0.2;
  const auto [traj, rep] = evolve(State::zero(g), params, cfg, *b);
  CHECK(rep.outcome == Outcome::Completed);
  for (const auto& s : traj.states) CHECK(s.pos.sup_norm() + s.vel.sup_norm() == 0.0);

  CHECK(conserved_energy(State::zero(g), params) == 0.0);
  const Field v = central_bump(2.0).sample(g);
  CHECK(rel(conserved_energy(State{Field::zero(g), v}, params), 0.5 * weighted_l2(v, v)) < 1e-14);
  const Virial vz = virial(State::zero(g), params);
  CHECK(vz.y == 0.0);
  CHECK(vz.y_prime == 0.0);
  CHECK(vz.y_second == 0.0);
  CHECK(cauchy_schwarz_check(State::zero(g), params).margin == 0.0);
  CHECK(critical_norm(State::zero(g), params, *b) == 0.0);
  Trajectory empty;
  empty.params = params;
  for (double t : {0.0, 0.5, 1.0}) empty.push(t, State::zero(g));
  CHECK(sp_norm(empty, params).value == 0.0);
}

TEST_CASE("focusing term") {
  Vec u(3);
  u << -2.0, 0.0, 1.5;
  const Vec f = focusing_term(u, 3);
  CHECK(f[0] == -8.0);
  CHECK(f[1] == 0.0);
  CHECK(f[2] == doctest::Approx(3.375));
}

TEST_CASE("plateau data follow the scalar ODE at the origin") {
  const auto b = testing::basis(7, 1024, 16.0);
  const auto& g = b->grid();
  const ModelParams params = make_params(7, 3);
  EvolveConfig cfg;
  cfg.dt = 1e-3;
  cfg.T = 1.5;
  const auto [traj, rep] = evolve(State{plateau(g, 1.0), Field::zero(g)}, params, cfg, *b);
  const auto ref = lab::oracle::scalar_ode(1.0, 0.0, 3, traj.times);
  double err = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) err = std::max(err, rel(traj.states[i].pos.values[0], ref[i]));
  CHECK(err < 1e-4);
}

TEST_CASE("explicit ODE blow-up") {
  CHECK(ode_blowup_constant(3) == doctest::Approx(std::sqrt(2.0)));
  CHECK(ode_blowup_constant(5) == doctest::Approx(std::pow(12.0 / 16.0, 0.25)));
  const auto b = testing::basis(7, 1024, 16.0);
  const auto& g = b->grid();
  const double c = ode_blowup_constant(3);
  EvolveConfig cfg;
  cfg.dt = 1e-3;
  cfg.T = 1.5;
  const auto [traj, rep] = evolve(State{plateau(g, c), plateau(g, c)}, make_params(7, 3), cfg, *b);
  REQUIRE(rep.outcome == Outcome::BlowupDetected);
  CHECK(std::abs(*rep.blowup_time - 1.0) < 0.05);
}

TEST_CASE("energy drift is second order in dt") {
  const auto b = testing::basis(7, 512, 16.0);
  const State s{central_bump(2.0, 0.5).sample(b->grid()), Field::zero(b->grid())};
  auto drift = [&](double dt) {
    EvolveConfig cfg;
    cfg.dt = dt;
    cfg.T = 1.0;
    cfg.save_every = 50;
    return evolve(s, make_params(7, 3), cfg, *b).second.energy_drift;
  };
  CHECK(drift(4e-3) / drift(2e-3) >= 4.0 * 0.9);
  CHECK(drift(2e-3) < 1e-5);
}

TEST_CASE("virial identities") {
  const auto g = Grid::uniform(7, 1024, 16.0);
  const ModelParams params = make_params(7, 3);
  std::mt19937_64 rng(31);
  const State s = zero_energy(random_state(rng, 1.0, 6.0).sample(g), params);
  REQUIRE(std::abs(conserved_energy(s, params)) < 1e-10 * weighted_l2(s.vel, s.vel));
  const Virial v = virial(s, params);
  const double alt = (params.p + 3) * weighted_l2(s.vel, s.vel) + (params.p - 1) * h1_seminorm_sq(s.pos);
  CHECK(rel(v.y_second, alt) < 1e-8);
  CHECK(cauchy_schwarz_check(s, params).margin >= -1e-6);

  // at rest: y' = 0 and the margin is (4/(p+3)) y y''
  const State rest = zero_energy(State{random_state(rng, 1.0, 6.0).sample(g).pos, Field::zero(g)}, params);
  const Virial vr = virial(rest, params);
  const CauchySchwarzMargin m = cauchy_schwarz_check(rest, params);
  CHECK(vr.y_prime == 0.0);
  CHECK(rel(m.margin, 4.0 / (params.p + 3) * vr.y * vr.y_second) < 1e-12);
  CHECK(m.margin >= 0.0);

  testing::expect_error(ErrorKind::PreconditionError, [&] { cauchy_schwarz_check(2.0 * rest, params); });
}

TEST_CASE("space-time norm") {
  const auto g = Grid::uniform(7, 512, 8.0);
  const ModelParams params = make_params(7, 3);
  const State s{central_bump(2.0).sample(g), Field::zero(g)};
  Trajectory traj;
  traj.params = params;
  for (int i = 0; i <= 10; ++i) traj.push(0.3 * i, s);
  const double q = 2.0 * (params.p - 1), r = 2.0 * params.d * (params.p - 1) / 3.0;
  CHECK(rel(sp_norm(traj, params).value, std::pow(3.0, 1.0 / q) * lq_norm(s.pos, r)) < 1e-12);
}

TEST_CASE("critical norm is scale invariant") {
  const auto b = testing::basis(7, 2048, 32.0);
  const auto& g = b->grid();
  const ModelParams params = make_params(7, 3);
  const BumpSum u{{Bump{4.0, 2.0, 1.0}}};
  const double base = critical_norm(State{u.sample(g), Field::zero(g)}, params, *b);
  for (double lam : {0.5, 2.0}) {
    const double a = std::pow(lam, -2.0 / (params.p - 1));
    const Field scaled = Field::sample(g, [&](double r) { return a * u.value(r / lam); });
    CHECK(rel(critical_norm(State{scaled, Field::zero(g)}, params, *b), base) < 0.02);
  }
  CHECK(rel(critical_norm(State{b->mode(40), Field::zero(g)}, params, *b), std::pow(b->eigenvalues()[40], params.s_p / 2)) <
        1e-10);
}

TEST_CASE("scattering fit") {
  const auto b = testing::basis(7, 512, 16.0);
  const auto& g = b->grid();
  const ModelParams params = make_params(7, 3);
  const State s{central_bump(2.0).sample(g), Field::zero(g)};
  Trajectory free;
  free.params = params;
  for (int i = 0; i <= 8; ++i) free.push(0.25 * i, free_flow(s, 0.25 * i, *b));
  const auto fit = scattering_fit(free, *b);
  const double scale = critical_norm(s, params, *b);
  for (double r : fit.residual) CHECK(r < 1e-9 * scale);

  // nonlinear correction is O(eps^p): residual / eps shrinks like eps^{p-1}
  auto mid_residual = [&](double eps) {
    EvolveConfig cfg;
    cfg.dt = 2e-3;
    cfg.T = 2.0;
    cfg.save_every = 50;
    const auto [traj, rep] = evolve(eps * s, params, cfg, *b);
    const auto f = scattering_fit(traj, *b);
    return f.residual[f.residual.size() / 2] / (eps * scale);
  };
  const double ratio = mid_residual(1e-2) / mid_residual(1e-3);
  CHECK(ratio > 50.0);
  CHECK(ratio < 200.0);
}

TEST_CASE("Levine experiment guards") {
  const auto b = testing::basis(7, 512, 16.0);
  const auto& g = b->grid();
  const ModelParams params = make_params(7, 3);
  EvolveConfig cfg;
  cfg.T = 1.0;
  testing::expect_error(ErrorKind::PreconditionError,
                        [&] { levine_experiment(State{central_bump(2.0, 0.5).sample(g), Field::zero(g)}, params, cfg, *b); });
  const State big{central_bump(2.0, 10.0).sample(g), Field::zero(g)};
  CHECK(conserved_energy(big, params, *b) < 0.0);
  cfg.T = 2.0;
  const auto [traj, rep] = evolve(big, params, cfg, *b);
  CHECK(rep.outcome == Outcome::BlowupDetected);
  testing::expect_error(ErrorKind::PreconditionError, [&] { scattering_fit(traj, *b); });
}
