#include <cmath>

#include "radialwave/linear_wave.hpp"
#include "radialwave/samples.hpp"
#include "support.hpp"

using namespace radialwave;
using testing::rel;

TEST_CASE("free flow of single modes and the group law") {
  const auto b = testing::basis(7, 512, 16.0);
  const auto& g = b->grid();
  const Field e = b->mode(17);
  const State s{e, Field::zero(g)};
  const State same = free_flow(s, 0.0, *b);
  CHECK((same.pos.values - e.values).norm() < 1e-14 * e.values.norm());

  const double w = b->frequencies()[17], t = 2.345;
  const State out = free_flow(s, t, *b);
  CHECK((out.pos.values - std::cos(t * w) * e.values).norm() < 1e-10 * e.values.norm());
  CHECK((out.vel.values + w * std::sin(t * w) * e.values).norm() < 1e-10 * w * e.values.norm());

  std::mt19937_64 rng(1);
  const State r = random_state(rng, 1.0, 8.0).sample(g);
  const State twice = free_flow(free_flow(r, 0.7, *b), 1.9, *b);
  const State once = free_flow(r, 2.6, *b);
  CHECK(std::sqrt(free_energy(twice - once, *b) / free_energy(r, *b)) < 1e-10);
}

TEST_CASE("free energy is conserved by the discrete flow") {
  const auto b = testing::basis(7, 512, 16.0);
  std::mt19937_64 rng(2);
  const State s = random_state(rng, 1.0, 6.0).sample(b->grid());
  const double e0 = free_energy(s, *b);
  CHECK(rel(free_energy(free_flow(s, 3.0, *b), *b), e0) < 1e-12);
  CHECK(free_energy(State::zero(b->grid()), *b) == 0.0);
}

TEST_CASE("Duhamel integral") {
  const auto b = testing::basis(7, 512, 16.0);
  const auto& g = b->grid();
  const State z = duhamel([&](double) { return Field::zero(g); }, 0.0, 1.0, *b, 8);
  CHECK(z.pos.values.norm() == 0.0);
  CHECK(z.vel.values.norm() == 0.0);

  const Eigen::Index k = 9;
  const Field e = b->mode(k);
  const double lam = b->eigenvalues()[k], t0 = 0.5, t1 = 2.0;
  const double exact = (1.0 - std::cos((t1 - t0) * std::sqrt(lam))) / lam;
  auto err = [&](int steps) {
    const State w = duhamel([&](double) { return e; }, t0, t1, *b, steps);
    return (w.pos.values - exact * e.values).norm() / (exact * e.values.norm());
  };
  CHECK(err(64) < 1e-6);
  // time-dependent source: Simpson error falls at least fourfold per halving
  auto ref = [&](int steps) {
    return duhamel([&](double t) { return std::cos(3.0 * t) * e; }, t0, t1, *b, steps).pos.values;
  };
  const Vec fine = ref(1024);
  const double e1 = (ref(16) - fine).norm(), e2 = (ref(32) - fine).norm();
  CHECK(e1 / e2 >= 4.0);
}

TEST_CASE("exterior energy") {
  const auto b = testing::basis(7, 512, 16.0);
  const auto& g = b->grid();
  CHECK(exterior_energy(State::zero(g), 1.0, 0.0) == 0.0);
  std::mt19937_64 rng(3);
  const State s = random_state(rng, 1.0, 5.0).sample(g);
  CHECK(rel(exterior_energy(s, 0.0, 0.0), 2.0 * free_energy(s)) < 1e-12);
  CHECK(exterior_energy(s, 5.5, 0.0) == 0.0);
}

TEST_CASE("finite speed of propagation") {
  const auto b = testing::basis(7, 1024, 16.0);
  const auto& g = b->grid();
  const State s{BumpSum{{Bump{3.0, 1.0, 1.0}}}.sample(g), Field::zero(g)};
  const State out = free_flow(s, 2.0, *b);
  // support [2, 4] reaches at most r = 6
  double leak = 0.0;
  for (Eigen::Index i = 0; i < g->size(); ++i)
    if (g->nodes()[i] > 7.0) leak = std::max(leak, std::abs(out.pos.values[i]));
  CHECK(leak < 1e-10 * s.pos.sup_norm());
}

TEST_CASE("plane elements evolve in closed form inside the exterior cone") {
  // d = 7, R = 4: (r^-3, 0) -> r^-3 - 3 t^2 r^-5 and (0, r^-5) -> t r^-5 on R + t <= r <= 30 - t
  auto error = [](long n, int exponent, bool velocity, double t) {
    const auto b = testing::basis(7, n, 40.0);
    const auto& g = b->grid();
    const Field f = PlaneDatum{7, exponent, 4.0}.sample(g);
    const State s = velocity ? State{Field::zero(g), f} : State{f, Field::zero(g)};
    const State out = free_flow(s, t, *b);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < g->size(); ++i) {
      const double r = g->nodes()[i];
      if (r < 4.0 + t || r > 30.0 - t) continue;
      const double exact = velocity         ? t * std::pow(r, -5)
                           : exponent == -5 ? std::pow(r, -5)
                                            : std::pow(r, -3) - 3 * t * t * std::pow(r, -5);
      worst = std::max(worst, std::abs(out.pos.values[i] - exact) / std::pow(r, exponent));
    }
    return worst;
  };
  for (auto [exponent, velocity] : {std::pair{-3, false}, std::pair{-5, true}}) {
    const double coarse = error(1024, exponent, velocity, 2.0);
    const double fine = error(2048, exponent, velocity, 2.0);
    CHECK(fine < 1e-3);
    CHECK(coarse / fine > 3.5);
  }
  // the harmonic element is static
  CHECK(error(2048, -5, false, 2.0) < 1e-3);
}

TEST_CASE("exterior vanishing scan") {
  const auto b = testing::basis(3, 512, 16.0);
  const auto& g = b->grid();
  Trajectory zero;
  for (double t : {0.0, 1.0, 2.0}) zero.push(t, State::zero(g));
  const auto scan = exterior_vanishing_scan(zero, 1.0);
  for (double v : scan.values) CHECK(v == 0.0);

  // outgoing wave in d = 3: the exterior norm settles once the data has left r < R + t
  const State s{BumpSum{{Bump{3.0, 1.0, 1.0}}}.sample(g), Field::zero(g)};
  Trajectory traj;
  for (double t = 0.0; t <= 8.0; t += 0.5) traj.push(t, free_flow(s, t, *b));
  const auto out = exterior_vanishing_scan(traj, 2.0);
  CHECK(rel(out.values[out.values.size() - 1], out.values[out.values.size() - 5]) < 1e-3);
}
