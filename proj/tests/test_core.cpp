#include <cmath>

#include "radialwave/samples.hpp"
#include "lab/oracles.hpp"
#include "support.hpp"

using namespace radialwave;
using testing::rel;

TEST_CASE("model parameters") {
  const ModelParams a = make_params(7, 3);
  CHECK(a.s_p == doctest::Approx(2.5));
  CHECK(a.q_p == doctest::Approx(7.0));
  CHECK(a.beta == doctest::Approx(3.0));
  CHECK(make_params(3, 5).s_p == doctest::Approx(1.0));
  testing::expect_error(ErrorKind::InvalidParams, [] { make_params(8, 3); });
  testing::expect_error(ErrorKind::InvalidParams, [] { make_params(7, 4); });
  for (int d : {7, 9, 11})
    for (int p : {3, 5, 7}) {
      const ModelParams m = make_params(d, p);
      CHECK(m.s_p > 1.0);
      CHECK(m.beta > 0.0);
    }
}

TEST_CASE("grid nodes and weights") {
  for (int d : {1, 3, 7}) {
    const auto g = Grid::uniform(d, 301, 5.0);
    CHECK(g->nodes()[0] == 0.0);
    CHECK(g->nodes()[300] == 5.0);
    for (Eigen::Index i = 1; i < g->size(); ++i) CHECK(g->nodes()[i] > g->nodes()[i - 1]);
    for (Eigen::Index i = 1; i < g->size(); ++i) CHECK(g->weights()[i] > 0.0);
    CHECK(rel(g->weights().sum(), std::pow(5.0, d) / d) < 1e-10);
  }
}

TEST_CASE("weighted L2 examples") {
  const auto g3 = Grid::uniform(3, 101, 1.0);
  const Field one = Field::sample(g3, [](double) { return 1.0; });
  CHECK(weighted_l2(Field::zero(g3), Field::zero(g3)) == 0.0);
  CHECK(rel(weighted_l2(one, one), 1.0 / 3.0) < 1e-12);
  const auto g7 = Grid::uniform(7, 201, 2.0);
  const Field r = Field::sample(g7, [](double x) { return x; });
  CHECK(rel(weighted_l2(r, r), std::pow(2.0, 9) / 9.0) < 1e-10);
}

TEST_CASE("H1 seminorm examples") {
  const auto g3 = Grid::uniform(3, 101, 1.0);
  CHECK(h1_seminorm_sq(Field::sample(g3, [](double) { return 2.0; })) == doctest::Approx(0.0).epsilon(1e-14));
  // f = r is not even, so the parity closure at the origin costs a little
  CHECK(rel(h1_seminorm_sq(Field::sample(g3, [](double x) { return x; })), 1.0 / 3.0) < 1e-5);
  // r^{2-d} for d = 7 on [1, 2]: 25 int_1^2 r^{-6} dr; values below r = 1/2 never enter the stencils
  const auto g7 = Grid::uniform(7, 2001, 2.0);
  const Field f = Field::sample(g7, [](double x) { return x < 0.5 ? 32.0 : std::pow(x, -5.0); });
  CHECK(rel(h1_seminorm_sq(f, 1.0), 5.0 * (1.0 - std::pow(2.0, -5))) < 1e-8);
}

TEST_CASE("energy pair norm") {
  const auto g = Grid::uniform(7, 1025, 16.0);
  CHECK(energy_pair_norm(State::zero(g)) == 0.0);
  const Field v = central_bump(3.0).sample(g);
  CHECK(rel(energy_pair_norm(State{Field::zero(g), v}), std::sqrt(weighted_l2(v, v))) < 1e-14);

  std::mt19937_64 rng(11);
  const auto fine = Grid::uniform(7, 4097, 16.0);
  for (int i = 0; i < 5; ++i) {
    const AnalyticState as = random_state(rng, 1.0, 10.0);
    const double ref = std::sqrt(lab::oracle::exterior_norm_sq(as, 7, 0.0));
    CHECK(rel(energy_pair_norm(as.sample(fine)), ref) < 1e-6);
  }
}

TEST_CASE("quadrature and derivative converge at sixth order") {
  const BumpSum f{{Bump{5.0, 3.0, 1.0}}};
  auto errors = [&](long n) {
    const auto g = Grid::uniform(7, n, 12.0);
    const Field s = f.sample(g);
    // int f r^6 dr from r = 3.3 (off-node) by Gauss-Kronrod
    const double ref = lab::oracle::integrate([&](double r) { return f.value(r) * std::pow(r, 6); }, 3.3, 5.0) +
                       lab::oracle::integrate([&](double r) { return f.value(r) * std::pow(r, 6); }, 5.0, 8.0);
    const double quad = std::abs(s.values.dot(g->weights(3.3)) - ref) / std::abs(ref);
    const Vec df = g->derivative(s.values);
    double der = 0.0;
    for (Eigen::Index i = 0; i < g->size(); ++i) der = std::max(der, std::abs(df[i] - f.derivative(g->nodes()[i])));
    return std::pair{quad, der};
  };
  const auto [q1, d1] = errors(481);
  const auto [q2, d2] = errors(961);
  CHECK(q1 / q2 > 32.0);
  CHECK(d1 / d2 > 32.0);
}

TEST_CASE("derivative uses parity at the origin and one-sided stencils at the edge") {
  const auto g = Grid::uniform(3, 201, 2.0);
  // even quintic-free polynomial: exact up to degree six away from the edge
  const Field f = Field::sample(g, [](double r) { return 1.0 + r * r - 0.3 * std::pow(r, 4) + 0.1 * std::pow(r, 6); });
  const Vec df = g->derivative(f.values);
  for (Eigen::Index i = 0; i < g->size(); ++i) {
    const double r = g->nodes()[i];
    CHECK(df[i] == doctest::Approx(2 * r - 1.2 * std::pow(r, 3) + 0.6 * std::pow(r, 5)).epsilon(1e-9));
  }
}

TEST_CASE("interpolation reproduces quintics") {
  const auto g = Grid::uniform(5, 64, 3.0);
  auto poly = [](double r) { return 1.0 - r + 0.5 * r * r + 0.2 * std::pow(r, 3) - 0.1 * std::pow(r, 5); };
  const Field f = Field::sample(g, poly);
  for (double r : {0.0, 0.011, 0.7, 1.234, 2.95, 3.0}) CHECK(g->interpolate(f.values, r) == doctest::Approx(poly(r)).epsilon(1e-12));
}

TEST_CASE("grid mismatches are rejected") {
  const auto a = Grid::uniform(7, 64, 4.0);
  const auto b = Grid::uniform(7, 65, 4.0);
  testing::expect_error(ErrorKind::GridMismatch, [&] { (void)(Field::zero(a) + Field::zero(b)); });
  testing::expect_error(ErrorKind::RegionError, [&] { (void)a->plain_weights(5.0); });
}
