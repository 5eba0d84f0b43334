#include <cmath>

#include "radialwave/envelope.hpp"
#include "radialwave/samples.hpp"
#include "support.hpp"

using namespace radialwave;
using testing::rel;

TEST_CASE("v variable") {
  const auto b = testing::basis(7, 512, 16.0);
  const auto& g = b->grid();
  const Field u = central_bump(2.0).sample(g);
  const ComplexField v = make_v(State{u, Field::zero(g)}, *b);
  CHECK(v.re.values == u.values);
  CHECK(v.im.values.norm() == 0.0);

  const Eigen::Index k = 25;
  const Field e = b->mode(k);
  const ComplexField w = make_v(State{Field::zero(g), std::sqrt(b->eigenvalues()[k]) * e}, *b);
  CHECK(w.re.values.norm() == 0.0);
  CHECK((w.im.values - e.values).norm() < 1e-10);

  // ||v||_{H^s} equals the norm of (D^s u, D^{s-1} u_t)
  std::mt19937_64 rng(41);
  const ModelParams params = make_params(7, 3);
  for (int i = 0; i < 5; ++i) {
    const State s = random_state(rng, 1.0, 10.0).sample(g);
    const double lhs = complex_sobolev_norm(make_v(s, *b), params.s_p, *b);
    const double rhs = std::hypot(sobolev_norm(s.pos, params.s_p, *b), sobolev_norm(s.vel, params.s_p - 1, *b));
    CHECK(rel(lhs, rhs) < 1e-10);
  }
}

TEST_CASE("frequency envelope") {
  const auto b = testing::basis(7, 512, 16.0);
  const auto& g = b->grid();
  const ModelParams params = make_params(7, 3);
  const EnvelopeReport z = envelope(State::zero(g), params, *b);
  REQUIRE(z.band.j_min < 0);
  for (std::size_t i = 0; i < z.j.size(); ++i) {
    CHECK(z.a[i] == 0.0);
    CHECK(z.beta[i] == (z.j[i] < 0 ? 0.0 : 1.0));
  }

  std::mt19937_64 rng(42);
  const State s = random_state(rng, 1.0, 10.0).sample(g);
  const EnvelopeReport rep = envelope(s, params, *b);
  for (std::size_t k = 0; k < rep.j.size(); ++k) {
    if (rep.j[k] >= 0) {
      CHECK(rep.beta[k] == 1.0);
      continue;
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < rep.j.size(); ++j) sum += std::exp2(-std::abs(rep.j[j] - rep.j[k])) * rep.a[j];
    CHECK(rel(rep.beta[k], sum) < 1e-12);
  }
  CHECK(rep.slow_variation);
  for (std::size_t k = 1; k < rep.j.size(); ++k)
    if ((rep.j[k] < 0) == (rep.j[k - 1] < 0)) {
      CHECK(rep.beta[k] <= 2.0 * rep.beta[k - 1]);
      CHECK(rep.beta[k - 1] <= 2.0 * rep.beta[k]);
    }
}

TEST_CASE("envelope l2 sum is stable under grid refinement") {
  const ModelParams params = make_params(7, 3);
  const BumpSum bump = central_bump(3.0);
  auto weighted = [&](long n) {
    const auto b = testing::basis(7, n, 32.0);
    return envelope(State{bump.sample(b->grid()), Field::zero(b->grid())}, params, *b).l2_weighted;
  };
  CHECK(rel(weighted(1024), weighted(512)) < 0.02);
}

TEST_CASE("uniform tails") {
  const auto b = testing::basis(7, 512, 16.0);
  const auto& g = b->grid();
  const ModelParams params = make_params(7, 3);
  const State bump{central_bump(3.0).sample(g), Field::zero(g)};
  const TailsReport whole = tails_report(bump, params, *b, 1e3);
  CHECK(whole.degenerate);

  const Eigen::Index k = 30;
  const TailsReport mode = tails_report(State{b->mode(k), Field::zero(g)}, params, *b, 0.1);
  CHECK(mode.c_eta <= b->frequencies()[k]);
  CHECK(mode.C_eta >= b->frequencies()[k]);

  double last = 0.0;
  for (double eta : {0.3, 0.1, 0.03}) {
    const TailsReport t = tails_report(bump, params, *b, eta);
    CHECK_FALSE(t.degenerate);
    CHECK(t.C_eta >= last);
    last = t.C_eta;
  }
}

TEST_CASE("radial Sobolev exponents") {
  // p = 2, s = 1, beta = 0: the scaling relation fixes q' = 2.8
  const double qp = 2.8, q = qp / (qp - 1.0);
  CHECK_NOTHROW(validate_radial_sobolev(7, 1.0, 0.0, 2.0, q));
  testing::expect_error(ErrorKind::InvalidExponents, [&] { validate_radial_sobolev(7, 1.0, 0.5, 2.0, q); });
  testing::expect_error(ErrorKind::InvalidExponents, [&] { validate_radial_sobolev(7, 7.0, 0.0, 2.0, q); });
  testing::expect_error(ErrorKind::InvalidExponents, [&] { validate_radial_sobolev(7, 1.0, -10.0, 2.0, 1.2); });
  testing::expect_error(ErrorKind::InvalidExponents, [&] { validate_radial_sobolev(7, 1.0, 0.0, 0.5, q); });

  const auto b = testing::basis(7, 1024, 16.0);
  const auto& g = b->grid();
  CHECK(std::isfinite(radial_sobolev_check(b->mode(0), 1.0, 0.0, 2.0, q, *b)));
  // endpoint || r^{(d-2)/2} f ||_inf <~ ||f||_{H^1}: q = 1, q' = infinity
  std::mt19937_64 rng(43);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Field f = random_bumps(rng, 0.5, 12.0, 3).sample(g);
    const double r = radial_sobolev_check(f, 1.0, 2.5, 2.0, 1.0, *b);
    CHECK(std::isfinite(r));
    worst = std::max(worst, r);
  }
  CHECK(worst > 0.0);
}
