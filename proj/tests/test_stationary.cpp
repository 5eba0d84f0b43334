#include <cmath>

#include <Eigen/Eigenvalues>

#include "radialwave/samples.hpp"
#include "radialwave/stationary.hpp"
#include "support.hpp"

using namespace radialwave;
using testing::rel;

namespace {

const StationaryProfile& shot() {
  static const StationaryProfile prof = shoot_stable(0.01, 7, 3);
  return prof;
}

}  // namespace

TEST_CASE("profile ODE right-hand side") {
  const Eigen::Vector2d eq = ode_rhs({0.3, 0.0, 0.0}, 7, 3);
  CHECK(eq.norm() == 0.0);
  const Eigen::Vector2d f = ode_rhs({1.7, 1.0, 0.0}, 7, 3);
  CHECK(f[0] == 0.0);
  CHECK(f[1] == doctest::Approx(3.0));
  Eigen::EigenSolver<Eigen::Matrix2d> es(ode_linearization(7));
  std::vector<double> ev{es.eigenvalues()[0].real(), es.eigenvalues()[1].real()};
  std::sort(ev.begin(), ev.end());
  CHECK(ev[0] == doctest::Approx(-4.0));
  CHECK(ev[1] == doctest::Approx(1.0));
}

TEST_CASE("zero seed gives the zero profile") {
  const StationaryProfile z = shoot_stable(0.0, 7, 3);
  for (double v : z.phi) CHECK(v == 0.0);
  CHECK(elliptic_residual(z) == 0.0);
  const TailFit t = fit_tail(z);
  CHECK(t.ell == 0.0);
  CHECK_FALSE(t.rate_defined);
  CHECK(singularity_diagnostic(z).trivial);
}

TEST_CASE("shot profile: residual, rates and odd symmetry") {
  const StationaryProfile& p = shot();
  CHECK(p.s.front() <= -10.0 + 1e-12);
  CHECK(elliptic_residual(p, std::exp(-8.0), std::exp(6.0)) < 1e-6);
  CHECK(std::abs(p.forward_rate + 4.0) < 0.2);
  CHECK(std::abs(p.correction_slope + 12.0) < 1.2);
  const TailFit t = fit_tail(p);
  REQUIRE(t.rate_defined);
  CHECK(std::abs(t.rate + 8.0) < 0.8);
  CHECK(rel(t.ell, 0.01) < 1e-3);

  const StationaryProfile m = shoot_stable(-0.01, 7, 3);
  REQUIRE(m.size() == p.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) worst = std::max(worst, std::abs(m.phi[i] + p.phi[i]));
  CHECK(worst == 0.0);
}

TEST_CASE("residual detects a perturbed profile") {
  StationaryProfile q = shot();
  const Bump bump{1.0, 0.5, 1e-3};
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double r = q.r(i);
    q.phi[i] += r * bump.value(r);
    q.dphi[i] += r * (bump.value(r) + r * bump.derivative(r));
  }
  CHECK(elliptic_residual(q, std::exp(-8.0), std::exp(6.0)) > 1e-4);
}

TEST_CASE("scaling") {
  const StationaryProfile& p = shot();
  const StationaryProfile same = rescale(p, 1.0);
  CHECK(same.phi == p.phi);
  CHECK(same.s == p.s);
  const StationaryProfile big = rescale(p, 2.0);
  CHECK(rel(big.ell, 16.0 * p.ell) < 1e-12);
  CHECK(rel(fit_tail(big).ell, 16.0 * fit_tail(p).ell) < 1e-6);
  CHECK(elliptic_residual(big, std::exp(-7.0), std::exp(6.0)) < 1e-6);
  testing::expect_error(ErrorKind::InvalidParams, [&] { rescale(p, -1.0); });
}

TEST_CASE("singularity diagnostic") {
  const SingularityReport rep = singularity_diagnostic(shot());
  CHECK_FALSE(rep.trivial);
  CHECK(rep.envelope_non_decaying);
  CHECK(rep.envelope_floor > 0.0);
  CHECK(rep.lq_increasing);
  CHECK(rep.lq_unsaturated);
  REQUIRE(rep.eps.size() >= 4);
  CHECK(rep.eps.front() / rep.eps.back() >= 1e3);
}
