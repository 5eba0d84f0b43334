#include "radialwave/linear_wave.hpp"

#include <cmath>

namespace radialwave {

void Trajectory::push(double t, State s) {
  require(times.empty() || t > times.back(), ErrorKind::InvalidParams, "trajectory times must increase");
  require(states.empty() || s.grid()->same_as(*states.front().grid()), ErrorKind::GridMismatch,
          "trajectory states on different grids");
  times.push_back(t);
  states.push_back(std::move(s));
}

ModalState to_modal(const State& s, const SpectralBasis& basis) {
  require(s.grid()->same_as(*basis.grid()), ErrorKind::GridMismatch, "state and basis grids differ");
  Eigen::MatrixXd f(s.pos.size(), 2);
  f.col(0) = s.pos.values;
  f.col(1) = s.vel.values;
  const Eigen::MatrixXd c = basis.analyze(f);
  return {c.col(0), c.col(1)};
}

State from_modal(const ModalState& m, const SpectralBasis& basis) {
  Eigen::MatrixXd c(m.a.size(), 2);
  c.col(0) = m.a;
  c.col(1) = m.b;
  const Eigen::MatrixXd f = basis.synthesize(c);
  return {Field(basis.grid(), f.col(0)), Field(basis.grid(), f.col(1))};
}

void advance_modal(ModalState& m, double t, const SpectralBasis& basis) {
  if (t == 0.0) return;
  const Vec& w = basis.frequencies();
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    const double c = std::cos(t * w[k]);
    const double s = std::sin(t * w[k]);
    const double a = m.a[k], b = m.b[k];
    m.a[k] = a * c + b * s / w[k];
    m.b[k] = -a * w[k] * s + b * c;
  }
}

State free_flow(const State& s0, double t, const SpectralBasis& basis) {
  if (t == 0.0) return s0;
  ModalState m = to_modal(s0, basis);
  advance_modal(m, t, basis);
  return from_modal(m, basis);
}

double free_energy(const State& s, const SpectralBasis& basis) {
  const ModalState m = to_modal(s, basis);
  return 0.5 * (basis.eigenvalues().dot(m.a.cwiseAbs2()) + m.b.squaredNorm());
}

double free_energy(const State& s) {
  return 0.5 * (h1_seminorm_sq(s.pos) + weighted_l2(s.vel, s.vel));
}

State duhamel(const SourceFn& source, double t0, double t1, const SpectralBasis& basis, int steps) {
  require(t1 >= t0, ErrorKind::InvalidParams, "duhamel needs t1 >= t0");
  require(steps >= 2 && steps % 2 == 0, ErrorKind::InvalidParams, "Simpson rule needs an even step count");
  const Eigen::Index m = basis.size();
  const Vec& w = basis.frequencies();
  ModalState acc{Vec::Zero(m), Vec::Zero(m)};
  if (t1 == t0) return from_modal(acc, basis);
  const double dt = (t1 - t0) / steps;
  for (int n = 0; n <= steps; ++n) {
    const double s = t0 + n * dt;
    const Field h = source(s);
    require(h.grid && h.grid->same_as(*basis.grid()), ErrorKind::SourceError, "source on a different grid");
    require(h.is_finite(), ErrorKind::SourceError, "non-finite source sample");
    const double wt = (n == 0 || n == steps) ? 1.0 : (n % 2 ? 4.0 : 2.0);
    const Vec hk = basis.analyze(h.values);
    for (Eigen::Index k = 0; k < m; ++k) {
      const double arg = (t1 - s) * w[k];
      acc.a[k] += wt * std::sin(arg) / w[k] * hk[k];
      acc.b[k] += wt * std::cos(arg) * hk[k];
    }
  }
  acc.a *= dt / 3.0;
  acc.b *= dt / 3.0;
  return from_modal(acc, basis);
}

double exterior_energy(const State& s, double R, double t) {
  const double r0 = R + std::abs(t);
  require(R >= 0.0 && r0 < s.grid()->r_max(), ErrorKind::RegionError, "exterior region outside the grid");
  return h1_seminorm_sq(s.pos, r0) + weighted_l2(s.vel, s.vel, r0);
}

VanishingScan exterior_vanishing_scan(const Trajectory& traj, double R) {
  VanishingScan scan;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.times[i];
    scan.times.push_back(t);
    scan.values.push_back(energy_pair_norm(traj.states[i], R + std::abs(t)));
  }
  for (std::size_t i = 1; i < scan.values.size(); ++i)
    if (scan.values[i] > scan.values[i - 1] * (1.0 + 1e-9) + 1e-14) scan.non_increasing = false;
  if (!scan.values.empty()) {
    scan.first = scan.values.front();
    scan.last = scan.values.back();
  }
  return scan;
}

}  // namespace radialwave
