#pragma once

#include <vector>

#include "radialwave/core.hpp"

namespace radialwave {

/// phi(s) = r Z(r) at s = log r, written as x = phi, y = dphi/ds.
struct OdeState {
  double s = 0.0;
  double x = 0.0;
  double y = 0.0;
};

/// (dx/ds, dy/ds) = (y, -(d-4) y + (d-3) x - |x|^{p-1} x e^{-(p-3)s})
Eigen::Vector2d ode_rhs(const OdeState& st, int d, int p);
/// Jacobian of ode_rhs at the origin.
Eigen::Matrix2d ode_linearization(int d);

struct ShootOptions {
  double s0 = 6.0;
  double s_min = -10.0;
  double tol = 1e-12;
  double forward_length = 4.0;  // e-foldings used to pin the seed to the stable manifold
  double max_step = 0.01;
  double oscillation_resolution = 0.03;  // step cap as a fraction of the local period / 2 pi
};

struct StationaryProfile {
  int d = 7;
  int p = 3;
  std::vector<double> s;     // increasing log-radius nodes
  std::vector<double> phi;   // phi(s)
  std::vector<double> dphi;  // dphi/ds
  double x0 = 0.0;
  double lam = 1.0;
  double ell = 0.0;               // limit of r^{d-2} Z, x0 * lam^{(d-2) - 2/(p-1)}
  double forward_rate = 0.0;      // fitted d log|phi| / ds on the forward check run
  double correction_slope = 0.0;  // log-log slope of |omega - x0 r^{-(d-3)}|
  double seed_correction = 0.0;   // unstable-direction Newton correction applied at s0

  std::size_t size() const { return s.size(); }
  double r(std::size_t i) const;
  double Z(std::size_t i) const;
  double dZ(std::size_t i) const;
  /// r^{d-2} Z
  double tail_value(std::size_t i) const;
};

StationaryProfile shoot_stable(double x0, int d, int p, const ShootOptions& opt = {});

/// Max over interior nodes of |Z'' + (d-1) Z'/r + |Z|^{p-1} Z| divided by
/// 1 + |Z''| + |(d-1) Z'/r| + |Z|^p, with Z'' from finite differences of phi'.
double elliptic_residual(const StationaryProfile& prof, double r_lo = 0.0, double r_hi = 1e300);

struct TailFit {
  double ell = 0.0;
  double rate = 0.0;
  bool rate_defined = false;
  double window_lo = 0.0;  // radii of the regression window
  double window_hi = 0.0;
  int window_points = 0;
};

TailFit fit_tail(const StationaryProfile& prof);

struct SingularityReport {
  double a = 0.0;
  bool trivial = false;
  std::vector<double> s;      // curve phi e^{-a s} on the first two units above s_min
  std::vector<double> curve;
  double envelope_floor = 0.0;  // min over windows of the windowed max of |phi e^{-a s}|
  bool envelope_non_decaying = false;
  double energy_min = 0.0;  // min of Q(s) near s_min
  std::vector<double> eps;
  std::vector<double> lq_integrals;  // int_eps^1 |Z|^{q_p} r^{d-1} dr
  bool lq_increasing = false;
  bool lq_unsaturated = false;
};

SingularityReport singularity_diagnostic(const StationaryProfile& prof);

StationaryProfile rescale(const StationaryProfile& prof, double lam);

}  // namespace radialwave
