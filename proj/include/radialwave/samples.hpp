#pragma once

#include <random>
#include <vector>

#include "radialwave/core.hpp"

namespace radialwave {

/// amp * exp(1 - 1/(1 - x^2)), x = (r - center)/width; C-infinity, support |x| < 1.
struct Bump {
  double center = 0.0;
  double width = 1.0;
  double amp = 1.0;

  double value(double r) const;
  double derivative(double r) const;
};

/// Finite sum of bumps, evaluated analytically (used both to sample fields and
/// as an exact reference in tests).
struct BumpSum {
  std::vector<Bump> bumps;

  double value(double r) const;
  double derivative(double r) const;
  Field sample(const GridPtr<double>& grid) const;
  /// support hull [lo, hi]
  double lo() const;
  double hi() const;
};

/// C-infinity step: 0 for x <= 0, 1 for x >= 1.
double smooth_step(double x);
double smooth_step_derivative(double x);

/// `count` random bumps lying inside [lo, hi]; amplitudes are N(0,1).
BumpSum random_bumps(std::mt19937_64& rng, double lo, double hi, int count);

struct AnalyticState {
  BumpSum pos;
  BumpSum vel;
  State sample(const GridPtr<double>& grid) const { return {pos.sample(grid), vel.sample(grid)}; }
};

AnalyticState random_state(std::mt19937_64& rng, double lo, double hi, int count = 4);

/// Smooth even bump centred at the origin, amp * psi(r / width).
BumpSum central_bump(double width, double amp = 1.0);

/// A P(R) direction r^{2i-d} cut off smoothly: unchanged on [R, outer_lo], zero
/// for r <= R/2 and r >= outer_hi. On r >= R and below outer_lo it is exactly
/// the plane element, which is all that the exterior flow sees.
struct PlaneDatum {
  int d = 7;
  int exponent = -5;  // 2i - d
  double R = 4.0;
  double outer_lo = 30.0;
  double outer_hi = 36.0;

  double value(double r) const;
  double derivative(double r) const;
  Field sample(const GridPtr<double>& grid) const;
};

}  // namespace radialwave
