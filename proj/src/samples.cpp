#include "radialwave/samples.hpp"

#include <algorithm>
#include <cmath>

namespace radialwave {

double Bump::value(double r) const {
  const double x = (r - center) / width;
  if (std::abs(x) >= 1.0) return 0.0;
  return amp * std::exp(1.0 - 1.0 / (1.0 - x * x));
}

double Bump::derivative(double r) const {
  const double x = (r - center) / width;
  if (std::abs(x) >= 1.0) return 0.0;
  const double q = 1.0 - x * x;
  return amp * std::exp(1.0 - 1.0 / q) * (-2.0 * x / (q * q)) / width;
}

double BumpSum::value(double r) const {
  double v = 0.0;
  for (const auto& b : bumps) v += b.value(r);
  return v;
}

double BumpSum::derivative(double r) const {
  double v = 0.0;
  for (const auto& b : bumps) v += b.derivative(r);
  return v;
}

Field BumpSum::sample(const GridPtr<double>& grid) const {
  return Field::sample(grid, [this](double r) { return value(r); });
}

double BumpSum::lo() const {
  double v = std::numeric_limits<double>::infinity();
  for (const auto& b : bumps) v = std::min(v, b.center - b.width);
  return v;
}

double BumpSum::hi() const {
  double v = -std::numeric_limits<double>::infinity();
  for (const auto& b : bumps) v = std::max(v, b.center + b.width);
  return v;
}

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

double smooth_step_derivative(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  const double da = a / (x * x);
  const double db = -b / ((1.0 - x) * (1.0 - x));
  return (da * b - a * db) / ((a + b) * (a + b));
}

BumpSum random_bumps(std::mt19937_64& rng, double lo, double hi, int count) {
  require(hi > lo, ErrorKind::InvalidParams, "empty bump interval");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double span = hi - lo;
  BumpSum out;
  for (int i = 0; i < count; ++i) {
    const double width = span * (0.15 + 0.35 * unit(rng));
    const double center = lo + width + (span - 2.0 * width) * unit(rng);
    out.bumps.push_back({center, width, gauss(rng)});
  }
  return out;
}

AnalyticState random_state(std::mt19937_64& rng, double lo, double hi, int count) {
  AnalyticState s;
  s.pos = random_bumps(rng, lo, hi, count);
  s.vel = random_bumps(rng, lo, hi, count);
  return s;
}

BumpSum central_bump(double width, double amp) { return BumpSum{{Bump{0.0, width, amp}}}; }

double PlaneDatum::value(double r) const {
  if (r <= 0.5 * R || r >= outer_hi) return 0.0;
  const double inner = smooth_step((r - 0.5 * R) / (0.5 * R));
  const double outer = 1.0 - smooth_step((r - outer_lo) / (outer_hi - outer_lo));
  return inner * outer * std::pow(r, exponent);
}

double PlaneDatum::derivative(double r) const {
  if (r <= 0.5 * R || r >= outer_hi) return 0.0;
  const double xi = (r - 0.5 * R) / (0.5 * R);
  const double xo = (r - outer_lo) / (outer_hi - outer_lo);
  const double inner = smooth_step(xi);
  const double outer = 1.0 - smooth_step(xo);
  const double dinner = smooth_step_derivative(xi) / (0.5 * R);
  const double douter = -smooth_step_derivative(xo) / (outer_hi - outer_lo);
  const double pw = std::pow(r, exponent);
  return (dinner * outer + inner * douter) * pw + inner * outer * exponent * pw / r;
}

Field PlaneDatum::sample(const GridPtr<double>& grid) const {
  return Field::sample(grid, [this](double r) { return value(r); });
}

}  // namespace radialwave
