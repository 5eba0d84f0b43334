#pragma once

// Independent reference computations. Nothing here calls into the library's
// quadrature, projection or integrators, so agreement is a real cross-check.
// The moment-based projection takes library moments as input and checks only
// the closed-form algebra applied to them.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "radialwave/channels.hpp"
#include "radialwave/samples.hpp"

namespace lab::oracle {

inline double integrate(const std::function<double(double)>& f, double a, double b) {
  if (b <= a) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 12, 1e-14);
}

/// Bump supports split the integration range into smooth pieces.
inline std::vector<double> breakpoints(const radialwave::AnalyticState& s, double a, double b) {
  std::vector<double> pts{a, b};
  for (const auto* sum : {&s.pos, &s.vel})
    for (const auto& bp : sum->bumps)
      for (double x : {bp.center - bp.width, bp.center, bp.center + bp.width})
        if (x > a && x < b) pts.push_back(x);
  std::sort(pts.begin(), pts.end());
  return pts;
}

/// One basis element of P(R): (r^e, 0) or (0, r^e).
struct PlaneFn {
  int exponent = 0;
  bool velocity = false;
};

inline std::vector<PlaneFn> plane_basis(int d) {
  std::vector<PlaneFn> out;
  for (int i = 1; i <= (d + 2) / 4; ++i) out.push_back({2 * i - d, false});
  for (int j = 1; j <= d / 4; ++j) out.push_back({2 * j - d, true});
  return out;
}

/// Gram matrix of the plane basis in H^1 x L^2(r >= R), via r = R/x on (0, 1].
inline Eigen::MatrixXd gram(int d, double R) {
  const auto basis = plane_basis(d);
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& a = basis[i];
      const auto& b = basis[j];
      if (a.velocity != b.velocity) continue;
      // position: a' b' = e_a e_b r^{e_a+e_b-2}; velocity: r^{e_a+e_b}
      const double c = a.velocity ? 1.0 : double(a.exponent) * b.exponent;
      const int pw = a.exponent + b.exponent - (a.velocity ? 0 : 2) + d - 1;
      G(i, j) = integrate([&](double x) { const double r = R / x; return c * std::pow(r, pw) * R / (x * x); }, 0.0, 1.0);
    }
  return G;
}

/// <s, e_i> on r >= R from the analytic bump derivatives.
inline Eigen::VectorXd plane_moments(const radialwave::AnalyticState& s, int d, double R) {
  const auto basis = plane_basis(d);
  Eigen::VectorXd b(static_cast<Eigen::Index>(basis.size()));
  const double hi = std::max(s.pos.hi(), s.vel.hi());
  const auto pts = breakpoints(s, R, std::max(R, hi));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto e = basis[i];
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k)
      acc += integrate(
          [&](double r) {
            return e.velocity ? s.vel.value(r) * std::pow(r, e.exponent + d - 1)
                              : s.pos.derivative(r) * e.exponent * std::pow(r, e.exponent - 1 + d - 1);
          },
          pts[k], pts[k + 1]);
    b[static_cast<Eigen::Index>(i)] = acc;
  }
  return b;
}

/// ||s||^2 in H^1 x L^2(r >= R).
inline double exterior_norm_sq(const radialwave::AnalyticState& s, int d, double R) {
  const double hi = std::max(s.pos.hi(), s.vel.hi());
  const auto pts = breakpoints(s, R, std::max(R, hi));
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k)
    acc += integrate(
        [&](double r) {
          const double ur = s.pos.derivative(r), ut = s.vel.value(r);
          return (ur * ur + ut * ut) * std::pow(r, d - 1);
        },
        pts[k], pts[k + 1]);
  return acc;
}

/// Coefficients (positions first) of the orthogonal projection onto P(R),
/// from the normal equations G c = b.
inline Eigen::VectorXd projection(const radialwave::AnalyticState& s, int d, double R) {
  return gram(d, R).ldlt().solve(plane_moments(s, d, R));
}

/// Same normal equations on moments already sampled by the library (the
/// exterior integrals of u_r r^{2i-2} and u_t r^{2j-1}). Agreement with the
/// closed-form coefficients is then independent of the grid resolution.
inline Eigen::VectorXd projection(const radialwave::ExteriorMoments& m, int d, double R) {
  const auto basis = plane_basis(d);
  Eigen::VectorXd b(static_cast<Eigen::Index>(basis.size()));
  Eigen::Index ip = 0, iv = 0;
  for (std::size_t i = 0; i < basis.size(); ++i)
    b[static_cast<Eigen::Index>(i)] = basis[i].velocity ? m.vel[iv++] : basis[i].exponent * m.pos[ip++];
  return gram(d, R).ldlt().solve(b);
}

/// u'' = |u|^{p-1} u from (u0, u1), Cash-Karp 5(4) with tight tolerances;
/// returns u at each requested time (increasing).
inline std::vector<double> scalar_ode(double u0, double u1, int p, const std::vector<double>& times) {
  using S = std::array<double, 2>;
  namespace ode = boost::numeric::odeint;
  auto rhs = [p](const S& y, S& dy, double) {
    dy[0] = y[1];
    dy[1] = std::pow(std::abs(y[0]), p - 1) * y[0];
  };
  S y{u0, u1};
  std::vector<double> out;
  double t = 0.0;
  auto stepper = ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_cash_karp54<S>());
  for (double target : times) {
    if (target > t) ode::integrate_adaptive(stepper, rhs, y, t, target, 1e-4);
    t = std::max(t, target);
    out.push_back(y[0]);
  }
  return out;
}

}  // namespace lab::oracle
