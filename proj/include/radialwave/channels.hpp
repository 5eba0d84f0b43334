#pragma once

#include <vector>

#include "radialwave/core.hpp"
#include "radialwave/spectral.hpp"

namespace radialwave {

/// The plane P(R) = span{(r^{2i-d}, 0) : i <= kt} + span{(0, r^{2j-d}) : j <= k}.
struct PlaneSpec {
  int d = 7;
  int k = 0;   // floor(d/4), velocity directions
  int kt = 0;  // floor((d+2)/4), position directions
  std::vector<int> pos_exponents;
  std::vector<int> vel_exponents;
};

PlaneSpec plane_spec(int d);

struct CauchyCoeffs {
  Vec c;     // c_1..c_k
  Vec dcoef; // d_1..d_kt
};

CauchyCoeffs cauchy_coeffs(int d);

struct ChannelCoeffs {
  Vec lambda;  // position coefficients, length kt
  Vec mu;      // velocity coefficients, length k
  double R = 0.0;
};

/// A state on r >= R given as grid samples (zero beyond R_max) plus an exact
/// combination of plane elements. Keeping the plane part analytic lets the
/// projection identities hold to rounding rather than to the grid truncation.
struct ExteriorState {
  double R = 0.0;
  State sample;
  Vec lambda;
  Vec mu;

  static ExteriorState from_state(const State& s, double R);
};

/// Moments int_R^inf u_r r^{2i-2} dr (i <= kt) and int_R^inf u_t r^{2i-1} dr (i <= k).
struct ExteriorMoments {
  Vec pos;
  Vec vel;
};

ExteriorMoments exterior_moments(const ExteriorState& s);
ChannelCoeffs coeffs_from_moments(int d, const ExteriorMoments& m, double R);

ChannelCoeffs projection_coeffs(const State& s, double R);
ChannelCoeffs projection_coeffs(const ExteriorState& s);

/// i-th basis element of P(R): positions first (i < kt), then velocities.
ExteriorState plane_element(const GridPtr<double>& grid, double R, int index);

/// Inner product of H^1 x L^2(r >= R, r^{d-1} dr).
double exterior_inner(const ExteriorState& a, const ExteriorState& b);
double exterior_norm(const ExteriorState& a);

/// Closed-form Gram matrix of the plane basis on [R, inf).
Eigen::MatrixXd plane_gram(int d, double R);

struct Projection {
  ChannelCoeffs coeffs;
  ExteriorState pi;
  ExteriorState pi_perp;
};

Projection project(const State& s, double R);
Projection project(const ExteriorState& s);

struct MomentResiduals {
  double position_moments = 0.0;  // moments of u_r through lambda
  double velocity_moments = 0.0;  // moments of u_t through mu
  double lambda_by_parts = 0.0;   // lambda through u(R) and moments of u
  double max() const { return std::max({position_moments, velocity_moments, lambda_by_parts}); }
};

MomentResiduals moment_identities_check(const State& s, double R);

struct NormFormulas {
  double pi_proxy = 0.0;
  double pi_perp_proxy = 0.0;
  double pi_true = 0.0;       // squared norms on r >= R
  double pi_perp_true = 0.0;
};

NormFormulas norm_formulas(const State& s, double R);

struct ChannelReport {
  int d = 7;
  int p = 3;
  double R = 0.0;
  double T = 0.0;
  double exterior_plus = 0.0;
  double exterior_minus = 0.0;
  double exterior_plus_half = 0.0;
  double exterior_minus_half = 0.0;
  double bound = 0.0;
  double tol = 0.0;
  double margin = 0.0;
  bool verdict = false;
  double max_exterior() const { return std::max(exterior_plus, exterior_minus); }
};

/// Radius beyond which both components vanish (to `eps` relative to their sup).
double support_radius(const State& s, double eps = 1e-14);

ChannelReport channel_verify(const State& data, double R, double T, const SpectralBasis& basis,
                             double tol_factor = 1e-3, int p = 3);

}  // namespace radialwave
