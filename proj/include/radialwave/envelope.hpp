#pragma once

#include <vector>

#include "radialwave/core.hpp"
#include "radialwave/spectral.hpp"

namespace radialwave {

/// v = u + i D^{-1} u_t, stored as two real fields.
struct ComplexField {
  Field re;
  Field im;
};

ComplexField make_v(const State& s, const SpectralBasis& basis);

/// ||v||_{H^s} computed from both components.
double complex_sobolev_norm(const ComplexField& v, double s, const SpectralBasis& basis);

struct EnvelopeReport {
  DyadicBand band;      // envelope sums run over j_min..j_max only
  std::vector<int> j;   // dyadic exponents, j_min..j_max
  std::vector<double> a;
  std::vector<double> beta;
  double l2_weighted = 0.0;  // ||{2^{-3k/4} beta_k}||_{l^2} over the band
  /// beta_k <= 2 beta_{k+-1} within k < 0 and within k >= 0
  bool slow_variation = true;
  /// same comparison across the k = -1 / k = 0 seam, where beta switches definition
  bool slow_variation_across_zero = true;
};

EnvelopeReport envelope(const State& s, const ModelParams& params, const SpectralBasis& basis,
                        const LPProfile& profile = {});

struct TailsReport {
  double eta = 0.0;
  double c_eta = 0.0;  // largest c with both low tails below eta^2
  double C_eta = 0.0;  // smallest C with both high tails below eta^2
  bool degenerate = false;  // eta^2 covers the whole norm
  double total_pos = 0.0;   // ||D^{s_p} u||^2
  double total_vel = 0.0;   // ||D^{s_p-1} u_t||^2
};

TailsReport tails_report(const State& s, const ModelParams& params, const SpectralBasis& basis, double eta);

/// Exponent constraints of the radial Sobolev inequality
/// || |x|^beta f ||_{q'} <= C || D^s f ||_p (q' conjugate to q).
void validate_radial_sobolev(int d, double s, double beta, double p, double q);

/// || |x|^beta f ||_{q'} / || D^s f ||_p after validation.
double radial_sobolev_check(const Field& f, double s, double beta, double p, double q, const SpectralBasis& basis);

}  // namespace radialwave
