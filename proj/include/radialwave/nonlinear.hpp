#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "radialwave/core.hpp"
#include "radialwave/linear_wave.hpp"
#include "radialwave/spectral.hpp"

namespace radialwave {

struct EvolveConfig {
  double dt = 1e-3;
  double T = 1.0;
  int save_every = 10;
  double blowup_threshold = 1e6;
  std::string method = "strang";
  /// Integrate towards negative times; dt stays positive.
  bool reverse = false;
  /// Stop once |u| exceeds causality_tol * sup|u0| within boundary_layer of R_max.
  bool causality_check = true;
  double causality_tol = 1e-8;
  double boundary_layer = 2.0;
};

enum class Outcome { Completed, BlowupDetected, CausalityStop };
const char* to_string(Outcome o);

struct RunReport {
  Outcome outcome = Outcome::Completed;
  /// Last time at which the state was finite and below the threshold.
  std::optional<double> blowup_time;
  /// Same run at dt/2 (filled by levine_experiment).
  std::optional<double> blowup_time_refined;
  double energy_drift = 0.0;
  double initial_energy = 0.0;
  long steps = 0;
  std::vector<double> times;
  std::vector<double> energy;
  std::vector<double> critical_norm;
  std::vector<double> y;
  std::vector<double> y_prime;
  std::vector<double> sup_norm;
};

/// |u|^{p-1} u
Vec focusing_term(const Vec& u, int p);

std::pair<Trajectory, RunReport> evolve(const State& s0, const ModelParams& params, const EvolveConfig& cfg,
                                        const SpectralBasis& basis);

/// E = int (u_t^2/2 + u_r^2/2 - |u|^{p+1}/(p+1)) r^{d-1} dr with grid quadrature.
double conserved_energy(const State& s, const ModelParams& params);
/// Same energy with the gradient term and the quadrature of the discrete basis;
/// this is the quantity the splitting scheme conserves up to O(dt^2).
double conserved_energy(const State& s, const ModelParams& params, const SpectralBasis& basis);

struct Virial {
  double y = 0.0;
  double y_prime = 0.0;
  double y_second = 0.0;
};

Virial virial(const State& s, const ModelParams& params);
Virial virial(const State& s, const ModelParams& params, const SpectralBasis& basis);

struct CauchySchwarzMargin {
  double margin = 0.0;      // 4/(p+3) y y'' - y'^2
  double normalized = 0.0;  // margin / (|4/(p+3) y y''| + y'^2)
  double energy = 0.0;
};

/// Requires |E| <= energy_tol * (kinetic + gradient + potential magnitudes).
CauchySchwarzMargin cauchy_schwarz_check(const State& s, const ModelParams& params, double energy_tol = 1e-8);
CauchySchwarzMargin cauchy_schwarz_check(const State& s, const ModelParams& params, const SpectralBasis& basis,
                                         double energy_tol = 1e-8);

double critical_norm(const State& s, const ModelParams& params, const SpectralBasis& basis);

struct SpNorm {
  double value = 0.0;
  double half_stride_value = 0.0;
  double stride_change = 0.0;  // relative change when every other snapshot is dropped
};

SpNorm sp_norm(const Trajectory& traj, const ModelParams& params);

struct ScatteringFit {
  State profile;
  std::vector<double> times;
  std::vector<double> residual;
};

ScatteringFit scattering_fit(const Trajectory& traj, const SpectralBasis& basis);

RunReport levine_experiment(const State& s0, const ModelParams& params, const EvolveConfig& cfg,
                            const SpectralBasis& basis);

/// Constant of the explicit blow-up solution u = c_p (T - t)^{-2/(p-1)} of u'' = u^p.
double ode_blowup_constant(int p);

}  // namespace radialwave
