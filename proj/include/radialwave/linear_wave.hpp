#pragma once

#include <functional>
#include <vector>

#include "radialwave/core.hpp"
#include "radialwave/spectral.hpp"

namespace radialwave {

/// Snapshots of a radial solution at increasing times, all on one grid.
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  ModelParams params;
  bool terminated_by_blowup = false;

  void push(double t, State s);
  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
};

/// Modal coordinates: pos = sum a_k e_k, vel = sum b_k e_k.
struct ModalState {
  Vec a;
  Vec b;
};

ModalState to_modal(const State& s, const SpectralBasis& basis);
State from_modal(const ModalState& m, const SpectralBasis& basis);
/// Rotate each mode by the exact free flow over time t (in place).
void advance_modal(ModalState& m, double t, const SpectralBasis& basis);

/// S(t)(u0, u1), exact in the discrete basis.
State free_flow(const State& s0, double t, const SpectralBasis& basis);

/// Sum over modes of (lambda_k a_k^2 + b_k^2) / 2: the energy the discrete flow conserves.
double free_energy(const State& s, const SpectralBasis& basis);
/// (1/2) int (u_r^2 + u_t^2) r^{d-1} dr by grid quadrature.
double free_energy(const State& s);

using SourceFn = std::function<Field(double)>;

/// Solution at t1 of w_tt - Lap w = h with zero data at t0, returned as
/// (w(t1), w_t(t1)). Composite Simpson in time with `steps` (even) intervals.
State duhamel(const SourceFn& source, double t0, double t1, const SpectralBasis& basis, int steps);

/// int_{R+|t|}^{R_max} (u_r^2 + u_t^2) r^{d-1} dr
double exterior_energy(const State& s, double R, double t);

struct VanishingScan {
  std::vector<double> times;
  std::vector<double> values;  // energy_pair_norm(state(t), R + |t|)
  bool non_increasing = true;
  double first = 0.0;
  double last = 0.0;
};

VanishingScan exterior_vanishing_scan(const Trajectory& traj, double R);

}  // namespace radialwave
