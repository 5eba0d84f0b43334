#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lab/io.hpp"

namespace lab {

struct ChannelsKnobs {
  double R = 4.0;
  double T = 24.0;
  int samples = 30;
  double support_lo = 2.0;
  double support_hi = 8.0;
  int bumps = 4;
  double tol_factor = 1e-3;
};

struct StationaryKnobs {
  double x0 = 0.01;
  double s0 = 6.0;
  double s_min = -10.0;
  double tol = 1e-12;
};

struct EvolveKnobs {
  std::string datum = "bump";  // bump | plateau
  double amplitude = 0.5;
  double width = 2.0;
  double velocity = 0.0;  // plateau only: u_1 = velocity on the plateau
  double dt = 1e-3;
  double T = 4.0;
  int save_every = 10;
  double blowup_threshold = 1e6;
  bool reverse = false;
};

struct LevineKnobs {
  double amplitude = 10.0;
  double width = 2.0;
  double dt = 1e-3;
  double T = 4.0;
};

struct EnvelopeKnobs {
  double amplitude = 1.0;
  double width = 3.0;
  std::vector<double> eta{0.3, 0.1, 0.03};
};

struct ExperimentConfig {
  std::string experiment;
  int d = 7;
  int p = 3;
  long N = 0;
  double R_max = 0.0;
  std::uint64_t seed = 20260101;
  std::string output;
  std::string cache_dir;
  ChannelsKnobs channels;
  StationaryKnobs stationary;
  EvolveKnobs evolve;
  LevineKnobs levine;
  EnvelopeKnobs envelope;
};

const std::vector<std::string>& experiment_names();

/// Full default document for an experiment; grid defaults depend on it.
json default_config(const std::string& experiment);

/// Strict parse: unknown keys and wrong types raise ConfigError, bad values
/// raise the module error for the violated precondition.
ExperimentConfig parse_config(const json& doc);
json to_json(const ExperimentConfig& cfg);

/// Checks every precondition the chosen experiment will hit, including the
/// causality budget, before any computation starts.
void validate(const ExperimentConfig& cfg);

/// Output directory: `output` resolved against $RADIALWAVE_OUT when relative.
fs::path output_dir(const ExperimentConfig& cfg);

/// Basis cache directory from the config or $RADIALWAVE_CACHE; empty disables caching.
std::string cache_dir(const ExperimentConfig& cfg);

}  // namespace lab
