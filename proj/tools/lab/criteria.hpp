#pragma once

#include <string>
#include <vector>

#include "lab/io.hpp"

namespace lab {

struct Metric {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<=", ">=", "=="
  bool timing = false;   // wall-clock metrics stay out of the CSV bodies
  bool pass() const;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Metric> metrics;
  std::string note;
  double seconds = 0.0;
  bool pass() const;
  std::string summary() const;
};

struct SuiteContext {
  std::uint64_t seed = 20260101;
  std::string cache_dir;
  unsigned threads = 0;  // 0: hardware concurrency
};

CriterionResult channel_inequality(const SuiteContext& ctx);
CriterionResult degenerate_direction(const SuiteContext& ctx);
CriterionResult equality_cases(const SuiteContext& ctx);
CriterionResult projection_algebra(const SuiteContext& ctx);
CriterionResult stationary_family(const SuiteContext& ctx);
CriterionResult non_membership(const SuiteContext& ctx);
CriterionResult nonlinear_solver(const SuiteContext& ctx);
CriterionResult levine_criterion(const SuiteContext& ctx);
CriterionResult virial_suite(const SuiteContext& ctx);
CriterionResult harmonic_analysis(const SuiteContext& ctx);

/// Criteria 1-10 in order.
std::vector<CriterionResult> run_property_suite(const SuiteContext& ctx);

json to_json(const CriterionResult& r);

}  // namespace lab
