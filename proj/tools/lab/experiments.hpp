#pragma once

#include <iosfwd>
#include <vector>

#include "lab/config.hpp"
#include "lab/criteria.hpp"

namespace lab {

enum ExitCode : int { kOk = 0, kValidation = 2, kNumerical = 3, kAcceptance = 4 };

/// Parses, validates and runs one experiment, writing its files, error.json on
/// failure and manifest.json in every case. Progress goes to `log`.
int run(const json& doc, std::ostream& log);

/// verify-all body: the property suite plus its CSV/JSON outputs in `dir`.
/// Returned results are in criterion order.
std::vector<CriterionResult> verify_all(const ExperimentConfig& cfg, const fs::path& dir, class Manifest* manifest,
                                        std::ostream& log);

}  // namespace lab
