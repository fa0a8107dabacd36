#pragma once

#include <string>

#include "config.hpp"

namespace padyn::cli {

enum Exit : int {
  kOk = 0,
  kModuleError = 1,
  kNotSubhyperbolic = 2,
  kUndecided = 3,
  kExpansionViolated = 4,
  kConfigParse = 64,
};

int cmd_analyze(const JobConfig& c);
int cmd_metric(const JobConfig& c);
int cmd_code(const JobConfig& c);
int cmd_stats(const JobConfig& c);
/// Collects the payloads already in the output directory into summary.json.
int cmd_report(const JobConfig& c);

}  // namespace padyn::cli
