#pragma once

#include <functional>
#include <string>
#include <vector>

#include "oldb2d/config.hpp"

namespace oldb2d {

struct CheckResult {
  std::string module;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckResult> results;
  bool pass() const;
};

/// Runs the invariant and property suite of every module against a config:
/// spectral identities on the configured grid, pointwise algebra and rate
/// identities on the configured initial state, a monitored run to t_end,
/// temporal self-convergence, the bound ledger, Picard operator identities and
/// persistence round trips. `progress` (if set) sees each result as it lands.
CheckReport run_checks(const RunConfig& cfg,
                       const std::function<void(const CheckResult&)>& progress = {});

}  // namespace oldb2d
