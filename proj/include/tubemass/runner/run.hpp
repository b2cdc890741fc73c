#pragma once

#include <filesystem>

#include "tubemass/runner/report.hpp"
#include "tubemass/runner/scenario.hpp"

namespace tubemass::runner {

struct RunOptions {
  std::filesystem::path out = "out";
  bool plot = false;
};

/// Runs one scenario and writes <name>.csv, <name>.meta.json, <name>.report.json
/// and with `plot` <name>.svg into the output directory.
Report run_scenario(const Scenario& scenario, const RunOptions& options);
Report run_scenario(const std::filesystem::path& config, const RunOptions& options);

}  // namespace tubemass::runner
