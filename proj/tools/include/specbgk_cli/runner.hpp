#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "specbgk/diagnostics.hpp"
#include "specbgk_cli/config.hpp"

namespace specbgk::cli {

struct RunSummary {
  std::string label;  // sweep variant, empty for a single run
  std::optional<DecayFit> fit;
  double max_drift = 0.0;  // max |conserved functional| / initial norm
  bool monotone = true;
  int steps = 0;
  std::vector<std::string> files;
};

/// Runs a validated config without sweep, writing artifacts into out_dir.
RunSummary run(const RunConfig& c, const std::filesystem::path& out_dir);

/// Expands the sweep (if any) and runs the variants concurrently, one subdirectory each.
std::vector<RunSummary> run_all(const RunConfig& c, const std::filesystem::path& out_dir);

std::string summary_line(const RunSummary& s);

}  // namespace specbgk::cli
