#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "jcr/config.hpp"

namespace jcr {

struct RunOptions {
  std::string out_dir = ".";
  int threads = 1;
};

struct RunResult {
  std::vector<std::string> files;  // paths written, in emission order
};

/// Execute the experiment named by the config and write its CSV (and optional
/// SVG) outputs under out_dir. Identical config and seed produce byte-identical
/// files regardless of the thread count.
RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options);

/// Dry-run checks for a config document: schema validity, CPI capacity over
/// the sweep range, co-waveform identifiability for the configured target
/// counts, velocity aliasing. Returns human-readable problem descriptions;
/// empty means the config looks runnable.
std::vector<std::string> validate_config(const nlohmann::json& doc);

}  // namespace jcr
