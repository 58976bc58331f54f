#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "jcr/estimators.hpp"
#include "jcr/optimizer.hpp"
#include "jcr/scene.hpp"
#include "jcr/schedule.hpp"

namespace jcr {

/// Scenario fields after defaulting and unit conversion. Target count and
/// distance may be lists; each combination yields one radar scene.
struct ResolvedScenario {
  double wavelength_m = 0.0;
  double tx_gain = 1.0;
  double rx_gain = 1.0;
  double cpi_s = 0.0;
  double slot_interval_s = 0.0;
  double noise_power = 0.0;
  double symbol_energy = 0.0;
  double correlation_gain = 0.0;
  FrameTiming timing;

  std::vector<int> target_counts;
  std::vector<double> target_distances_m;
  double rcs_m2 = 0.0;
  double velocity_lo_mps = 0.0;
  double velocity_hi_mps = 0.0;
  std::optional<double> target_snr_db;  // overrides the radar link budget

  CommLink link;
  std::optional<double> comm_snr_db;  // fixed link SNR; empty = derive from the budget
  ChannelEigenMode eigen_mode = ChannelEigenMode::Expectation;
  int subchannels = 512;

  /// Communication SNR after overrides.
  double comm_snr() const;

  /// Radar scene for one (target count, distance) pair. Velocities are spread
  /// evenly across the configured span (midpoint for a single target).
  RadarScene make_scene(int k, double distance_m) const;
};

struct OptimizeProblem {
  std::string kind;  // weighted | crb-constrained | dmmse-constrained | vp-compare
  std::vector<double> omega_c;
  double upsilon_phi_r = 0.0;
  double upsilon_phi_c = 0.0;
  std::string constraint_text;  // user-facing constraint value with unit
};

struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 0;
  ResolvedScenario scenario;

  std::vector<WaveFamily> families;
  int m_min = 3;
  int m_max = 40;
  ParamRule param_rule = ParamRule::VpCount;
  int eta = 100;

  WaveFamily music_family = WaveFamily::Uniform;
  FamilyParams music_params;
  std::vector<MusicMethod> music_methods;
  std::vector<int> eta_list;
  int trials = 500;
  int grid_points = 1 << 14;

  std::vector<OptimizeProblem> problems;

  std::string basename;
  bool svg = false;

  nlohmann::json resolved;  // fully defaulted document, echoed into CSV headers
};

/// Parse a config document (strict schema: unknown keys are rejected).
ExperimentConfig resolve_config(const nlohmann::json& doc);

/// Read and parse a JSON config file.
nlohmann::json load_config_file(const std::string& path);

/// Apply one "dotted.path=value" override; the value is parsed as JSON when
/// possible and kept as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& spec);

/// Velocities spread evenly across [lo, hi]; single target sits at the middle.
std::vector<double> spread_velocities(double lo, double hi, int k);

WaveFamily family_from_name(const std::string& name);

}  // namespace jcr
