#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "jcr/metrics.hpp"
#include "jcr/scene.hpp"
#include "jcr/schedule.hpp"

namespace jcr {

enum class MusicMethod { Direct, DirectAugmentation };

/// Uniform search grid over the unambiguous velocity interval [-vmax, vmax).
struct VelocityGrid {
  double vmax_mps = 0.0;
  int points = 1 << 14;
};

/// Subspace estimate on the physical covariance. Returns K velocities sorted
/// ascending, refined by a three-point parabolic fit around each spectrum peak.
std::vector<double> direct_music(const Eigen::MatrixXcd& covariance,
                                 const PreambleSchedule& schedule, double wavelength_m, int k,
                                 const VelocityGrid& grid);

/// Direct-augmentation estimate: lag-averaged autocorrelations rebuilt into a
/// Hermitian Toeplitz matrix on the contiguous co-waveform segment, then the
/// subspace search on the virtual uniform schedule {0..L_c}.
std::vector<double> da_music(const Eigen::MatrixXcd& covariance, const PreambleSchedule& schedule,
                             double wavelength_m, int k, const VelocityGrid& grid);

/// Lag-averaged Hermitian Toeplitz augmentation of a covariance estimate.
Eigen::MatrixXcd augmented_covariance(const Eigen::MatrixXcd& covariance,
                                      const PreambleSchedule& schedule);

struct RmseConfig {
  MusicMethod method = MusicMethod::Direct;
  int eta = 100;
  int trials = 500;
  std::uint64_t seed = 0;
  int grid_points = 1 << 14;
  int threads = 1;
};

struct RmseReport {
  std::vector<double> true_velocities;
  std::vector<double> per_target_rmse;
  double aggregate_rmse = 0.0;
  std::vector<double> rcrb;    // per-target root CRB, empty if the bound does not exist
  double rcrb_db = 0.0;        // geometric-mean root bound, NaN if missing
  int eta = 0;
  int trials = 0;
  int failures = 0;            // trials excluded (estimator raised)
};

/// Monte Carlo RMSE study against the velocity bound. Trials draw independent
/// snapshot sets from counter-derived seeds; estimates are matched to the true
/// velocities by sorted pairing, which minimizes the total absolute error.
RmseReport rmse_study(const PreambleSchedule& schedule, const RadarScene& scene,
                      const RmseConfig& config);

}  // namespace jcr
