#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "jcr/schedule.hpp"

namespace jcr {

struct Target {
  double distance_m = 0.0;
  double velocity_mps = 0.0;
  double rcs_m2 = 0.0;
};

/// Downlink communication channel: free-space path with a power-law exponent
/// and a normalized tap power profile (sums to 1).
struct CommLink {
  double distance_m = 0.0;
  double pathloss_exp = 2.0;
  std::vector<double> tap_powers;
};

/// Everything the channel-domain snapshot model needs besides the schedule.
struct RadarScene {
  double wavelength_m = 0.0;
  double tx_gain = 1.0;          // linear
  double rx_gain = 1.0;          // linear
  double symbol_energy = 1.0;    // Es
  double correlation_gain = 1.0; // gamma, preamble correlation gain
  double noise_power = 1.0;      // sigma_n^2
  std::vector<Target> targets;
};

/// One-way power gain of the communication link.
double comm_pathloss(const CommLink& link, double wavelength_m, double tx_gain, double rx_gain);

/// Two-way radar power gain for a point target.
double radar_two_way_gain(const Target& target, double wavelength_m, double tx_gain,
                          double rx_gain);

struct TargetPower {
  double power = 0.0;  // p_k, variance of the target amplitude
  double snr = 0.0;    // p_k / sigma_n^2
};

std::vector<TargetPower> target_powers_and_snr(const RadarScene& scene);

/// Channel-domain snapshots, one column per snapshot.
struct SnapshotSet {
  Eigen::MatrixXcd snapshots;  // count() x eta
  std::uint64_t seed = 0;
};

/// Draw eta independent snapshots h = D b + w with fresh target amplitudes
/// per snapshot. Reproducible: snapshot i depends only on (seed, i).
SnapshotSet synth_snapshots(const PreambleSchedule& schedule, const RadarScene& scene, int eta,
                            std::uint64_t seed);

Eigen::MatrixXcd sample_covariance(const SnapshotSet& snapshots);

enum class ChannelEigenMode { Expectation, Realization };

/// Eigenvalues of the block-circulant approximation of the tap channel:
/// squared magnitudes of the N-point DFT of one tap realization, or the flat
/// all-ones profile in expectation mode.
std::vector<double> comm_channel_eigenvalues(const CommLink& link, int n_subchannels,
                                             std::uint64_t seed, ChannelEigenMode mode);

/// Exponentially decaying tap power profile, normalized to sum to 1.
std::vector<double> exp_tap_profile(int taps, double decay_db_per_tap);

}  // namespace jcr
