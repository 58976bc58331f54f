#include "jcr/scene.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "jcr/errors.hpp"
#include "jcr/rng.hpp"

namespace jcr {

namespace {

constexpr double kPi = std::numbers::pi;

void check_positive(double v, const char* what) {
  if (!(v > 0.0)) throw Error(std::string(what) + " must be positive");
}

}  // namespace

double comm_pathloss(const CommLink& link, double wavelength_m, double tx_gain, double rx_gain) {
  check_positive(link.distance_m, "link distance");
  check_positive(wavelength_m, "wavelength");
  double fourpi = 4.0 * kPi;
  return tx_gain * rx_gain * wavelength_m * wavelength_m /
         (fourpi * fourpi * std::pow(link.distance_m, link.pathloss_exp));
}

double radar_two_way_gain(const Target& target, double wavelength_m, double tx_gain,
                          double rx_gain) {
  check_positive(target.distance_m, "target distance");
  check_positive(wavelength_m, "wavelength");
  if (target.rcs_m2 < 0.0) throw Error("radar cross-section must be non-negative");
  double rho4 = std::pow(target.distance_m, 4.0);
  return tx_gain * rx_gain * wavelength_m * wavelength_m * target.rcs_m2 /
         (64.0 * kPi * kPi * kPi * rho4);
}

std::vector<TargetPower> target_powers_and_snr(const RadarScene& scene) {
  check_positive(scene.noise_power, "noise power");
  check_positive(scene.symbol_energy, "symbol energy");
  std::vector<TargetPower> out;
  out.reserve(scene.targets.size());
  for (const auto& t : scene.targets) {
    double gk = radar_two_way_gain(t, scene.wavelength_m, scene.tx_gain, scene.rx_gain);
    TargetPower tp;
    tp.power = scene.correlation_gain * scene.correlation_gain * scene.symbol_energy * gk;
    tp.snr = tp.power / scene.noise_power;
    out.push_back(tp);
  }
  return out;
}

SnapshotSet synth_snapshots(const PreambleSchedule& schedule, const RadarScene& scene, int eta,
                            std::uint64_t seed) {
  if (eta < 1) throw Error("snapshot count must be at least 1");
  const int m = schedule.count();
  const int k = static_cast<int>(scene.targets.size());
  const double vmax = schedule.unambiguous_vmax(scene.wavelength_m);
  for (const auto& t : scene.targets) {
    if (std::abs(t.velocity_mps) > vmax) {
      throw VelocityAliased("target velocity " + std::to_string(t.velocity_mps) +
                            " m/s outside the unambiguous interval +-" + std::to_string(vmax));
    }
  }
  auto powers = target_powers_and_snr(scene);
  std::vector<double> amp(powers.size());
  for (std::size_t i = 0; i < powers.size(); ++i) amp[i] = std::sqrt(powers[i].power);
  const double noise_amp = std::sqrt(scene.noise_power);

  // Phase ramp per target: exp(-j 2 pi u_k q_m), u_k = 2 v_k T_D / lambda.
  Eigen::MatrixXcd d(m, k);
  for (int kk = 0; kk < k; ++kk) {
    double u = 2.0 * scene.targets[static_cast<std::size_t>(kk)].velocity_mps *
               schedule.slot_interval_s / scene.wavelength_m;
    for (int mm = 0; mm < m; ++mm) {
      double ph = -2.0 * kPi * u * schedule.positions[static_cast<std::size_t>(mm)];
      d(mm, kk) = std::complex<double>(std::cos(ph), std::sin(ph));
    }
  }

  SnapshotSet out;
  out.seed = seed;
  out.snapshots.resize(m, eta);
  for (int i = 0; i < eta; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    Eigen::VectorXcd b(k);
    for (int kk = 0; kk < k; ++kk) b(kk) = amp[static_cast<std::size_t>(kk)] * rng.cnormal();
    Eigen::VectorXcd h = d * b;
    for (int mm = 0; mm < m; ++mm) h(mm) += noise_amp * rng.cnormal();
    out.snapshots.col(i) = h;
  }
  return out;
}

Eigen::MatrixXcd sample_covariance(const SnapshotSet& snapshots) {
  const auto& h = snapshots.snapshots;
  if (h.cols() < 1) throw Error("sample covariance needs at least one snapshot");
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(h.rows(), h.rows());
  for (Eigen::Index i = 0; i < h.cols(); ++i) {
    r.noalias() += h.col(i) * h.col(i).adjoint();
  }
  return r / static_cast<double>(h.cols());
}

std::vector<double> exp_tap_profile(int taps, double decay_db_per_tap) {
  if (taps < 1) throw Error("tap count must be at least 1");
  std::vector<double> p(static_cast<std::size_t>(taps));
  double ratio = std::pow(10.0, -decay_db_per_tap / 10.0);
  double v = 1.0, sum = 0.0;
  for (int i = 0; i < taps; ++i) {
    p[static_cast<std::size_t>(i)] = v;
    sum += v;
    v *= ratio;
  }
  for (auto& x : p) x /= sum;
  return p;
}

std::vector<double> comm_channel_eigenvalues(const CommLink& link, int n_subchannels,
                                             std::uint64_t seed, ChannelEigenMode mode) {
  if (n_subchannels < 1) throw Error("subchannel count must be at least 1");
  if (link.tap_powers.empty()) throw Error("tap profile must be non-empty");
  if (mode == ChannelEigenMode::Expectation) {
    return std::vector<double>(static_cast<std::size_t>(n_subchannels), 1.0);
  }
  Rng rng(derive_seed(seed, 0x636861 /* tap stream tag */));
  std::vector<std::complex<double>> taps(link.tap_powers.size());
  for (std::size_t l = 0; l < taps.size(); ++l) {
    taps[l] = std::sqrt(link.tap_powers[l]) * rng.cnormal();
  }
  // Squared magnitudes of the N-point DFT; L is tiny so direct evaluation.
  std::vector<double> eig(static_cast<std::size_t>(n_subchannels));
  for (int n = 0; n < n_subchannels; ++n) {
    std::complex<double> acc = 0.0;
    for (std::size_t l = 0; l < taps.size(); ++l) {
      double ph = -2.0 * kPi * static_cast<double>(n) * static_cast<double>(l) /
                  static_cast<double>(n_subchannels);
      acc += taps[l] * std::complex<double>(std::cos(ph), std::sin(ph));
    }
    eig[static_cast<std::size_t>(n)] = std::norm(acc);
  }
  return eig;
}

}  // namespace jcr
