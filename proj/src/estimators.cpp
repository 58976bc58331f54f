#include "jcr/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <thread>

#include "jcr/errors.hpp"
#include "jcr/rng.hpp"

namespace jcr {

namespace {

constexpr double kPi = std::numbers::pi;

/// Noise-subspace basis: eigenvectors of the (Hermitian) covariance paired
/// with the smallest size - k eigenvalues.
Eigen::MatrixXcd noise_subspace(const Eigen::MatrixXcd& covariance, int k) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(covariance);
  if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
  return es.eigenvectors().leftCols(covariance.rows() - k);
}

/// MUSIC null spectrum samples q(v) = ||En^H d(v)||^2 over the wrap-around
/// velocity grid, followed by the smallest-K local minima with a parabolic
/// refinement. The fit runs on the smooth null spectrum rather than its
/// reciprocal, keeping the three-point parabola well conditioned.
std::vector<double> grid_search(const Eigen::MatrixXcd& en, const std::vector<int>& positions,
                                double slot_interval_s, double wavelength_m, int k,
                                const VelocityGrid& grid) {
  const int n = grid.points;
  if (n < 8) throw Error("velocity grid too coarse");
  const int m = static_cast<int>(positions.size());
  const double step = 2.0 * grid.vmax_mps / static_cast<double>(n);

  std::vector<double> q(static_cast<std::size_t>(n));
  Eigen::VectorXcd d(m);
  for (int i = 0; i < n; ++i) {
    double v = -grid.vmax_mps + step * static_cast<double>(i);
    double u = 2.0 * v * slot_interval_s / wavelength_m;
    for (int r = 0; r < m; ++r) {
      double ph = -2.0 * kPi * u * positions[static_cast<std::size_t>(r)];
      d(r) = std::complex<double>(std::cos(ph), std::sin(ph));
    }
    q[static_cast<std::size_t>(i)] = (en.adjoint() * d).squaredNorm();
  }

  // Local minima on the circular grid.
  std::vector<int> minima;
  for (int i = 0; i < n; ++i) {
    double prev = q[static_cast<std::size_t>((i + n - 1) % n)];
    double next = q[static_cast<std::size_t>((i + 1) % n)];
    double cur = q[static_cast<std::size_t>(i)];
    if (cur < prev && cur <= next) minima.push_back(i);
  }
  if (static_cast<int>(minima.size()) < k) {
    throw DegenerateSpectrum("found " + std::to_string(minima.size()) + " spectrum minima for " +
                             std::to_string(k) + " targets");
  }
  std::sort(minima.begin(), minima.end(), [&](int a, int b) {
    return q[static_cast<std::size_t>(a)] < q[static_cast<std::size_t>(b)];
  });
  minima.resize(static_cast<std::size_t>(k));

  std::vector<double> velocities;
  velocities.reserve(static_cast<std::size_t>(k));
  for (int idx : minima) {
    double qm = q[static_cast<std::size_t>((idx + n - 1) % n)];
    double q0 = q[static_cast<std::size_t>(idx)];
    double qp = q[static_cast<std::size_t>((idx + 1) % n)];
    double denom = qm - 2.0 * q0 + qp;
    double offset = 0.0;
    if (denom > 0.0) offset = 0.5 * (qm - qp) / denom;
    offset = std::clamp(offset, -0.5, 0.5);
    double v = -grid.vmax_mps + step * (static_cast<double>(idx) + offset);
    // Wrap into [-vmax, vmax).
    if (v >= grid.vmax_mps) v -= 2.0 * grid.vmax_mps;
    if (v < -grid.vmax_mps) v += 2.0 * grid.vmax_mps;
    velocities.push_back(v);
  }
  std::sort(velocities.begin(), velocities.end());
  return velocities;
}

}  // namespace

std::vector<double> direct_music(const Eigen::MatrixXcd& covariance,
                                 const PreambleSchedule& schedule, double wavelength_m, int k,
                                 const VelocityGrid& grid) {
  const int m = schedule.count();
  if (covariance.rows() != m || covariance.cols() != m) throw Error("covariance size mismatch");
  if (k < 1) throw Error("at least one target required");
  if (k >= m) throw TooManyTargets("direct search needs K < M");
  Eigen::MatrixXcd en = noise_subspace(covariance, k);
  return grid_search(en, schedule.positions, schedule.slot_interval_s, wavelength_m, k, grid);
}

Eigen::MatrixXcd augmented_covariance(const Eigen::MatrixXcd& covariance,
                                      const PreambleSchedule& schedule) {
  const int m = schedule.count();
  if (covariance.rows() != m || covariance.cols() != m) throw Error("covariance size mismatch");
  CoWaveform cw = difference_cowaveform(schedule);
  const int lc = cw.contiguous_extent;

  // Average the covariance entries over all ordered pairs at each lag in the
  // contiguous segment 0..L_c.
  std::vector<std::complex<double>> r(static_cast<std::size_t>(lc) + 1, 0.0);
  std::vector<int> cnt(static_cast<std::size_t>(lc) + 1, 0);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      int lag = schedule.positions[static_cast<std::size_t>(a)] -
                schedule.positions[static_cast<std::size_t>(b)];
      if (lag >= 0 && lag <= lc) {
        r[static_cast<std::size_t>(lag)] += covariance(a, b);
        ++cnt[static_cast<std::size_t>(lag)];
      }
    }
  }
  for (int l = 0; l <= lc; ++l) {
    r[static_cast<std::size_t>(l)] /= static_cast<double>(cnt[static_cast<std::size_t>(l)]);
  }

  Eigen::MatrixXcd aug(lc + 1, lc + 1);
  for (int i = 0; i <= lc; ++i) {
    for (int j = 0; j <= lc; ++j) {
      aug(i, j) = (i >= j) ? r[static_cast<std::size_t>(i - j)]
                           : std::conj(r[static_cast<std::size_t>(j - i)]);
    }
  }
  return aug;
}

std::vector<double> da_music(const Eigen::MatrixXcd& covariance, const PreambleSchedule& schedule,
                             double wavelength_m, int k, const VelocityGrid& grid) {
  if (k < 1) throw Error("at least one target required");
  CoWaveform cw = difference_cowaveform(schedule);
  const int lc = cw.contiguous_extent;
  if (k > lc) {
    throw CoArrayTooSmall("direct augmentation supports K <= " + std::to_string(lc) +
                          " for this schedule");
  }
  Eigen::MatrixXcd aug = augmented_covariance(covariance, schedule);
  Eigen::MatrixXcd en = noise_subspace(aug, k);
  std::vector<int> virt(static_cast<std::size_t>(lc) + 1);
  for (int i = 0; i <= lc; ++i) virt[static_cast<std::size_t>(i)] = i;
  return grid_search(en, virt, schedule.slot_interval_s, wavelength_m, k, grid);
}

RmseReport rmse_study(const PreambleSchedule& schedule, const RadarScene& scene,
                      const RmseConfig& config) {
  if (config.trials < 1) throw Error("trial count must be at least 1");
  const int k = static_cast<int>(scene.targets.size());
  RmseReport report;
  report.eta = config.eta;
  report.trials = config.trials;
  report.true_velocities.reserve(scene.targets.size());
  for (const auto& t : scene.targets) report.true_velocities.push_back(t.velocity_mps);
  std::vector<double> sorted_truth = report.true_velocities;
  std::sort(sorted_truth.begin(), sorted_truth.end());

  VelocityGrid grid;
  grid.vmax_mps = schedule.unambiguous_vmax(scene.wavelength_m);
  grid.points = config.grid_points;

  std::vector<std::vector<double>> errors(static_cast<std::size_t>(config.trials));
  std::vector<char> ok(static_cast<std::size_t>(config.trials), 0);

  auto run_trial = [&](int t) {
    std::uint64_t trial_seed = derive_seed(config.seed, static_cast<std::uint64_t>(t));
    try {
      SnapshotSet snaps = synth_snapshots(schedule, scene, config.eta, trial_seed);
      Eigen::MatrixXcd cov = sample_covariance(snaps);
      std::vector<double> est;
      if (config.method == MusicMethod::Direct) {
        est = direct_music(cov, schedule, scene.wavelength_m, k, grid);
      } else {
        est = da_music(cov, schedule, scene.wavelength_m, k, grid);
      }
      // Sorted pairing minimizes total |error| for points on a line.
      std::vector<double> err(static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i) {
        err[static_cast<std::size_t>(i)] = est[static_cast<std::size_t>(i)] -
                                           sorted_truth[static_cast<std::size_t>(i)];
      }
      errors[static_cast<std::size_t>(t)] = std::move(err);
      ok[static_cast<std::size_t>(t)] = 1;
    } catch (const Error&) {
      ok[static_cast<std::size_t>(t)] = 0;
    }
  };

  int threads = std::max(1, config.threads);
  if (threads == 1) {
    for (int t = 0; t < config.trials; ++t) run_trial(t);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&]() {
        for (int t = next.fetch_add(1); t < config.trials; t = next.fetch_add(1)) run_trial(t);
      });
    }
    for (auto& th : pool) th.join();
  }

  // Accumulate per sorted-truth slot.
  std::vector<double> mse(static_cast<std::size_t>(k), 0.0);
  int good = 0;
  for (int t = 0; t < config.trials; ++t) {
    if (!ok[static_cast<std::size_t>(t)]) continue;
    ++good;
    for (int i = 0; i < k; ++i) {
      double e = errors[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
      mse[static_cast<std::size_t>(i)] += e * e;
    }
  }
  report.failures = config.trials - good;
  report.per_target_rmse.assign(static_cast<std::size_t>(k),
                                std::numeric_limits<double>::quiet_NaN());
  report.aggregate_rmse = std::numeric_limits<double>::quiet_NaN();
  if (good > 0) {
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
      double m = mse[static_cast<std::size_t>(i)] / static_cast<double>(good);
      report.per_target_rmse[static_cast<std::size_t>(i)] = std::sqrt(m);
      total += m;
    }
    report.aggregate_rmse = std::sqrt(total / static_cast<double>(k));
  }

  // Reference bound for the same scene and snapshot count. The bound rows
  // follow the scene's target order; report them sorted like the estimates.
  CrbResult crb = crb_velocity(schedule, scene, config.eta);
  if (crb.exists) {
    std::vector<std::size_t> order(scene.targets.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return report.true_velocities[a] < report.true_velocities[b];
    });
    report.rcrb.reserve(order.size());
    double acc = 0.0;
    for (std::size_t i : order) {
      double c = crb.crb(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
      report.rcrb.push_back(std::sqrt(c));
      acc += std::log10(c);
    }
    report.rcrb_db = 10.0 * acc / static_cast<double>(k);
  } else {
    report.rcrb_db = std::numeric_limits<double>::quiet_NaN();
  }
  report.true_velocities = sorted_truth;
  return report;
}

}  // namespace jcr
