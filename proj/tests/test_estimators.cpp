#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "jcr/errors.hpp"
#include "jcr/estimators.hpp"
#include "jcr/metrics.hpp"
#include "jcr/scene.hpp"
#include "jcr/schedule.hpp"

using namespace jcr;

namespace {

constexpr double kTd = 20e-6;
constexpr double kLambda = 5e-3;

Eigen::MatrixXcd exact_covariance(const PreambleSchedule& s, const std::vector<double>& vel,
                                  const std::vector<double>& powers, double noise) {
  auto model = build_doppler(s.positions, s.slot_interval_s, kLambda, vel);
  Eigen::VectorXd p =
      Eigen::Map<const Eigen::VectorXd>(powers.data(), static_cast<Eigen::Index>(powers.size()));
  return model_covariance(model, p, noise);
}

RadarScene scene_with(const std::vector<double>& velocities, double snr_db) {
  RadarScene scene;
  scene.wavelength_m = kLambda;
  scene.noise_power = 1.0;
  double pi3 = 64.0 * std::pow(std::acos(-1.0), 3);
  for (double v : velocities) {
    Target t;
    t.distance_m = 1.0;
    t.velocity_mps = v;
    t.rcs_m2 = std::pow(10.0, snr_db / 10.0) * pi3 / (kLambda * kLambda);
    scene.targets.push_back(t);
  }
  return scene;
}

}  // namespace

TEST_CASE("subspace search recovers velocities from the exact covariance") {
  auto s = build_uniform(10, kTd, 1e-2);
  std::vector<double> vel{-10.0, 15.0};
  auto r = exact_covariance(s, vel, {1.0, 1.0}, 1.0);
  VelocityGrid grid;
  grid.vmax_mps = s.unambiguous_vmax(kLambda);
  auto est = direct_music(r, s, kLambda, 2, grid);
  REQUIRE(est.size() == 2);
  CHECK(std::is_sorted(est.begin(), est.end()));
  CHECK(est[0] == doctest::Approx(-10.0).epsilon(1e-3));
  CHECK(est[1] == doctest::Approx(15.0).epsilon(1e-3));
}

TEST_CASE("single-target search works on a sparse schedule") {
  auto s = build_wichmann(1, 1, kTd, 1e-2);
  auto r = exact_covariance(s, {22.5}, {2.0}, 0.5);
  VelocityGrid grid;
  grid.vmax_mps = s.unambiguous_vmax(kLambda);
  auto est = direct_music(r, s, kLambda, 1, grid);
  REQUIRE(est.size() == 1);
  CHECK(est[0] == doctest::Approx(22.5).epsilon(1e-3));
}

TEST_CASE("augmentation resolves more targets than physical preambles") {
  // nested (3,3): 6 physical elements, contiguous co-waveform up to lag 11.
  auto s = build_nested(3, 3, kTd, 1e-2);
  std::vector<double> vel{-40.0, -25.0, -10.0, 5.0, 15.0, 30.0, 45.0};
  std::vector<double> powers(vel.size(), 1.0);
  auto r = exact_covariance(s, vel, powers, 0.01);
  VelocityGrid grid;
  grid.vmax_mps = s.unambiguous_vmax(kLambda);
  auto est = da_music(r, s, kLambda, static_cast<int>(vel.size()), grid);
  REQUIRE(est.size() == vel.size());
  for (std::size_t i = 0; i < vel.size(); ++i) {
    CHECK(est[i] == doctest::Approx(vel[i]).epsilon(5e-3));
  }
}

TEST_CASE("estimators reject unresolvable target counts") {
  auto s = build_uniform(4, kTd, 1e-2);
  auto r = exact_covariance(s, {10.0}, {1.0}, 1.0);
  VelocityGrid grid;
  grid.vmax_mps = s.unambiguous_vmax(kLambda);
  CHECK_THROWS_AS(direct_music(r, s, kLambda, 4, grid), TooManyTargets);
  auto r3 = exact_covariance(s, {-30.0, 0.0, 30.0}, {1.0, 1.0, 1.0}, 0.1);
  CHECK_NOTHROW(direct_music(r3, s, kLambda, 3, grid));

  auto holey = make_custom({0, 1, 4}, kTd, 1e-2);
  auto rh = exact_covariance(holey, {10.0}, {1.0}, 1.0);
  CHECK_THROWS_AS(da_music(rh, holey, kLambda, 2, grid), CoArrayTooSmall);
}

TEST_CASE("lag averaging rebuilds the Toeplitz covariance") {
  auto s = make_custom({0, 1, 3}, kTd, 1e-2);
  auto r = exact_covariance(s, {17.0}, {3.0}, 0.5);
  auto aug = augmented_covariance(r, s);
  REQUIRE(aug.rows() == 4);

  // Toeplitz, Hermitian, and the populated lags agree with the source matrix.
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      CHECK(std::abs(aug(i, j) - std::conj(aug(j, i))) < 1e-14);
      if (i + 1 < 4 && j + 1 < 4) {
        CHECK(std::abs(aug(i, j) - aug(i + 1, j + 1)) < 1e-14);
      }
    }
  }
  CHECK(std::abs(aug(1, 0) - r(1, 0)) < 1e-14);            // lag 1: only (1,0)
  CHECK(std::abs(aug(2, 0) - r(2, 1)) < 1e-14);            // lag 2: only (3-1)
  CHECK(std::abs(aug(3, 0) - r(2, 0)) < 1e-14);            // lag 3: only (3-0)
  CHECK(std::abs(aug(0, 0) - r.trace() / 3.0) < 1e-14);    // lag 0: diagonal mean

  // The virtual uniform model covariance is recovered exactly for an exact
  // input covariance.
  auto virt = build_uniform(4, kTd, 1e-2);
  auto expect = exact_covariance(virt, {17.0}, {3.0}, 0.5);
  CHECK((aug - expect).norm() < 1e-12 * expect.norm());
}

TEST_CASE("monte carlo studies are reproducible and thread-invariant") {
  auto s = build_uniform(8, kTd, 1e-2);
  RadarScene scene = scene_with({-10.0, 15.0}, 15.0);

  RmseConfig cfg;
  cfg.method = MusicMethod::Direct;
  cfg.eta = 50;
  cfg.trials = 24;
  cfg.seed = 4242;
  cfg.grid_points = 1 << 12;
  cfg.threads = 1;
  auto a = rmse_study(s, scene, cfg);
  auto b = rmse_study(s, scene, cfg);
  cfg.threads = 4;
  auto c = rmse_study(s, scene, cfg);

  REQUIRE(a.per_target_rmse.size() == 2);
  CHECK(std::is_sorted(a.true_velocities.begin(), a.true_velocities.end()));
  CHECK(a.per_target_rmse == b.per_target_rmse);
  CHECK(a.per_target_rmse == c.per_target_rmse);
  CHECK(a.aggregate_rmse == c.aggregate_rmse);
  CHECK(a.failures == c.failures);
  CHECK(a.trials == 24);
  CHECK(a.rcrb.size() == 2);
  CHECK(a.aggregate_rmse > 0.0);

  cfg.seed = 4243;
  cfg.threads = 1;
  auto d = rmse_study(s, scene, cfg);
  CHECK(a.aggregate_rmse != d.aggregate_rmse);
}
