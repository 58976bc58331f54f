#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "jcr/errors.hpp"
#include "jcr/metrics.hpp"
#include "jcr/rng.hpp"
#include "jcr/scene.hpp"
#include "jcr/schedule.hpp"

using namespace jcr;

namespace {

constexpr double kTd = 25e-6;
constexpr double kLambda = 5e-3;
constexpr double kPi = 3.14159265358979323846;

struct Instance {
  std::vector<int> positions;
  std::vector<double> velocities;
  std::vector<double> powers;
  double noise;
};

Eigen::VectorXd to_vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

TEST_CASE("doppler model has unit-modulus entries and the exact derivative") {
  std::vector<int> pos{0, 1, 3, 6};
  std::vector<double> vel{-20.0, 15.0};
  auto model = build_doppler(pos, kTd, kLambda, vel);
  REQUIRE(model.d.rows() == 4);
  REQUIRE(model.d.cols() == 2);
  for (int k = 0; k < 2; ++k) {
    double u = 2.0 * vel[static_cast<std::size_t>(k)] * kTd / kLambda;
    CHECK(model.u[static_cast<std::size_t>(k)] == doctest::Approx(u).epsilon(1e-15));
    for (int m = 0; m < 4; ++m) {
      auto expect = std::polar(1.0, -2.0 * kPi * u * pos[static_cast<std::size_t>(m)]);
      CHECK(std::abs(model.d(m, k) - expect) < 1e-12);
      std::complex<double> factor(0.0, -4.0 * kPi * kTd * pos[static_cast<std::size_t>(m)] / kLambda);
      CHECK(std::abs(model.d_dot(m, k) - factor * model.d(m, k)) < 1e-12);
    }
  }
}

TEST_CASE("model covariance has the expected trace and structure") {
  auto model = build_doppler({0, 1, 2, 5}, kTd, kLambda, {10.0, -5.0});
  Eigen::VectorXd p(2);
  p << 2.0, 0.5;
  auto r = model_covariance(model, p, 0.25);
  CHECK(r.rows() == 4);
  CHECK((r - r.adjoint()).norm() < 1e-12);
  CHECK(r.trace().real() == doctest::Approx(4.0 * (2.0 + 0.5 + 0.25)).epsilon(1e-12));
}

TEST_CASE("covariance-form bound matches the Fisher-information oracle") {
  std::vector<Instance> instances = {
      {{0, 1, 2, 3, 4, 5, 6, 7}, {-20.0, 15.0}, {1.0, 0.5}, 1.0},
      {{0, 1, 2, 5, 8, 11}, {-30.0, 25.0}, {4.0, 2.0}, 0.5},
      {{0, 1, 3, 6, 13, 17, 21, 22}, {-35.0, 0.0, 30.0}, {1.0, 1.0, 1.0}, 0.1},
      {{0, 1, 2, 3, 4, 5}, {12.0}, {10.0}, 1.0},
      {{0, 1, 2, 3, 7, 11}, {-40.0, -10.0, 35.0}, {2.0, 1.0, 0.5}, 0.2},
  };
  for (const auto& inst : instances) {
    auto a = crb_from_model(inst.positions, kTd, kLambda, inst.velocities, to_vec(inst.powers),
                            inst.noise, 100);
    auto b = slepian_bangs_from_model(inst.positions, kTd, kLambda, inst.velocities,
                                      to_vec(inst.powers), inst.noise, 100);
    CAPTURE(inst.positions.front());
    CAPTURE(inst.velocities.size());
    REQUIRE(a.exists);
    REQUIRE(b.exists);
    CHECK((a.crb - b.crb).norm() / b.crb.norm() < 1e-6);
  }
}

TEST_CASE("bound scales inversely with the snapshot count") {
  std::vector<double> vel{-20.0, 15.0};
  std::vector<double> pw{1.0, 0.5};
  for (int eta : {10, 100, 640}) {
    auto a = crb_from_model({0, 1, 2, 5}, kTd, kLambda, vel, to_vec(pw), 1.0, eta);
    auto b = crb_from_model({0, 1, 2, 5}, kTd, kLambda, vel, to_vec(pw), 1.0, 2 * eta);
    REQUIRE(a.exists);
    REQUIRE(b.exists);
    CHECK((a.crb - 2.0 * b.crb).norm() < 1e-12 * a.crb.norm());
  }
}

TEST_CASE("identifiability pre-checks fire at the documented boundaries") {
  RadarScene scene;
  scene.wavelength_m = kLambda;
  scene.noise_power = 1.0;

  auto add_targets = [&](int k) {
    scene.targets.clear();
    for (int i = 0; i < k; ++i) {
      Target t;
      t.distance_m = 10.0;
      t.velocity_mps = -30.0 + 60.0 * i / std::max(1, k - 1);
      t.rcs_m2 = 1e6;
      scene.targets.push_back(t);
    }
  };

  auto uni = build_uniform(4, kTd, 1e-3);
  add_targets(4);
  auto r1 = crb_velocity(uni, scene, 100);
  CHECK(!r1.exists);
  CHECK(r1.reason == CrbResult::Reason::PreCheckUniform);
  add_targets(3);
  CHECK(crb_velocity(uni, scene, 100).exists);

  // nested (2,2) has 5 one-sided virtual preambles: 3 targets need 6.
  auto nested = build_nested(2, 2, kTd, 1e-3);
  add_targets(3);
  auto r2 = crb_velocity(nested, scene, 100);
  CHECK(!r2.exists);
  CHECK(r2.reason == CrbResult::Reason::PreCheckCoarray);
  add_targets(2);
  CHECK(crb_velocity(nested, scene, 100).exists);
}

TEST_CASE("coincident velocities produce a singular Fisher block") {
  std::vector<double> vel{10.0, 10.0};
  std::vector<double> pw{1.0, 1.0};
  auto r = crb_from_model({0, 1, 2, 3, 4, 5, 6, 7}, kTd, kLambda, vel, to_vec(pw), 1.0, 100);
  CHECK(!r.exists);
  CHECK(r.reason == CrbResult::Reason::Singular);
}

TEST_CASE("bound is invariant to translating the schedule") {
  std::vector<double> vel{-20.0, 15.0};
  std::vector<double> pw{1.0, 0.5};
  auto a = crb_from_model({0, 1, 3, 7}, kTd, kLambda, vel, to_vec(pw), 1.0, 100);
  auto b = crb_from_model({2, 3, 5, 9}, kTd, kLambda, vel, to_vec(pw), 1.0, 100);
  REQUIRE(a.exists);
  REQUIRE(b.exists);
  CHECK((a.crb - b.crb).norm() / a.crb.norm() < 1e-9);
}

TEST_CASE("radar scalarization uses decibels of root-CRB") {
  CrbResult r;
  r.exists = true;
  r.crb = Eigen::MatrixXd::Constant(1, 1, 1.5e-4);
  auto s = radar_scalar(r);
  CHECK(s.phi_r == doctest::Approx(std::log(1.5e-4)).epsilon(1e-12));
  CHECK(s.rcrb_db == doctest::Approx(10.0 * std::log10(1.5e-4)).epsilon(1e-12));
  CHECK(s.rcrb_db == doctest::Approx(-38.24).epsilon(1e-3));

  CrbResult r100;
  r100.exists = true;
  r100.crb = Eigen::MatrixXd::Constant(1, 1, 1.5e-2);
  CHECK(radar_scalar(r100).rcrb_db == doctest::Approx(s.rcrb_db + 20.0).epsilon(1e-9));

  CrbResult two;
  two.exists = true;
  two.crb = Eigen::MatrixXd::Identity(2, 2) * 1.5e-4;
  auto s2 = radar_scalar(two);
  CHECK(s2.phi_r == doctest::Approx(s.phi_r).epsilon(1e-12));
  CHECK(s2.rcrb_db == doctest::Approx(s.rcrb_db).epsilon(1e-12));

  CrbResult missing;
  CHECK_THROWS_AS(radar_scalar(missing), CrbDoesNotExist);
}

TEST_CASE("water-filling reproduces hand-solved allocations") {
  auto xi = waterfill({4.0, 1.0});
  REQUIRE(xi.size() == 2);
  CHECK(xi[0] == doctest::Approx(1.375).epsilon(1e-12));
  CHECK(xi[1] == doctest::Approx(0.625).epsilon(1e-12));

  auto edge = waterfill({3.0, 0.0});
  CHECK(edge[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(edge[1] == doctest::Approx(0.0));

  auto flat = waterfill({2.0, 2.0, 2.0});
  for (double x : flat) CHECK(x == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(waterfill({0.0, 0.0}), AllZeroGains);
  CHECK_THROWS_AS(waterfill({1.0, -0.5}), Error);
}

TEST_CASE("water-filling satisfies the optimality conditions") {
  Rng rng(derive_seed(31337, 0));
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> gains(4);
    for (double& g : gains) g = 4.0 * rng.uniform01() + 0.02;
    auto xi = waterfill(gains);
    double mean = 0.0;
    double level = -1.0;
    for (std::size_t i = 0; i < gains.size(); ++i) {
      mean += xi[i];
      if (xi[i] > 1e-12) {
        double li = xi[i] + 1.0 / gains[i];
        if (level < 0.0) level = li;
        CHECK(li == doctest::Approx(level).epsilon(1e-9));
      }
    }
    mean /= static_cast<double>(gains.size());
    CHECK(mean == doctest::Approx(1.0).epsilon(1e-9));
    for (std::size_t i = 0; i < gains.size(); ++i) {
      if (xi[i] <= 1e-12 && gains[i] > 0.0) {
        CHECK(level <= 1.0 / gains[i] + 1e-9);
      }
    }
  }
}

TEST_CASE("water-filling beats a grid search over two subchannels") {
  auto objective = [](const std::vector<double>& g, double x0) {
    double x1 = 2.0 - x0;
    return std::log2(1.0 + g[0] * x0) + std::log2(1.0 + g[1] * x1);
  };
  for (std::vector<double> gains : {std::vector<double>{4.0, 1.0},
                                    std::vector<double>{10.0, 0.2},
                                    std::vector<double>{1.0, 0.9}}) {
    auto xi = waterfill(gains);
    double mine = objective(gains, xi[0]);
    double best = -1.0;
    for (int i = 0; i <= 20000; ++i) {
      best = std::max(best, objective(gains, 2.0 * i / 20000.0));
    }
    CHECK(mine >= best - 1e-7);
  }
}

TEST_CASE("spectral efficiency averages the per-subchannel rates") {
  auto se = spectral_efficiency(10.0, {1.0, 0.5}, {1.2, 0.8});
  REQUIRE(se.per_subchannel.size() == 2);
  CHECK(se.per_subchannel[0] == doctest::Approx(std::log2(13.0)).epsilon(1e-12));
  CHECK(se.per_subchannel[1] == doctest::Approx(std::log2(5.0)).epsilon(1e-12));
  CHECK(se.r == doctest::Approx(0.5 * (std::log2(13.0) + std::log2(5.0))).epsilon(1e-12));
}

TEST_CASE("distortion scalarization equals minus the effective rate") {
  Rng rng(derive_seed(99, 0));
  for (int rep = 0; rep < 25; ++rep) {
    SpectralEfficiency se;
    se.per_subchannel.resize(1 + static_cast<int>(rng.uniform01() * 6));
    double acc = 0.0;
    for (double& r : se.per_subchannel) {
      r = 14.0 * rng.uniform01();
      acc += r;
    }
    se.r = acc / static_cast<double>(se.per_subchannel.size());
    double mu = 0.05 + 0.95 * rng.uniform01();
    auto cm = dmmse_scalar(mu, se);
    CHECK(cm.phi_c == doctest::Approx(-mu * se.r).epsilon(1e-12));
    CHECK(cm.dmmse_db == doctest::Approx(10.0 * std::log10(2.0) * cm.phi_c).epsilon(1e-12));
    CHECK(cm.r_eff == doctest::Approx(mu * se.r).epsilon(1e-12));
    for (std::size_t i = 0; i < se.per_subchannel.size(); ++i) {
      CHECK(cm.dmmse_diag[i] ==
            doctest::Approx(std::exp2(-mu * se.per_subchannel[i])).epsilon(1e-12));
    }
  }

  SpectralEfficiency se;
  se.per_subchannel = {13.0};
  se.r = 13.0;
  CHECK(dmmse_scalar(0.8, se).dmmse_db == doctest::Approx(-31.31).epsilon(1e-3));
  CHECK_THROWS_AS(dmmse_scalar(0.0, se), Error);
  CHECK_THROWS_AS(dmmse_scalar(1.5, se), Error);
}
