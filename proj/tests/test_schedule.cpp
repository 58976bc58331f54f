#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "jcr/errors.hpp"
#include "jcr/schedule.hpp"

using namespace jcr;

namespace {
constexpr double kTd = 25e-6;
constexpr double kCpi = 40e-3;
}  // namespace

TEST_CASE("uniform schedule enumerates consecutive slots") {
  auto s = build_uniform(5, kTd, kCpi);
  CHECK(s.positions == std::vector<int>{0, 1, 2, 3, 4});
  CHECK(s.aperture() == 4);
  auto cw = difference_cowaveform(s);
  CHECK(cw.hole_free);
  CHECK(cw.contiguous_extent == 4);
  CHECK(cw.vp_count_one_sided == 4);
  CHECK(cw.vp_count_one_sided == vp_count_closed_form(WaveFamily::Uniform, {5, 0}));
  CHECK(cw.multiplicity_of(0) == 5);
  CHECK(cw.multiplicity_of(4) == 1);
}

TEST_CASE("nested schedule matches the two-stage construction") {
  auto s = build_nested(2, 2, kTd, kCpi);
  CHECK(s.positions == std::vector<int>{0, 1, 2, 5});
  auto cw = difference_cowaveform(s);
  CHECK(cw.hole_free);
  CHECK(cw.contiguous_extent == 5);
  CHECK(cw.vp_count_one_sided == 5);

  auto s2 = build_nested(3, 3, kTd, kCpi);
  CHECK(s2.positions == std::vector<int>{0, 1, 2, 3, 7, 11});
  CHECK(difference_cowaveform(s2).max_lag() == 11);
}

TEST_CASE("nested co-waveform is hole-free with the closed-form extent") {
  for (int m1 = 1; m1 <= 8; ++m1) {
    for (int m2 = 1; m2 <= 8; ++m2) {
      auto s = build_nested(m1, m2, kTd, kCpi);
      auto cw = difference_cowaveform(s);
      long expect = static_cast<long>(m2) * (m1 + 1) - 1;
      CAPTURE(m1);
      CAPTURE(m2);
      CHECK(cw.hole_free);
      CHECK(cw.contiguous_extent == expect);
      CHECK(cw.vp_count_one_sided == expect);
      CHECK(vp_count_closed_form(WaveFamily::Nested, {m1, m2}) == expect);
    }
  }
}

TEST_CASE("wichmann (1,1) reproduces the reference ruler") {
  auto s = build_wichmann(1, 1, kTd, kCpi);
  CHECK(s.positions == std::vector<int>{0, 1, 3, 6, 13, 17, 21, 22});
  auto cw = difference_cowaveform(s);
  CHECK(cw.hole_free);
  CHECK(cw.max_lag() == 22);
  CHECK(cw.vp_count_one_sided == 22);
  CHECK(vp_count_closed_form(WaveFamily::Wichmann, {1, 1}) == 22);
}

TEST_CASE("wichmann closed-form count is advisory off the p == q line") {
  // (0,1): the enumerated co-waveform has 7 one-sided lags, the closed form
  // says 6. Enumeration is authoritative; the closed form only matches the
  // template along p == q.
  auto s = build_wichmann(0, 1, kTd, kCpi);
  CHECK(s.positions == std::vector<int>{0, 1, 2, 5, 7});
  auto cw = difference_cowaveform(s);
  CHECK(cw.vp_count_one_sided == 7);
  CHECK(vp_count_closed_form(WaveFamily::Wichmann, {0, 1}) == 6);

  for (int pq = 0; pq <= 3; ++pq) {
    auto sd = build_wichmann(pq, pq, kTd, 400e-3);
    auto cwd = difference_cowaveform(sd);
    CAPTURE(pq);
    CHECK(cwd.hole_free);
    CHECK(cwd.vp_count_one_sided == vp_count_closed_form(WaveFamily::Wichmann, {pq, pq}));
  }
}

TEST_CASE("wichmann template emits 3p + 2q + 3 elements") {
  for (int p = 0; p <= 4; ++p) {
    for (int q = 0; q <= 5; ++q) {
      auto s = build_wichmann(p, q, kTd, 400e-3);
      CAPTURE(p);
      CAPTURE(q);
      CHECK(s.count() == 3 * p + 2 * q + 3);
      CHECK(s.count() == wichmann_element_count(p, q));
      long aperture = 2L * p * p + 7L * p + 3 + static_cast<long>(q) * (6 * p + 4);
      CHECK(s.aperture() == aperture);
      int total = 0;
      for (int d : wichmann_spacings(p, q)) total += d;
      CHECK(total == aperture);
    }
  }
}

TEST_CASE("custom schedules expose holes in the co-waveform") {
  auto s = make_custom({0, 1, 4}, kTd, kCpi);
  auto cw = difference_cowaveform(s);
  CHECK(!cw.hole_free);
  CHECK(cw.lags == std::vector<int>{0, 1, 3, 4});
  CHECK(cw.contiguous_extent == 1);
  CHECK(cw.vp_count_one_sided == 3);
}

TEST_CASE("custom schedules reject malformed positions") {
  CHECK_THROWS_AS(make_custom({0, 3, 3}, kTd, kCpi), Error);
  CHECK_THROWS_AS(make_custom({4, 1}, kTd, kCpi), Error);
  CHECK_THROWS_AS(make_custom({-1, 2}, kTd, kCpi), Error);
  CHECK_THROWS_AS(make_custom({7}, kTd, kCpi), Error);
}

TEST_CASE("custom schedules may start anywhere") {
  auto a = make_custom({0, 1, 3, 7}, kTd, kCpi);
  auto b = make_custom({5, 6, 8, 12}, kTd, kCpi);
  auto ca = difference_cowaveform(a);
  auto cb = difference_cowaveform(b);
  CHECK(ca.lags == cb.lags);
  CHECK(ca.multiplicity == cb.multiplicity);
}

TEST_CASE("budget rules pick the VP-count-maximizing family parameters") {
  auto n40 = vp_count_optimal_params(WaveFamily::Nested, 40);
  CHECK(n40.params == FamilyParams{20, 20});
  CHECK(n40.element_count == 40);
  CHECK(!n40.count_mismatch);

  // Odd budgets put the extra element in the sparse stage: m1 = (m - 1) / 2
  // uniquely maximizes m2 (m1 + 1) - 1.
  CHECK(vp_count_optimal_params(WaveFamily::Nested, 7).params == FamilyParams{3, 4});
  CHECK(vp_count_optimal_params(WaveFamily::Nested, 9).params == FamilyParams{4, 5});
  for (int m = 2; m <= 40; ++m) {
    auto best = vp_count_optimal_params(WaveFamily::Nested, m);
    long best_vp = vp_count_closed_form(WaveFamily::Nested, best.params);
    for (int m1 = 1; m1 < m; ++m1) {
      CHECK(vp_count_closed_form(WaveFamily::Nested, {m1, m - m1}) <= best_vp);
    }
  }

  auto w20 = vp_count_optimal_params(WaveFamily::Wichmann, 20);
  CHECK(w20.params == FamilyParams{3, 5});
  CHECK(w20.element_count == 22);
  CHECK(w20.count_mismatch);

  auto w8 = vp_count_optimal_params(WaveFamily::Wichmann, 8);
  CHECK(w8.params == FamilyParams{1, 1});
  CHECK(!w8.count_mismatch);

  auto u9 = vp_count_optimal_params(WaveFamily::Uniform, 9);
  CHECK(u9.params == FamilyParams{9, 0});
  CHECK(!u9.count_mismatch);

  CHECK_THROWS_AS(vp_count_optimal_params(WaveFamily::Uniform, 1), InfeasibleBudget);
  CHECK_THROWS_AS(vp_count_optimal_params(WaveFamily::Wichmann, 2), InfeasibleBudget);
}

TEST_CASE("preamble overhead follows the frame timing model") {
  FrameTiming timing;
  const double td = 1e-3 / 640.0;
  auto m40 = build_uniform(40, td, 1e-3);
  CHECK(preamble_overhead_mu(m40, timing) == doctest::Approx(1.0 - 0.19563636).epsilon(1e-6));
  auto m8 = build_uniform(8, td, 1e-3);
  CHECK(preamble_overhead_mu(m8, timing) == doctest::Approx(1.0 - 0.03912727).epsilon(1e-6));

  double prev = 1.0;
  for (int m = 2; m <= 60; ++m) {
    double mu = preamble_overhead_mu(build_uniform(m, td, 1e-3), timing);
    CHECK(mu < prev);
    CHECK(mu > 0.0);
    prev = mu;
  }
}

TEST_CASE("schedules that do not fit the CPI are rejected") {
  CHECK_THROWS_AS(build_uniform(42, 25e-6, 1e-3), ScheduleTooLong);
  CHECK_NOTHROW(build_uniform(40, 25e-6, 1e-3));

  FrameTiming timing;
  auto dense = build_uniform(205, 1e-3 / 640.0, 1e-3);
  CHECK_THROWS_AS(preamble_overhead_mu(dense, timing), OverheadExceedsCpi);
}

TEST_CASE("unambiguous velocity scales with the slot interval") {
  auto s = build_uniform(4, 25e-6, kCpi);
  CHECK(s.unambiguous_vmax(5e-3) == doctest::Approx(50.0));
  auto s2 = build_uniform(4, 50e-6, kCpi);
  CHECK(s2.unambiguous_vmax(5e-3) == doctest::Approx(25.0));
}

TEST_CASE("family names round-trip") {
  CHECK(family_name(WaveFamily::Uniform) == "uniform");
  CHECK(family_name(WaveFamily::Nested) == "nested");
  CHECK(family_name(WaveFamily::Wichmann) == "wichmann");
  CHECK(family_name(WaveFamily::Custom) == "custom");
}
