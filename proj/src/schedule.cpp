#include "jcr/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "jcr/errors.hpp"

namespace jcr {

std::string family_name(WaveFamily family) {
  switch (family) {
    case WaveFamily::Uniform: return "uniform";
    case WaveFamily::Nested: return "nested";
    case WaveFamily::Wichmann: return "wichmann";
    case WaveFamily::Custom: return "custom";
  }
  return "unknown";
}

int CoWaveform::multiplicity_of(int lag) const {
  auto it = std::lower_bound(lags.begin(), lags.end(), lag);
  if (it == lags.end() || *it != lag) return 0;
  return multiplicity[static_cast<std::size_t>(it - lags.begin())];
}

namespace {

void check_timing(double slot_interval_s, double cpi_s) {
  if (slot_interval_s <= 0.0) throw Error("slot interval must be positive");
  if (cpi_s <= 0.0) throw Error("CPI duration must be positive");
}

PreambleSchedule finish(std::vector<int> positions, WaveFamily family, FamilyParams params,
                        double slot_interval_s, double cpi_s) {
  double span = static_cast<double>(positions.back()) * slot_interval_s;
  if (span > cpi_s) {
    throw ScheduleTooLong(family_name(family) + " schedule spans " + std::to_string(span) +
                          " s, longer than the CPI");
  }
  PreambleSchedule s;
  s.positions = std::move(positions);
  s.family = family;
  s.params = params;
  s.slot_interval_s = slot_interval_s;
  s.cpi_s = cpi_s;
  return s;
}

}  // namespace

PreambleSchedule build_uniform(int m_u, double slot_interval_s, double cpi_s) {
  check_timing(slot_interval_s, cpi_s);
  if (m_u < 2) throw Error("uniform schedule needs at least 2 preambles");
  std::vector<int> pos(static_cast<std::size_t>(m_u));
  for (int m = 0; m < m_u; ++m) pos[static_cast<std::size_t>(m)] = m;
  return finish(std::move(pos), WaveFamily::Uniform, {m_u, 0}, slot_interval_s, cpi_s);
}

PreambleSchedule build_nested(int m1, int m2, double slot_interval_s, double cpi_s) {
  check_timing(slot_interval_s, cpi_s);
  if (m1 < 1 || m2 < 1) throw Error("nested schedule needs m1 >= 1 and m2 >= 1");
  // Dense stage {1..m1} plus sparse stage {k (m1+1)}, re-anchored to slot 0.
  std::vector<int> pos;
  pos.reserve(static_cast<std::size_t>(m1 + m2));
  for (int m = 1; m <= m1; ++m) pos.push_back(m - 1);
  for (int k = 1; k <= m2; ++k) pos.push_back(k * (m1 + 1) - 1);
  return finish(std::move(pos), WaveFamily::Nested, {m1, m2}, slot_interval_s, cpi_s);
}

std::vector<int> wichmann_spacings(int p, int q) {
  if (p < 0 || q < 0) throw Error("Wichmann parameters must be non-negative");
  std::vector<int> d;
  d.reserve(static_cast<std::size_t>(3 * p + 2 * q + 2));
  for (int i = 0; i < p; ++i) d.push_back(1);
  d.push_back(p + 1);
  for (int i = 0; i < q; ++i) d.push_back(2 * p + 1);
  for (int i = 0; i < q; ++i) d.push_back(4 * p + 3);
  for (int i = 0; i < p + 1; ++i) d.push_back(2 * p + 2);
  for (int i = 0; i < p; ++i) d.push_back(1);
  return d;
}

int wichmann_element_count(int p, int q) { return 3 * p + 2 * q + 3; }

PreambleSchedule build_wichmann(int p, int q, double slot_interval_s, double cpi_s) {
  check_timing(slot_interval_s, cpi_s);
  std::vector<int> pos{0};
  for (int d : wichmann_spacings(p, q)) pos.push_back(pos.back() + d);
  return finish(std::move(pos), WaveFamily::Wichmann, {p, q}, slot_interval_s, cpi_s);
}

PreambleSchedule make_custom(std::vector<int> positions, double slot_interval_s, double cpi_s) {
  check_timing(slot_interval_s, cpi_s);
  if (positions.size() < 2) throw Error("custom schedule needs at least 2 preambles");
  for (std::size_t i = 0; i + 1 < positions.size(); ++i) {
    if (positions[i] >= positions[i + 1]) throw Error("positions must be strictly increasing");
  }
  if (positions.front() < 0) throw Error("positions must be non-negative");
  return finish(std::move(positions), WaveFamily::Custom, {}, slot_interval_s, cpi_s);
}

CoWaveform difference_cowaveform(const PreambleSchedule& schedule) {
  const auto& pos = schedule.positions;
  const int span = pos.back() - pos.front();
  std::vector<int> counts(static_cast<std::size_t>(span) + 1, 0);
  for (int a : pos) {
    for (int b : pos) {
      if (a >= b) ++counts[static_cast<std::size_t>(a - b)];
    }
  }
  CoWaveform cw;
  for (int lag = 0; lag <= span; ++lag) {
    if (counts[static_cast<std::size_t>(lag)] > 0) {
      cw.lags.push_back(lag);
      cw.multiplicity.push_back(counts[static_cast<std::size_t>(lag)]);
    }
  }
  int extent = 0;
  while (extent + 1 <= span && counts[static_cast<std::size_t>(extent + 1)] > 0) ++extent;
  cw.contiguous_extent = extent;
  cw.hole_free = (extent == span);
  cw.vp_count_one_sided = static_cast<int>(cw.lags.size()) - 1;
  return cw;
}

long vp_count_closed_form(WaveFamily family, FamilyParams params) {
  switch (family) {
    case WaveFamily::Uniform:
      return params.a - 1;
    case WaveFamily::Nested:
      return static_cast<long>(params.b) * (params.a + 1) - 1;
    case WaveFamily::Wichmann: {
      long p = params.a, q = params.b;
      return 4 * p * (p + q + 2) + 3 * (q + 1);
    }
    case WaveFamily::Custom:
      throw Error("no closed-form VP count for custom schedules");
  }
  throw Error("unknown family");
}

VpOptimalParams vp_count_optimal_params(WaveFamily family, int m_budget) {
  VpOptimalParams out;
  switch (family) {
    case WaveFamily::Uniform:
      if (m_budget < 2) throw InfeasibleBudget("uniform budget must be at least 2");
      out.params = {m_budget, 0};
      out.element_count = m_budget;
      return out;
    case WaveFamily::Nested: {
      if (m_budget < 2) throw InfeasibleBudget("nested budget must be at least 2");
      // Even budgets split evenly; odd budgets put the extra element in the
      // sparse stage, the unique maximizer of m2 (m1 + 1) - 1.
      int m1 = m_budget / 2;
      int m2 = m_budget - m1;
      out.params = {m1, m2};
      out.element_count = m_budget;
      return out;
    }
    case WaveFamily::Wichmann: {
      if (m_budget < 3) throw InfeasibleBudget("Wichmann budget must be at least 3");
      int p = static_cast<int>(std::lround((m_budget - 4) / 6.0));
      if (p < 0) p = 0;
      int q = m_budget - 4 * p - 3;
      if (q < 0) q = 0;
      out.params = {p, q};
      out.element_count = wichmann_element_count(p, q);
      // The rounding rule assumes 4p + q + 3 elements; the spacing template
      // actually emits 3p + 2q + 3, so the two disagree away from p == q.
      out.count_mismatch = (out.element_count != m_budget);
      return out;
    }
    case WaveFamily::Custom:
      throw Error("no parameter rule for custom schedules");
  }
  throw Error("unknown family");
}

double preamble_overhead_mu(const PreambleSchedule& schedule, const FrameTiming& timing) {
  if (timing.preamble_symbols < 1) throw Error("preamble length must be at least 1 symbol");
  if (timing.symbol_period_s <= 0.0) throw Error("symbol period must be positive");
  if (timing.ifs_s < 0.0) throw Error("interframe spacing must be non-negative");
  double per_frame = static_cast<double>(timing.preamble_symbols) * timing.symbol_period_s +
                     timing.ifs_s;
  double total = static_cast<double>(schedule.count()) * per_frame;
  if (total > schedule.cpi_s) {
    throw OverheadExceedsCpi("preamble plus IFS time exceeds the CPI");
  }
  return 1.0 - total / schedule.cpi_s;
}

}  // namespace jcr
