#include "jcr/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "jcr/errors.hpp"

namespace jcr {

namespace {

constexpr double kHullTol = 1e-9;  // collinearity tolerance in normalized coords

/// Candidate parameter sets whose element count equals the budget exactly.
std::vector<FamilyParams> exhaustive_params(WaveFamily family, int m_budget) {
  std::vector<FamilyParams> out;
  switch (family) {
    case WaveFamily::Uniform:
      out.push_back({m_budget, 0});
      break;
    case WaveFamily::Nested:
      for (int m1 = 1; m1 < m_budget; ++m1) out.push_back({m1, m_budget - m1});
      break;
    case WaveFamily::Wichmann:
      for (int p = 0; 3 * p + 3 <= m_budget; ++p) {
        int rem = m_budget - 3 * p - 3;
        if (rem % 2 == 0) out.push_back({p, rem / 2});
      }
      break;
    case WaveFamily::Custom:
      break;
  }
  return out;
}

PreambleSchedule build_family(WaveFamily family, FamilyParams params, double t_d, double cpi) {
  switch (family) {
    case WaveFamily::Uniform: return build_uniform(params.a, t_d, cpi);
    case WaveFamily::Nested: return build_nested(params.a, params.b, t_d, cpi);
    case WaveFamily::Wichmann: return build_wichmann(params.a, params.b, t_d, cpi);
    case WaveFamily::Custom: break;
  }
  throw Error("cannot build a custom family from parameters");
}

struct PointEval {
  bool feasible = false;
  double phi_r = 0.0;
  double rcrb_db = 0.0;
  std::string reason;
};

PointEval eval_radar(const PreambleSchedule& schedule, const SweepScenario& scenario) {
  PointEval ev;
  CrbResult crb = crb_velocity(schedule, scenario.scene, scenario.eta);
  if (!crb.exists) {
    ev.feasible = false;
    ev.reason = (crb.reason == CrbResult::Reason::Singular) ? "singular" : "not_identifiable";
    return ev;
  }
  RadarScalar rs = radar_scalar(crb);
  ev.feasible = true;
  ev.phi_r = rs.phi_r;
  ev.rcrb_db = rs.rcrb_db;
  return ev;
}

TradeoffPoint make_point(WaveFamily family, int m_budget) {
  TradeoffPoint p;
  p.family = family;
  p.m_budget = m_budget;
  p.feasible = false;
  return p;
}

void fill_comm(TradeoffPoint& p, const PreambleSchedule& schedule,
               const SweepScenario& scenario) {
  p.elements = schedule.count();
  p.aperture = schedule.aperture();
  p.mu = preamble_overhead_mu(schedule, scenario.timing);
  CommMetrics cm = dmmse_scalar(p.mu, scenario.comm);
  p.phi_c = cm.phi_c;
  p.dmmse_db = cm.dmmse_db;
}

}  // namespace

std::vector<TradeoffPoint> tradeoff_curve(WaveFamily family, const SweepScenario& scenario,
                                          int m_min, int m_max, ParamRule rule) {
  if (m_min < 2 || m_max < m_min) throw Error("element budget range is empty or too small");
  std::vector<TradeoffPoint> curve;
  curve.reserve(static_cast<std::size_t>(m_max - m_min + 1));
  for (int m = m_min; m <= m_max; ++m) {
    TradeoffPoint p = make_point(family, m);
    try {
      if (rule == ParamRule::VpCount) {
        VpOptimalParams vp = vp_count_optimal_params(family, m);
        PreambleSchedule s =
            build_family(family, vp.params, scenario.slot_interval_s, scenario.cpi_s);
        p.params = vp.params;
        p.count_mismatch = vp.count_mismatch;
        fill_comm(p, s, scenario);
        PointEval ev = eval_radar(s, scenario);
        p.feasible = ev.feasible;
        p.phi_r = ev.phi_r;
        p.rcrb_db = ev.rcrb_db;
        p.reason = ev.reason;
      } else {
        // Exhaustive: smallest phi_r among parameter sets with exactly this
        // element count that fit the CPI and have a finite bound.
        auto candidates = exhaustive_params(family, m);
        if (candidates.empty()) {
          p.reason = "no_params";
          curve.push_back(p);
          continue;
        }
        bool any = false;
        TradeoffPoint best;
        std::string last_reason = "no_params";
        for (const auto& cand : candidates) {
          try {
            PreambleSchedule s =
                build_family(family, cand, scenario.slot_interval_s, scenario.cpi_s);
            TradeoffPoint q = make_point(family, m);
            q.params = cand;
            fill_comm(q, s, scenario);
            PointEval ev = eval_radar(s, scenario);
            if (!ev.feasible) {
              last_reason = ev.reason;
              continue;
            }
            q.feasible = true;
            q.phi_r = ev.phi_r;
            q.rcrb_db = ev.rcrb_db;
            if (!any || q.phi_r < best.phi_r) best = q;
            any = true;
          } catch (const ScheduleTooLong&) {
            last_reason = "schedule_too_long";
          }
        }
        if (any) {
          p = best;
        } else {
          p.reason = last_reason;
        }
      }
    } catch (const ScheduleTooLong&) {
      p.reason = "schedule_too_long";
    } catch (const InfeasibleBudget&) {
      p.reason = "no_params";
    }
    curve.push_back(p);
  }
  return curve;
}

double HullResult::norm_c(double phi_c) const {
  double w = c_max - c_min;
  return w > 0.0 ? (phi_c - c_min) / w : 0.0;
}

double HullResult::norm_r(double phi_r) const {
  double w = r_max - r_min;
  return w > 0.0 ? (phi_r - r_min) / w : 0.0;
}

HullResult convex_hull(std::vector<TradeoffPoint>& curve) {
  std::vector<int> feas;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    curve[i].on_hull = false;
    curve[i].hull_collinear = false;
    if (curve[i].feasible) feas.push_back(static_cast<int>(i));
  }
  if (feas.empty()) throw NoFeasiblePoints("no feasible sweep point");

  HullResult hull;
  hull.c_min = hull.c_max = curve[static_cast<std::size_t>(feas[0])].phi_c;
  hull.r_min = hull.r_max = curve[static_cast<std::size_t>(feas[0])].phi_r;
  for (int i : feas) {
    hull.c_min = std::min(hull.c_min, curve[static_cast<std::size_t>(i)].phi_c);
    hull.c_max = std::max(hull.c_max, curve[static_cast<std::size_t>(i)].phi_c);
    hull.r_min = std::min(hull.r_min, curve[static_cast<std::size_t>(i)].phi_r);
    hull.r_max = std::max(hull.r_max, curve[static_cast<std::size_t>(i)].phi_r);
  }

  // Sort by normalized x, then y; keep only the best y per identical x.
  auto nx = [&](int i) { return hull.norm_c(curve[static_cast<std::size_t>(i)].phi_c); };
  auto ny = [&](int i) { return hull.norm_r(curve[static_cast<std::size_t>(i)].phi_r); };
  std::sort(feas.begin(), feas.end(), [&](int a, int b) {
    if (nx(a) != nx(b)) return nx(a) < nx(b);
    if (ny(a) != ny(b)) return ny(a) < ny(b);
    return curve[static_cast<std::size_t>(a)].m_budget < curve[static_cast<std::size_t>(b)].m_budget;
  });
  std::vector<int> pts;
  for (int i : feas) {
    if (!pts.empty() && std::abs(nx(i) - nx(pts.back())) <= kHullTol) continue;
    pts.push_back(i);
  }

  // Monotone-chain lower hull, keeping collinear vertices.
  std::vector<int> chain;
  auto cross = [&](int o, int a, int b) {
    return (nx(a) - nx(o)) * (ny(b) - ny(o)) - (ny(a) - ny(o)) * (nx(b) - nx(o));
  };
  for (int i : pts) {
    while (chain.size() >= 2 &&
           cross(chain[chain.size() - 2], chain[chain.size() - 1], i) < -kHullTol) {
      chain.pop_back();
    }
    chain.push_back(i);
  }

  // Truncate past the global minimum of phi_r: beyond it both coordinates
  // worsen, so those vertices are dominated.
  std::size_t stop = 0;
  for (std::size_t i = 1; i < chain.size(); ++i) {
    if (ny(chain[i]) < ny(chain[stop]) - kHullTol) stop = i;
  }
  chain.resize(stop + 1);

  for (std::size_t i = 0; i < chain.size(); ++i) {
    auto& p = curve[static_cast<std::size_t>(chain[i])];
    p.on_hull = true;
    if (i > 0 && i + 1 < chain.size()) {
      double c = cross(chain[i - 1], chain[i], chain[i + 1]);
      if (std::abs(c) <= kHullTol) p.hull_collinear = true;
    }
  }
  hull.vertices = std::move(chain);
  return hull;
}

namespace {

DesignSolution pick(const std::vector<TradeoffPoint>& curve, int idx, double objective,
                    double slack) {
  DesignSolution s;
  s.point = curve[static_cast<std::size_t>(idx)];
  s.objective = objective;
  s.slack = slack;
  s.vertex_a = idx;
  s.vertex_b = -1;
  s.mix_weight = 1.0;
  return s;
}

}  // namespace

DesignSolution solve_weighted(const std::vector<TradeoffPoint>& curve, const HullResult& hull,
                              double omega_c) {
  if (omega_c < 0.0 || omega_c > 1.0) throw Error("omega_c must lie in [0, 1]");
  if (hull.vertices.empty()) throw NoFeasiblePoints("empty hull");
  double omega_r = 1.0 - omega_c;
  int best = -1;
  double best_obj = std::numeric_limits<double>::infinity();
  for (int i : hull.vertices) {
    const auto& p = curve[static_cast<std::size_t>(i)];
    double obj = omega_r * hull.norm_r(p.phi_r) + omega_c * hull.norm_c(p.phi_c);
    if (best < 0 || obj < best_obj - 1e-15) {
      best = i;
      best_obj = obj;
    } else if (obj <= best_obj + 1e-15 &&
               p.m_budget < curve[static_cast<std::size_t>(best)].m_budget) {
      best = i;
    }
  }
  return pick(curve, best, best_obj, 0.0);
}

DesignSolution solve_crb_constrained(const std::vector<TradeoffPoint>& curve, double upsilon_r) {
  int best = -1;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const auto& p = curve[i];
    if (!p.feasible || p.phi_r > upsilon_r) continue;
    if (best < 0 || p.phi_c < curve[static_cast<std::size_t>(best)].phi_c ||
        (p.phi_c == curve[static_cast<std::size_t>(best)].phi_c &&
         p.m_budget < curve[static_cast<std::size_t>(best)].m_budget)) {
      best = static_cast<int>(i);
    }
  }
  if (best < 0) throw ConstraintInfeasible("no sweep point satisfies the radar constraint");
  const auto& p = curve[static_cast<std::size_t>(best)];
  return pick(curve, best, p.phi_c, upsilon_r - p.phi_r);
}

DesignSolution solve_dmmse_constrained(const std::vector<TradeoffPoint>& curve,
                                       const HullResult& hull, double upsilon_c) {
  int best = -1;
  for (int i : hull.vertices) {
    const auto& p = curve[static_cast<std::size_t>(i)];
    if (p.phi_c > upsilon_c) continue;
    if (best < 0 || p.phi_r < curve[static_cast<std::size_t>(best)].phi_r ||
        (p.phi_r == curve[static_cast<std::size_t>(best)].phi_r &&
         p.m_budget < curve[static_cast<std::size_t>(best)].m_budget)) {
      best = i;
    }
  }
  if (best < 0) {
    throw ConstraintInfeasible("no hull vertex satisfies the distortion constraint");
  }
  const auto& p = curve[static_cast<std::size_t>(best)];
  return pick(curve, best, p.phi_r, upsilon_c - p.phi_c);
}

std::vector<VpCompareRow> compare_vp_count_vs_crb(WaveFamily family,
                                                  const SweepScenario& scenario, int m_min,
                                                  int m_max) {
  auto vp_curve = tradeoff_curve(family, scenario, m_min, m_max, ParamRule::VpCount);
  auto crb_curve = tradeoff_curve(family, scenario, m_min, m_max, ParamRule::Exhaustive);
  std::vector<VpCompareRow> rows;
  rows.reserve(vp_curve.size());
  for (std::size_t i = 0; i < vp_curve.size(); ++i) {
    VpCompareRow row;
    row.m_budget = vp_curve[i].m_budget;
    row.vp_feasible = vp_curve[i].feasible;
    row.vp_params = vp_curve[i].params;
    row.vp_count_mismatch = vp_curve[i].count_mismatch;
    row.phi_r_vp = vp_curve[i].phi_r;
    row.crb_feasible = crb_curve[i].feasible;
    row.crb_params = crb_curve[i].params;
    row.phi_r_crb = crb_curve[i].phi_r;
    row.agree = row.vp_feasible && row.crb_feasible && row.vp_params == row.crb_params;
    rows.push_back(row);
  }
  return rows;
}

double upsilon_r_from_db(double rcrb_db) { return rcrb_db * std::numbers::ln10 / 10.0; }

double upsilon_r_from_m2s2(double crb_m2s2) {
  if (!(crb_m2s2 > 0.0)) throw Error("radar constraint must be positive");
  return std::log(crb_m2s2);
}

double upsilon_c_from_db(double dmmse_db) { return dmmse_db / (10.0 * std::log10(2.0)); }

}  // namespace jcr
