#pragma once

#include <string>
#include <vector>

#include "jcr/metrics.hpp"
#include "jcr/scene.hpp"
#include "jcr/schedule.hpp"

namespace jcr {

enum class ParamRule { VpCount, Exhaustive };

/// Scenario bundle shared by every point of a sweep: the radar scene (target
/// distances, powers, noise), frame timing for the duty factor, the full-time
/// spectral efficiency of the communication link, and the snapshot count.
struct SweepScenario {
  RadarScene scene;
  FrameTiming timing;
  SpectralEfficiency comm;  // schedule-independent
  int eta = 100;
  double slot_interval_s = 0.0;
  double cpi_s = 0.0;
};

struct TradeoffPoint {
  WaveFamily family = WaveFamily::Uniform;
  FamilyParams params;
  int m_budget = 0;       // sweep coordinate
  int elements = 0;       // actual preamble count
  int aperture = 0;       // last slot minus first slot
  bool count_mismatch = false;
  double mu = 0.0;
  double phi_c = 0.0;
  double dmmse_db = 0.0;
  bool feasible = false;  // radar bound exists and the schedule fits the CPI
  double phi_r = 0.0;     // valid iff feasible
  double rcrb_db = 0.0;   // valid iff feasible
  std::string reason;     // empty when feasible
  bool on_hull = false;
  bool hull_collinear = false;
};

/// Evaluate one family across an element-budget range. Infeasible budgets are
/// retained with feasible == false and a reason tag.
std::vector<TradeoffPoint> tradeoff_curve(WaveFamily family, const SweepScenario& scenario,
                                          int m_min, int m_max, ParamRule rule);

/// Lower-left convex frontier over the feasible points of a curve, in min-max
/// normalized (phi_c, phi_r) coordinates. Marks on_hull / hull_collinear flags
/// on the input points and returns vertex indices ordered by phi_c.
struct HullResult {
  std::vector<int> vertices;  // indices into the curve
  double c_min = 0.0, c_max = 0.0;  // phi_c normalization bounds
  double r_min = 0.0, r_max = 0.0;  // phi_r normalization bounds

  double norm_c(double phi_c) const;
  double norm_r(double phi_r) const;
};

HullResult convex_hull(std::vector<TradeoffPoint>& curve);

struct DesignSolution {
  TradeoffPoint point;
  double objective = 0.0;   // scalarized objective (weighted problem) or phi value
  double slack = 0.0;       // constraint margin, >= 0 for constrained problems
  int vertex_a = -1;        // curve index of the chosen point
  int vertex_b = -1;        // second vertex of a mixture, -1 for pure points
  double mix_weight = 1.0;  // weight on vertex_a
};

/// Weighted scalarization over hull vertices with min-max normalized metrics:
/// minimize (1 - omega_c) phi_r_norm + omega_c phi_c_norm. Ties prefer the
/// smaller element budget.
DesignSolution solve_weighted(const std::vector<TradeoffPoint>& curve, const HullResult& hull,
                              double omega_c);

/// Best communication subject to a radar accuracy ceiling, over all feasible
/// sweep points: minimize phi_c subject to phi_r <= upsilon_r.
DesignSolution solve_crb_constrained(const std::vector<TradeoffPoint>& curve, double upsilon_r);

/// Best radar accuracy subject to a distortion ceiling, over hull vertices:
/// minimize phi_r subject to phi_c <= upsilon_c.
DesignSolution solve_dmmse_constrained(const std::vector<TradeoffPoint>& curve,
                                       const HullResult& hull, double upsilon_c);

struct VpCompareRow {
  int m_budget = 0;
  bool vp_feasible = false;
  FamilyParams vp_params;
  bool vp_count_mismatch = false;
  double phi_r_vp = 0.0;
  bool crb_feasible = false;
  FamilyParams crb_params;
  double phi_r_crb = 0.0;
  bool agree = false;  // both feasible and parameters identical
};

/// Contrast the closed-form VP-count parameter rule with the exhaustive
/// bound-optimal parameters at each element budget.
std::vector<VpCompareRow> compare_vp_count_vs_crb(WaveFamily family,
                                                  const SweepScenario& scenario, int m_min,
                                                  int m_max);

/// Conversions between user-facing constraint units and the internal scalars.
double upsilon_r_from_db(double rcrb_db);          // 20 log10 RCRB dB -> phi_r
double upsilon_r_from_m2s2(double crb_m2s2);       // linear (m/s)^2 -> phi_r
double upsilon_c_from_db(double dmmse_db);         // 10 log10 DMMSE dB -> phi_c

}  // namespace jcr
