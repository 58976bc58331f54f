#include "jcr/experiments.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "jcr/csv.hpp"
#include "jcr/errors.hpp"
#include "jcr/estimators.hpp"
#include "jcr/metrics.hpp"
#include "jcr/optimizer.hpp"
#include "jcr/rng.hpp"
#include "jcr/scene.hpp"
#include "jcr/schedule.hpp"
#include "jcr/svg.hpp"
#include "jcr/version.hpp"

namespace jcr {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using ColumnSpec = std::vector<std::pair<std::string, std::string>>;

std::string cell(double v) { return format_number(v); }
std::string cell(int v) { return std::to_string(v); }
std::string cell(long v) { return std::to_string(v); }
std::string cell(bool v) { return v ? "1" : "0"; }

std::string joined_positions(const std::vector<int>& positions) {
  std::string out;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(positions[i]);
  }
  return out;
}

void emit_preamble(CsvWriter& w, const ExperimentConfig& cfg, const std::string& table,
                   const ColumnSpec& columns) {
  w.comment(std::string("adaptive preamble schedule designer, version ") + kVersion);
  w.comment("experiment: " + cfg.experiment + ", table: " + table);
  w.comment("seed: " + std::to_string(cfg.seed));
  w.comment("dB conventions: rcrb_db = 20 log10(geometric-mean root velocity bound in m/s); "
            "dmmse_db = 10 log10(geometric-mean distortion MMSE)");
  for (const auto& [name, unit] : columns) w.comment("column " + name + ": " + unit);
  w.comment("config: " + cfg.resolved.dump());
  std::vector<std::string> names;
  names.reserve(columns.size());
  for (const auto& [name, unit] : columns) names.push_back(name);
  w.header(names);
}

PreambleSchedule build_from_params(WaveFamily family, FamilyParams params, double t_d,
                                   double cpi) {
  switch (family) {
    case WaveFamily::Uniform: return build_uniform(params.a, t_d, cpi);
    case WaveFamily::Nested: return build_nested(params.a, params.b, t_d, cpi);
    case WaveFamily::Wichmann: return build_wichmann(params.a, params.b, t_d, cpi);
    case WaveFamily::Custom: break;
  }
  throw Error("cannot build a custom family from parameters");
}

std::string method_name(MusicMethod m) {
  return m == MusicMethod::Direct ? "direct" : "da";
}

struct Combo {
  int k = 0;
  double distance_m = 0.0;
};

std::vector<Combo> scenario_combos(const ResolvedScenario& sc) {
  std::vector<Combo> out;
  for (int k : sc.target_counts) {
    for (double d : sc.target_distances_m) out.push_back({k, d});
  }
  return out;
}

/// Communication side of a sweep, independent of the schedule.
SpectralEfficiency comm_efficiency(const ExperimentConfig& cfg) {
  const auto& sc = cfg.scenario;
  double snr = sc.comm_snr();
  auto eig = comm_channel_eigenvalues(sc.link, sc.subchannels, cfg.seed, sc.eigen_mode);
  std::vector<double> gains(eig.size());
  for (std::size_t i = 0; i < eig.size(); ++i) gains[i] = snr * eig[i];
  auto xi = waterfill(gains);
  return spectral_efficiency(snr, eig, xi);
}

SweepScenario make_sweep(const ExperimentConfig& cfg, const Combo& combo,
                         const SpectralEfficiency& se) {
  SweepScenario sw;
  sw.scene = cfg.scenario.make_scene(combo.k, combo.distance_m);
  sw.timing = cfg.scenario.timing;
  sw.comm = se;
  sw.eta = cfg.eta;
  sw.slot_interval_s = cfg.scenario.slot_interval_s;
  sw.cpi_s = cfg.scenario.cpi_s;
  return sw;
}

std::string series_tag(const ExperimentConfig& cfg, const Combo& combo) {
  if (cfg.scenario.target_counts.size() == 1 && cfg.scenario.target_distances_m.size() == 1) {
    return "";
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), " K=%d d=%gm", combo.k, combo.distance_m);
  return buf;
}

// ---------------------------------------------------------------- coarray --

RunResult run_coarray(const ExperimentConfig& cfg, const RunOptions& opt) {
  const ColumnSpec summary_cols = {
      {"family", "waveform family name"},
      {"m_budget", "preamble element budget, count"},
      {"param_a", "first family parameter (M_U, M1, or p)"},
      {"param_b", "second family parameter (unused, M2, or q)"},
      {"elements", "preambles actually placed, count"},
      {"count_mismatch", "1 when the construction cannot hit the budget exactly"},
      {"built", "1 when the schedule fits the CPI"},
      {"reason", "empty, or why the schedule was not built"},
      {"aperture", "last slot minus first slot, Doppler-Nyquist slots"},
      {"max_lag", "largest pairwise slot difference, slots"},
      {"contiguous_extent", "largest L with lags 0..L all present, slots"},
      {"hole_free", "1 when every lag up to max_lag is present"},
      {"vp_enumerated", "distinct positive lags found by enumeration, count"},
      {"vp_closed_form", "distinct positive lags predicted in closed form, count"},
      {"counts_agree", "1 when enumeration matches the closed form"},
      {"positions", "slot indices, space-separated"},
  };
  const ColumnSpec lag_cols = {
      {"family", "waveform family name"},
      {"m_budget", "preamble element budget, count"},
      {"lag", "slot difference, Doppler-Nyquist slots"},
      {"multiplicity", "ordered preamble pairs realizing the lag, count"},
  };

  CsvWriter summary, lags;
  emit_preamble(summary, cfg, "co-waveform summary", summary_cols);
  emit_preamble(lags, cfg, "co-waveform lags", lag_cols);

  SvgPlot plot("Virtual preambles vs element budget", "element budget M",
               "distinct positive lags");
  for (WaveFamily family : cfg.families) {
    std::vector<double> xs, ys;
    for (int m = cfg.m_min; m <= cfg.m_max; ++m) {
      VpOptimalParams vp = vp_count_optimal_params(family, m);
      std::string reason;
      bool built = true;
      PreambleSchedule schedule;
      try {
        schedule = build_from_params(family, vp.params, cfg.scenario.slot_interval_s,
                                     cfg.scenario.cpi_s);
      } catch (const ScheduleTooLong&) {
        built = false;
        reason = "schedule_too_long";
      }
      if (!built) {
        summary.row({family_name(family), cell(m), cell(vp.params.a), cell(vp.params.b),
                     cell(vp.element_count), cell(vp.count_mismatch), cell(false), reason,
                     cell(-1), cell(-1), cell(-1), cell(false), cell(-1),
                     cell(vp_count_closed_form(family, vp.params)), cell(false), ""});
        xs.push_back(m);
        ys.push_back(kNaN);
        continue;
      }
      CoWaveform cw = difference_cowaveform(schedule);
      long closed = vp_count_closed_form(family, vp.params);
      summary.row({family_name(family), cell(m), cell(vp.params.a), cell(vp.params.b),
                   cell(schedule.count()), cell(vp.count_mismatch), cell(true), "",
                   cell(schedule.aperture()), cell(cw.max_lag()), cell(cw.contiguous_extent),
                   cell(cw.hole_free), cell(cw.vp_count_one_sided), cell(closed),
                   cell(static_cast<long>(cw.vp_count_one_sided) == closed),
                   joined_positions(schedule.positions)});
      for (std::size_t i = 0; i < cw.lags.size(); ++i) {
        lags.row({family_name(family), cell(m), cell(cw.lags[i]), cell(cw.multiplicity[i])});
      }
      xs.push_back(m);
      ys.push_back(static_cast<double>(cw.vp_count_one_sided));
    }
    plot.add_series(family_name(family), xs, ys);
  }

  RunResult result;
  std::string base = opt.out_dir + "/" + cfg.basename;
  write_file(base + ".csv", summary.str());
  result.files.push_back(base + ".csv");
  write_file(base + "_lags.csv", lags.str());
  result.files.push_back(base + "_lags.csv");
  if (cfg.svg) {
    write_file(base + ".svg", plot.render());
    result.files.push_back(base + ".svg");
  }
  return result;
}

// --------------------------------------------------------------- tradeoff --

RunResult run_tradeoff(const ExperimentConfig& cfg, const RunOptions& opt) {
  const ColumnSpec cols = {
      {"k", "targets, count"},
      {"distance_m", "target distance, m"},
      {"family", "waveform family name"},
      {"m_budget", "preamble element budget, count"},
      {"param_a", "first family parameter"},
      {"param_b", "second family parameter"},
      {"elements", "preambles actually placed, count"},
      {"aperture", "last slot minus first slot, slots"},
      {"count_mismatch", "1 when the construction cannot hit the budget exactly"},
      {"mu", "data fraction of the CPI, dimensionless"},
      {"r_full", "full-time spectral efficiency, bit/s/Hz"},
      {"r_eff", "mu-scaled spectral efficiency, bit/s/Hz"},
      {"phi_c", "mean log2 distortion-MMSE diagonal, dimensionless"},
      {"dmmse_db", "distortion-MMSE scalar, dB"},
      {"feasible", "1 when the velocity bound exists and the schedule fits"},
      {"reason", "empty, or why the point is infeasible"},
      {"phi_r", "mean natural log of the velocity bound diagonal, ln (m/s)^2"},
      {"rcrb_db", "root velocity bound scalar, dB"},
      {"on_hull", "1 when the point is a hull vertex"},
      {"hull_collinear", "1 when the vertex is collinear with its hull edge"},
  };

  CsvWriter w;
  emit_preamble(w, cfg, "tradeoff sweep", cols);
  SvgPlot plot("Radar accuracy vs communication distortion", "DMMSE (dB)", "RCRB (dB)");

  SpectralEfficiency se = comm_efficiency(cfg);
  for (const Combo& combo : scenario_combos(cfg.scenario)) {
    SweepScenario sw = make_sweep(cfg, combo, se);
    for (WaveFamily family : cfg.families) {
      auto curve = tradeoff_curve(family, sw, cfg.m_min, cfg.m_max, cfg.param_rule);
      try {
        convex_hull(curve);
      } catch (const NoFeasiblePoints&) {
        // every point stays off-hull; rows still report the comm side
      }
      std::vector<double> xs, ys;
      for (const auto& p : curve) {
        bool have_comm = p.elements > 0;
        double mu = have_comm ? p.mu : kNaN;
        double phi_c = have_comm ? p.phi_c : kNaN;
        double dmmse = have_comm ? p.dmmse_db : kNaN;
        double r_eff = have_comm ? p.mu * se.r : kNaN;
        w.row({cell(combo.k), cell(combo.distance_m), family_name(family), cell(p.m_budget),
               cell(p.params.a), cell(p.params.b), cell(p.elements), cell(p.aperture),
               cell(p.count_mismatch), cell(mu), cell(se.r), cell(r_eff), cell(phi_c),
               cell(dmmse), cell(p.feasible), p.reason, cell(p.feasible ? p.phi_r : kNaN),
               cell(p.feasible ? p.rcrb_db : kNaN), cell(p.on_hull), cell(p.hull_collinear)});
        xs.push_back(p.feasible ? p.dmmse_db : kNaN);
        ys.push_back(p.feasible ? p.rcrb_db : kNaN);
      }
      plot.add_series(family_name(family) + series_tag(cfg, combo), xs, ys);
    }
  }

  RunResult result;
  std::string base = opt.out_dir + "/" + cfg.basename;
  write_file(base + ".csv", w.str());
  result.files.push_back(base + ".csv");
  if (cfg.svg) {
    write_file(base + ".svg", plot.render());
    result.files.push_back(base + ".svg");
  }
  return result;
}

// -------------------------------------------------------------- music-rmse --

RunResult run_music_rmse(const ExperimentConfig& cfg, const RunOptions& opt) {
  const ColumnSpec cols = {
      {"k", "targets, count"},
      {"distance_m", "target distance, m"},
      {"family", "waveform family name"},
      {"param_a", "first family parameter"},
      {"param_b", "second family parameter"},
      {"elements", "preambles actually placed, count"},
      {"method", "estimator: direct or da"},
      {"eta", "snapshots, count"},
      {"trials", "Monte Carlo trials, count"},
      {"failures", "trials where the estimator raised, count"},
      {"ok", "1 when the study produced estimates"},
      {"reason", "empty, or why the study was skipped"},
      {"target_index", "0-based target index; -1 for a skipped study"},
      {"true_velocity_mps", "true target velocity, m/s"},
      {"rmse_mps", "per-target root-mean-square error, m/s"},
      {"rcrb_mps", "per-target root velocity bound, m/s"},
      {"aggregate_rmse_mps", "all-target RMSE, m/s"},
      {"rcrb_db", "root velocity bound scalar, dB"},
  };

  CsvWriter w;
  emit_preamble(w, cfg, "estimator accuracy study", cols);
  SvgPlot plot("Estimator RMSE vs snapshots", "snapshots", "velocity RMSE (m/s)");

  PreambleSchedule schedule = build_from_params(cfg.music_family, cfg.music_params,
                                                cfg.scenario.slot_interval_s, cfg.scenario.cpi_s);
  std::uint64_t counter = 0;
  for (const Combo& combo : scenario_combos(cfg.scenario)) {
    RadarScene scene = cfg.scenario.make_scene(combo.k, combo.distance_m);
    for (MusicMethod method : cfg.music_methods) {
      std::vector<double> xs, ys, bound_ys;
      for (int eta : cfg.eta_list) {
        RmseConfig rc;
        rc.method = method;
        rc.eta = eta;
        rc.trials = cfg.trials;
        rc.seed = derive_seed(cfg.seed, counter++);
        rc.grid_points = cfg.grid_points;
        rc.threads = opt.threads;

        std::string reason;
        try {
          RmseReport rep = rmse_study(schedule, scene, rc);
          for (std::size_t t = 0; t < rep.true_velocities.size(); ++t) {
            double rcrb_t = t < rep.rcrb.size() ? rep.rcrb[t] : kNaN;
            w.row({cell(combo.k), cell(combo.distance_m), family_name(cfg.music_family),
                   cell(cfg.music_params.a), cell(cfg.music_params.b), cell(schedule.count()),
                   method_name(method), cell(eta), cell(rep.trials), cell(rep.failures),
                   cell(true), "", cell(static_cast<int>(t)), cell(rep.true_velocities[t]),
                   cell(rep.per_target_rmse[t]), cell(rcrb_t), cell(rep.aggregate_rmse),
                   cell(rep.rcrb_db)});
          }
          xs.push_back(eta);
          ys.push_back(rep.aggregate_rmse);
          bound_ys.push_back(std::pow(10.0, rep.rcrb_db / 20.0));
          continue;
        } catch (const TooManyTargets&) {
          reason = "too_many_targets";
        } catch (const CoArrayTooSmall&) {
          reason = "coarray_too_small";
        } catch (const VelocityAliased&) {
          reason = "velocity_aliased";
        }
        w.row({cell(combo.k), cell(combo.distance_m), family_name(cfg.music_family),
               cell(cfg.music_params.a), cell(cfg.music_params.b), cell(schedule.count()),
               method_name(method), cell(eta), cell(cfg.trials), cell(0), cell(false), reason,
               cell(-1), cell(kNaN), cell(kNaN), cell(kNaN), cell(kNaN), cell(kNaN)});
        xs.push_back(eta);
        ys.push_back(kNaN);
        bound_ys.push_back(kNaN);
      }
      plot.add_series(method_name(method) + series_tag(cfg, combo), xs, ys);
      plot.add_series("bound (" + method_name(method) + ")" + series_tag(cfg, combo), xs,
                      bound_ys);
    }
  }

  RunResult result;
  std::string base = opt.out_dir + "/" + cfg.basename;
  write_file(base + ".csv", w.str());
  result.files.push_back(base + ".csv");
  if (cfg.svg) {
    write_file(base + ".svg", plot.render());
    result.files.push_back(base + ".svg");
  }
  return result;
}

// --------------------------------------------------------------- optimize --

RunResult run_optimize(const ExperimentConfig& cfg, const RunOptions& opt) {
  const ColumnSpec sol_cols = {
      {"k", "targets, count"},
      {"distance_m", "target distance, m"},
      {"family", "waveform family name"},
      {"problem_index", "0-based index into the configured problem list"},
      {"problem", "weighted, crb-constrained, or dmmse-constrained"},
      {"omega_c", "communication weight in [0,1]; nan for constrained problems"},
      {"constraint", "constraint value with unit; empty for weighted problems"},
      {"found", "1 when a design satisfying the problem exists"},
      {"reason", "empty, or why no design was returned"},
      {"m_star", "chosen element budget, count; -1 when not found"},
      {"param_a", "first family parameter of the chosen design"},
      {"param_b", "second family parameter of the chosen design"},
      {"elements", "preambles actually placed, count"},
      {"mu", "data fraction of the CPI, dimensionless"},
      {"phi_c", "mean log2 distortion-MMSE diagonal, dimensionless"},
      {"dmmse_db", "distortion-MMSE scalar, dB"},
      {"phi_r", "mean natural log of the velocity bound diagonal, ln (m/s)^2"},
      {"rcrb_db", "root velocity bound scalar, dB"},
      {"objective", "scalarized objective (weighted) or optimized phi value"},
      {"slack", "constraint margin in phi units; nan for weighted problems"},
  };
  const ColumnSpec cmp_cols = {
      {"k", "targets, count"},
      {"distance_m", "target distance, m"},
      {"family", "waveform family name"},
      {"m_budget", "preamble element budget, count"},
      {"vp_feasible", "1 when the lag-count rule yields a finite bound"},
      {"vp_a", "first parameter chosen by the lag-count rule"},
      {"vp_b", "second parameter chosen by the lag-count rule"},
      {"vp_count_mismatch", "1 when the rule cannot hit the budget exactly"},
      {"phi_r_vp", "bound scalar under the rule parameters, ln (m/s)^2"},
      {"crb_feasible", "1 when some parameter set yields a finite bound"},
      {"crb_a", "first bound-optimal parameter"},
      {"crb_b", "second bound-optimal parameter"},
      {"phi_r_crb", "best bound scalar over exact-count parameters, ln (m/s)^2"},
      {"agree", "1 when both are feasible with identical parameters"},
  };

  CsvWriter sols, cmp;
  emit_preamble(sols, cfg, "design solutions", sol_cols);
  bool any_compare = false;
  for (const auto& pr : cfg.problems) any_compare = any_compare || pr.kind == "vp-compare";
  if (any_compare) emit_preamble(cmp, cfg, "parameter rule comparison", cmp_cols);

  SvgPlot plot("Chosen budget vs communication weight", "communication weight",
               "chosen element budget");

  auto not_found_row = [&](const Combo& combo, WaveFamily family, int index,
                           const OptimizeProblem& pr, double omega, const std::string& reason) {
    sols.row({cell(combo.k), cell(combo.distance_m), family_name(family), cell(index), pr.kind,
              cell(omega), pr.constraint_text, cell(false), reason, cell(-1), cell(0), cell(0),
              cell(0), cell(kNaN), cell(kNaN), cell(kNaN), cell(kNaN), cell(kNaN), cell(kNaN),
              cell(kNaN)});
  };
  auto solution_row = [&](const Combo& combo, WaveFamily family, int index,
                          const OptimizeProblem& pr, double omega, const DesignSolution& sol,
                          double slack) {
    const TradeoffPoint& p = sol.point;
    sols.row({cell(combo.k), cell(combo.distance_m), family_name(family), cell(index), pr.kind,
              cell(omega), pr.constraint_text, cell(true), "", cell(p.m_budget),
              cell(p.params.a), cell(p.params.b), cell(p.elements), cell(p.mu), cell(p.phi_c),
              cell(p.dmmse_db), cell(p.phi_r), cell(p.rcrb_db), cell(sol.objective),
              cell(slack)});
  };

  SpectralEfficiency se = comm_efficiency(cfg);
  for (const Combo& combo : scenario_combos(cfg.scenario)) {
    SweepScenario sw = make_sweep(cfg, combo, se);
    for (WaveFamily family : cfg.families) {
      auto curve = tradeoff_curve(family, sw, cfg.m_min, cfg.m_max, cfg.param_rule);
      bool have_hull = true;
      HullResult hull;
      try {
        hull = convex_hull(curve);
      } catch (const NoFeasiblePoints&) {
        have_hull = false;
      }

      std::vector<double> weighted_xs, weighted_ys;
      for (std::size_t pi = 0; pi < cfg.problems.size(); ++pi) {
        const OptimizeProblem& pr = cfg.problems[pi];
        int index = static_cast<int>(pi);
        if (pr.kind == "weighted") {
          for (double omega : pr.omega_c) {
            if (!have_hull) {
              not_found_row(combo, family, index, pr, omega, "no_feasible_points");
              continue;
            }
            DesignSolution sol = solve_weighted(curve, hull, omega);
            solution_row(combo, family, index, pr, omega, sol, kNaN);
            weighted_xs.push_back(omega);
            weighted_ys.push_back(sol.point.m_budget);
          }
        } else if (pr.kind == "crb-constrained") {
          try {
            DesignSolution sol = solve_crb_constrained(curve, pr.upsilon_phi_r);
            solution_row(combo, family, index, pr, kNaN, sol, sol.slack);
          } catch (const NoFeasiblePoints&) {
            not_found_row(combo, family, index, pr, kNaN, "no_feasible_points");
          } catch (const ConstraintInfeasible&) {
            not_found_row(combo, family, index, pr, kNaN, "constraint_infeasible");
          }
        } else if (pr.kind == "dmmse-constrained") {
          if (!have_hull) {
            not_found_row(combo, family, index, pr, kNaN, "no_feasible_points");
            continue;
          }
          try {
            DesignSolution sol = solve_dmmse_constrained(curve, hull, pr.upsilon_phi_c);
            solution_row(combo, family, index, pr, kNaN, sol, sol.slack);
          } catch (const ConstraintInfeasible&) {
            not_found_row(combo, family, index, pr, kNaN, "constraint_infeasible");
          }
        } else if (pr.kind == "vp-compare") {
          for (const auto& row : compare_vp_count_vs_crb(family, sw, cfg.m_min, cfg.m_max)) {
            cmp.row({cell(combo.k), cell(combo.distance_m), family_name(family),
                     cell(row.m_budget), cell(row.vp_feasible), cell(row.vp_params.a),
                     cell(row.vp_params.b), cell(row.vp_count_mismatch),
                     cell(row.vp_feasible ? row.phi_r_vp : kNaN), cell(row.crb_feasible),
                     cell(row.crb_params.a), cell(row.crb_params.b),
                     cell(row.crb_feasible ? row.phi_r_crb : kNaN), cell(row.agree)});
          }
        }
      }
      if (!weighted_xs.empty()) {
        plot.add_series(family_name(family) + series_tag(cfg, combo), weighted_xs, weighted_ys);
      }
    }
  }

  RunResult result;
  std::string base = opt.out_dir + "/" + cfg.basename;
  write_file(base + ".csv", sols.str());
  result.files.push_back(base + ".csv");
  if (any_compare) {
    write_file(base + "_vpcompare.csv", cmp.str());
    result.files.push_back(base + "_vpcompare.csv");
  }
  if (cfg.svg && !plot.empty()) {
    write_file(base + ".svg", plot.render());
    result.files.push_back(base + ".svg");
  }
  return result;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opt) {
  if (opt.threads < 1) throw Error("thread count must be >= 1");
  if (cfg.experiment == "coarray") return run_coarray(cfg, opt);
  if (cfg.experiment == "tradeoff") return run_tradeoff(cfg, opt);
  if (cfg.experiment == "music-rmse") return run_music_rmse(cfg, opt);
  if (cfg.experiment == "optimize") return run_optimize(cfg, opt);
  throw ConfigError("unknown experiment \"" + cfg.experiment + "\"");
}

namespace {

std::string compress_budgets(const std::vector<int>& budgets) {
  std::string out;
  std::size_t i = 0;
  while (i < budgets.size()) {
    std::size_t j = i;
    while (j + 1 < budgets.size() && budgets[j + 1] == budgets[j] + 1) ++j;
    if (!out.empty()) out += ", ";
    out += std::to_string(budgets[i]);
    if (j > i) out += ".." + std::to_string(budgets[j]);
    i = j + 1;
  }
  return out;
}

}  // namespace

std::vector<std::string> validate_config(const nlohmann::json& doc) {
  std::vector<std::string> problems;
  ExperimentConfig cfg;
  try {
    cfg = resolve_config(doc);
  } catch (const ConfigError& e) {
    problems.push_back(std::string("config: ") + e.what());
    return problems;
  }

  const ResolvedScenario& sc = cfg.scenario;
  char buf[256];

  double vmax = sc.wavelength_m / (4.0 * sc.slot_interval_s);
  bool alias_reported = false;
  for (int k : sc.target_counts) {
    if (alias_reported) break;
    for (double v : spread_velocities(sc.velocity_lo_mps, sc.velocity_hi_mps, k)) {
      if (std::fabs(v) > vmax) {
        std::snprintf(buf, sizeof(buf),
                      "velocity %g m/s is aliased: the unambiguous limit is %g m/s at T_D = %g us",
                      v, vmax, sc.slot_interval_s * 1e6);
        problems.push_back(buf);
        alias_reported = true;
        break;
      }
    }
  }

  for (WaveFamily family : cfg.families) {
    std::vector<int> too_long;
    std::vector<int> identifiable_budgets;  // per family, max K handled below
    for (int m = cfg.m_min; m <= cfg.m_max; ++m) {
      VpOptimalParams vp = vp_count_optimal_params(family, m);
      PreambleSchedule schedule;
      try {
        schedule = build_from_params(family, vp.params, sc.slot_interval_s, sc.cpi_s);
        preamble_overhead_mu(schedule, sc.timing);
      } catch (const ScheduleTooLong&) {
        too_long.push_back(m);
        continue;
      } catch (const OverheadExceedsCpi&) {
        too_long.push_back(m);
        continue;
      }
      identifiable_budgets.push_back(m);
    }
    if (!too_long.empty()) {
      std::snprintf(buf, sizeof(buf),
                    "%s: budgets %s do not fit the %g ms interval at T_D = %g us",
                    family_name(family).c_str(), compress_budgets(too_long).c_str(),
                    sc.cpi_s * 1e3, sc.slot_interval_s * 1e6);
      problems.push_back(buf);
    }
    for (int k : sc.target_counts) {
      bool any_identifiable = false;
      for (int m : identifiable_budgets) {
        VpOptimalParams vp = vp_count_optimal_params(family, m);
        if (family == WaveFamily::Uniform) {
          if (k < vp.element_count) any_identifiable = true;
        } else {
          long vp_count = vp_count_closed_form(family, vp.params);
          if (2L * k <= vp_count) any_identifiable = true;
        }
        if (any_identifiable) break;
      }
      if (!any_identifiable) {
        if (family == WaveFamily::Uniform) {
          std::snprintf(buf, sizeof(buf),
                        "no feasible uniform point for K = %d in M range [%d, %d] "
                        "(K >= M throughout)",
                        k, cfg.m_min, cfg.m_max);
        } else {
          std::snprintf(buf, sizeof(buf),
                        "no identifiable %s point for K = %d in M range [%d, %d] "
                        "(2K exceeds the virtual-preamble count throughout)",
                        family_name(family).c_str(), k, cfg.m_min, cfg.m_max);
        }
        problems.push_back(buf);
      }
    }
  }

  if (cfg.experiment == "music-rmse") {
    try {
      PreambleSchedule schedule = build_from_params(cfg.music_family, cfg.music_params,
                                                    sc.slot_interval_s, sc.cpi_s);
      CoWaveform cw = difference_cowaveform(schedule);
      for (int k : sc.target_counts) {
        for (MusicMethod method : cfg.music_methods) {
          if (method == MusicMethod::Direct && k >= schedule.count()) {
            std::snprintf(buf, sizeof(buf),
                          "direct estimator needs K < M: K = %d, M = %d", k, schedule.count());
            problems.push_back(buf);
          }
          if (method == MusicMethod::DirectAugmentation && k > cw.contiguous_extent) {
            std::snprintf(buf, sizeof(buf),
                          "augmented estimator needs K <= contiguous co-waveform extent: "
                          "K = %d, extent = %d",
                          k, cw.contiguous_extent);
            problems.push_back(buf);
          }
        }
      }
    } catch (const ScheduleTooLong&) {
      std::snprintf(buf, sizeof(buf), "the study schedule does not fit the %g ms interval",
                    sc.cpi_s * 1e3);
      problems.push_back(buf);
    }
  }

  return problems;
}

}  // namespace jcr
