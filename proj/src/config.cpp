#include "jcr/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "jcr/errors.hpp"
#include "jcr/csv.hpp"
#include "jcr/metrics.hpp"

namespace jcr {

using nlohmann::json;

namespace {

constexpr double kBoltzmann = 1.380649e-23;
constexpr double kReferenceTempK = 290.0;
constexpr double kSpeedOfLight = 299792458.0;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(path + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) fail("unknown key \"" + path + "." + it.key() + "\"");
  }
}

double num(const json& obj, const std::string& path, const std::string& key, double def) {
  if (!obj.contains(key) || obj.at(key).is_null()) return def;
  const auto& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key + " must be a number");
  return v.get<double>();
}

std::optional<double> opt_num(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  const auto& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key + " must be a number or null");
  return v.get<double>();
}

long integer(const json& obj, const std::string& path, const std::string& key, long def) {
  if (!obj.contains(key) || obj.at(key).is_null()) return def;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) fail(path + "." + key + " must be an integer");
  return v.get<long>();
}

std::string text(const json& obj, const std::string& path, const std::string& key,
                 const std::string& def) {
  if (!obj.contains(key) || obj.at(key).is_null()) return def;
  const auto& v = obj.at(key);
  if (!v.is_string()) fail(path + "." + key + " must be a string");
  return v.get<std::string>();
}

bool boolean(const json& obj, const std::string& path, const std::string& key, bool def) {
  if (!obj.contains(key) || obj.at(key).is_null()) return def;
  const auto& v = obj.at(key);
  if (!v.is_boolean()) fail(path + "." + key + " must be a boolean");
  return v.get<bool>();
}

/// Scalar-or-list numeric field.
std::vector<double> num_list(const json& obj, const std::string& path, const std::string& key,
                             std::vector<double> def) {
  if (!obj.contains(key) || obj.at(key).is_null()) return def;
  const auto& v = obj.at(key);
  if (v.is_number()) return {v.get<double>()};
  if (v.is_array()) {
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) fail(path + "." + key + " entries must be numbers");
      out.push_back(e.get<double>());
    }
    if (out.empty()) fail(path + "." + key + " must not be empty");
    return out;
  }
  fail(path + "." + key + " must be a number or an array of numbers");
}

std::vector<long> int_list(const json& obj, const std::string& path, const std::string& key,
                           std::vector<long> def) {
  if (!obj.contains(key) || obj.at(key).is_null()) return def;
  const auto& v = obj.at(key);
  if (v.is_number_integer()) return {v.get<long>()};
  if (v.is_array()) {
    std::vector<long> out;
    for (const auto& e : v) {
      if (!e.is_number_integer()) fail(path + "." + key + " entries must be integers");
      out.push_back(e.get<long>());
    }
    if (out.empty()) fail(path + "." + key + " must not be empty");
    return out;
  }
  fail(path + "." + key + " must be an integer or an array of integers");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace

WaveFamily family_from_name(const std::string& name) {
  if (name == "uniform") return WaveFamily::Uniform;
  if (name == "nested") return WaveFamily::Nested;
  if (name == "wichmann") return WaveFamily::Wichmann;
  fail("unknown waveform family \"" + name + "\"");
}

std::vector<double> spread_velocities(double lo, double hi, int k) {
  if (k < 1) fail("target count must be at least 1");
  if (!(hi > lo)) fail("velocity span must have hi > lo");
  std::vector<double> v(static_cast<std::size_t>(k));
  if (k == 1) {
    v[0] = 0.5 * (lo + hi);
    return v;
  }
  double step = (hi - lo) / static_cast<double>(k - 1);
  for (int i = 0; i < k; ++i) v[static_cast<std::size_t>(i)] = lo + step * i;
  return v;
}

double ResolvedScenario::comm_snr() const {
  if (comm_snr_db) return db_to_linear(*comm_snr_db);
  double gc = comm_pathloss(link, wavelength_m, tx_gain, rx_gain);
  return symbol_energy * gc / noise_power;
}

RadarScene ResolvedScenario::make_scene(int k, double distance_m) const {
  RadarScene scene;
  scene.wavelength_m = wavelength_m;
  scene.tx_gain = tx_gain;
  scene.rx_gain = rx_gain;
  scene.symbol_energy = symbol_energy;
  scene.correlation_gain = correlation_gain;
  scene.noise_power = noise_power;
  auto velocities = spread_velocities(velocity_lo_mps, velocity_hi_mps, k);
  double rcs = rcs_m2;
  if (target_snr_db) {
    // Choose the cross-section that lands every target exactly at the
    // requested per-target SNR for this distance.
    Target probe{distance_m, 0.0, 1.0};
    double g_unit = radar_two_way_gain(probe, wavelength_m, tx_gain, rx_gain);
    double wanted_power = db_to_linear(*target_snr_db) * noise_power;
    rcs = wanted_power / (correlation_gain * correlation_gain * symbol_energy * g_unit);
  }
  for (double v : velocities) scene.targets.push_back({distance_m, v, rcs});
  return scene;
}

json load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail("cannot open config file " + path);
  json doc;
  try {
    f >> doc;
  } catch (const json::parse_error& e) {
    fail("config parse error in " + path + ": " + e.what());
  }
  if (!doc.is_object()) fail("config root must be an object");
  return doc;
}

void apply_override(json& doc, const std::string& spec) {
  auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) fail("override must look like path.to.key=value");
  std::string path = spec.substr(0, eq);
  std::string value = spec.substr(eq + 1);

  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error&) {
    parsed = value;  // bare strings stay strings
  }

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    std::size_t dot = path.find('.', start);
    std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (key.empty()) fail("override path has an empty segment: " + path);
    if (dot == std::string::npos) {
      (*node)[key] = parsed;
      return;
    }
    if (!node->contains(key)) (*node)[key] = json::object();
    node = &(*node)[key];
    if (!node->is_object()) fail("override path crosses a non-object at \"" + key + "\"");
    start = dot + 1;
  }
}

namespace {

ResolvedScenario resolve_scenario(const json& sc, const std::string& experiment) {
  check_keys(sc, "scenario",
             {"carrier_ghz", "tx_gain_db", "rx_gain_db", "cpi_ms", "t_d_us", "noise",
              "symbol_energy", "correlation_gain", "frame", "targets", "comm"});
  ResolvedScenario out;
  double carrier_ghz = num(sc, "scenario", "carrier_ghz", 60.0);
  if (!(carrier_ghz > 0.0)) fail("scenario.carrier_ghz must be positive");
  out.wavelength_m = kSpeedOfLight / (carrier_ghz * 1e9);
  out.tx_gain = db_to_linear(num(sc, "scenario", "tx_gain_db", 0.0));
  out.rx_gain = db_to_linear(num(sc, "scenario", "rx_gain_db", 0.0));
  out.cpi_s = num(sc, "scenario", "cpi_ms", 1.0) * 1e-3;
  if (!(out.cpi_s > 0.0)) fail("scenario.cpi_ms must be positive");

  json frame = sc.contains("frame") && !sc.at("frame").is_null() ? sc.at("frame") : json::object();
  check_keys(frame, "scenario.frame", {"preamble_symbols", "symbol_rate_ghz", "ifs_us"});
  out.timing.preamble_symbols = integer(frame, "scenario.frame", "preamble_symbols", 3328);
  double rate_ghz = num(frame, "scenario.frame", "symbol_rate_ghz", 1.76);
  if (!(rate_ghz > 0.0)) fail("scenario.frame.symbol_rate_ghz must be positive");
  out.timing.symbol_period_s = 1.0 / (rate_ghz * 1e9);
  out.timing.ifs_s = num(frame, "scenario.frame", "ifs_us", 3.0) * 1e-6;

  json noise = sc.contains("noise") && !sc.at("noise").is_null() ? sc.at("noise") : json::object();
  check_keys(noise, "scenario.noise", {"bandwidth_ghz", "noise_figure_db", "power_w"});
  auto power_w = opt_num(noise, "scenario.noise", "power_w");
  if (power_w) {
    out.noise_power = *power_w;
  } else {
    double bw = num(noise, "scenario.noise", "bandwidth_ghz", 1.76) * 1e9;
    double nf = db_to_linear(num(noise, "scenario.noise", "noise_figure_db", 6.0));
    out.noise_power = kBoltzmann * kReferenceTempK * bw * nf;
  }
  if (!(out.noise_power > 0.0)) fail("noise power must be positive");

  auto gamma = opt_num(sc, "scenario", "correlation_gain");
  out.correlation_gain =
      gamma ? *gamma : std::sqrt(static_cast<double>(out.timing.preamble_symbols));
  if (!(out.correlation_gain > 0.0)) fail("scenario.correlation_gain must be positive");

  auto es = opt_num(sc, "scenario", "symbol_energy");
  if (es) {
    out.symbol_energy = *es;
  } else {
    // Default energy normalization: unit radar SNR for a 10 dBsm target at
    // 100 m with this wavelength and antenna gains.
    Target ref{100.0, 0.0, 10.0};
    double gk = radar_two_way_gain(ref, out.wavelength_m, out.tx_gain, out.rx_gain);
    out.symbol_energy =
        out.noise_power / (out.correlation_gain * out.correlation_gain * gk);
  }
  if (!(out.symbol_energy > 0.0)) fail("scenario.symbol_energy must be positive");

  json tg = sc.contains("targets") && !sc.at("targets").is_null() ? sc.at("targets")
                                                                  : json::object();
  check_keys(tg, "scenario.targets",
             {"count", "distance_m", "rcs_dbsm", "velocity_span_mps", "snr_override_db"});
  for (long k : int_list(tg, "scenario.targets", "count", {1})) {
    if (k < 1) fail("scenario.targets.count entries must be >= 1");
    out.target_counts.push_back(static_cast<int>(k));
  }
  out.target_distances_m = num_list(tg, "scenario.targets", "distance_m", {20.0});
  for (double d : out.target_distances_m) {
    if (!(d > 0.0)) fail("scenario.targets.distance_m entries must be positive");
  }
  out.rcs_m2 = db_to_linear(num(tg, "scenario.targets", "rcs_dbsm", 10.0));
  auto span = num_list(tg, "scenario.targets", "velocity_span_mps", {-45.0, 50.0});
  if (span.size() != 2 || !(span[1] > span[0])) {
    fail("scenario.targets.velocity_span_mps must be [lo, hi] with hi > lo");
  }
  out.velocity_lo_mps = span[0];
  out.velocity_hi_mps = span[1];
  out.target_snr_db = opt_num(tg, "scenario.targets", "snr_override_db");

  json cm = sc.contains("comm") && !sc.at("comm").is_null() ? sc.at("comm") : json::object();
  check_keys(cm, "scenario.comm",
             {"distance_m", "pathloss_exp", "snr_db", "taps", "eigen_mode", "subchannels"});
  out.link.distance_m = num(cm, "scenario.comm", "distance_m", 50.0);
  if (!(out.link.distance_m > 0.0)) fail("scenario.comm.distance_m must be positive");
  out.link.pathloss_exp = num(cm, "scenario.comm", "pathloss_exp", 2.0);
  // Default pins the flat-channel link near 10.7 bit/s/Hz; the string
  // "budget" derives the SNR from the link budget instead.
  if (cm.contains("snr_db") && cm.at("snr_db").is_string()) {
    if (cm.at("snr_db").get<std::string>() != "budget") {
      fail("scenario.comm.snr_db must be a number or the string \"budget\"");
    }
    out.comm_snr_db = std::nullopt;
  } else {
    out.comm_snr_db = num(cm, "scenario.comm", "snr_db", 32.33);
  }
  json taps = cm.contains("taps") && !cm.at("taps").is_null() ? cm.at("taps") : json::object();
  check_keys(taps, "scenario.comm.taps", {"count", "decay_db", "powers"});
  if (taps.contains("powers") && !taps.at("powers").is_null()) {
    out.link.tap_powers = num_list(taps, "scenario.comm.taps", "powers", {});
    double sum = 0.0;
    for (double p : out.link.tap_powers) {
      if (p < 0.0) fail("tap powers must be non-negative");
      sum += p;
    }
    if (!(sum > 0.0)) fail("tap powers must not all be zero");
    for (auto& p : out.link.tap_powers) p /= sum;
  } else {
    int count = static_cast<int>(integer(taps, "scenario.comm.taps", "count", 4));
    double decay = num(taps, "scenario.comm.taps", "decay_db", 3.0);
    out.link.tap_powers = exp_tap_profile(count, decay);
  }
  std::string mode = text(cm, "scenario.comm", "eigen_mode", "expectation");
  if (mode == "expectation") {
    out.eigen_mode = ChannelEigenMode::Expectation;
  } else if (mode == "realization") {
    out.eigen_mode = ChannelEigenMode::Realization;
  } else {
    fail("scenario.comm.eigen_mode must be \"expectation\" or \"realization\"");
  }
  out.subchannels = static_cast<int>(integer(cm, "scenario.comm", "subchannels", 512));
  if (out.subchannels < 1) fail("scenario.comm.subchannels must be >= 1");

  // Slot interval default depends on the experiment: sweeps must fit the
  // widest schedule in the CPI, estimator studies favor Doppler headroom.
  auto td_us = opt_num(sc, "scenario", "t_d_us");
  if (td_us) {
    out.slot_interval_s = *td_us * 1e-6;
  } else if (experiment == "tradeoff" || experiment == "optimize") {
    out.slot_interval_s = out.cpi_s / 640.0;
  } else if (experiment == "music-rmse") {
    out.slot_interval_s = 20e-6;
  } else {
    out.slot_interval_s = 25e-6;
  }
  if (!(out.slot_interval_s > 0.0)) fail("scenario.t_d_us must be positive");
  return out;
}

OptimizeProblem resolve_problem(const json& pr, std::size_t idx) {
  std::string path = "optimize.problems[" + std::to_string(idx) + "]";
  check_keys(pr, path,
             {"kind", "omega_c", "upsilon_r_db", "upsilon_r_m2s2", "upsilon_c_db"});
  OptimizeProblem out;
  out.kind = text(pr, path, "kind", "");
  if (out.kind == "weighted") {
    out.omega_c = num_list(pr, path, "omega_c", {0.96});
    for (double w : out.omega_c) {
      if (w < 0.0 || w > 1.0) fail(path + ".omega_c entries must lie in [0, 1]");
    }
  } else if (out.kind == "crb-constrained") {
    auto db = opt_num(pr, path, "upsilon_r_db");
    auto lin = opt_num(pr, path, "upsilon_r_m2s2");
    if (db && lin) fail(path + ": give only one of upsilon_r_db / upsilon_r_m2s2");
    if (!db && !lin) fail(path + ": crb-constrained needs upsilon_r_db or upsilon_r_m2s2");
    if (db) {
      out.upsilon_phi_r = upsilon_r_from_db(*db);
      out.constraint_text = format_number(*db) + " dB";
    } else {
      out.upsilon_phi_r = upsilon_r_from_m2s2(*lin);
      out.constraint_text = format_number(*lin) + " (m/s)^2";
    }
  } else if (out.kind == "dmmse-constrained") {
    auto db = opt_num(pr, path, "upsilon_c_db");
    if (!db) fail(path + ": dmmse-constrained needs upsilon_c_db");
    out.upsilon_phi_c = upsilon_c_from_db(*db);
    out.constraint_text = format_number(*db) + " dB";
  } else if (out.kind == "vp-compare") {
    // no parameters
  } else {
    fail(path + ".kind must be weighted, crb-constrained, dmmse-constrained, or vp-compare");
  }
  return out;
}

}  // namespace

ExperimentConfig resolve_config(const json& doc) {
  check_keys(doc, "config",
             {"experiment", "seed", "scenario", "sweep", "music", "optimize", "output"});
  ExperimentConfig cfg;
  cfg.experiment = text(doc, "config", "experiment", "");
  if (cfg.experiment != "coarray" && cfg.experiment != "tradeoff" &&
      cfg.experiment != "music-rmse" && cfg.experiment != "optimize") {
    fail("experiment must be coarray, tradeoff, music-rmse, or optimize");
  }
  if (doc.contains("seed") && !doc.at("seed").is_null()) {
    const auto& v = doc.at("seed");
    if (v.is_number_unsigned()) {
      cfg.seed = v.get<std::uint64_t>();
    } else if (v.is_number_integer() && v.get<long long>() >= 0) {
      cfg.seed = static_cast<std::uint64_t>(v.get<long long>());
    } else {
      fail("seed must be a non-negative integer");
    }
  }

  json sc = doc.contains("scenario") && !doc.at("scenario").is_null() ? doc.at("scenario")
                                                                      : json::object();
  cfg.scenario = resolve_scenario(sc, cfg.experiment);

  json sweep = doc.contains("sweep") && !doc.at("sweep").is_null() ? doc.at("sweep")
                                                                   : json::object();
  check_keys(sweep, "sweep", {"families", "m_min", "m_max", "param_rule", "eta"});
  if (sweep.contains("families") && !sweep.at("families").is_null()) {
    const auto& fams = sweep.at("families");
    if (!fams.is_array() || fams.empty()) fail("sweep.families must be a non-empty array");
    for (const auto& f : fams) {
      if (!f.is_string()) fail("sweep.families entries must be strings");
      cfg.families.push_back(family_from_name(f.get<std::string>()));
    }
  } else {
    cfg.families = {WaveFamily::Uniform, WaveFamily::Nested, WaveFamily::Wichmann};
  }
  cfg.m_min = static_cast<int>(integer(sweep, "sweep", "m_min", 3));
  cfg.m_max = static_cast<int>(integer(sweep, "sweep", "m_max", 40));
  if (cfg.m_min < 2 || cfg.m_max < cfg.m_min) fail("sweep range must satisfy 2 <= m_min <= m_max");
  std::string rule = text(sweep, "sweep", "param_rule", "vp-count");
  if (rule == "vp-count") {
    cfg.param_rule = ParamRule::VpCount;
  } else if (rule == "exhaustive") {
    cfg.param_rule = ParamRule::Exhaustive;
  } else {
    fail("sweep.param_rule must be \"vp-count\" or \"exhaustive\"");
  }
  cfg.eta = static_cast<int>(integer(sweep, "sweep", "eta", 100));
  if (cfg.eta < 1) fail("sweep.eta must be >= 1");

  json music = doc.contains("music") && !doc.at("music").is_null() ? doc.at("music")
                                                                   : json::object();
  check_keys(music, "music",
             {"family", "params", "estimator", "eta_list", "trials", "grid_points"});
  cfg.music_family = family_from_name(text(music, "music", "family", "uniform"));
  {
    auto params = int_list(music, "music", "params", {20});
    cfg.music_params.a = static_cast<int>(params[0]);
    cfg.music_params.b = params.size() > 1 ? static_cast<int>(params[1]) : 0;
    if (params.size() > 2) fail("music.params takes at most two integers");
  }
  std::string est = text(music, "music", "estimator", "direct");
  if (est == "direct") {
    cfg.music_methods = {MusicMethod::Direct};
  } else if (est == "da") {
    cfg.music_methods = {MusicMethod::DirectAugmentation};
  } else if (est == "both") {
    cfg.music_methods = {MusicMethod::Direct, MusicMethod::DirectAugmentation};
  } else {
    fail("music.estimator must be \"direct\", \"da\", or \"both\"");
  }
  for (long e : int_list(music, "music", "eta_list", {100})) {
    if (e < 1) fail("music.eta_list entries must be >= 1");
    cfg.eta_list.push_back(static_cast<int>(e));
  }
  cfg.trials = static_cast<int>(integer(music, "music", "trials", 500));
  if (cfg.trials < 1) fail("music.trials must be >= 1");
  cfg.grid_points = static_cast<int>(integer(music, "music", "grid_points", 1 << 14));
  if (cfg.grid_points < 8) fail("music.grid_points must be >= 8");

  json opt = doc.contains("optimize") && !doc.at("optimize").is_null() ? doc.at("optimize")
                                                                       : json::object();
  check_keys(opt, "optimize", {"problems"});
  if (opt.contains("problems") && !opt.at("problems").is_null()) {
    const auto& probs = opt.at("problems");
    if (!probs.is_array()) fail("optimize.problems must be an array");
    for (std::size_t i = 0; i < probs.size(); ++i) {
      cfg.problems.push_back(resolve_problem(probs[i], i));
    }
  }
  if (cfg.experiment == "optimize" && cfg.problems.empty()) {
    json def = json::array({json{{"kind", "weighted"},
                                 {"omega_c", json::array({0.5, 0.75, 0.9, 0.96, 1.0})}}});
    for (std::size_t i = 0; i < def.size(); ++i) cfg.problems.push_back(resolve_problem(def[i], i));
  }

  json output = doc.contains("output") && !doc.at("output").is_null() ? doc.at("output")
                                                                      : json::object();
  check_keys(output, "output", {"basename", "svg"});
  cfg.basename = text(output, "output", "basename", cfg.experiment);
  cfg.svg = boolean(output, "output", "svg", false);

  // Echo the fully defaulted document for the CSV headers.
  json resolved = doc;
  resolved["experiment"] = cfg.experiment;
  resolved["seed"] = cfg.seed;
  resolved["scenario"]["carrier_ghz"] = num(sc, "scenario", "carrier_ghz", 60.0);
  resolved["scenario"]["t_d_us"] = cfg.scenario.slot_interval_s * 1e6;
  resolved["scenario"]["cpi_ms"] = cfg.scenario.cpi_s * 1e3;
  resolved["scenario"]["symbol_energy"] = cfg.scenario.symbol_energy;
  resolved["scenario"]["correlation_gain"] = cfg.scenario.correlation_gain;
  resolved["scenario"]["noise"]["power_w"] = cfg.scenario.noise_power;
  if (cfg.scenario.comm_snr_db) {
    resolved["scenario"]["comm"]["snr_db"] = *cfg.scenario.comm_snr_db;
  } else {
    resolved["scenario"]["comm"]["snr_db"] = "budget";
  }
  cfg.resolved = resolved;
  return cfg;
}

}  // namespace jcr
