#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "jcr/config.hpp"
#include "jcr/csv.hpp"
#include "jcr/errors.hpp"
#include "jcr/experiments.hpp"

using namespace jcr;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("jcr_test_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run_binary(const std::string& args) {
  std::string cmd = std::string(JCRWAVE_PATH) + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string capture_binary(const std::string& args) {
  std::string cmd = std::string(JCRWAVE_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[512];
  while (fgets(buf, sizeof buf, pipe)) out += buf;
  pclose(pipe);
  return out;
}

std::string header_line(const std::string& csv) {
  std::istringstream ss(csv);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty() && line[0] != '#') return line;
  }
  return "";
}

}  // namespace

TEST_CASE("numbers format deterministically for CSV cells") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(1.5) == "1.5");
  CHECK(format_number(-1.5) == "-1.5");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.0001) == "0.0001");
  CHECK(format_number(9999.5) == "9999.5");
  CHECK(format_number(1e4) == "1e4");
  CHECK(format_number(12345.678) == "1.2345678e4");
  CHECK(format_number(1e-5) == "1e-5");
  CHECK(format_number(2.5e-7) == "2.5e-7");
  CHECK(format_number(-3e20) == "-3e20");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(HUGE_VAL) == "inf");
  CHECK(format_number(-HUGE_VAL) == "-inf");
}

TEST_CASE("CSV writer enforces the column schema") {
  CsvWriter w;
  CHECK_THROWS_AS(w.row({"1"}), Error);
  w.comment("note");
  w.header({"a", "b"});
  w.row({"1", "2"});
  CHECK_THROWS_AS(w.row({"1", "2", "3"}), Error);
  CHECK(w.str() == "# note\na,b\n1,2\n");
}

TEST_CASE("config defaults resolve to the documented scenario") {
  auto cfg = resolve_config(json{{"experiment", "tradeoff"}});
  CHECK(cfg.experiment == "tradeoff");
  CHECK(cfg.seed == 0);
  CHECK(cfg.scenario.wavelength_m == doctest::Approx(299792458.0 / 60e9).epsilon(1e-12));
  CHECK(cfg.scenario.noise_power == doctest::Approx(2.8054e-11).epsilon(1e-4));
  CHECK(cfg.scenario.cpi_s == doctest::Approx(1e-3));
  CHECK(cfg.scenario.slot_interval_s == doctest::Approx(1e-3 / 640.0).epsilon(1e-12));
  REQUIRE(cfg.scenario.comm_snr_db.has_value());
  CHECK(*cfg.scenario.comm_snr_db == doctest::Approx(32.33));
  CHECK(cfg.m_min == 3);
  CHECK(cfg.m_max == 40);
  CHECK(cfg.families.size() == 3);
  CHECK(cfg.basename == "tradeoff");

  // Symbol energy is calibrated so the radar link budget gives unit SNR at
  // the reference range; check through the scene powers.
  auto scene = cfg.scenario.make_scene(1, 100.0);
  REQUIRE(scene.targets.size() == 1);
  CHECK(scene.targets[0].rcs_m2 == doctest::Approx(10.0));
  auto tp = target_powers_and_snr(scene);
  CHECK(tp[0].snr == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("comm SNR accepts a number or the link-budget mode") {
  json doc{{"experiment", "tradeoff"}};
  doc["scenario"]["comm"]["snr_db"] = 18.0;
  auto fixed = resolve_config(doc);
  REQUIRE(fixed.scenario.comm_snr_db.has_value());
  CHECK(*fixed.scenario.comm_snr_db == doctest::Approx(18.0));
  CHECK(fixed.scenario.comm_snr() == doctest::Approx(std::pow(10.0, 1.8)).epsilon(1e-12));

  doc["scenario"]["comm"]["snr_db"] = "budget";
  auto budget = resolve_config(doc);
  CHECK(!budget.scenario.comm_snr_db.has_value());
  CHECK(budget.scenario.comm_snr() > 0.0);

  doc["scenario"]["comm"]["snr_db"] = "auto";
  CHECK_THROWS_AS(resolve_config(doc), ConfigError);
}

TEST_CASE("unknown configuration keys are rejected by path") {
  json doc{{"experiment", "tradeoff"}};
  doc["scenario"]["bogus"] = 1;
  try {
    resolve_config(doc);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("scenario.bogus") != std::string::npos);
  }

  json doc2{{"experiment", "tradeoff"}, {"svg", true}};
  CHECK_THROWS_AS(resolve_config(doc2), ConfigError);
}

TEST_CASE("dotted overrides patch the document in place") {
  json doc{{"experiment", "tradeoff"}};
  apply_override(doc, "sweep.m_max=10");
  CHECK(doc["sweep"]["m_max"] == 10);
  apply_override(doc, "scenario.comm.snr_db=budget");
  CHECK(doc["scenario"]["comm"]["snr_db"] == "budget");
  apply_override(doc, "sweep.families=[\"nested\"]");
  CHECK(doc["sweep"]["families"].is_array());
  CHECK(doc["sweep"]["families"][0] == "nested");
  apply_override(doc, "seed=99");
  CHECK(doc["seed"] == 99);
  CHECK_THROWS_AS(apply_override(doc, "no_equals_sign"), Error);
}

TEST_CASE("velocities spread across the span with a midpoint single target") {
  auto one = spread_velocities(-45.0, 50.0, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == doctest::Approx(2.5));
  auto three = spread_velocities(-45.0, 50.0, 3);
  REQUIRE(three.size() == 3);
  CHECK(three[0] == doctest::Approx(-45.0));
  CHECK(three[1] == doctest::Approx(2.5));
  CHECK(three[2] == doctest::Approx(50.0));
}

TEST_CASE("dry-run validation explains infeasible setups") {
  json ok{{"experiment", "tradeoff"}};
  CHECK(validate_config(ok).empty());

  json uni{{"experiment", "tradeoff"}};
  uni["scenario"]["targets"]["count"] = 30;
  uni["sweep"]["families"] = json::array({"uniform"});
  uni["sweep"]["m_max"] = 25;
  auto problems = validate_config(uni);
  REQUIRE(!problems.empty());
  bool found = false;
  for (const auto& p : problems) {
    if (p.find("no feasible uniform point for K = 30") != std::string::npos) found = true;
  }
  CHECK(found);

  json bad{{"experiment", "tradeoff"}};
  bad["scenario"]["bogus"] = 1;
  auto schema = validate_config(bad);
  REQUIRE(schema.size() == 1);
  CHECK(schema[0].find("scenario.bogus") != std::string::npos);
}

TEST_CASE("experiment outputs are byte-identical across runs") {
  TempDir dir_a("runs_a");
  TempDir dir_b("runs_b");
  json doc{{"experiment", "coarray"}};
  doc["sweep"]["families"] = json::array({"wichmann"});
  doc["sweep"]["m_min"] = 8;
  doc["sweep"]["m_max"] = 8;
  auto cfg = resolve_config(doc);

  RunOptions opt_a;
  opt_a.out_dir = dir_a.path.string();
  auto res_a = run_experiment(cfg, opt_a);
  RunOptions opt_b;
  opt_b.out_dir = dir_b.path.string();
  auto res_b = run_experiment(cfg, opt_b);

  REQUIRE(res_a.files.size() == 2);
  REQUIRE(res_b.files.size() == res_a.files.size());
  for (std::size_t i = 0; i < res_a.files.size(); ++i) {
    CHECK(slurp(res_a.files[i]) == slurp(res_b.files[i]));
  }

  auto body = slurp(res_a.files[0]);
  CHECK(body.find("0 1 3 6 13 17 21 22") != std::string::npos);
  CHECK(header_line(body) ==
        "family,m_budget,param_a,param_b,elements,count_mismatch,built,reason,aperture,max_lag,"
        "contiguous_extent,hole_free,vp_enumerated,vp_closed_form,counts_agree,positions");
}

TEST_CASE("sweep output keeps its column contract") {
  TempDir dir("tradeoff_hdr");
  json doc{{"experiment", "tradeoff"}};
  doc["sweep"]["m_max"] = 6;
  auto cfg = resolve_config(doc);
  RunOptions opt;
  opt.out_dir = dir.path.string();
  auto res = run_experiment(cfg, opt);
  REQUIRE(!res.files.empty());
  auto body = slurp(res.files[0]);
  CHECK(header_line(body) ==
        "k,distance_m,family,m_budget,param_a,param_b,elements,aperture,count_mismatch,mu,"
        "r_full,r_eff,phi_c,dmmse_db,feasible,reason,phi_r,rcrb_db,on_hull,hull_collinear");
  CHECK(body.find("# config: {") != std::string::npos);
}

TEST_CASE("command line drives the full pipeline") {
  TempDir dir("cli_e2e");
  std::string out = " --out " + dir.path.string();

  CHECK(run_binary("coarray --set sweep.m_min=8 --set sweep.m_max=8" + out) == 0);
  CHECK(fs::exists(dir.path / "coarray.csv"));
  CHECK(fs::exists(dir.path / "coarray_lags.csv"));

  CHECK(run_binary("coarray --set scenario.bogus=1" + out) != 0);
  CHECK(run_binary("bogus-verb") != 0);

  auto version = capture_binary("--version");
  CHECK(version.find("jcrwave 0.1.0") != std::string::npos);

  auto validate = capture_binary("validate");
  CHECK(validate.find("ok: no problems found") != std::string::npos);

  auto bad = capture_binary("validate --set scenario.targets.count=30 "
                            "--set 'sweep.families=[\"uniform\"]' --set sweep.m_max=25");
  CHECK(bad.find("no feasible uniform point for K = 30") != std::string::npos);
}
