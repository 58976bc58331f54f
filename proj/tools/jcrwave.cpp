#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jcr/config.hpp"
#include "jcr/errors.hpp"
#include "jcr/experiments.hpp"
#include "jcr/version.hpp"

namespace {

struct CliState {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool svg = false;
  int threads = 1;
};

void add_common(CLI::App* sub, CliState& st) {
  sub->add_option("--config", st.config_path, "scenario/config file (JSON)");
  sub->add_option("--set", st.overrides, "override a config key, e.g. --set sweep.m_max=20")
      ->take_all();
  sub->add_option("--seed", st.seed, "seed for every random draw");
  sub->add_option("--out", st.out_dir, "output directory");
  sub->add_flag("--svg", st.svg, "also render the primary curves as SVG");
  sub->add_option("--threads", st.threads, "worker threads for Monte Carlo trials")
      ->check(CLI::PositiveNumber);
}

nlohmann::json assemble_doc(const CliState& st) {
  nlohmann::json doc =
      st.config_path.empty() ? nlohmann::json::object() : jcr::load_config_file(st.config_path);
  for (const auto& s : st.overrides) jcr::apply_override(doc, s);
  return doc;
}

int run_verb(const std::string& verb, const CliState& st, bool seed_given) {
  nlohmann::json doc = assemble_doc(st);
  doc["experiment"] = verb;
  if (seed_given) doc["seed"] = st.seed;
  if (st.svg) doc["output"]["svg"] = true;
  jcr::ExperimentConfig cfg = jcr::resolve_config(doc);
  jcr::RunOptions opt;
  opt.out_dir = st.out_dir;
  opt.threads = st.threads;
  jcr::RunResult result = jcr::run_experiment(cfg, opt);
  for (const auto& f : result.files) std::cout << "wrote " << f << "\n";
  return 0;
}

int run_validate(const CliState& st) {
  nlohmann::json doc = assemble_doc(st);
  if (!doc.contains("experiment")) doc["experiment"] = "tradeoff";
  auto problems = jcr::validate_config(doc);
  if (problems.empty()) {
    std::cout << "ok: no problems found\n";
  } else {
    for (const auto& p : problems) std::cout << "problem: " << p << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptive preamble schedule design and evaluation"};
  app.set_version_flag("--version", std::string("jcrwave ") + jcr::kVersion);
  app.require_subcommand(1);

  CliState st;
  const std::vector<std::string> verbs = {"coarray", "tradeoff", "music-rmse", "optimize"};
  std::vector<CLI::App*> subs;
  for (const auto& v : verbs) {
    CLI::App* sub = app.add_subcommand(v, v + std::string(" experiment"));
    add_common(sub, st);
    subs.push_back(sub);
  }
  CLI::App* validate = app.add_subcommand("validate", "check a config without running it");
  add_common(validate, st);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return run_validate(st);
    for (std::size_t i = 0; i < verbs.size(); ++i) {
      if (subs[i]->parsed()) {
        return run_verb(verbs[i], st, subs[i]->count("--seed") > 0);
      }
    }
  } catch (const jcr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
