#include <cstdlib>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "bohmsim/scenario.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 2, kConfig = 3, kNumeric = 4 };

struct Overrides {
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> hbar;
  unsigned threads = 1;
};

bohmsim::ScenarioConfig load(const std::string& path, const Overrides& o) {
  bohmsim::ScenarioConfig cfg = bohmsim::parse_config(path);
  if (o.seed) cfg.seed = *o.seed;
  if (o.hbar) cfg.units.hbar = *o.hbar;
  cfg.threads = o.threads;
  // --out beats the environment, which beats the config file.
  if (!o.out.empty()) {
    cfg.out_dir = o.out;
  } else if (const char* env = std::getenv("BOHMSIM_OUT_DIR"); env && *env) {
    cfg.out_dir = env;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bohmsim: Bohm fields, phase-space and Clifford pictures of 1-D quantum dynamics"};
  app.require_subcommand(1);

  Overrides ov;
  std::string config;
  bool strict = false;

  auto* run = app.add_subcommand("run", "run a scenario config");
  run->add_option("config", config, "scenario config (TOML)")->required();
  run->add_option("--out", ov.out, "output directory (overrides BOHMSIM_OUT_DIR and the config)");
  run->add_option("--seed", ov.seed, "ensemble seed");
  run->add_option("--hbar", ov.hbar, "reduced Planck constant");
  run->add_option("--threads", ov.threads, "worker threads for trajectory integration")->check(CLI::PositiveNumber);
  run->add_flag("--strict", strict, "exit 4 when any analysis misses its acceptance bound");

  auto* list = app.add_subcommand("list", "list built-in scenarios");

  auto* val = app.add_subcommand("validate", "check a config without running it");
  val->add_option("config", config, "scenario config (TOML)")->required();
  val->add_option("--hbar", ov.hbar, "reduced Planck constant");
  val->add_option("--seed", ov.seed, "ensemble seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (list->parsed()) {
      for (const auto& name : bohmsim::scenario_names()) std::cout << name << '\n';
      return kOk;
    }
    const bohmsim::ScenarioConfig cfg = load(config, ov);
    if (val->parsed()) {
      for (const auto& w : bohmsim::validate(cfg)) std::cerr << "warning: " << w << '\n';
      std::cout << "OK\n";
      return kOk;
    }
    const bohmsim::RunReport rep = bohmsim::run_scenario(cfg, cfg.out_dir);
    for (const auto& a : rep.json["analyses"])
      std::cout << (a["pass"].get<bool>() ? "pass " : "FAIL ") << a["name"].get<std::string>() << '\n';
    std::cout << "report: " << (std::filesystem::path(cfg.out_dir) / "report.json").string() << '\n';
    if (strict && !rep.all_pass) {
      std::cerr << "error: at least one analysis exceeded its acceptance bound (--strict)\n";
      return kNumeric;
    }
    return kOk;
  } catch (const bohmsim::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const bohm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const bohm::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  }
}
