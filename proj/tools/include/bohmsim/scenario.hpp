#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bohm/clifford_bohm.hpp"
#include "bohm/schrodinger.hpp"

namespace bohmsim {

inline constexpr const char* kReportFormat = "bohmsim-report/1";
inline constexpr const char* kFieldFormat = "bohmsim-field/1";

// Bad command line, unknown scenario or analysis name. Exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  double x_min = -20.0;
  double x_max = 20.0;
  std::size_t n = 512;
};

// Initial-state parameters. Which fields matter depends on the scenario;
// the rest are ignored (and echoed).
struct StateSpec {
  double center = 0.0;
  double width = 1.0;
  double momentum = 0.0;
  double chirp = 0.0;
  double separation = 6.0;  // two_gaussian_interference: centres at +/- separation/2
  unsigned level = 0;       // harmonic_eigenstate
  double theta = 2.0 * bohm::pi / 3.0;  // pauli_mixed_spinor: spin polar angle
};

struct PotentialSpec {
  std::string kind = "free";  // free | harmonic | gaussian_barrier
  double omega = 1.0;
  double height = 1.0;
  double width = 1.0;
  double center = 0.0;
};

struct ScenarioConfig {
  std::string scenario;
  GridSpec grid;
  StateSpec state;
  PotentialSpec potential;
  double dt = 0.005;
  double t_final = 1.0;
  std::size_t stride = 50;
  bohm::Units units;
  std::vector<double> hbar_values;  // hbar_sweep only
  std::size_t particles = 10000;
  std::uint64_t seed = 42;
  unsigned threads = 1;
  std::string out_dir;
  std::vector<std::string> analyses;

  std::size_t steps() const;
  nlohmann::json to_json() const;
};

std::vector<std::string> scenario_names();
std::vector<std::string> analysis_names();
// Analyses a scenario can run; the first entries are its defaults.
std::vector<std::string> supported_analyses(const std::string& scenario);

// Defaults of a built-in scenario. Throws UsageError for unknown names.
ScenarioConfig default_config(const std::string& scenario);

// Parses a TOML config; unknown keys and ill-typed values raise
// bohm::ConfigError with the offending line and key.
ScenarioConfig parse_config(const std::filesystem::path& path);
ScenarioConfig parse_config_string(std::string_view text, const std::string& source = "<string>");

// Checks every guard that can be checked without evolving: grid, resolution,
// propagator stability, names. Throws UsageError or bohm::ConfigError.
// Returns warnings (e.g. boundary leakage).
std::vector<std::string> validate(const ScenarioConfig& cfg);

// Evolved data a scenario hands to its analyses. Most scenarios carry one
// record; pauli_mixed_spinor carries the two components, hbar_sweep one
// record per hbar.
struct LabelledRecord {
  std::string label;
  bohm::EvolutionRecord record;
};

struct ScenarioData {
  ScenarioConfig config;
  std::vector<LabelledRecord> records;
  std::optional<bohm::PauliEvolutionRecord> pauli;
};

bohm::Potential make_potential(const ScenarioConfig& cfg);
bohm::CField initial_state(const ScenarioConfig& cfg, double hbar);
ScenarioData build_and_evolve(const ScenarioConfig& cfg);

struct AnalysisResult {
  std::string name;
  bool pass = true;
  nlohmann::json metrics = nlohmann::json::object();
  std::vector<std::string> files;
};

struct RunReport {
  nlohmann::json json;
  bool all_pass = true;
  double wall_seconds = 0.0;
};

// Runs one analysis, writing its data files under `out`.
AnalysisResult run_analysis(const std::string& name, const ScenarioData& data, const std::filesystem::path& out);

// Full pipeline: validate, evolve, analyze, write report.json (deterministic)
// and timing.json (wall time) into `out`.
RunReport run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out);

}  // namespace bohmsim
