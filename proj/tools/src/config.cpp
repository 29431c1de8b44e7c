#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "bohmsim/scenario.hpp"

namespace bohmsim {

using bohm::ConfigError;

namespace {

const std::vector<std::string> kScenarios = {"free_gaussian",      "harmonic_eigenstate", "two_gaussian_interference",
                                             "pauli_mixed_spinor", "hbar_sweep",          "moyal_vs_schrodinger"};

const std::vector<std::string> kAnalyses = {"fields",      "residuals",       "clifford_residuals", "cross_picture",
                                            "wigner",      "trajectories",    "energy_symbol",      "pauli",
                                            "classical_limit", "bracket_algebra", "moyal_dynamics"};

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
  return s;
}

}  // namespace

std::vector<std::string> scenario_names() { return kScenarios; }
std::vector<std::string> analysis_names() { return kAnalyses; }

std::vector<std::string> supported_analyses(const std::string& scenario) {
  if (scenario == "free_gaussian")
    return {"residuals", "clifford_residuals", "cross_picture", "wigner", "trajectories", "fields", "energy_symbol"};
  if (scenario == "harmonic_eigenstate")
    return {"residuals", "clifford_residuals", "energy_symbol", "cross_picture", "wigner", "fields", "trajectories"};
  if (scenario == "two_gaussian_interference")
    return {"residuals", "clifford_residuals", "cross_picture", "trajectories", "wigner", "fields", "energy_symbol"};
  if (scenario == "pauli_mixed_spinor") return {"pauli", "residuals", "clifford_residuals", "fields"};
  if (scenario == "hbar_sweep") return {"classical_limit", "bracket_algebra", "residuals", "clifford_residuals"};
  if (scenario == "moyal_vs_schrodinger")
    return {"moyal_dynamics", "residuals", "clifford_residuals", "wigner", "fields"};
  throw UsageError("unknown scenario '" + scenario + "'; valid scenarios: " + join(kScenarios));
}

std::size_t ScenarioConfig::steps() const { return static_cast<std::size_t>(std::llround(t_final / dt)); }

ScenarioConfig default_config(const std::string& scenario) {
  const auto supported = supported_analyses(scenario);  // validates the name
  ScenarioConfig c;
  c.scenario = scenario;
  // Domains are sized so the state, down to the node threshold, stays inside
  // half the period: the Wigner offset window wraps beyond that.
  if (scenario == "free_gaussian") {
    c.grid = {-30.0, 30.0, 512};
    c.state.momentum = 1.0;
    c.dt = 0.005;
    c.t_final = 2.0;
    c.stride = 50;
    c.analyses = {supported.begin(), supported.begin() + 6};
  } else if (scenario == "harmonic_eigenstate") {
    c.grid = {-15.0, 15.0, 256};
    c.potential.kind = "harmonic";
    c.dt = 0.001;
    c.t_final = 1.0;
    c.stride = 250;
    c.analyses = {supported.begin(), supported.begin() + 6};
  } else if (scenario == "two_gaussian_interference") {
    c.grid = {-40.0, 40.0, 512};
    c.state.width = 0.7;
    c.dt = 0.005;
    c.t_final = 3.0;
    c.stride = 25;
    c.particles = 100000;
    c.analyses = {supported.begin(), supported.begin() + 6};
  } else if (scenario == "pauli_mixed_spinor") {
    c.grid = {-20.0, 20.0, 256};
    c.state.momentum = 1.0;
    c.state.chirp = 0.2;
    c.state.separation = 2.5;
    c.state.theta = bohm::pi / 3.0;
    c.dt = 0.005;
    c.t_final = 1.0;
    c.stride = 50;
    c.analyses = supported;
  } else if (scenario == "hbar_sweep") {
    c.state.momentum = 1.0;
    c.hbar_values = {1.0, 0.5, 0.25, 0.125};
    c.dt = 0.005;
    c.t_final = 0.5;
    c.stride = 50;
    c.analyses = supported;
  } else if (scenario == "moyal_vs_schrodinger") {
    c.grid = {-10.0, 10.0, 128};
    c.potential.kind = "harmonic";
    c.state.center = 2.0;
    c.state.width = std::sqrt(0.5);
    c.state.momentum = 0.5;
    c.dt = 2.0 * bohm::pi / 2000.0;
    c.t_final = 2.0 * bohm::pi;
    c.stride = 500;
    c.analyses = {supported.begin(), supported.begin() + 4};
  }
  c.out_dir = "bohmsim_out/" + scenario;
  return c;
}

nlohmann::json ScenarioConfig::to_json() const {
  nlohmann::json j;
  j["scenario"] = scenario;
  j["grid"] = {{"x_min", grid.x_min}, {"x_max", grid.x_max}, {"n", grid.n}};
  j["state"] = {{"center", state.center},     {"width", state.width},         {"momentum", state.momentum},
                {"chirp", state.chirp},       {"separation", state.separation}, {"level", state.level},
                {"theta", state.theta}};
  j["potential"] = {{"kind", potential.kind},
                    {"omega", potential.omega},
                    {"height", potential.height},
                    {"width", potential.width},
                    {"center", potential.center}};
  j["evolution"] = {{"dt", dt}, {"t_final", t_final}, {"stride", stride}, {"steps", steps()}};
  j["physics"] = {{"hbar", units.hbar}, {"mass", units.mass}, {"hbar_values", hbar_values}};
  j["ensemble"] = {{"particles", particles}, {"seed", seed}};
  j["analyses"] = analyses;
  return j;
}

namespace {

std::string where(const toml::node& n, const std::string& source, const std::string& key) {
  std::ostringstream os;
  os << source << ":" << n.source().begin.line << ": '" << key << "'";
  return os.str();
}

double as_double(const toml::node& n, const std::string& src, const std::string& key) {
  if (auto v = n.value<double>(); v && (n.is_floating_point() || n.is_integer())) return *v;
  throw ConfigError(where(n, src, key) + " must be a number");
}

std::int64_t as_int(const toml::node& n, const std::string& src, const std::string& key) {
  if (!n.is_integer()) throw ConfigError(where(n, src, key) + " must be an integer");
  return *n.value<std::int64_t>();
}

std::size_t as_count(const toml::node& n, const std::string& src, const std::string& key) {
  const auto v = as_int(n, src, key);
  if (v < 0) throw ConfigError(where(n, src, key) + " must be non-negative");
  return static_cast<std::size_t>(v);
}

std::string as_string(const toml::node& n, const std::string& src, const std::string& key) {
  if (!n.is_string()) throw ConfigError(where(n, src, key) + " must be a string");
  return *n.value<std::string>();
}

using Handler = std::function<void(const toml::node&, const std::string&)>;

void apply_table(const toml::table& t, const std::string& prefix, const std::map<std::string, Handler>& handlers,
                 const std::string& src) {
  for (const auto& [k, v] : t) {
    const std::string key = prefix.empty() ? std::string(k.str()) : prefix + "." + std::string(k.str());
    auto it = handlers.find(std::string(k.str()));
    if (it == handlers.end()) {
      std::string valid;
      for (const auto& [name, h] : handlers) valid += (valid.empty() ? "" : ", ") + name;
      throw ConfigError(where(v, src, key) + " is not a recognised key (expected one of: " + valid + ")");
    }
    it->second(v, key);
  }
}

const toml::table& as_table(const toml::node& n, const std::string& src, const std::string& key) {
  if (!n.is_table()) throw ConfigError(where(n, src, key) + " must be a table");
  return *n.as_table();
}

}  // namespace

ScenarioConfig parse_config_string(std::string_view text, const std::string& source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << source << ":" << e.source().begin.line << ":" << e.source().begin.column << ": " << e.description();
    throw ConfigError(os.str());
  }
  const toml::node* name = root.get("scenario");
  if (!name) throw ConfigError(source + ": missing required key 'scenario'");
  ScenarioConfig c = default_config(as_string(*name, source, "scenario"));
  const std::string& src = source;

  std::map<std::string, Handler> top;
  top["scenario"] = [](const toml::node&, const std::string&) {};
  top["grid"] = [&](const toml::node& n, const std::string& key) {
    apply_table(as_table(n, src, key), key,
                {{"x_min", [&](auto& v, auto& k) { c.grid.x_min = as_double(v, src, k); }},
                 {"x_max", [&](auto& v, auto& k) { c.grid.x_max = as_double(v, src, k); }},
                 {"n", [&](auto& v, auto& k) { c.grid.n = as_count(v, src, k); }}},
                src);
  };
  top["state"] = [&](const toml::node& n, const std::string& key) {
    apply_table(as_table(n, src, key), key,
                {{"center", [&](auto& v, auto& k) { c.state.center = as_double(v, src, k); }},
                 {"width", [&](auto& v, auto& k) { c.state.width = as_double(v, src, k); }},
                 {"momentum", [&](auto& v, auto& k) { c.state.momentum = as_double(v, src, k); }},
                 {"chirp", [&](auto& v, auto& k) { c.state.chirp = as_double(v, src, k); }},
                 {"separation", [&](auto& v, auto& k) { c.state.separation = as_double(v, src, k); }},
                 {"level", [&](auto& v, auto& k) { c.state.level = static_cast<unsigned>(as_count(v, src, k)); }},
                 {"theta", [&](auto& v, auto& k) { c.state.theta = as_double(v, src, k); }}},
                src);
  };
  top["potential"] = [&](const toml::node& n, const std::string& key) {
    apply_table(as_table(n, src, key), key,
                {{"kind", [&](auto& v, auto& k) { c.potential.kind = as_string(v, src, k); }},
                 {"omega", [&](auto& v, auto& k) { c.potential.omega = as_double(v, src, k); }},
                 {"height", [&](auto& v, auto& k) { c.potential.height = as_double(v, src, k); }},
                 {"width", [&](auto& v, auto& k) { c.potential.width = as_double(v, src, k); }},
                 {"center", [&](auto& v, auto& k) { c.potential.center = as_double(v, src, k); }}},
                src);
  };
  top["evolution"] = [&](const toml::node& n, const std::string& key) {
    apply_table(as_table(n, src, key), key,
                {{"dt", [&](auto& v, auto& k) { c.dt = as_double(v, src, k); }},
                 {"t_final", [&](auto& v, auto& k) { c.t_final = as_double(v, src, k); }},
                 {"stride", [&](auto& v, auto& k) { c.stride = as_count(v, src, k); }}},
                src);
  };
  top["physics"] = [&](const toml::node& n, const std::string& key) {
    apply_table(as_table(n, src, key), key,
                {{"hbar", [&](auto& v, auto& k) { c.units.hbar = as_double(v, src, k); }},
                 {"mass", [&](auto& v, auto& k) { c.units.mass = as_double(v, src, k); }},
                 {"hbar_values",
                  [&](auto& v, auto& k) {
                    if (!v.is_array()) throw ConfigError(where(v, src, k) + " must be an array of numbers");
                    c.hbar_values.clear();
                    for (const auto& e : *v.as_array()) c.hbar_values.push_back(as_double(e, src, k));
                  }}},
                src);
  };
  top["ensemble"] = [&](const toml::node& n, const std::string& key) {
    apply_table(as_table(n, src, key), key,
                {{"particles", [&](auto& v, auto& k) { c.particles = as_count(v, src, k); }},
                 {"seed", [&](auto& v, auto& k) { c.seed = static_cast<std::uint64_t>(as_int(v, src, k)); }}},
                src);
  };
  top["output"] = [&](const toml::node& n, const std::string& key) {
    apply_table(as_table(n, src, key), key,
                {{"dir", [&](auto& v, auto& k) { c.out_dir = as_string(v, src, k); }},
                 {"analyses",
                  [&](auto& v, auto& k) {
                    if (!v.is_array()) throw ConfigError(where(v, src, k) + " must be an array of strings");
                    c.analyses.clear();
                    for (const auto& e : *v.as_array()) c.analyses.push_back(as_string(e, src, k));
                  }}},
                src);
  };
  apply_table(root, "", top, src);
  return c;
}

ScenarioConfig parse_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read config file '" + path.string() + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_string(ss.str(), path.string());
}

std::vector<std::string> validate(const ScenarioConfig& cfg) {
  const auto supported = supported_analyses(cfg.scenario);
  for (const auto& a : cfg.analyses) {
    if (std::find(kAnalyses.begin(), kAnalyses.end(), a) == kAnalyses.end())
      throw UsageError("unknown analysis '" + a + "'; valid analyses: " + join(kAnalyses));
    if (std::find(supported.begin(), supported.end(), a) == supported.end())
      throw UsageError("analysis '" + a + "' is not available for scenario " + cfg.scenario +
                       "; available: " + join(supported));
  }
  std::vector<std::string> seen = cfg.analyses;
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) throw ConfigError("analyses: duplicate entry");

  const bohm::Grid1D grid = bohm::build_grid(cfg.grid.x_min, cfg.grid.x_max, cfg.grid.n);
  if (!(cfg.units.hbar > 0.0)) throw ConfigError("physics.hbar must be positive");
  if (!(cfg.units.mass > 0.0)) throw ConfigError("physics.mass must be positive");
  if (cfg.stride == 0) throw ConfigError("evolution.stride must be >= 1");
  if (!(cfg.dt > 0.0)) throw ConfigError("propagator guard: dt must be positive");
  if (!(cfg.t_final > 0.0) || cfg.steps() == 0) throw ConfigError("evolution.t_final must cover at least one step");
  if (cfg.particles == 0 || cfg.particles > 10'000'000) throw ConfigError("ensemble.particles must be in [1, 1e7]");
  if (cfg.scenario == "hbar_sweep") {
    if (cfg.hbar_values.size() < 2) throw ConfigError("physics.hbar_values needs at least two entries");
    for (double h : cfg.hbar_values)
      if (!(h > 0.0)) throw ConfigError("physics.hbar_values must be positive");
  }
  if (cfg.potential.kind != "free" && cfg.potential.kind != "harmonic" && cfg.potential.kind != "gaussian_barrier")
    throw ConfigError("potential.kind must be one of: free, harmonic, gaussian_barrier");
  if (cfg.scenario == "moyal_vs_schrodinger" && cfg.potential.kind == "gaussian_barrier")
    throw ConfigError("moyal_dynamics needs a quadratic Hamiltonian (free or harmonic potential)");

  const bohm::Potential V = make_potential(cfg);
  std::vector<double> hs = cfg.scenario == "hbar_sweep" ? cfg.hbar_values : std::vector<double>{cfg.units.hbar};
  std::vector<std::string> warnings;
  for (double h : hs) {
    bohm::check_step_guard(V.evaluate(grid), cfg.dt, h);
    const bohm::CField psi = initial_state(cfg, h);  // resolution guards
    if (bohm::boundary_leakage(psi) > 1e-8)
      warnings.push_back("initial |psi| at the boundary exceeds 1e-8 of its maximum (hbar = " + std::to_string(h) +
                         "); the periodic wrap may be visible");
  }
  return warnings;
}

}  // namespace bohmsim
