/* Copyright 2026 The spinctrl Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "spinctrl/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace spinctrl {

namespace {

using nlohmann::json;

const char* const kKnownKeys[] = {
    "target",   "n_pulses",  "dt",         "mu",           "bound",          "surrogate",
    "alpha",    "kT",        "gamma",      "coupling",     "seed",           "restarts",
    "max_iters", "grad_tol", "init_amplitude", "threads",  "initial_state",  "min_fidelity",
    "record_wall_time", "output_dir"};

bool known_key(const std::string& key) {
  for (const char* k : kKnownKeys)
    if (key == k) return true;
  return false;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double get_real(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string(key) + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(std::string(key) + " must be finite");
  return x;
}

long long get_integer(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string(key) + " must be an integer");
  return v.get<long long>();
}

std::string get_string(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_string()) throw ConfigError(std::string(key) + " must be a string");
  return v.get<std::string>();
}

int target_qubits(const std::string& target) {
  if (target == "not3" || target == "swap3") return 3;
  if (target == "not4" || target == "swap4") return 4;
  throw ConfigError("unknown target '" + target + "' (expected not3, not4, swap3 or swap4)");
}

json sequence_json(const ControlSequence& seq) {
  return {{"hx", std::vector<double>(seq.hx.begin(), seq.hx.end())},
          {"hy", std::vector<double>(seq.hy.begin(), seq.hy.end())}};
}

json leg_json(const OptimizationResult& r) {
  return {{"fidelity", r.fidelity},
          {"penalty", r.penalty},
          {"G", r.G},
          {"iterations_used", r.iterations_used},
          {"restart_index", r.restart_index},
          {"restart_seed", r.restart_seed},
          {"converged", r.converged},
          {"line_search_failed", r.line_search_failed},
          {"pulses", sequence_json(r.best_seq)}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw std::runtime_error("failed writing " + path.string());
}

template <typename Fn>
void write_stream(const std::filesystem::path& path, Fn&& fn) {
  std::ostringstream os;
  fn(os);
  write_text(path, os.str());
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

TargetGate ExperimentConfig::target_gate() const {
  const int q = target_qubits(target);
  return {target.rfind("swap", 0) == 0 ? GateKind::Swap : GateKind::Not, q};
}

ChainSpec ExperimentConfig::chain_spec() const {
  return {target_qubits(target), coupling, false, gamma};
}

ControlSequence ExperimentConfig::sequence_template() const {
  return ControlSequence::zeros(n_pulses, dt, bound);
}

ObjectiveConfig ExperimentConfig::objective_config() const {
  ObjectiveConfig c;
  c.mu = mu;
  c.surrogate = surrogate;
  c.alpha = alpha;
  c.kT = kT;
  return c;
}

OptimizerConfig ExperimentConfig::optimizer_config() const {
  OptimizerConfig c;
  c.max_iters = max_iters;
  c.grad_tol = grad_tol;
  c.restarts = restarts;
  c.init_amplitude = init_amplitude;
  c.seed = seed;
  c.threads = threads;
  return c;
}

void ExperimentConfig::validate() const {
  const int qubits = target_qubits(target);
  if (n_pulses < 1) throw ConfigError("n_pulses must be >= 1");
  if (!(dt > 0)) throw ConfigError("dt must be > 0");
  if (!(bound > 0)) throw ConfigError("bound must be > 0");
  if (min_fidelity && !(*min_fidelity >= 0 && *min_fidelity <= 1))
    throw ConfigError("min_fidelity must lie in [0, 1]");
  try {
    chain_spec().validate();
    objective_config().validate();
    optimizer_config().validate(bound);
    basis_index(initial_state, qubits);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

json default_config_json(const std::string& target, Command command) {
  const int qubits = target_qubits(target);
  return {{"target", target},
          {"n_pulses", qubits == 3 ? 64 : 256},
          {"dt", 0.2},
          {"mu", qubits == 3 ? 0.2 : 0.4},
          {"bound", 100.0},
          {"surrogate", command == Command::Run ? "fractional" : "fermi_dirac"},
          {"alpha", 0.99},
          {"kT", 0.01},
          {"gamma", 0.1},
          {"coupling", 1.0},
          {"seed", 1},
          {"restarts", 8},
          {"max_iters", 5000},
          {"grad_tol", 1e-6},
          {"init_amplitude", 0.5},
          {"threads", 0},
          {"initial_state", qubits == 3 ? "000" : "0010"},
          {"min_fidelity", nullptr},
          {"record_wall_time", false},
          {"output_dir", "."}};
}

ExperimentConfig resolve_config(Command command, const json& file_overrides, const json& flags) {
  for (const json* layer : {&file_overrides, &flags}) {
    if (layer->is_null()) continue;
    if (!layer->is_object()) throw ConfigError("configuration must be a JSON object");
    for (const auto& [key, value] : layer->items())
      if (!known_key(key)) throw ConfigError("unknown configuration key '" + key + "'");
  }
  std::string target = "not3";
  if (file_overrides.is_object() && file_overrides.contains("target"))
    target = get_string(file_overrides, "target");
  if (flags.is_object() && flags.contains("target")) target = get_string(flags, "target");

  json merged = default_config_json(target, command);
  if (file_overrides.is_object()) merged.update(file_overrides);
  if (flags.is_object()) merged.update(flags);
  merged["target"] = target;
  return config_from_json(merged);
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!known_key(key)) throw ConfigError("unknown configuration key '" + key + "'");
  try {
    ExperimentConfig c;
    c.target = get_string(j, "target");
    const long long n = get_integer(j, "n_pulses");
    if (n < 1 || n > 1'000'000) throw ConfigError("n_pulses out of range");
    c.n_pulses = static_cast<int>(n);
    c.dt = get_real(j, "dt");
    c.mu = get_real(j, "mu");
    c.bound = get_real(j, "bound");
    const std::string s = get_string(j, "surrogate");
    const auto surrogate = parse_surrogate(s);
    if (!surrogate) throw ConfigError("unknown surrogate '" + s + "'");
    c.surrogate = *surrogate;
    c.alpha = get_real(j, "alpha");
    c.kT = get_real(j, "kT");
    c.gamma = get_real(j, "gamma");
    c.coupling = get_real(j, "coupling");
    const long long seed = get_integer(j, "seed");
    if (seed < 0) throw ConfigError("seed must be non-negative");
    c.seed = static_cast<std::uint64_t>(seed);
    const long long restarts = get_integer(j, "restarts");
    if (restarts < 1 || restarts > 100000) throw ConfigError("restarts out of range");
    c.restarts = static_cast<int>(restarts);
    const long long iters = get_integer(j, "max_iters");
    if (iters < 1 || iters > 100'000'000) throw ConfigError("max_iters out of range");
    c.max_iters = static_cast<int>(iters);
    c.grad_tol = get_real(j, "grad_tol");
    c.init_amplitude = get_real(j, "init_amplitude");
    const long long threads = get_integer(j, "threads");
    if (threads < 0 || threads > 4096) throw ConfigError("threads out of range");
    c.threads = static_cast<unsigned>(threads);
    c.initial_state = get_string(j, "initial_state");
    if (!j.at("min_fidelity").is_null()) c.min_fidelity = get_real(j, "min_fidelity");
    if (!j.at("record_wall_time").is_boolean()) throw ConfigError("record_wall_time must be a boolean");
    c.record_wall_time = j.at("record_wall_time").get<bool>();
    c.output_dir = get_string(j, "output_dir");
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("configuration: ") + e.what());
  }
}

json to_json(const ExperimentConfig& c) {
  // output_dir and threads never change results and stay out of the echo.
  return {{"target", c.target},
          {"n_pulses", c.n_pulses},
          {"dt", c.dt},
          {"mu", c.mu},
          {"bound", c.bound},
          {"surrogate", to_string(c.surrogate)},
          {"alpha", c.alpha},
          {"kT", c.kT},
          {"gamma", c.gamma},
          {"coupling", c.coupling},
          {"seed", c.seed},
          {"restarts", c.restarts},
          {"max_iters", c.max_iters},
          {"grad_tol", c.grad_tol},
          {"init_amplitude", c.init_amplitude},
          {"initial_state", c.initial_state},
          {"min_fidelity", c.min_fidelity ? json(*c.min_fidelity) : json(nullptr)},
          {"record_wall_time", c.record_wall_time}};
}

json result_to_json(const ExperimentConfig& cfg, const OptimizationResult& r,
                    std::optional<double> wall_seconds) {
  json trace = {{"objective", json::array()}, {"G", json::array()}, {"F", json::array()}, {"P", json::array()}};
  for (const auto& t : r.trace) {
    trace["objective"].push_back(t.objective);
    trace["G"].push_back(t.G);
    trace["F"].push_back(t.fidelity);
    trace["P"].push_back(t.penalty);
  }
  return {{"config", to_json(cfg)},
          {"fidelity", r.fidelity},
          {"penalty", r.penalty},
          {"G", r.G},
          {"iterations_used", r.iterations_used},
          {"restart_index", r.restart_index},
          {"seed", r.seed},
          {"restart_seed", r.restart_seed},
          {"converged", r.converged},
          {"line_search_failed", r.line_search_failed},
          {"wall_seconds", wall_seconds ? json(*wall_seconds) : json(nullptr)},
          {"pulses", sequence_json(r.best_seq)},
          {"trace", trace}};
}

json robustness_to_json(const ExperimentConfig& cfg, const RobustnessRun& run,
                        std::optional<double> wall_seconds) {
  const RobustnessReport& r = run.report;
  return {{"config", to_json(cfg)},
          {"target", r.target.name()},
          {"mu_used", r.mu_used},
          {"gamma", r.gamma},
          {"dist_no_env_mu1", r.dist_no_env_mu1},
          {"dist_no_env_muL", r.dist_no_env_muL},
          {"dist_env_mu1", r.dist_env_mu1},
          {"dist_env_muL", r.dist_env_muL},
          {"seed", cfg.seed},
          {"seeds", {{"mu1", run.unconstrained.restart_seed}, {"muL", run.constrained.restart_seed}}},
          {"wall_seconds", wall_seconds ? json(*wall_seconds) : json(nullptr)},
          {"mu1", leg_json(run.unconstrained)},
          {"muL", leg_json(run.constrained)}};
}

void write_pulses_csv(std::ostream& os, const ControlSequence& seq) {
  os << "index,t_start,hx,hy\n";
  for (int j = 0; j < seq.slices(); ++j)
    os << j << ',' << fmt17(j * seq.dt) << ',' << fmt17(seq.hx[j]) << ',' << fmt17(seq.hy[j]) << '\n';
}

ControlSequence read_pulses_csv(std::istream& is, double dt, double bound) {
  std::string line;
  if (!std::getline(is, line) || line != "index,t_start,hx,hy")
    throw std::runtime_error("pulses csv: missing header");
  std::vector<double> hx, hy;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell[4];
    for (auto& c : cell)
      if (!std::getline(row, c, ',')) throw std::runtime_error("pulses csv: short row '" + line + "'");
    if (std::stoll(cell[0]) != static_cast<long long>(hx.size()))
      throw std::runtime_error("pulses csv: rows out of order");
    hx.push_back(std::stod(cell[2]));
    hy.push_back(std::stod(cell[3]));
  }
  ControlSequence seq = ControlSequence::zeros(static_cast<int>(hx.size()), dt, bound);
  for (std::size_t j = 0; j < hx.size(); ++j) {
    seq.hx[j] = hx[j];
    seq.hy[j] = hy[j];
  }
  return seq;
}

void write_trajectories_csv(std::ostream& os, const BlochTrajectories& traj) {
  os << "t,qubit,bx,by,bz\n";
  for (std::size_t j = 0; j < traj.times.size(); ++j) {
    for (std::size_t q = 0; q < traj.points[j].size(); ++q) {
      const Eigen::Vector3d& b = traj.points[j][q];
      os << fmt17(traj.times[j]) << ',' << q + 1 << ',' << fmt17(b.x()) << ',' << fmt17(b.y())
         << ',' << fmt17(b.z()) << '\n';
    }
  }
}

int run_optimize(const ExperimentConfig& cfg, std::ostream& log) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const ChainSpec spec = cfg.chain_spec();
  const OptimizationResult result = optimize_controls(spec, cfg.target_gate(), cfg.sequence_template(),
                                                      cfg.objective_config(), cfg.optimizer_config());
  const BlochTrajectories traj = bloch_trajectories(spec, result.best_seq, cfg.initial_state);
  const double wall = seconds_since(start);

  std::filesystem::create_directories(cfg.output_dir);
  const std::optional<double> wall_field = cfg.record_wall_time ? std::optional(wall) : std::nullopt;
  write_text(cfg.output_dir / "result.json", result_to_json(cfg, result, wall_field).dump(2) + "\n");
  write_stream(cfg.output_dir / "pulses.csv", [&](std::ostream& os) { write_pulses_csv(os, result.best_seq); });
  write_stream(cfg.output_dir / "trajectories.csv", [&](std::ostream& os) { write_trajectories_csv(os, traj); });

  log << cfg.target << ": F=" << fmt17(result.fidelity) << " P=" << fmt17(result.penalty)
      << " G=" << fmt17(result.G) << " restart=" << result.restart_index
      << " iterations=" << result.iterations_used << " wall=" << wall << "s\n";
  if (cfg.min_fidelity && result.fidelity < *cfg.min_fidelity) {
    log << "fidelity " << result.fidelity << " below --min-fidelity " << *cfg.min_fidelity << "\n";
    return kExitBelowMinFidelity;
  }
  return kExitOk;
}

int run_robustness(const ExperimentConfig& cfg, std::ostream& log) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const RobustnessRun run = robustness_experiment(cfg.target_gate(), cfg.mu, cfg.chain_spec(),
                                                  cfg.sequence_template(), cfg.objective_config(),
                                                  cfg.optimizer_config());
  const double wall = seconds_since(start);

  std::filesystem::create_directories(cfg.output_dir);
  const std::optional<double> wall_field = cfg.record_wall_time ? std::optional(wall) : std::nullopt;
  write_text(cfg.output_dir / "robustness.json", robustness_to_json(cfg, run, wall_field).dump(2) + "\n");

  const RobustnessReport& r = run.report;
  log << cfg.target << " gamma=" << r.gamma << " mu<1=" << r.mu_used << "\n"
      << "  without env: mu=1 " << fmt17(r.dist_no_env_mu1) << "  mu<1 " << fmt17(r.dist_no_env_muL) << "\n"
      << "  with env:    mu=1 " << fmt17(r.dist_env_mu1) << "  mu<1 " << fmt17(r.dist_env_muL) << "\n";
  const double worst = std::min(run.unconstrained.fidelity, run.constrained.fidelity);
  if (cfg.min_fidelity && worst < *cfg.min_fidelity) {
    log << "fidelity " << worst << " below --min-fidelity " << *cfg.min_fidelity << "\n";
    return kExitBelowMinFidelity;
  }
  return kExitOk;
}

}  // namespace spinctrl
