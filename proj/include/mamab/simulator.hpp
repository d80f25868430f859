#pragma once

#include <algorithm>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mamab/agent.hpp"
#include "mamab/comm_models.hpp"
#include "mamab/environment.hpp"
#include "mamab/spatial_graph.hpp"

namespace mamab {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class GraphKind { lattice, complete, edge_list };
enum class MeansMode { gradient, explicit_list };

struct GraphSpec {
  GraphKind kind = GraphKind::lattice;
  int rows = 5;
  int cols = 5;
  int size = 0;  // complete graph vertex count
  std::string edge_list_path;

  friend bool operator==(const GraphSpec&, const GraphSpec&) = default;
};

struct EnvSpec {
  MeansMode means_mode = MeansMode::gradient;
  std::vector<double> means;  // explicit_list only
  double gradient_low = 0.0;
  double gradient_high = 4.0;
  int gradient_peak = -1;  // -1: last vertex (bottom-right lattice corner)
  double variance = 2.0;
  RewardKind kind = RewardKind::stationary_gaussian;
  double drift_amplitude = 0.0;
  double drift_period = 1000.0;

  friend bool operator==(const EnvSpec&, const EnvSpec&) = default;
};

struct SimulationConfig {
  GraphSpec graph;
  EnvSpec env;
  int n_agents = 10;
  double alpha = 0.1;
  double eta = 1.0;
  std::optional<double> sigma;  // defaults to the environment's σ
  std::optional<double> prior_low;   // default 0
  std::optional<double> prior_high;  // default: max option mean
  std::vector<Vertex> initial_positions;  // empty: uniform random per agent
  CommModel comm_model = CommModel::ucb;
  int gamma = 0;
  double p = 0.0;
  std::int64_t horizon = 5000;
  int trials = 10;
  std::uint64_t seed = 1;
  int regret_cadence = 0;  // 0: every step up to T=5000, every 10th beyond

  friend bool operator==(const SimulationConfig&, const SimulationConfig&) = default;
};

// Everything a trial needs, validated and built once; shared read-only.
class Scenario {
 public:
  explicit Scenario(SimulationConfig config);

  const SimulationConfig& config() const { return config_; }
  const SpatialGraph& graph() const { return graph_; }
  const RewardEnvironment& env() const { return env_; }
  const PolicyParams& params() const { return params_; }
  double prior_low() const { return prior_low_; }
  double prior_high() const { return prior_high_; }
  int n_agents() const { return config_.n_agents; }
  int n_options() const { return static_cast<int>(graph_.num_vertices()); }
  std::int64_t horizon() const { return config_.horizon; }
  std::vector<std::int64_t> checkpoints() const;

 private:
  SimulationConfig config_;
  SpatialGraph graph_;
  RewardEnvironment env_;
  PolicyParams params_;
  double prior_low_ = 0.0;
  double prior_high_ = 1.0;
};

struct StepRecord {
  Vertex position = 0;  // after this step's move
  Vertex target = 0;
  Option sampled = kNoOption;
  double reward = 0.0;

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

// Full trajectory of one trial: T records per agent plus receive sets and
// deduplicated observations, and the final agent states.
class TrialLog {
 public:
  TrialLog() = default;
  TrialLog(int n_agents, int n_options, std::int64_t horizon);

  int n_agents() const { return n_agents_; }
  int n_options() const { return n_options_; }
  std::int64_t horizon() const { return horizon_; }
  std::int64_t steps() const { return static_cast<std::int64_t>(records_.size()) / std::max(n_agents_, 1); }

  const StepRecord& record(std::int64_t t, AgentId j) const { return records_[index(t, j)]; }
  std::vector<AgentId> in_neighbors(std::int64_t t, AgentId j) const;
  std::size_t in_degree(std::int64_t t, AgentId j) const;
  std::span<const Option> observed(std::int64_t t, AgentId j) const;

  void append(const StepRecord& rec, std::span<const AgentId> in, std::span<const Option> observed);

  int trial_index = 0;
  std::uint64_t trial_seed = 0;
  std::vector<Vertex> initial_positions;
  std::vector<double> priors;  // n_agents x n_options
  std::vector<AgentState> final_states;

  friend bool operator==(const TrialLog&, const TrialLog&) = default;

 private:
  std::size_t index(std::int64_t t, AgentId j) const {
    return static_cast<std::size_t>(t - 1) * n_agents_ + static_cast<std::size_t>(j);
  }

  int n_agents_ = 0;
  int n_options_ = 0;
  std::int64_t horizon_ = 0;
  std::size_t mask_words_ = 0;
  std::vector<StepRecord> records_;
  std::vector<std::uint64_t> masks_;
  std::vector<std::uint32_t> obs_offsets_{0};
  std::vector<Option> obs_;
};

// Line-oriented text form; doubles are written with round-trip precision.
void write_log(std::ostream& out, const TrialLog& log);
TrialLog read_log(std::istream& in);

// One trial in lockstep. Each step runs decide -> move -> sample ->
// communicate -> ingest with a barrier between phases.
class Simulation {
 public:
  Simulation(const Scenario& scenario, int trial_index);

  void step();
  std::int64_t time() const { return t_; }
  const std::vector<AgentState>& agents() const { return agents_; }
  const TrialLog& log() const { return log_; }
  TrialLog finish() &&;

 private:
  struct Streams {
    Engine target;
    Engine move;
    Engine comm;
  };

  const Scenario* scenario_;
  std::int64_t t_ = 0;
  std::vector<AgentState> agents_;
  std::vector<Streams> streams_;
  Engine er_rng_;
  TrialLog log_;
};

TrialLog run_trial(const Scenario& scenario, int trial_index);
TrialLog run_trial(const SimulationConfig& config, int trial_index);

}  // namespace mamab
