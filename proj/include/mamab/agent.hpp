#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "mamab/rng.hpp"
#include "mamab/spatial_graph.hpp"
#include "mamab/types.hpp"

namespace mamab {

class PolicyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PolicyParams {
  double alpha = 1.0;  // distance-penalty weight
  double eta = 1.0;    // tail-bound tuning
  double sigma = 1.0;  // sub-Gaussian scale assumed by the policy
  int gamma = 0;       // communication budget (peers per step)
  int tau_bar = 1;     // spatial graph diameter, hops

  friend bool operator==(const PolicyParams&, const PolicyParams&) = default;
};

// alpha == 0 is accepted: it is the standard-UCB reduction used in tests.
void validate(const PolicyParams& params, int n_agents);

// Exploration schedule σ²·√(1+η)·ln(t·√(ln t)) with t clamped to at least 3,
// where the expression is positive and nondecreasing.
double psi(std::int64_t t, const PolicyParams& params);

// Ψ(t) evaluated once per step and handed to the cost functions.
struct PsiValue {
  double value;
};

// The one (option, reward) pair an agent emits per step.
struct Message {
  AgentId sender = 0;
  Option option = kNoOption;
  double reward = 0.0;  // 0 whenever option == kNoOption
};

struct MoveDecision {
  Vertex next;
  Option sample;  // kNoOption when the agent is still travelling
};

// Per-agent statistics. `count` starts at 1 (the prior counts as one
// observation); belief tables are n_agents x n_options, row-major by peer.
struct AgentState {
  AgentId id = 0;
  int n_agents = 1;
  int n_options = 0;
  Vertex position = 0;
  Vertex target = kNoOption;
  std::vector<double> est_mean;
  std::vector<std::int64_t> count;
  std::vector<std::int64_t> count_self;
  std::vector<std::int64_t> count_comm;
  std::vector<double> belief_mean;
  std::vector<std::int64_t> belief_count;
  PolicyParams params;

  AgentState() = default;
  AgentState(AgentId id, int n_agents, Vertex position, std::span<const double> priors,
             const PolicyParams& params);

  double belief_mean_of(AgentId peer, Option i) const { return belief_mean[cell(peer, i)]; }
  std::int64_t belief_count_of(AgentId peer, Option i) const { return belief_count[cell(peer, i)]; }
  std::size_t cell(AgentId peer, Option i) const {
    return static_cast<std::size_t>(peer) * n_options + static_cast<std::size_t>(i);
  }

  friend bool operator==(const AgentState&, const AgentState&) = default;
};

// Q_ij^t: sample mean plus the distance-weighted confidence bonus, using the
// agent's current position.
double ucb_cost(const AgentState& agent, Option i, PsiValue psi_t, const SpatialGraph& graph);
double ucb_cost(const AgentState& agent, Option i, std::int64_t t, const SpatialGraph& graph);

// argmax set of Q_ij^t in ascending option order.
std::vector<Option> target_candidates(const AgentState& agent, PsiValue psi_t,
                                      const SpatialGraph& graph);
Vertex select_target(const AgentState& agent, PsiValue psi_t, const SpatialGraph& graph, Engine& rng);
Vertex select_target(const AgentState& agent, std::int64_t t, const SpatialGraph& graph, Engine& rng);

// Vertices of I_position that minimize d(position, n) + d(n, target); among
// those, only the ones strictly closer to the target survive, so staying put
// is chosen only when already at the target.
std::vector<Vertex> move_candidates(Vertex position, Vertex target, const SpatialGraph& graph);
MoveDecision plan_move_and_sample(const AgentState& agent, Vertex target, const SpatialGraph& graph,
                                  Engine& rng);

// Q_ijk^t: j's belief of peer k's estimate of option i plus the bonus.
double comm_cost(const AgentState& agent, AgentId peer, Option i, PsiValue psi_t);
double comm_cost(const AgentState& agent, AgentId peer, Option i, std::int64_t t);

// score(k) = max over i != agent.target of Q_ijk; -inf at index agent.id.
std::vector<double> peer_scores(const AgentState& agent, PsiValue psi_t);

// Top-gamma peers by score plus the agent itself, sorted ascending. Ties at
// the budget boundary are broken one slot at a time, uniformly.
std::vector<AgentId> select_in_neighbors(const AgentState& agent, PsiValue psi_t, Engine& rng);
std::vector<AgentId> select_in_neighbors(const AgentState& agent, std::int64_t t, Engine& rng);

// Folds one step's message batch (own message included) into the state.
// Returns the deduplicated options observed, ascending.
std::vector<Option> ingest(AgentState& agent, std::span<const Message> messages);

}  // namespace mamab
