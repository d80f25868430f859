#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mamab/rng.hpp"
#include "mamab/types.hpp"

namespace mamab {

enum class CommModel { none, er, ucb };

std::string_view to_string(CommModel m);
CommModel parse_comm_model(std::string_view s);

class CommError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Receive sets N_j^t for one step. Every set is sorted and contains j.
struct CommPlan {
  CommModel model = CommModel::none;
  double param = 0.0;  // p for er, gamma for ucb
  std::vector<std::vector<AgentId>> in_neighbors;

  std::size_t n_agents() const { return in_neighbors.size(); }
};

CommPlan self_only_plan(int n_agents);

// Each directed edge k -> j (k != j) present independently with probability p.
CommPlan sample_er_plan(int n_agents, double p, Engine& rng);

// Routes each agent's selection into a plan. Selections may omit the agent
// itself; it is added. More than gamma peers is a protocol violation.
CommPlan assemble_ucb_plan(std::span<const std::vector<AgentId>> selections, int gamma);

}  // namespace mamab
