#include "mamab/comm_models.hpp"

#include <algorithm>

namespace mamab {

std::string_view to_string(CommModel m) {
  switch (m) {
    case CommModel::none: return "none";
    case CommModel::er: return "er";
    case CommModel::ucb: return "ucb";
  }
  return "?";
}

CommModel parse_comm_model(std::string_view s) {
  if (s == "none") return CommModel::none;
  if (s == "er") return CommModel::er;
  if (s == "ucb") return CommModel::ucb;
  throw CommError("unknown communication model '" + std::string(s) + "' (expected none, er, ucb)");
}

CommPlan self_only_plan(int n_agents) {
  CommPlan plan;
  plan.in_neighbors.resize(n_agents);
  for (AgentId j = 0; j < n_agents; ++j) plan.in_neighbors[j] = {j};
  return plan;
}

CommPlan sample_er_plan(int n_agents, double p, Engine& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw CommError("edge probability must lie in [0, 1]");
  CommPlan plan;
  plan.model = CommModel::er;
  plan.param = p;
  plan.in_neighbors.resize(n_agents);
  for (AgentId j = 0; j < n_agents; ++j) {
    auto& in = plan.in_neighbors[j];
    for (AgentId k = 0; k < n_agents; ++k) {
      if (k == j) {
        in.push_back(j);
        continue;
      }
      if (bits_to_unit(rng()) < p) in.push_back(k);
    }
  }
  return plan;
}

CommPlan assemble_ucb_plan(std::span<const std::vector<AgentId>> selections, int gamma) {
  const auto n = static_cast<AgentId>(selections.size());
  CommPlan plan;
  plan.model = CommModel::ucb;
  plan.param = gamma;
  plan.in_neighbors.resize(selections.size());
  for (AgentId j = 0; j < n; ++j) {
    auto in = selections[j];
    for (AgentId k : in)
      if (k < 0 || k >= n) throw CommError("selection of agent " + std::to_string(j) + " names unknown agent");
    in.push_back(j);
    std::sort(in.begin(), in.end());
    in.erase(std::unique(in.begin(), in.end()), in.end());
    if (static_cast<int>(in.size()) > gamma + 1)
      throw CommError("agent " + std::to_string(j) + " selected " + std::to_string(in.size() - 1) +
                      " peers, budget is " + std::to_string(gamma));
    plan.in_neighbors[j] = std::move(in);
  }
  return plan;
}

}  // namespace mamab
