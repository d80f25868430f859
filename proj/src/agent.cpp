#include "mamab/agent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mamab {

void validate(const PolicyParams& p, int n_agents) {
  if (!(p.alpha >= 0.0) || !std::isfinite(p.alpha)) throw PolicyError("alpha must be >= 0");
  if (!(p.eta > 0.0) || !std::isfinite(p.eta)) throw PolicyError("eta must be > 0");
  if (!(p.sigma > 0.0) || !std::isfinite(p.sigma)) throw PolicyError("sigma must be > 0");
  if (p.gamma < 0 || p.gamma > n_agents - 1)
    throw PolicyError("gamma must lie in [0, n_agents - 1]; got " + std::to_string(p.gamma));
  if (p.tau_bar < 1) throw PolicyError("tau_bar must be >= 1");
}

double psi(std::int64_t t, const PolicyParams& params) {
  const double te = static_cast<double>(std::max<std::int64_t>(t, 3));
  return params.sigma * params.sigma * std::sqrt(1.0 + params.eta) *
         std::log(te * std::sqrt(std::log(te)));
}

AgentState::AgentState(AgentId id_, int n_agents_, Vertex position_, std::span<const double> priors,
                       const PolicyParams& params_)
    : id(id_),
      n_agents(n_agents_),
      n_options(static_cast<int>(priors.size())),
      position(position_),
      est_mean(priors.begin(), priors.end()),
      count(priors.size(), 1),
      count_self(priors.size(), 0),
      count_comm(priors.size(), 0),
      belief_mean(static_cast<std::size_t>(n_agents_) * priors.size()),
      belief_count(static_cast<std::size_t>(n_agents_) * priors.size(), 1),
      params(params_) {
  if (id < 0 || id >= n_agents) throw PolicyError("agent id out of range");
  for (int k = 0; k < n_agents; ++k)
    std::copy(priors.begin(), priors.end(), belief_mean.begin() + static_cast<std::ptrdiff_t>(cell(k, 0)));
}

double ucb_cost(const AgentState& agent, Option i, PsiValue psi_t, const SpatialGraph& graph) {
  const double a = agent.params.alpha;
  const double factor = (1.0 + a * agent.params.tau_bar) / (1.0 + a * graph.distance(agent.position, i));
  return agent.est_mean[i] + std::sqrt(factor * psi_t.value / static_cast<double>(agent.count[i]));
}

double ucb_cost(const AgentState& agent, Option i, std::int64_t t, const SpatialGraph& graph) {
  return ucb_cost(agent, i, PsiValue{psi(t, agent.params)}, graph);
}

std::vector<Option> target_candidates(const AgentState& agent, PsiValue psi_t,
                                      const SpatialGraph& graph) {
  std::vector<Option> best;
  double best_q = -std::numeric_limits<double>::infinity();
  for (Option i = 0; i < agent.n_options; ++i) {
    const double q = ucb_cost(agent, i, psi_t, graph);
    if (q > best_q) {
      best_q = q;
      best.assign(1, i);
    } else if (q == best_q) {
      best.push_back(i);
    }
  }
  return best;
}

Vertex select_target(const AgentState& agent, PsiValue psi_t, const SpatialGraph& graph, Engine& rng) {
  const auto best = target_candidates(agent, psi_t, graph);
  return best.size() == 1 ? best.front() : best[uniform_index(rng, best.size())];
}

Vertex select_target(const AgentState& agent, std::int64_t t, const SpatialGraph& graph, Engine& rng) {
  return select_target(agent, PsiValue{psi(t, agent.params)}, graph, rng);
}

std::vector<Vertex> move_candidates(Vertex position, Vertex target, const SpatialGraph& graph) {
  if (!graph.valid(target)) throw PolicyError("invalid target vertex " + std::to_string(target));
  if (position == target) return {position};
  const auto hood = graph.neighborhood(position);
  std::int32_t best_cost = std::numeric_limits<std::int32_t>::max();
  std::int32_t best_remaining = best_cost;
  std::vector<Vertex> out;
  for (Vertex n : hood) {
    const std::int32_t remaining = graph.distance(n, target);
    const std::int32_t cost = graph.distance(position, n) + remaining;
    if (cost < best_cost || (cost == best_cost && remaining < best_remaining)) {
      best_cost = cost;
      best_remaining = remaining;
      out.assign(1, n);
    } else if (cost == best_cost && remaining == best_remaining) {
      out.push_back(n);
    }
  }
  return out;
}

MoveDecision plan_move_and_sample(const AgentState& agent, Vertex target, const SpatialGraph& graph,
                                  Engine& rng) {
  const auto cands = move_candidates(agent.position, target, graph);
  const Vertex next = cands.size() == 1 ? cands.front() : cands[uniform_index(rng, cands.size())];
  return {next, next == target ? target : kNoOption};
}

double comm_cost(const AgentState& agent, AgentId peer, Option i, PsiValue psi_t) {
  const std::size_t c = agent.cell(peer, i);
  return agent.belief_mean[c] + std::sqrt(psi_t.value / static_cast<double>(agent.belief_count[c]));
}

double comm_cost(const AgentState& agent, AgentId peer, Option i, std::int64_t t) {
  return comm_cost(agent, peer, i, PsiValue{psi(t, agent.params)});
}

std::vector<double> peer_scores(const AgentState& agent, PsiValue psi_t) {
  constexpr double lowest = -std::numeric_limits<double>::infinity();
  std::vector<double> scores(agent.n_agents, lowest);
  for (AgentId k = 0; k < agent.n_agents; ++k) {
    if (k == agent.id) continue;
    double best = lowest;
    for (Option i = 0; i < agent.n_options; ++i) {
      if (i == agent.target) continue;
      best = std::max(best, comm_cost(agent, k, i, psi_t));
    }
    scores[k] = best;
  }
  return scores;
}

std::vector<AgentId> select_in_neighbors(const AgentState& agent, PsiValue psi_t, Engine& rng) {
  std::vector<AgentId> chosen{agent.id};
  const int budget = std::min(agent.params.gamma, agent.n_agents - 1);
  if (budget > 0) {
    const auto scores = peer_scores(agent, psi_t);
    std::vector<AgentId> peers;
    peers.reserve(agent.n_agents - 1);
    for (AgentId k = 0; k < agent.n_agents; ++k)
      if (k != agent.id) peers.push_back(k);
    std::stable_sort(peers.begin(), peers.end(),
                     [&](AgentId a, AgentId b) { return scores[a] > scores[b]; });

    int remaining = budget;
    std::size_t pos = 0;
    while (remaining > 0 && pos < peers.size()) {
      std::size_t end = pos;
      while (end < peers.size() && scores[peers[end]] == scores[peers[pos]]) ++end;
      const auto group = static_cast<int>(end - pos);
      if (group <= remaining) {
        chosen.insert(chosen.end(), peers.begin() + static_cast<std::ptrdiff_t>(pos),
                      peers.begin() + static_cast<std::ptrdiff_t>(end));
        remaining -= group;
      } else {
        std::vector<AgentId> tied(peers.begin() + static_cast<std::ptrdiff_t>(pos),
                                  peers.begin() + static_cast<std::ptrdiff_t>(end));
        for (; remaining > 0; --remaining) {
          const std::size_t pick = uniform_index(rng, tied.size());
          chosen.push_back(tied[pick]);
          tied.erase(tied.begin() + static_cast<std::ptrdiff_t>(pick));
        }
      }
      pos = end;
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

std::vector<AgentId> select_in_neighbors(const AgentState& agent, std::int64_t t, Engine& rng) {
  return select_in_neighbors(agent, PsiValue{psi(t, agent.params)}, rng);
}

namespace {

void fold_mean(double& mean, std::int64_t& n, double x) {
  const auto prev = static_cast<double>(n);
  ++n;
  mean = (prev * mean + x) / static_cast<double>(n);
}

}  // namespace

std::vector<Option> ingest(AgentState& agent, std::span<const Message> messages) {
  // Validate the whole batch before touching any state.
  std::vector<char> seen(agent.n_agents, 0);
  Option own = kNoOption;
  for (const Message& m : messages) {
    if (m.sender < 0 || m.sender >= agent.n_agents)
      throw PolicyError("message from unknown sender " + std::to_string(m.sender));
    if (seen[m.sender]) throw PolicyError("duplicate sender " + std::to_string(m.sender) + " in batch");
    seen[m.sender] = 1;
    if (m.option != kNoOption && (m.option < 0 || m.option >= agent.n_options))
      throw PolicyError("message reports unknown option " + std::to_string(m.option));
    if (m.sender == agent.id) own = m.option;
  }

  std::vector<Option> observed;
  std::vector<double> value;
  for (const Message& m : messages) {
    if (m.option == kNoOption) continue;
    const auto it = std::lower_bound(observed.begin(), observed.end(), m.option);
    const auto at = it - observed.begin();
    if (it != observed.end() && *it == m.option) {
      if (value[at] != m.reward)
        throw PolicyError("inconsistent realizations reported for option " + std::to_string(m.option));
      continue;
    }
    observed.insert(it, m.option);
    value.insert(value.begin() + at, m.reward);
  }

  for (std::size_t n = 0; n < observed.size(); ++n) {
    const Option i = observed[n];
    fold_mean(agent.est_mean[i], agent.count[i], value[n]);
    if (own == i)
      ++agent.count_self[i];
    else
      ++agent.count_comm[i];
  }

  for (const Message& m : messages) {
    if (m.option == kNoOption) continue;
    const std::size_t c = agent.cell(m.sender, m.option);
    fold_mean(agent.belief_mean[c], agent.belief_count[c], m.reward);
  }
  return observed;
}

}  // namespace mamab
