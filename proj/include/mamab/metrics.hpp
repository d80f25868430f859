#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mamab/agent.hpp"
#include "mamab/comm_models.hpp"
#include "mamab/environment.hpp"
#include "mamab/simulator.hpp"

namespace mamab {

// Ground truth and bound parameters the log pass needs.
struct MetricsContext {
  std::vector<double> gaps;  // μ_{i*} - μ_i, zero at i*
  Option optimal = 0;
  double gap_min = 0.0;
  PolicyParams params;
  std::vector<std::int64_t> checkpoints;

  static MetricsContext from(const Scenario& scenario);
  static MetricsContext from(const RewardEnvironment& env, const PolicyParams& params,
                             std::vector<std::int64_t> checkpoints);
};

// ⌈4(1+α·τ̄)/Δ² · Ψ(t)⌉
std::int64_t exploration_threshold(std::int64_t t, double gap_min, const PolicyParams& params);

// Everything one trial contributes to the aggregate. Count-valued fields are
// integers so accumulation is independent of trial completion order.
struct TrialSummary {
  int trial_index = 0;
  int n_agents = 0;
  int n_options = 0;
  std::int64_t horizon = 0;
  std::vector<std::int32_t> ns_at;    // [checkpoint][agent][option] cumulative N^s
  std::vector<std::int64_t> ns;       // final N^s, [agent][option]
  std::vector<std::int64_t> nc;       // final N^c
  std::vector<std::int64_t> n;        // final N (includes the initial 1)
  std::vector<std::int64_t> f_num;    // Σ_{t=2..T} 1{N(t-1) <= l(t-1)}
  std::vector<std::int64_t> f_den;    // Σ_{t=2..T} 1{N^s(t-1) <= l(t-1)}
  std::int64_t gamma_violations = 0;
  std::int64_t first_violation_t = 0;
  AgentId first_violation_agent = -1;
  std::int64_t in_degree_sum = 0;
  std::vector<double> reward_sum;     // S^s_j
  double regret_quarter = 0.0;        // network R(⌊T/4⌋)
  double regret_half = 0.0;           // network R(⌊T/2⌋)
  double regret_final = 0.0;          // network R(T)
  double comm_effect_mean = 0.0;      // per-trial mean over agents of Σ_i N^c/N^s
};

TrialSummary summarize_trial(const TrialLog& log, const MetricsContext& ctx);

struct MetricsReport {
  int n_agents = 0;
  int n_options = 0;
  int trials = 0;
  std::int64_t horizon = 0;
  Option optimal = 0;
  std::vector<double> gaps;
  std::vector<std::int64_t> checkpoints;

  std::vector<std::int64_t> ns_at_sum;  // [checkpoint][agent][option], summed over trials
  std::vector<double> mean_ns, mean_nc, mean_n;  // [agent][option]
  std::vector<double> f;                          // [agent][option]; NaN when undefined
  std::vector<double> agent_reward;               // mean S^s_j
  std::vector<double> agent_regret;               // mean R^s_j(T)
  std::vector<double> comm_effect;                // C_j(T), ratio of trial means
  std::vector<double> network_regret_curve;       // mean R^s(t) per checkpoint

  std::vector<double> trial_regret_final;
  std::vector<double> trial_regret_half;
  std::vector<double> trial_regret_quarter;
  std::vector<double> trial_comm_effect;

  double mean_connectivity = 0.0;  // ⟨|N_j^t|⟩, self included
  std::int64_t gamma_violations = 0;
  int first_violation_trial = -1;
  std::int64_t first_violation_t = 0;
  AgentId first_violation_agent = -1;

  std::size_t cell(AgentId j, Option i) const { return static_cast<std::size_t>(j) * n_options + i; }
  double mean_ns_at(std::size_t cp, AgentId j, Option i) const;
  double cum_regret(std::size_t cp, AgentId j, Option i) const { return gaps[i] * mean_ns_at(cp, j, i); }
  double network_regret() const { return network_regret_curve.back(); }
  double mean_comm_effect() const;
};

// Order-independent merge of trial summaries; finalize() yields the report.
class MetricsAccumulator {
 public:
  MetricsAccumulator(const MetricsContext& ctx, int n_agents, int n_options, std::int64_t horizon, int trials);
  void add(const TrialSummary& s);
  MetricsReport finalize() const;

 private:
  MetricsContext ctx_;
  int n_agents_, n_options_, trials_;
  std::int64_t horizon_;
  int added_ = 0;
  std::vector<std::int64_t> ns_at_, ns_, nc_, n_, f_num_, f_den_;
  std::int64_t in_degree_ = 0, gamma_violations_ = 0, first_violation_t_ = 0;
  AgentId first_violation_agent_ = -1;
  int first_violation_trial_ = std::numeric_limits<int>::max();
  std::vector<double> trial_reward_;  // [trial][agent]
  std::vector<double> trial_final_, trial_half_, trial_quarter_, trial_comm_;
  std::vector<char> have_;
};

MetricsReport compute_metrics(std::span<const TrialLog> logs, const MetricsContext& ctx);

// Expected in-degree bound used by the connectivity-dependent bounds
// (receive set size, self included).
double max_expected_in_degree(CommModel model, int gamma, double p, int n_agents);

struct BoundValues {
  double psi_T = 0.0;
  std::int64_t l_T = 0;
  double vartheta = 0.0;           // 1 / ln(1+η)
  double count_bound = 0.0;        // 4ϑ + l(T)
  double regret_bound = 0.0;       // Δ̄ (4ϑ + l(T))
  double in_degree = 1.0;
  double total_count_bound = 0.0;  // in_degree (4ϑ + l(T))
};

BoundValues theoretical_bounds(const RewardEnvironment& env, const SpatialGraph& graph, const PolicyParams& params,
                               CommModel model, double comm_param, int n_agents, std::int64_t horizon);

// Per-agent Σ_i h_i(T)·(in_degree - 1) over options agent j has self-sampled.
std::vector<double> comm_effect_bounds(const MetricsReport& report, double in_degree);

struct BoundRow {
  std::string name;
  double value = 0.0;
  double empirical = 0.0;
  bool satisfied = true;
};

std::vector<BoundRow> check_bounds(const MetricsReport& report, const BoundValues& bounds);

struct PairedStats {
  double mean_diff = 0.0;  // mean of (a - b)
  double se = 0.0;         // standard error of the mean difference
  int n = 0;
};

PairedStats paired_difference(std::span<const double> a, std::span<const double> b);

}  // namespace mamab
