#include "mamab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mamab {

MetricsContext MetricsContext::from(const RewardEnvironment& env, const PolicyParams& params,
                                    std::vector<std::int64_t> checkpoints) {
  MetricsContext ctx;
  ctx.gaps.resize(env.num_options());
  for (std::size_t i = 0; i < ctx.gaps.size(); ++i) ctx.gaps[i] = env.gap(static_cast<Option>(i));
  ctx.optimal = env.gaps().optimal;
  ctx.gap_min = env.gaps().gap_min;
  ctx.params = params;
  ctx.checkpoints = std::move(checkpoints);
  return ctx;
}

MetricsContext MetricsContext::from(const Scenario& scenario) {
  return from(scenario.env(), scenario.params(), scenario.checkpoints());
}

std::int64_t exploration_threshold(std::int64_t t, double gap_min, const PolicyParams& params) {
  if (!(gap_min > 0.0)) throw std::invalid_argument("exploration threshold needs gap_min > 0");
  const double scale = 4.0 * (1.0 + params.alpha * params.tau_bar) / (gap_min * gap_min);
  return static_cast<std::int64_t>(std::ceil(scale * psi(t, params)));
}

TrialSummary summarize_trial(const TrialLog& log, const MetricsContext& ctx) {
  const int na = log.n_agents();
  const int no = log.n_options();
  const std::int64_t T = log.steps();
  if (static_cast<int>(ctx.gaps.size()) != no) throw std::invalid_argument("log/context option count mismatch");
  if (T != log.horizon()) throw std::invalid_argument("log is incomplete: " + std::to_string(T) + " of " +
                                                      std::to_string(log.horizon()) + " steps");
  const auto cells = static_cast<std::size_t>(na) * no;
  const int tau_bar = ctx.params.tau_bar;

  TrialSummary s;
  s.trial_index = log.trial_index;
  s.n_agents = na;
  s.n_options = no;
  s.horizon = T;
  s.ns_at.assign(ctx.checkpoints.size() * cells, 0);
  s.ns.assign(cells, 0);
  s.nc.assign(cells, 0);
  s.n.assign(cells, 1);
  s.f_num.assign(cells, 0);
  s.f_den.assign(cells, 0);
  s.reward_sum.assign(na, 0.0);

  auto network_regret = [&] {
    double r = 0.0;
    for (std::size_t c = 0; c < cells; ++c) r += ctx.gaps[c % no] * static_cast<double>(s.ns[c]);
    return r;
  };

  std::vector<std::int64_t> observed_total(na, 0);
  std::size_t cp = 0;
  for (std::int64_t t = 1; t <= T; ++t) {
    if (t >= 2) {
      const std::int64_t l_prev = exploration_threshold(t - 1, ctx.gap_min, ctx.params);
      for (std::size_t c = 0; c < cells; ++c) {
        s.f_num[c] += s.n[c] <= l_prev;
        s.f_den[c] += s.ns[c] <= l_prev;
      }
    }
    for (AgentId j = 0; j < na; ++j) {
      const StepRecord& r = log.record(t, j);
      const std::size_t row = static_cast<std::size_t>(j) * no;
      if (r.sampled != kNoOption) {
        ++s.ns[row + r.sampled];
        s.reward_sum[j] += r.reward;
      }
      const auto obs = log.observed(t, j);
      for (Option i : obs) {
        ++s.n[row + i];
        if (i != r.sampled) ++s.nc[row + i];
      }
      observed_total[j] += static_cast<std::int64_t>(obs.size());
      s.in_degree_sum += static_cast<std::int64_t>(log.in_degree(t, j));
      if (observed_total[j] < t / tau_bar) {
        if (s.gamma_violations == 0) {
          s.first_violation_t = t;
          s.first_violation_agent = j;
        }
        ++s.gamma_violations;
      }
    }
    if (cp < ctx.checkpoints.size() && ctx.checkpoints[cp] == t) {
      for (std::size_t c = 0; c < cells; ++c) s.ns_at[cp * cells + c] = static_cast<std::int32_t>(s.ns[c]);
      ++cp;
    }
    if (t == T / 4) s.regret_quarter = network_regret();
    if (t == T / 2) s.regret_half = network_regret();
  }
  s.regret_final = network_regret();

  double c_sum = 0.0;
  for (AgentId j = 0; j < na; ++j)
    for (Option i = 0; i < no; ++i) {
      const std::size_t c = static_cast<std::size_t>(j) * no + i;
      if (s.ns[c] > 0) c_sum += static_cast<double>(s.nc[c]) / static_cast<double>(s.ns[c]);
    }
  s.comm_effect_mean = c_sum / na;
  return s;
}

MetricsAccumulator::MetricsAccumulator(const MetricsContext& ctx, int n_agents, int n_options,
                                       std::int64_t horizon, int trials)
    : ctx_(ctx), n_agents_(n_agents), n_options_(n_options), trials_(trials), horizon_(horizon) {
  const auto cells = static_cast<std::size_t>(n_agents) * n_options;
  ns_at_.assign(ctx.checkpoints.size() * cells, 0);
  ns_.assign(cells, 0);
  nc_.assign(cells, 0);
  n_.assign(cells, 0);
  f_num_.assign(cells, 0);
  f_den_.assign(cells, 0);
  trial_reward_.assign(static_cast<std::size_t>(trials) * n_agents, 0.0);
  trial_final_.assign(trials, 0.0);
  trial_half_.assign(trials, 0.0);
  trial_quarter_.assign(trials, 0.0);
  trial_comm_.assign(trials, 0.0);
  have_.assign(trials, 0);
}

void MetricsAccumulator::add(const TrialSummary& s) {
  if (s.n_agents != n_agents_ || s.n_options != n_options_ || s.horizon != horizon_ ||
      s.ns_at.size() != ns_at_.size())
    throw std::invalid_argument("inconsistent trial summary shape");
  if (s.trial_index < 0 || s.trial_index >= trials_ || have_[s.trial_index])
    throw std::invalid_argument("trial index out of range or duplicated");
  have_[s.trial_index] = 1;
  ++added_;
  for (std::size_t c = 0; c < ns_at_.size(); ++c) ns_at_[c] += s.ns_at[c];
  for (std::size_t c = 0; c < ns_.size(); ++c) {
    ns_[c] += s.ns[c];
    nc_[c] += s.nc[c];
    n_[c] += s.n[c];
    f_num_[c] += s.f_num[c];
    f_den_[c] += s.f_den[c];
  }
  in_degree_ += s.in_degree_sum;
  if (s.gamma_violations > 0 && s.trial_index < first_violation_trial_) {
    first_violation_trial_ = s.trial_index;
    first_violation_t_ = s.first_violation_t;
    first_violation_agent_ = s.first_violation_agent;
  }
  gamma_violations_ += s.gamma_violations;
  std::copy(s.reward_sum.begin(), s.reward_sum.end(),
            trial_reward_.begin() + static_cast<std::ptrdiff_t>(s.trial_index) * n_agents_);
  trial_final_[s.trial_index] = s.regret_final;
  trial_half_[s.trial_index] = s.regret_half;
  trial_quarter_[s.trial_index] = s.regret_quarter;
  trial_comm_[s.trial_index] = s.comm_effect_mean;
}

MetricsReport MetricsAccumulator::finalize() const {
  if (added_ != trials_) throw std::logic_error("metrics finalized before all trials were added");
  const auto cells = static_cast<std::size_t>(n_agents_) * n_options_;
  const double nt = trials_;
  MetricsReport r;
  r.n_agents = n_agents_;
  r.n_options = n_options_;
  r.trials = trials_;
  r.horizon = horizon_;
  r.optimal = ctx_.optimal;
  r.gaps = ctx_.gaps;
  r.checkpoints = ctx_.checkpoints;
  r.ns_at_sum = ns_at_;
  r.mean_ns.resize(cells);
  r.mean_nc.resize(cells);
  r.mean_n.resize(cells);
  r.f.resize(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    r.mean_ns[c] = static_cast<double>(ns_[c]) / nt;
    r.mean_nc[c] = static_cast<double>(nc_[c]) / nt;
    r.mean_n[c] = static_cast<double>(n_[c]) / nt;
    r.f[c] = f_den_[c] > 0 ? static_cast<double>(f_num_[c]) / static_cast<double>(f_den_[c])
                           : std::numeric_limits<double>::quiet_NaN();
  }
  r.agent_reward.assign(n_agents_, 0.0);
  for (int k = 0; k < trials_; ++k)
    for (AgentId j = 0; j < n_agents_; ++j)
      r.agent_reward[j] += trial_reward_[static_cast<std::size_t>(k) * n_agents_ + j];
  for (double& x : r.agent_reward) x /= nt;

  r.agent_regret.assign(n_agents_, 0.0);
  r.comm_effect.assign(n_agents_, 0.0);
  for (AgentId j = 0; j < n_agents_; ++j)
    for (Option i = 0; i < n_options_; ++i) {
      const std::size_t c = r.cell(j, i);
      r.agent_regret[j] += r.gaps[i] * r.mean_ns[c];
      if (r.mean_ns[c] > 0.0) r.comm_effect[j] += r.mean_nc[c] / r.mean_ns[c];
    }

  r.network_regret_curve.assign(r.checkpoints.size(), 0.0);
  for (std::size_t cp = 0; cp < r.checkpoints.size(); ++cp)
    for (std::size_t c = 0; c < cells; ++c)
      r.network_regret_curve[cp] += r.gaps[c % n_options_] * static_cast<double>(ns_at_[cp * cells + c]) / nt;

  r.trial_regret_final = trial_final_;
  r.trial_regret_half = trial_half_;
  r.trial_regret_quarter = trial_quarter_;
  r.trial_comm_effect = trial_comm_;
  r.mean_connectivity = static_cast<double>(in_degree_) / (nt * static_cast<double>(horizon_) * n_agents_);
  r.gamma_violations = gamma_violations_;
  r.first_violation_trial = gamma_violations_ > 0 ? first_violation_trial_ : -1;
  r.first_violation_t = first_violation_t_;
  r.first_violation_agent = first_violation_agent_;
  return r;
}

double MetricsReport::mean_ns_at(std::size_t cp, AgentId j, Option i) const {
  const auto cells = static_cast<std::size_t>(n_agents) * n_options;
  return static_cast<double>(ns_at_sum[cp * cells + cell(j, i)]) / trials;
}

double MetricsReport::mean_comm_effect() const {
  return std::accumulate(comm_effect.begin(), comm_effect.end(), 0.0) / static_cast<double>(comm_effect.size());
}

MetricsReport compute_metrics(std::span<const TrialLog> logs, const MetricsContext& ctx) {
  if (logs.empty()) throw std::invalid_argument("compute_metrics needs at least one trial");
  const auto& first = logs.front();
  MetricsAccumulator acc(ctx, first.n_agents(), first.n_options(), first.horizon(), static_cast<int>(logs.size()));
  for (std::size_t k = 0; k < logs.size(); ++k) {
    if (logs[k].n_agents() != first.n_agents() || logs[k].n_options() != first.n_options() ||
        logs[k].horizon() != first.horizon())
      throw std::invalid_argument("inconsistent log shapes");
    TrialSummary s = summarize_trial(logs[k], ctx);
    s.trial_index = static_cast<int>(k);
    acc.add(s);
  }
  return acc.finalize();
}

double max_expected_in_degree(CommModel model, int gamma, double p, int n_agents) {
  switch (model) {
    case CommModel::none: return 1.0;
    case CommModel::ucb: return gamma + 1.0;
    case CommModel::er: return 1.0 + (n_agents - 1) * p;
  }
  return 1.0;
}

BoundValues theoretical_bounds(const RewardEnvironment& env, const SpatialGraph& graph, const PolicyParams& params,
                               CommModel model, double comm_param, int n_agents, std::int64_t horizon) {
  if (!(env.gaps().gap_min > 0.0)) throw std::invalid_argument("bounds need gap_min > 0");
  PolicyParams p = params;
  p.tau_bar = graph.diameter();
  BoundValues b;
  b.psi_T = psi(horizon, p);
  b.l_T = exploration_threshold(horizon, env.gaps().gap_min, p);
  b.vartheta = 1.0 / std::log(1.0 + p.eta);
  b.count_bound = 4.0 * b.vartheta + static_cast<double>(b.l_T);
  b.regret_bound = env.gaps().gap_max * b.count_bound;
  b.in_degree = max_expected_in_degree(model, static_cast<int>(comm_param), comm_param, n_agents);
  b.total_count_bound = b.in_degree * b.count_bound;
  return b;
}

std::vector<double> comm_effect_bounds(const MetricsReport& r, double in_degree) {
  std::vector<double> h(r.n_options, 0.0);
  for (Option i = 0; i < r.n_options; ++i) {
    double hi = 0.0, lo = std::numeric_limits<double>::infinity();
    for (AgentId k = 0; k < r.n_agents; ++k) {
      const double x = r.mean_ns[r.cell(k, i)];
      hi = std::max(hi, x);
      if (x > 0.0) lo = std::min(lo, x);
    }
    h[i] = std::isfinite(lo) ? hi / lo : 0.0;
  }
  std::vector<double> out(r.n_agents, 0.0);
  for (AgentId j = 0; j < r.n_agents; ++j)
    for (Option i = 0; i < r.n_options; ++i)
      if (r.mean_ns[r.cell(j, i)] > 0.0) out[j] += h[i] * (in_degree - 1.0);
  return out;
}

std::vector<BoundRow> check_bounds(const MetricsReport& r, const BoundValues& b) {
  std::vector<BoundRow> rows;
  double max_ns = 0.0, max_n = 0.0, max_regret = 0.0, max_f = 0.0;
  double tight_margin = -std::numeric_limits<double>::infinity();
  BoundRow tight{"count_bound_tight_worst_cell", 0.0, 0.0, true};
  for (AgentId k = 0; k < r.n_agents; ++k)
    for (Option i = 0; i < r.n_options; ++i) {
      const std::size_t c = r.cell(k, i);
      if (std::isfinite(r.f[c])) max_f = std::max(max_f, r.f[c]);
      if (i == r.optimal) continue;
      max_ns = std::max(max_ns, r.mean_ns[c]);
      max_n = std::max(max_n, r.mean_n[c]);
      max_regret = std::max(max_regret, r.gaps[i] * r.mean_ns[c]);
      const double f = std::isfinite(r.f[c]) ? r.f[c] : 1.0;
      const double cell_bound = 2.0 * (1.0 - f) + 4.0 * b.vartheta + f * static_cast<double>(b.l_T);
      if (r.mean_ns[c] - cell_bound > tight_margin) {
        tight_margin = r.mean_ns[c] - cell_bound;
        tight.value = cell_bound;
        tight.empirical = r.mean_ns[c];
      }
    }
  tight.satisfied = tight.empirical <= tight.value;

  rows.push_back({"count_bound", b.count_bound, max_ns, max_ns <= b.count_bound});
  rows.push_back(tight);
  rows.push_back({"regret_bound_per_option", b.regret_bound, max_regret, max_regret <= b.regret_bound});
  rows.push_back({"total_count_bound", b.total_count_bound, max_n, max_n <= b.total_count_bound});
  rows.push_back({"f_max", 1.0, max_f, max_f <= 1.0});
  rows.push_back({"gamma_floor_violations", 0.0, static_cast<double>(r.gamma_violations), r.gamma_violations == 0});
  const auto l4 = comm_effect_bounds(r, b.in_degree);
  for (AgentId j = 0; j < r.n_agents; ++j)
    rows.push_back({"comm_effect_agent_" + std::to_string(j), l4[j], r.comm_effect[j], r.comm_effect[j] <= l4[j]});
  return rows;
}

PairedStats paired_difference(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("paired samples must be non-empty and equal length");
  PairedStats s;
  s.n = static_cast<int>(a.size());
  std::vector<double> d(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) d[k] = a[k] - b[k];
  s.mean_diff = std::accumulate(d.begin(), d.end(), 0.0) / s.n;
  if (s.n > 1) {
    double ss = 0.0;
    for (double x : d) ss += (x - s.mean_diff) * (x - s.mean_diff);
    s.se = std::sqrt(ss / (s.n - 1)) / std::sqrt(static_cast<double>(s.n));
  }
  return s;
}

}  // namespace mamab
