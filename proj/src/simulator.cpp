#include "mamab/simulator.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace mamab {

namespace {

SpatialGraph make_graph(const GraphSpec& spec) {
  switch (spec.kind) {
    case GraphKind::lattice: return build_lattice(spec.rows, spec.cols);
    case GraphKind::complete: return build_complete(spec.size);
    case GraphKind::edge_list: return load_edge_list_file(spec.edge_list_path);
  }
  throw ConfigError("graph.kind: unknown graph kind");
}

RewardEnvironment make_env(const EnvSpec& spec, const SpatialGraph& graph) {
  std::vector<double> means;
  if (spec.means_mode == MeansMode::gradient) {
    const Vertex peak = spec.gradient_peak < 0 ? static_cast<Vertex>(graph.num_vertices() - 1)
                                               : spec.gradient_peak;
    means = gradient_means(graph, peak, spec.gradient_low, spec.gradient_high);
  } else {
    means = spec.means;
    if (means.size() != graph.num_vertices())
      throw ConfigError("env.means: " + std::to_string(means.size()) + " means for " +
                        std::to_string(graph.num_vertices()) + " options");
  }
  if (spec.kind == RewardKind::bounded_drift)
    return make_drift_env(std::move(means), spec.variance, spec.drift_amplitude, spec.drift_period);
  return make_gaussian_env(std::move(means), spec.variance);
}

}  // namespace

Scenario::Scenario(SimulationConfig config)
    : config_(std::move(config)),
      graph_(make_graph(config_.graph)),
      env_(make_env(config_.env, graph_)) {
  const auto& c = config_;
  if (c.n_agents < 1) throw ConfigError("agents.count must be >= 1");
  if (c.horizon < 1) throw ConfigError("sim.horizon must be >= 1");
  if (c.trials < 1) throw ConfigError("sim.trials must be >= 1");
  if (c.regret_cadence < 0) throw ConfigError("sim.regret_cadence must be >= 0");
  if (!(c.p >= 0.0 && c.p <= 1.0)) throw ConfigError("comm.p must lie in [0, 1]");

  params_.alpha = c.alpha;
  params_.eta = c.eta;
  params_.sigma = c.sigma.value_or(env_.sigma());
  params_.gamma = c.comm_model == CommModel::ucb ? c.gamma : 0;
  params_.tau_bar = graph_.diameter();
  if (c.gamma < 0 || c.gamma > c.n_agents - 1)
    throw ConfigError("comm.gamma must lie in [0, agents.count - 1]");
  try {
    validate(params_, c.n_agents);
  } catch (const PolicyError& e) {
    throw ConfigError(std::string("agents: ") + e.what() +
                      (params_.sigma > 0.0 ? "" : " (zero-variance environment: set agents.sigma)"));
  }

  prior_low_ = c.prior_low.value_or(0.0);
  prior_high_ = c.prior_high.value_or(*std::max_element(env_.means().begin(), env_.means().end()));
  if (!(prior_low_ <= prior_high_)) throw ConfigError("agents.prior_low must not exceed agents.prior_high");

  if (!c.initial_positions.empty()) {
    if (static_cast<int>(c.initial_positions.size()) != c.n_agents)
      throw ConfigError("agents.initial_positions: need one position per agent");
    for (Vertex v : c.initial_positions)
      if (!graph_.valid(v)) throw ConfigError("agents.initial_positions: invalid vertex " + std::to_string(v));
  }
}

std::vector<std::int64_t> Scenario::checkpoints() const {
  const std::int64_t T = config_.horizon;
  const std::int64_t every = config_.regret_cadence > 0 ? config_.regret_cadence : (T <= 5000 ? 1 : 10);
  std::vector<std::int64_t> out;
  for (std::int64_t t = every; t <= T; t += every) out.push_back(t);
  if (out.empty() || out.back() != T) out.push_back(T);
  return out;
}

TrialLog::TrialLog(int n_agents, int n_options, std::int64_t horizon)
    : n_agents_(n_agents),
      n_options_(n_options),
      horizon_(horizon),
      mask_words_((static_cast<std::size_t>(n_agents) + 63) / 64) {
  const auto n = static_cast<std::size_t>(horizon) * n_agents;
  records_.reserve(n);
  masks_.reserve(n * mask_words_);
  obs_offsets_.reserve(n + 1);
}

void TrialLog::append(const StepRecord& rec, std::span<const AgentId> in, std::span<const Option> observed) {
  records_.push_back(rec);
  const std::size_t base = masks_.size();
  masks_.resize(base + mask_words_, 0);
  for (AgentId k : in) masks_[base + k / 64] |= std::uint64_t{1} << (k % 64);
  obs_.insert(obs_.end(), observed.begin(), observed.end());
  obs_offsets_.push_back(static_cast<std::uint32_t>(obs_.size()));
}

std::vector<AgentId> TrialLog::in_neighbors(std::int64_t t, AgentId j) const {
  std::vector<AgentId> out;
  const std::size_t base = index(t, j) * mask_words_;
  for (std::size_t w = 0; w < mask_words_; ++w)
    for (std::uint64_t bits = masks_[base + w]; bits; bits &= bits - 1)
      out.push_back(static_cast<AgentId>(w * 64 + std::countr_zero(bits)));
  return out;
}

std::size_t TrialLog::in_degree(std::int64_t t, AgentId j) const {
  const std::size_t base = index(t, j) * mask_words_;
  std::size_t n = 0;
  for (std::size_t w = 0; w < mask_words_; ++w) n += std::popcount(masks_[base + w]);
  return n;
}

std::span<const Option> TrialLog::observed(std::int64_t t, AgentId j) const {
  const std::size_t i = index(t, j);
  return {obs_.data() + obs_offsets_[i], obs_offsets_[i + 1] - obs_offsets_[i]};
}

Simulation::Simulation(const Scenario& scenario, int trial_index)
    : scenario_(&scenario),
      log_(scenario.n_agents(), scenario.n_options(), scenario.horizon()) {
  const auto& cfg = scenario.config();
  const int n = scenario.n_agents();
  const int n_opt = scenario.n_options();
  const std::uint64_t ts = trial_seed(cfg.seed, static_cast<std::uint64_t>(trial_index));
  log_.trial_index = trial_index;
  log_.trial_seed = ts;
  log_.priors.resize(static_cast<std::size_t>(n) * n_opt);

  agents_.reserve(n);
  streams_.reserve(n);
  for (AgentId j = 0; j < n; ++j) {
    Vertex start;
    if (cfg.initial_positions.empty()) {
      Engine pos_rng = make_engine(ts, j, Purpose::initial_position);
      start = static_cast<Vertex>(uniform_index(pos_rng, n_opt));
    } else {
      start = cfg.initial_positions[j];
    }
    Engine prior_rng = make_engine(ts, j, Purpose::prior);
    std::span<double> prior(log_.priors.data() + static_cast<std::size_t>(j) * n_opt, n_opt);
    for (double& x : prior) x = uniform_real(prior_rng, scenario.prior_low(), scenario.prior_high());

    agents_.emplace_back(j, n, start, prior, scenario.params());
    streams_.push_back({make_engine(ts, j, Purpose::target_tie), make_engine(ts, j, Purpose::move_tie),
                        make_engine(ts, j, Purpose::comm_tie)});
    log_.initial_positions.push_back(start);
  }
  er_rng_ = make_engine(ts, 0, Purpose::er_edges);
}

void Simulation::step() {
  const Scenario& sc = *scenario_;
  const auto& graph = sc.graph();
  const int n = sc.n_agents();
  const std::int64_t t = ++t_;
  const PsiValue psi_t{psi(t, sc.params())};

  // decide
  for (AgentId j = 0; j < n; ++j) agents_[j].target = select_target(agents_[j], psi_t, graph, streams_[j].target);

  // move and sample
  std::vector<Message> outbox(n);
  for (AgentId j = 0; j < n; ++j) {
    const MoveDecision d = plan_move_and_sample(agents_[j], agents_[j].target, graph, streams_[j].move);
    agents_[j].position = d.next;
    outbox[j].sender = j;
    outbox[j].option = d.sample;
    outbox[j].reward = d.sample == kNoOption ? 0.0 : sc.env().sample(log_.trial_seed, t, d.sample);
  }

  // communicate: receive sets are fixed from pre-ingest state
  CommPlan plan;
  switch (sc.config().comm_model) {
    case CommModel::none: plan = self_only_plan(n); break;
    case CommModel::er: plan = sample_er_plan(n, sc.config().p, er_rng_); break;
    case CommModel::ucb: {
      std::vector<std::vector<AgentId>> selections(n);
      for (AgentId j = 0; j < n; ++j) selections[j] = select_in_neighbors(agents_[j], psi_t, streams_[j].comm);
      plan = assemble_ucb_plan(selections, sc.params().gamma);
      break;
    }
  }

  // ingest
  std::vector<Message> batch;
  for (AgentId j = 0; j < n; ++j) {
    batch.clear();
    for (AgentId k : plan.in_neighbors[j]) batch.push_back(outbox[k]);
    const auto observed = ingest(agents_[j], batch);
    log_.append({agents_[j].position, agents_[j].target, outbox[j].option, outbox[j].reward},
                plan.in_neighbors[j], observed);
  }
}

TrialLog Simulation::finish() && {
  log_.final_states = std::move(agents_);
  return std::move(log_);
}

TrialLog run_trial(const Scenario& scenario, int trial_index) {
  Simulation sim(scenario, trial_index);
  while (sim.time() < scenario.horizon()) sim.step();
  return std::move(sim).finish();
}

TrialLog run_trial(const SimulationConfig& config, int trial_index) {
  const Scenario scenario(config);
  return run_trial(scenario, trial_index);
}

}  // namespace mamab
