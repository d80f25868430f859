#include <doctest.h>

#include <sstream>

#include "mamab/simulator.hpp"
#include "oracles.hpp"

using namespace mamab;

namespace {

SimulationConfig small_config(CommModel model, int gamma = 0, double p = 0.0) {
  SimulationConfig c;
  c.graph.rows = 3;
  c.graph.cols = 4;
  c.n_agents = 4;
  c.horizon = 300;
  c.trials = 1;
  c.comm_model = model;
  c.gamma = gamma;
  c.p = p;
  c.seed = 12345;
  return c;
}

std::int64_t gamma_sum(const AgentState& s) {
  std::int64_t g = 0;
  for (auto n : s.count) g += n - 1;
  return g;
}

}  // namespace

TEST_CASE("run_trial is reproducible") {
  for (auto [m, g, p] : {std::tuple{CommModel::ucb, 2, 0.0}, {CommModel::er, 0, 0.5}, {CommModel::none, 0, 0.0}}) {
    const Scenario sc(small_config(m, g, p));
    CHECK(run_trial(sc, 3) == run_trial(sc, 3));
    CHECK_FALSE(run_trial(sc, 3) == run_trial(sc, 4));
  }
}

TEST_CASE("horizon one") {
  auto c = small_config(CommModel::ucb, 1);
  c.horizon = 1;
  const auto log = run_trial(c, 0);
  CHECK(log.steps() == 1);
  CHECK(log.final_states.size() == 4);
}

TEST_CASE("two agents on K2 with gamma 1 hit the gamma floor") {
  SimulationConfig c;
  c.graph.kind = GraphKind::complete;
  c.graph.size = 2;
  c.env.means_mode = MeansMode::explicit_list;
  c.env.means = {1.0, 0.0};
  c.n_agents = 2;
  c.comm_model = CommModel::ucb;
  c.gamma = 1;
  c.horizon = 50;
  const Scenario sc(c);
  CHECK(sc.params().tau_bar == 1);
  const auto log = run_trial(sc, 0);
  for (const auto& s : log.final_states) CHECK(gamma_sum(s) >= 50);
}

TEST_CASE("movement and sampling legality, logged shapes") {
  for (auto [m, g, p] : {std::tuple{CommModel::ucb, 3, 0.0}, {CommModel::er, 0, 0.3}}) {
    const Scenario sc(small_config(m, g, p));
    const auto log = run_trial(sc, 1);
    REQUIRE(log.steps() == sc.horizon());
    for (std::int64_t t = 1; t <= log.steps(); ++t)
      for (AgentId j = 0; j < 4; ++j) {
        const auto& r = log.record(t, j);
        const Vertex prev = t == 1 ? log.initial_positions[j] : log.record(t - 1, j).position;
        CHECK(sc.graph().distance(prev, r.position) <= 1);
        CHECK((r.sampled == kNoOption || r.sampled == r.position));
        if (r.sampled == kNoOption) CHECK(r.reward == 0.0);
      }
  }
}

TEST_CASE("shared realizations across samplers") {
  const Scenario sc(small_config(CommModel::er, 0, 0.5));
  const auto log = run_trial(sc, 0);
  for (std::int64_t t = 1; t <= log.steps(); ++t)
    for (AgentId j = 0; j < 4; ++j) {
      const auto& r = log.record(t, j);
      if (r.sampled != kNoOption) CHECK(r.reward == sc.env().sample(log.trial_seed, t, r.sampled));
    }
}

TEST_CASE("without communication agents evolve independently") {
  auto c = small_config(CommModel::none);
  c.initial_positions = {0, 5, 7, 11};
  const auto multi = run_trial(c, 2);
  auto ucb0 = c;
  ucb0.comm_model = CommModel::ucb;
  ucb0.gamma = 0;
  auto er0 = c;
  er0.comm_model = CommModel::er;
  er0.p = 0.0;
  const auto a = run_trial(ucb0, 2);
  const auto b = run_trial(er0, 2);
  for (AgentId j = 0; j < 4; ++j) {
    CHECK(multi.final_states[j] == a.final_states[j]);
    CHECK(multi.final_states[j] == b.final_states[j]);
    for (std::int64_t t = 1; t <= multi.steps(); ++t) {
      CHECK(multi.record(t, j) == a.record(t, j));
      CHECK(multi.in_neighbors(t, j) == std::vector<AgentId>{j});
    }
  }
}

TEST_CASE("adding agents does not perturb existing agents' priors or start") {
  auto c = small_config(CommModel::none);
  const auto small = run_trial(c, 0);
  c.n_agents = 6;
  const auto big = run_trial(c, 0);
  for (AgentId j = 0; j < 4; ++j) {
    CHECK(small.initial_positions[j] == big.initial_positions[j]);
    for (int i = 0; i < 12; ++i) CHECK(small.priors[j * 12 + i] == big.priors[j * 12 + i]);
  }
}

TEST_CASE("gamma floor at every step") {
  for (auto [m, g, p] : {std::tuple{CommModel::ucb, 0, 0.0}, {CommModel::ucb, 2, 0.0}, {CommModel::er, 0, 0.4}}) {
    const Scenario sc(small_config(m, g, p));
    Simulation sim(sc, 0);
    while (sim.time() < sc.horizon()) {
      sim.step();
      for (const auto& a : sim.agents()) REQUIRE(gamma_sum(a) >= sim.time() / sc.params().tau_bar);
    }
  }
}

TEST_CASE("estimators match batch recomputation") {
  for (auto [m, g, p] : {std::tuple{CommModel::ucb, 2, 0.0}, {CommModel::er, 0, 0.5}, {CommModel::none, 0, 0.0}}) {
    const auto log = run_trial(small_config(m, g, p), 0);
    const auto bad = oracle::audit_estimators(log);
    CHECK_MESSAGE(bad.empty(), (bad.empty() ? "" : bad.front()));
  }
}

TEST_CASE("replay audit: decisions use only pre-step information") {
  for (auto [m, g, p] : {std::tuple{CommModel::ucb, 2, 0.0}, {CommModel::er, 0, 0.5}, {CommModel::none, 0, 0.0}}) {
    const Scenario sc(small_config(m, g, p));
    const auto log = run_trial(sc, 5);
    const auto bad = oracle::replay_audit(sc, log);
    CHECK_MESSAGE(bad.empty(), (bad.empty() ? "" : bad.front()));
  }
}

TEST_CASE("trial log text round trip") {
  const auto log = run_trial(small_config(CommModel::ucb, 2), 0);
  std::stringstream buf;
  write_log(buf, log);
  const auto back = read_log(buf);
  CHECK(back == log);
  std::stringstream broken("not a log\n");
  CHECK_THROWS(read_log(broken));
}

TEST_CASE("scenario validation names the key") {
  auto c = small_config(CommModel::ucb, 9);
  CHECK_THROWS_WITH_AS(Scenario{c}, doctest::Contains("comm.gamma"), ConfigError);
  c = small_config(CommModel::er, 0, 1.5);
  CHECK_THROWS_WITH_AS(Scenario{c}, doctest::Contains("comm.p"), ConfigError);
  c = small_config(CommModel::none);
  c.horizon = 0;
  CHECK_THROWS_WITH_AS(Scenario{c}, doctest::Contains("sim.horizon"), ConfigError);
  c = small_config(CommModel::none);
  c.initial_positions = {0, 1};
  CHECK_THROWS_WITH_AS(Scenario{c}, doctest::Contains("initial_positions"), ConfigError);
}

TEST_CASE("checkpoints") {
  auto c = small_config(CommModel::none);
  c.horizon = 25;
  CHECK(Scenario(c).checkpoints().size() == 25);
  c.horizon = 20005;
  const auto cps = Scenario(c).checkpoints();
  CHECK(cps.front() == 10);
  CHECK(cps.back() == 20005);
  c.regret_cadence = 7;
  c.horizon = 20;
  CHECK(Scenario(c).checkpoints() == std::vector<std::int64_t>{7, 14, 20});
}
