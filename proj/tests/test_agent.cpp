#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>

#include "mamab/agent.hpp"
#include "oracles.hpp"

using namespace mamab;

namespace {

PolicyParams params(double alpha, double eta, double sigma, int gamma = 0, int tau_bar = 1) {
  PolicyParams p;
  p.alpha = alpha;
  p.eta = eta;
  p.sigma = sigma;
  p.gamma = gamma;
  p.tau_bar = tau_bar;
  return p;
}

AgentState flat_agent(int n_agents, int n_options, const PolicyParams& p, Vertex pos = 0, double prior = 0.0) {
  const std::vector<double> priors(n_options, prior);
  return AgentState(0, n_agents, pos, priors, p);
}

}  // namespace

TEST_CASE("psi") {
  const auto p = params(1.0, 1.0, std::sqrt(8.0));
  CHECK(psi(1, p) == psi(3, p));
  CHECK(psi(2, p) == psi(3, p));
  CHECK(psi(100, p) == doctest::Approx(60.74).epsilon(1e-3));
  CHECK(psi(100, p) == doctest::Approx(8.0 * std::sqrt(2.0) * std::log(100.0 * std::sqrt(std::log(100.0)))));
  for (std::int64_t t = 1; t < 100000; ++t) REQUIRE(psi(t + 1, p) >= psi(t, p));
  for (std::int64_t t = 3; t < 1000; ++t)
    REQUIRE(psi(t, p) >= 8.0 * std::sqrt(2.0) * std::log(t * std::sqrt(std::log(static_cast<double>(t)))) - 1e-12);
}

TEST_CASE("ucb cost examples") {
  const auto g = build_lattice(10, 10);
  auto p = params(1.0, 1.0, 1.0, 0, g.diameter());
  AgentState a = flat_agent(1, 100, p, 0);
  a.est_mean[1] = 0.5;
  a.count[1] = 4;
  CHECK(ucb_cost(a, 1, PsiValue{2.0}, g) == doctest::Approx(0.5 + std::sqrt(4.75)));
  CHECK(ucb_cost(a, 1, PsiValue{2.0}, g) == doctest::Approx(2.6794).epsilon(1e-4));

  // penalty factor endpoints: d = 0 gives 1 + alpha tau, d = tau gives 1
  CHECK(ucb_cost(a, 0, PsiValue{1.0}, g) == doctest::Approx(std::sqrt(19.0)));
  CHECK(ucb_cost(a, 99, PsiValue{1.0}, g) == doctest::Approx(1.0));
}

TEST_CASE("alpha zero collapses to standard ucb") {
  const auto g = build_lattice(4, 4);
  AgentState a = flat_agent(1, 16, params(0.0, 1.0, 1.0, 0, g.diameter()));
  std::iota(a.est_mean.begin(), a.est_mean.end(), 0.0);
  for (Option i = 0; i < 16; ++i) a.count[i] = 1 + i;
  for (Vertex pos = 0; pos < 16; ++pos) {
    a.position = pos;
    for (Option i = 0; i < 16; ++i)
      CHECK(ucb_cost(a, i, PsiValue{3.0}, g) == doctest::Approx(a.est_mean[i] + std::sqrt(3.0 / a.count[i])));
  }
}

TEST_CASE("select_target frequencies") {
  const auto g = build_complete(5);
  const auto p = params(0.5, 1.0, 1.0, 0, 1);
  Engine rng(42);

  SUBCASE("uniform over identical options") {
    AgentState a = flat_agent(1, 5, p, 0);
    // remove the distance advantage of the current vertex
    a.params.alpha = 0.0;
    std::vector<int> hits(5, 0);
    constexpr int N = 10000;
    for (int k = 0; k < N; ++k) ++hits[select_target(a, PsiValue{1.0}, g, rng)];
    const double sd = std::sqrt(N * 0.2 * 0.8);
    for (int h : hits) CHECK(std::abs(h - N * 0.2) <= 3 * sd);
  }
  SUBCASE("dominant option always chosen") {
    AgentState a = flat_agent(1, 5, p, 0);
    a.est_mean[3] = 10.0;
    for (int k = 0; k < 1000; ++k) CHECK(select_target(a, PsiValue{1.0}, g, rng) == 3);
  }
  SUBCASE("two-way tie") {
    AgentState a = flat_agent(1, 5, p, 0);
    a.params.alpha = 0.0;
    a.est_mean[1] = a.est_mean[4] = 5.0;
    int ones = 0;
    constexpr int N = 10000;
    for (int k = 0; k < N; ++k) {
      const Vertex v = select_target(a, PsiValue{1.0}, g, rng);
      REQUIRE((v == 1 || v == 4));
      ones += v == 1;
    }
    CHECK(std::abs(ones - N / 2) <= 3 * std::sqrt(N * 0.25));
  }
}

TEST_CASE("argmax set invariant under a constant shift") {
  const auto g = build_lattice(3, 3);
  AgentState a = flat_agent(1, 9, params(0.3, 1.0, 1.0, 0, g.diameter()), 4);
  for (Option i = 0; i < 9; ++i) {
    a.est_mean[i] = 0.25 * (i % 3);
    a.count[i] = 1 + (i % 4);
  }
  const auto base = target_candidates(a, PsiValue{2.0}, g);
  for (double& x : a.est_mean) x += 8.0;
  CHECK(target_candidates(a, PsiValue{2.0}, g) == base);
}

TEST_CASE("movement rule") {
  Engine rng(1);
  SUBCASE("at target: stay and sample") {
    const auto g = load_edge_list("0 1\n1 2");
    AgentState a = flat_agent(1, 3, params(1, 1, 1, 0, 2), 2);
    const auto d = plan_move_and_sample(a, 2, g, rng);
    CHECK(d.next == 2);
    CHECK(d.sample == 2);
  }
  SUBCASE("path: step toward target, no sample") {
    const auto g = load_edge_list("0 1\n1 2");
    AgentState a = flat_agent(1, 3, params(1, 1, 1, 0, 2), 0);
    const auto d = plan_move_and_sample(a, 2, g, rng);
    CHECK(d.next == 1);
    CHECK(d.sample == kNoOption);
    CHECK(move_candidates(0, 2, g) == std::vector<Vertex>{1});
  }
  SUBCASE("2x2 lattice: both first steps equally likely") {
    const auto g = build_lattice(2, 2);
    AgentState a = flat_agent(1, 4, params(1, 1, 1, 0, 2), 0);
    std::map<Vertex, int> hits;
    constexpr int N = 10000;
    for (int k = 0; k < N; ++k) {
      const auto d = plan_move_and_sample(a, 3, g, rng);
      CHECK(d.sample == kNoOption);
      ++hits[d.next];
    }
    CHECK(hits.size() == 2);
    CHECK(std::abs(hits[1] - N / 2) <= 3 * std::sqrt(N * 0.25));
    CHECK(std::abs(hits[2] - N / 2) <= 3 * std::sqrt(N * 0.25));
  }
  SUBCASE("adjacent target is reached in one step") {
    const auto g = build_complete(4);
    AgentState a = flat_agent(1, 4, params(1, 1, 1, 0, 1), 0);
    const auto d = plan_move_and_sample(a, 3, g, rng);
    CHECK(d.next == 3);
    CHECK(d.sample == 3);
  }
}

TEST_CASE("comm cost examples") {
  AgentState a = flat_agent(3, 4, params(1, 1, 1, 2, 1));
  CHECK(comm_cost(a, 1, 2, PsiValue{9.0}) == doctest::Approx(3.0));
  a.belief_mean[a.cell(1, 2)] = 1.0;
  a.belief_count[a.cell(1, 2)] = 16;
  CHECK(comm_cost(a, 1, 2, PsiValue{4.0}) == doctest::Approx(1.5));
  double prev = comm_cost(a, 1, 2, PsiValue{4.0});
  for (int n = 17; n < 40; ++n) {
    a.belief_count[a.cell(1, 2)] = n;
    const double q = comm_cost(a, 1, 2, PsiValue{4.0});
    CHECK(q < prev);
    prev = q;
  }
}

TEST_CASE("select_in_neighbors") {
  Engine rng(9);
  SUBCASE("gamma 0 and gamma n-1") {
    AgentState a = flat_agent(5, 3, params(1, 1, 1, 0, 1));
    CHECK(select_in_neighbors(a, PsiValue{1.0}, rng) == std::vector<AgentId>{0});
    a.params.gamma = 4;
    CHECK(select_in_neighbors(a, PsiValue{1.0}, rng) == std::vector<AgentId>{0, 1, 2, 3, 4});
  }
  SUBCASE("boundary tie split uniformly") {
    // peers 1..3 with scores 2, 1, 1 via belief means; target excluded
    AgentState a = flat_agent(4, 2, params(1, 1, 1, 2, 1));
    a.target = 0;
    for (AgentId k = 1; k < 4; ++k) a.belief_count[a.cell(k, 1)] = 1 << 30;
    a.belief_mean[a.cell(1, 1)] = 2.0;
    a.belief_mean[a.cell(2, 1)] = 1.0;
    a.belief_mean[a.cell(3, 1)] = 1.0;
    a.belief_mean[a.cell(3, 0)] = 100.0;  // option 0 is the target: ignored
    int two = 0;
    constexpr int N = 10000;
    for (int k = 0; k < N; ++k) {
      const auto s = select_in_neighbors(a, PsiValue{0.0}, rng);
      REQUIRE(s.size() == 3);
      REQUIRE(s[0] == 0);
      REQUIRE(s[1] == 1);
      two += s[2] == 2;
    }
    CHECK(std::abs(two - N / 2) <= 3 * std::sqrt(N * 0.25));
  }
}

TEST_CASE("ingest") {
  const auto p = params(1, 1, 1, 2, 1);
  SUBCASE("empty batch and silent self leave the state alone") {
    AgentState a = flat_agent(3, 6, p);
    const AgentState before = a;
    const std::vector<Message> batch{{0, kNoOption, 0.0}};
    CHECK(ingest(a, batch).empty());
    CHECK(a == before);
    CHECK(ingest(a, {}).empty());
    CHECK(a == before);
  }
  SUBCASE("duplicate reports collapse") {
    AgentState a = flat_agent(3, 6, p);
    const std::vector<Message> batch{{0, kNoOption, 0.0}, {1, 5, 2.5}, {2, 5, 2.5}};
    CHECK(ingest(a, batch) == std::vector<Option>{5});
    CHECK(a.count[5] == 2);
    CHECK(a.est_mean[5] == doctest::Approx(1.25));
    CHECK(a.count_comm[5] == 1);
    CHECK(a.count_self[5] == 0);
    CHECK(a.belief_count_of(1, 5) == 2);
    CHECK(a.belief_count_of(2, 5) == 2);
  }
  SUBCASE("incremental mean") {
    AgentState a = flat_agent(1, 2, params(1, 1, 1, 0, 1), 0, 1.0);
    a.count[1] = 2;
    const std::vector<Message> batch{{0, 1, 4.0}};
    ingest(a, batch);
    CHECK(a.count[1] == 3);
    CHECK(a.est_mean[1] == doctest::Approx(2.0));
    CHECK(a.count_self[1] == 1);
    CHECK(a.belief_count_of(0, 1) == 1 + a.count_self[1]);
  }
  SUBCASE("self sample shadows peer report of the same option") {
    AgentState a = flat_agent(2, 3, params(1, 1, 1, 1, 1));
    const std::vector<Message> batch{{0, 2, 1.0}, {1, 2, 1.0}};
    ingest(a, batch);
    CHECK(a.count[2] == 2);
    CHECK(a.count_self[2] == 1);
    CHECK(a.count_comm[2] == 0);
  }
  SUBCASE("protocol violations") {
    AgentState a = flat_agent(3, 3, p);
    const std::vector<Message> dup{{1, 0, 1.0}, {1, 0, 1.0}};
    CHECK_THROWS_AS(ingest(a, dup), PolicyError);
    const std::vector<Message> clash{{1, 0, 1.0}, {2, 0, 2.0}};
    CHECK_THROWS_AS(ingest(a, clash), PolicyError);
  }
}

TEST_CASE("incremental estimator matches the batch oracle on random streams") {
  std::mt19937_64 rng(11);
  const int n_opt = 4;
  AgentState a = flat_agent(1, n_opt, params(1, 1, 1, 0, 1), 0, 0.3);
  oracle::ObservationLog log;
  std::normal_distribution<double> noise(2.0, 3.0);
  for (int t = 1; t <= 1000; ++t) {
    const Option i = static_cast<Option>(rng() % n_opt);
    const double x = noise(rng);
    const std::vector<Message> batch{{0, i, x}};
    ingest(a, batch);
    log.push_back({t, i, x, oracle::kSelf});
  }
  const std::vector<double> priors(n_opt, 0.3);
  const auto batch = oracle::batch_mean_oracle(log, priors);
  for (Option i = 0; i < n_opt; ++i) {
    CHECK(batch[i].count == a.count[i]);
    CHECK(std::abs(batch[i].mean - a.est_mean[i]) <= 1e-9 * std::max(1.0, std::abs(batch[i].mean)));
  }
}

TEST_CASE("params validation") {
  CHECK_NOTHROW(validate(params(0.0, 1.0, 1.0, 0, 1), 1));
  CHECK_THROWS_AS(validate(params(-1.0, 1.0, 1.0, 0, 1), 1), PolicyError);
  CHECK_THROWS_AS(validate(params(1.0, 0.0, 1.0, 0, 1), 1), PolicyError);
  CHECK_THROWS_AS(validate(params(1.0, 1.0, 0.0, 0, 1), 1), PolicyError);
  CHECK_THROWS_AS(validate(params(1.0, 1.0, 1.0, 3, 1), 3), PolicyError);
}
