#include <doctest.h>

#include <algorithm>
#include <random>

#include "mamab/spatial_graph.hpp"
#include "oracles.hpp"

using namespace mamab;

namespace {

void check_matches_oracle(const std::vector<std::vector<Vertex>>& adj) {
  const SpatialGraph g(adj);
  const auto fw = oracle::floyd_warshall_oracle(adj);
  for (std::size_t i = 0; i < adj.size(); ++i)
    for (std::size_t j = 0; j < adj.size(); ++j) REQUIRE(g.distance(i, j) == fw[i][j]);
}

}  // namespace

TEST_CASE("lattice examples") {
  const auto g10 = build_lattice(10, 10);
  CHECK(g10.num_vertices() == 100);
  CHECK(g10.diameter() == 18);
  CHECK(g10.distance(0, 99) == 18);

  const auto g12 = build_lattice(1, 2);
  CHECK(g12.num_vertices() == 2);
  CHECK(g12.num_edges() == 1);
  CHECK(g12.diameter() == 1);

  CHECK(build_lattice(3, 3).distance(0, 8) == 4);
  CHECK(build_lattice(4, 7).diameter() == 4 + 7 - 2);
}

TEST_CASE("lattice rejects degenerate sizes") {
  CHECK_THROWS_AS(build_lattice(1, 1), GraphError);
  CHECK_THROWS_AS(build_lattice(0, 5), GraphError);
}

TEST_CASE("edge list parsing") {
  const auto path = load_edge_list("0 1\n1 2");
  CHECK(path.num_vertices() == 3);
  CHECK(path.diameter() == 2);
  CHECK(path.distance(0, 2) == 2);

  CHECK_THROWS_AS(load_edge_list("0 1\n2 3"), GraphError);
  try {
    load_edge_list("0 1\n2 3");
  } catch (const GraphError& e) {
    CHECK(std::string(e.what()).find("disconnected") != std::string::npos);
  }
  CHECK_THROWS_AS(load_edge_list("0 1\n1 0"), GraphError);
  CHECK_THROWS_AS(load_edge_list("0 1\n1 1"), GraphError);
  CHECK_THROWS_AS(load_edge_list("0 x"), GraphError);

  const auto k4 = load_edge_list("# K4\n0 1\n0 2\n0 3\n\n1 2\n1 3\n2 3  # last\n");
  CHECK(k4.diameter() == 1);
  for (Vertex i = 0; i < 4; ++i)
    for (Vertex j = 0; j < 4; ++j) CHECK(k4.distance(i, j) == (i == j ? 0 : 1));
}

TEST_CASE("neighborhood includes self") {
  const auto path = load_edge_list("0 1\n1 2");
  CHECK(path.neighborhood(1) == std::vector<Vertex>{0, 1, 2});

  const auto g = build_lattice(10, 10);
  CHECK(g.neighborhood(55).size() == 5);
  CHECK(g.neighborhood(0).size() == 3);
  CHECK(g.neighborhood(99).size() == 3);
  for (Vertex v = 0; v < 100; ++v) {
    const auto hood = g.neighborhood(v);
    CHECK(std::find(hood.begin(), hood.end(), v) != hood.end());
    for (Vertex w = 0; w < 100; ++w) {
      const bool in = std::find(hood.begin(), hood.end(), w) != hood.end();
      CHECK(in == (g.distance(v, w) <= 1));
    }
  }
  CHECK_THROWS(g.neighborhood(100));
}

TEST_CASE("distance matrix is a metric with unit edges") {
  std::mt19937_64 rng(7);
  const auto adj = oracle::random_connected_graph(30, 0.08, rng);
  const SpatialGraph g(adj);
  const auto n = static_cast<Vertex>(g.num_vertices());
  std::int32_t max_d = 0;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = 0; j < n; ++j) {
      CHECK(g.distance(i, j) == g.distance(j, i));
      CHECK((g.distance(i, j) == 0) == (i == j));
      const auto adj_i = g.adjacent(i);
      CHECK((g.distance(i, j) == 1) == (std::find(adj_i.begin(), adj_i.end(), j) != adj_i.end()));
      max_d = std::max(max_d, g.distance(i, j));
      for (Vertex k = 0; k < n; ++k) CHECK(g.distance(i, k) <= g.distance(i, j) + g.distance(j, k));
    }
  CHECK(g.diameter() == max_d);
}

TEST_CASE("bfs matches floyd-warshall on random graphs") {
  std::mt19937_64 rng(20240611);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = std::uniform_int_distribution<int>(2, 50)(rng);
    const double p = std::uniform_real_distribution<double>(0.0, 0.2)(rng);
    check_matches_oracle(oracle::random_connected_graph(n, p, rng));
  }
  check_matches_oracle(build_lattice(10, 10).adjacency());
  check_matches_oracle(build_lattice(5, 5).adjacency());
  check_matches_oracle(build_complete(5).adjacency());
}

TEST_CASE("parallel and serial all-pairs agree") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 5; ++rep) {
    const auto adj = oracle::random_connected_graph(120, 0.02, rng);
    CHECK(all_pairs_distances(adj) == all_pairs_distances_serial(adj));
  }
}

TEST_CASE("adjacency validation") {
  CHECK_THROWS_AS(SpatialGraph({{1}, {}}), GraphError);         // asymmetric
  CHECK_THROWS_AS(SpatialGraph({{0, 1}, {0}}), GraphError);     // self-loop
  CHECK_THROWS_AS(SpatialGraph({{1, 1}, {0, 0}}), GraphError);  // duplicate
  CHECK_THROWS_AS(SpatialGraph({{5}, {0}}), GraphError);        // out of range
  CHECK_NOTHROW(SpatialGraph({{1}, {0}}));
}
