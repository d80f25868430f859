#include "mamab/spatial_graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <queue>
#include <sstream>

namespace mamab {

namespace {

void bfs_from(const std::vector<std::vector<Vertex>>& adj, std::size_t source,
              std::span<std::int32_t> dist) {
  std::fill(dist.begin(), dist.end(), -1);
  std::queue<Vertex> frontier;
  dist[source] = 0;
  frontier.push(static_cast<Vertex>(source));
  while (!frontier.empty()) {
    const Vertex u = frontier.front();
    frontier.pop();
    for (Vertex w : adj[u]) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        frontier.push(w);
      }
    }
  }
}

std::string describe_components(const DistanceMatrix& d) {
  // Components are read off the BFS rows: vertices unreachable from a
  // representative belong to a different component.
  const std::size_t n = d.size();
  std::vector<int> comp(n, -1);
  int next = 0;
  std::ostringstream out;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    out << (next ? "; " : "") << "component " << next << ": {";
    bool first = true;
    for (std::size_t v = 0; v < n; ++v) {
      if (d(s, v) >= 0) {
        comp[v] = next;
        out << (first ? "" : ",") << v;
        first = false;
      }
    }
    out << "}";
    ++next;
  }
  return out.str();
}

}  // namespace

DistanceMatrix all_pairs_distances_serial(const std::vector<std::vector<Vertex>>& adjacency) {
  const std::size_t n = adjacency.size();
  DistanceMatrix d(n);
  for (std::size_t s = 0; s < n; ++s) bfs_from(adjacency, s, d.row(s));
  return d;
}

DistanceMatrix all_pairs_distances(const std::vector<std::vector<Vertex>>& adjacency) {
  const std::size_t n = adjacency.size();
  DistanceMatrix d(n);
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t s = 0; s < count; ++s) bfs_from(adjacency, static_cast<std::size_t>(s), d.row(s));
  return d;
}

SpatialGraph::SpatialGraph(std::vector<std::vector<Vertex>> adjacency)
    : adjacency_(std::move(adjacency)) {
  const std::size_t n = adjacency_.size();
  if (n < 2) throw GraphError("spatial graph needs at least 2 vertices");
  for (std::size_t v = 0; v < n; ++v) {
    auto& nb = adjacency_[v];
    std::sort(nb.begin(), nb.end());
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const Vertex w = nb[k];
      if (w < 0 || static_cast<std::size_t>(w) >= n)
        throw GraphError("vertex id " + std::to_string(w) + " out of range");
      if (static_cast<std::size_t>(w) == v)
        throw GraphError("self-loop at vertex " + std::to_string(v));
      if (k > 0 && nb[k - 1] == w)
        throw GraphError("duplicate edge " + std::to_string(v) + " " + std::to_string(w));
    }
  }
  for (std::size_t v = 0; v < n; ++v)
    for (Vertex w : adjacency_[v])
      if (!std::binary_search(adjacency_[w].begin(), adjacency_[w].end(), static_cast<Vertex>(v)))
        throw GraphError("adjacency not symmetric at edge " + std::to_string(v) + " " +
                         std::to_string(w));

  distances_ = all_pairs_distances(adjacency_);
  for (std::size_t v = 0; v < n; ++v)
    if (distances_(0, v) < 0)
      throw GraphError("graph is disconnected: " + describe_components(distances_));
  for (std::size_t i = 0; i < n; ++i)
    for (std::int32_t x : distances_.row(i)) diameter_ = std::max(diameter_, x);
}

std::span<const Vertex> SpatialGraph::adjacent(Vertex v) const {
  if (!valid(v)) throw GraphError("invalid vertex id " + std::to_string(v));
  return adjacency_[v];
}

std::size_t SpatialGraph::num_edges() const {
  std::size_t deg = 0;
  for (const auto& nb : adjacency_) deg += nb.size();
  return deg / 2;
}

std::vector<Vertex> SpatialGraph::neighborhood(Vertex v) const {
  const auto nb = adjacent(v);
  std::vector<Vertex> out(nb.begin(), nb.end());
  out.insert(std::upper_bound(out.begin(), out.end(), v), v);
  return out;
}

SpatialGraph build_lattice(int rows, int cols) {
  if (rows < 1 || cols < 1) throw GraphError("lattice dimensions must be positive");
  if (static_cast<long>(rows) * cols < 2)
    throw GraphError("lattice needs at least 2 vertices (no bandit problem with one option)");
  std::vector<std::vector<Vertex>> adj(static_cast<std::size_t>(rows) * cols);
  auto id = [cols](int r, int c) { return static_cast<Vertex>(r * cols + c); };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      auto& nb = adj[id(r, c)];
      if (r > 0) nb.push_back(id(r - 1, c));
      if (c > 0) nb.push_back(id(r, c - 1));
      if (c + 1 < cols) nb.push_back(id(r, c + 1));
      if (r + 1 < rows) nb.push_back(id(r + 1, c));
    }
  return SpatialGraph(std::move(adj));
}

SpatialGraph build_complete(int n) {
  if (n < 2) throw GraphError("complete graph needs at least 2 vertices");
  std::vector<std::vector<Vertex>> adj(n);
  for (int v = 0; v < n; ++v)
    for (int w = 0; w < n; ++w)
      if (v != w) adj[v].push_back(w);
  return SpatialGraph(std::move(adj));
}

SpatialGraph load_edge_list(std::string_view text) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  Vertex max_id = -1;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    Vertex ids[2];
    int got = 0;
    std::size_t pos = 0;
    while (true) {
      while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      if (pos >= line.size()) break;
      if (got == 2)
        throw GraphError("edge list line " + std::to_string(line_no) + ": expected two ids");
      const auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + line.size(), ids[got]);
      if (ec != std::errc{} || ids[got] < 0)
        throw GraphError("edge list line " + std::to_string(line_no) + ": bad vertex id");
      pos = static_cast<std::size_t>(ptr - line.data());
      ++got;
    }
    if (got == 0) continue;
    if (got != 2) throw GraphError("edge list line " + std::to_string(line_no) + ": expected two ids");
    if (ids[0] == ids[1])
      throw GraphError("edge list line " + std::to_string(line_no) + ": self-loop at " +
                       std::to_string(ids[0]));
    edges.emplace_back(ids[0], ids[1]);
    max_id = std::max({max_id, ids[0], ids[1]});
  }
  std::vector<std::vector<Vertex>> adj(static_cast<std::size_t>(max_id + 1));
  for (auto [u, v] : edges) {
    // Detect "u v" listed twice and "u v" + "v u".
    if (std::find(adj[u].begin(), adj[u].end(), v) != adj[u].end())
      throw GraphError("duplicate edge " + std::to_string(u) + " " + std::to_string(v));
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  return SpatialGraph(std::move(adj));
}

SpatialGraph load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open edge list " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_edge_list(buf.str());
}

}  // namespace mamab
