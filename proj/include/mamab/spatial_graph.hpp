#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mamab/types.hpp"

namespace mamab {

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Dense row-major hop-count matrix.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n, std::int32_t fill = -1) : n_(n), d_(n * n, fill) {}

  std::size_t size() const { return n_; }
  std::int32_t operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  std::int32_t& operator()(std::size_t i, std::size_t j) { return d_[i * n_ + j]; }
  std::span<const std::int32_t> row(std::size_t i) const { return {d_.data() + i * n_, n_}; }
  std::span<std::int32_t> row(std::size_t i) { return {d_.data() + i * n_, n_}; }

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::int32_t> d_;
};

// Fixed, connected, undirected option graph with unit edge lengths.
// Immutable after construction; distances and diameter are computed once.
class SpatialGraph {
 public:
  // Validates symmetry, self-loops, duplicates, and connectivity.
  explicit SpatialGraph(std::vector<std::vector<Vertex>> adjacency);

  std::size_t num_vertices() const { return adjacency_.size(); }
  std::span<const Vertex> adjacent(Vertex v) const;
  const std::vector<std::vector<Vertex>>& adjacency() const { return adjacency_; }
  const DistanceMatrix& distances() const { return distances_; }
  std::int32_t distance(Vertex a, Vertex b) const { return distances_(a, b); }
  std::int32_t diameter() const { return diameter_; }
  std::size_t num_edges() const;

  // I_v: adjacency(v) plus v itself, sorted ascending.
  std::vector<Vertex> neighborhood(Vertex v) const;

  bool valid(Vertex v) const { return v >= 0 && static_cast<std::size_t>(v) < num_vertices(); }

 private:
  std::vector<std::vector<Vertex>> adjacency_;
  DistanceMatrix distances_;
  std::int32_t diameter_ = 0;
};

SpatialGraph build_lattice(int rows, int cols);
SpatialGraph build_complete(int n);

// "u v" per line, '#' starts a comment, blank lines ignored.
SpatialGraph load_edge_list(std::string_view text);
SpatialGraph load_edge_list_file(const std::string& path);

// Per-source BFS. Unreachable entries are -1.
DistanceMatrix all_pairs_distances(const std::vector<std::vector<Vertex>>& adjacency);
DistanceMatrix all_pairs_distances_serial(const std::vector<std::vector<Vertex>>& adjacency);
inline const DistanceMatrix& all_pairs_distances(const SpatialGraph& g) { return g.distances(); }

}  // namespace mamab
