#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "royden/error.hpp"
#include "royden/graph.hpp"

namespace testing {

inline royden::Graph graph_of(std::vector<std::pair<int, int>> edges) {
  return royden::build_graph(edges);
}

inline royden::Graph path_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 <= n; ++i) edges.emplace_back(i, i + 1);
  return royden::build_graph(edges);
}

inline royden::Graph cycle_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return royden::build_graph(edges);
}

inline royden::Graph complete_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return royden::build_graph(edges);
}

/// Code of the royden::Error thrown by f, or nullopt.
template <class F>
std::optional<royden::ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const royden::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace testing

#include <random>

#include "royden/random_graph.hpp"
#include "royden/solver.hpp"

namespace testing {

/// Random connected graph with a random nonempty proper interior and
/// boundary data in [-1, 1] on the rest.
struct RandomInstance {
  royden::Graph graph;
  royden::VertexSet interior;
  royden::VertexFunction data;
};

inline RandomInstance random_instance(std::mt19937_64& rng, std::size_t max_vertices = 40,
                                      std::size_t max_edges = 120) {
  const std::size_t n = 4 + rng() % (max_vertices - 3);
  const std::size_t lo = n - 1;
  const std::size_t hi = std::min(max_edges, n * (n - 1) / 2);
  const std::size_t m = lo + rng() % (hi - lo + 1);
  RandomInstance inst{royden::random_connected_graph(n, m, rng()), {}, {}};
  std::vector<royden::Vertex> in;
  for (std::size_t x = 0; x < n; ++x) {
    if (rng() % 3 != 0) in.push_back(static_cast<royden::Vertex>(x));
  }
  if (in.empty()) in.push_back(0);
  if (in.size() == n) in.pop_back();
  inst.interior = royden::VertexSet(n, in);
  std::vector<double> vals(n);
  for (auto& v : vals) v = static_cast<double>(rng() % 20001) / 10000.0 - 1.0;
  inst.data = royden::VertexFunction(vals);
  return inst;
}

}  // namespace testing
