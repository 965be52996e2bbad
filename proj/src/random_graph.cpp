#include "royden/random_graph.hpp"

#include <random>
#include <set>

#include <fmt/format.h>

#include "royden/error.hpp"

namespace royden {

Graph random_connected_graph(std::size_t vertices, std::size_t edges, std::uint64_t seed) {
  if (vertices < 2) throw Error(ErrorCode::EmptyInput, "random graph needs at least 2 vertices");
  const std::size_t max_edges = vertices * (vertices - 1) / 2;
  if (edges < vertices - 1 || edges > max_edges) {
    throw Error(ErrorCode::BadFlag, fmt::format("edge count {} outside [{}, {}]", edges, vertices - 1, max_edges));
  }
  // mt19937_64 output is fixed by the standard; distributions are not, so
  // draws use plain modular reduction.
  std::mt19937_64 rng(seed);
  auto draw = [&](std::size_t bound) { return static_cast<std::size_t>(rng() % bound); };

  std::set<std::pair<Vertex, Vertex>> chosen;
  for (std::size_t v = 1; v < vertices; ++v) {
    const auto u = static_cast<Vertex>(draw(v));
    chosen.emplace(u, static_cast<Vertex>(v));
  }
  while (chosen.size() < edges) {
    auto a = static_cast<Vertex>(draw(vertices));
    auto b = static_cast<Vertex>(draw(vertices));
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    chosen.emplace(a, b);
  }
  std::vector<Edge> list;
  for (const auto& [a, b] : chosen) list.push_back(Edge{a, b});
  return make_graph_unchecked(vertices, std::move(list));
}

}  // namespace royden
