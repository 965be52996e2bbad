#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace royden {

using Vertex = std::int32_t;
using EdgeId = std::int32_t;

/// Undirected edge stored with first < second.
struct Edge {
  Vertex first = 0;
  Vertex second = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

enum class DuplicatePolicy { Collapse, Reject };

/// Finite undirected simple graph in compressed adjacency form. Neighbor
/// lists are sorted and every vertex id lies in [0, vertex_count()).
///
/// Graphs produced by build_graph() are always connected; induced
/// subgraphs may not be (see induced_subgraph()).
class Graph {
 public:
  Graph() = default;

  std::size_t vertex_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return edges_.size(); }

  std::span<const Vertex> neighbors(Vertex x) const {
    return {nbrs_.data() + offsets_[x], nbrs_.data() + offsets_[x + 1]};
  }
  /// Edge ids parallel to neighbors(x).
  std::span<const EdgeId> incident_edges(Vertex x) const {
    return {inc_.data() + offsets_[x], inc_.data() + offsets_[x + 1]};
  }
  int degree(Vertex x) const { return static_cast<int>(offsets_[x + 1] - offsets_[x]); }
  int max_degree() const { return max_degree_; }

  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::optional<EdgeId> edge_id(Vertex x, Vertex y) const;
  bool adjacent(Vertex x, Vertex y) const { return edge_id(x, y).has_value(); }
  bool contains(Vertex x) const { return x >= 0 && static_cast<std::size_t>(x) < vertex_count(); }
  bool connected() const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.vertex_count() == b.vertex_count() && a.edges_ == b.edges_;
  }

 private:
  friend Graph make_graph_unchecked(std::size_t, std::vector<Edge>);

  std::vector<std::size_t> offsets_;
  std::vector<Vertex> nbrs_;
  std::vector<EdgeId> inc_;
  std::vector<Edge> edges_;
  int max_degree_ = 0;
};

/// Builds a graph from sorted-or-unsorted, deduplicated, loop-free edges
/// without the connectivity check. Internal building block.
Graph make_graph_unchecked(std::size_t vertex_count, std::vector<Edge> edges);

/// Validating constructor. The vertex count defaults to max id + 1, so ids
/// must be dense; a gap shows up as an isolated vertex and is rejected as
/// Disconnected.
Graph build_graph(std::span<const std::pair<Vertex, Vertex>> edges,
                  DuplicatePolicy duplicates = DuplicatePolicy::Collapse,
                  std::optional<std::size_t> vertex_count = std::nullopt);

/// Sorted set of vertex ids of a graph with `universe` vertices.
class VertexSet {
 public:
  VertexSet() = default;
  VertexSet(std::size_t universe, std::vector<Vertex> ids);

  static VertexSet all(std::size_t universe);
  /// {0, 1, ..., count-1}
  static VertexSet prefix(std::size_t universe, std::size_t count);
  static VertexSet from_mask(const std::vector<char>& mask);

  std::size_t universe() const { return universe_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  bool contains(Vertex x) const;
  const std::vector<Vertex>& ids() const { return ids_; }
  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }
  std::vector<char> mask() const;

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  std::vector<Vertex> ids_;
  std::size_t universe_ = 0;
};

VertexSet set_union(const VertexSet& a, const VertexSet& b);
VertexSet set_intersection(const VertexSet& a, const VertexSet& b);
VertexSet set_difference(const VertexSet& a, const VertexSet& b);

/// Vertices outside `s` with at least one neighbor in `s`.
VertexSet outer_boundary(const VertexSet& s, const Graph& g);

/// Shortest-path distances (edge count) from the nearest source; -1 when
/// unreachable.
std::vector<int> bfs_distances(const Graph& g, std::span<const Vertex> sources);

/// Connected components of the subgraph induced by `members`, each sorted,
/// listed in order of their smallest vertex.
std::vector<VertexSet> connected_components(const Graph& g, const VertexSet& members);

struct Subgraph {
  Graph graph;
  std::vector<Vertex> to_parent;    // local id -> parent id
  std::vector<Vertex> from_parent;  // parent id -> local id, or -1
};

/// Induced subgraph on `members`; local ids follow the parent order. The
/// result may be disconnected.
Subgraph induced_subgraph(const Graph& g, const VertexSet& members);

/// A path with pairwise distinct vertices, consecutive ones adjacent.
class SimplePath {
 public:
  SimplePath(const Graph& g, std::vector<Vertex> vertices);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<EdgeId>& edges() const { return edges_; }
  std::size_t length() const { return edges_.size(); }

  friend bool operator==(const SimplePath& a, const SimplePath& b) {
    return a.vertices_ == b.vertices_;
  }

 private:
  std::vector<Vertex> vertices_;
  std::vector<EdgeId> edges_;
};

/// All simple paths starting in `a`, ending in `b`, with no other vertex in
/// a ∪ b, in lexicographic order of their vertex sequences. Throws
/// TooManyPaths once more than `cap` paths are found.
std::vector<SimplePath> enumerate_simple_paths(const VertexSet& a, const VertexSet& b,
                                               const Graph& g, std::size_t cap);

}  // namespace royden
