#include "royden/graph.hpp"

#include <algorithm>
#include <deque>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "royden/error.hpp"

namespace royden {

Graph make_graph_unchecked(std::size_t vertex_count, std::vector<Edge> edges) {
  std::sort(edges.begin(), edges.end());
  Graph g;
  g.edges_ = std::move(edges);
  std::vector<std::size_t> deg(vertex_count, 0);
  for (const auto& e : g.edges_) {
    ++deg[e.first];
    ++deg[e.second];
  }
  g.offsets_.assign(vertex_count + 1, 0);
  for (std::size_t v = 0; v < vertex_count; ++v) {
    g.offsets_[v + 1] = g.offsets_[v] + deg[v];
    g.max_degree_ = std::max(g.max_degree_, static_cast<int>(deg[v]));
  }
  g.nbrs_.resize(g.offsets_.back());
  g.inc_.resize(g.offsets_.back());
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (std::size_t i = 0; i < g.edges_.size(); ++i) {
    const auto& e = g.edges_[i];
    g.nbrs_[fill[e.first]] = e.second;
    g.inc_[fill[e.first]++] = static_cast<EdgeId>(i);
    g.nbrs_[fill[e.second]] = e.first;
    g.inc_[fill[e.second]++] = static_cast<EdgeId>(i);
  }
  // Edges are sorted, so each neighbor list is sorted for the lower
  // endpoint; sort pairs to cover both directions.
  for (std::size_t v = 0; v < vertex_count; ++v) {
    const auto lo = g.offsets_[v];
    const auto hi = g.offsets_[v + 1];
    std::vector<std::pair<Vertex, EdgeId>> tmp;
    tmp.reserve(hi - lo);
    for (auto k = lo; k < hi; ++k) tmp.emplace_back(g.nbrs_[k], g.inc_[k]);
    std::sort(tmp.begin(), tmp.end());
    for (auto k = lo; k < hi; ++k) {
      g.nbrs_[k] = tmp[k - lo].first;
      g.inc_[k] = tmp[k - lo].second;
    }
  }
  return g;
}

std::optional<EdgeId> Graph::edge_id(Vertex x, Vertex y) const {
  if (!contains(x) || !contains(y)) return std::nullopt;
  auto nb = neighbors(x);
  auto it = std::lower_bound(nb.begin(), nb.end(), y);
  if (it == nb.end() || *it != y) return std::nullopt;
  return inc_[offsets_[x] + static_cast<std::size_t>(it - nb.begin())];
}

bool Graph::connected() const {
  if (vertex_count() == 0) return true;
  const Vertex root = 0;
  auto dist = bfs_distances(*this, std::span<const Vertex>(&root, 1));
  return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

Graph build_graph(std::span<const std::pair<Vertex, Vertex>> edges, DuplicatePolicy duplicates,
                  std::optional<std::size_t> vertex_count) {
  if (edges.empty()) throw Error(ErrorCode::EmptyInput, "edge list is empty");
  std::vector<Edge> list;
  list.reserve(edges.size());
  Vertex max_id = 0;
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0) throw Error(ErrorCode::InvalidVertex, fmt::format("negative vertex id in ({}, {})", a, b));
    if (a == b) throw Error(ErrorCode::SelfLoop, fmt::format("self-loop at vertex {}", a));
    list.push_back(Edge{std::min(a, b), std::max(a, b)});
    max_id = std::max({max_id, a, b});
  }
  const std::size_t n = vertex_count.value_or(static_cast<std::size_t>(max_id) + 1);
  if (static_cast<std::size_t>(max_id) >= n) {
    throw Error(ErrorCode::InvalidVertex, fmt::format("vertex {} outside declared range [0, {})", max_id, n));
  }
  std::sort(list.begin(), list.end());
  auto dup = std::adjacent_find(list.begin(), list.end());
  if (dup != list.end()) {
    if (duplicates == DuplicatePolicy::Reject) {
      throw Error(ErrorCode::DuplicateEdge, fmt::format("edge ({}, {}) listed twice", dup->first, dup->second));
    }
    spdlog::warn("collapsing duplicate edge ({}, {})", dup->first, dup->second);
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  Graph g = make_graph_unchecked(n, std::move(list));
  if (!g.connected()) throw Error(ErrorCode::Disconnected, "graph has more than one component");
  return g;
}

VertexSet::VertexSet(std::size_t universe, std::vector<Vertex> ids) : ids_(std::move(ids)), universe_(universe) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  if (!ids_.empty() && (ids_.front() < 0 || static_cast<std::size_t>(ids_.back()) >= universe_)) {
    throw Error(ErrorCode::InvalidVertex, fmt::format("vertex set exceeds universe of size {}", universe_));
  }
}

VertexSet VertexSet::all(std::size_t universe) { return prefix(universe, universe); }

VertexSet VertexSet::prefix(std::size_t universe, std::size_t count) {
  std::vector<Vertex> ids(std::min(count, universe));
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<Vertex>(i);
  return VertexSet(universe, std::move(ids));
}

VertexSet VertexSet::from_mask(const std::vector<char>& mask) {
  std::vector<Vertex> ids;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) ids.push_back(static_cast<Vertex>(i));
  }
  return VertexSet(mask.size(), std::move(ids));
}

bool VertexSet::contains(Vertex x) const { return std::binary_search(ids_.begin(), ids_.end(), x); }

std::vector<char> VertexSet::mask() const {
  std::vector<char> m(universe_, 0);
  for (Vertex x : ids_) m[x] = 1;
  return m;
}

namespace {

void require_same_universe(const VertexSet& a, const VertexSet& b) {
  if (a.universe() != b.universe()) throw Error(ErrorCode::DomainMismatch, "vertex sets belong to different graphs");
}

}  // namespace

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  require_same_universe(a, b);
  std::vector<Vertex> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return VertexSet(a.universe(), std::move(out));
}

VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
  require_same_universe(a, b);
  std::vector<Vertex> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return VertexSet(a.universe(), std::move(out));
}

VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  require_same_universe(a, b);
  std::vector<Vertex> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return VertexSet(a.universe(), std::move(out));
}

VertexSet outer_boundary(const VertexSet& s, const Graph& g) {
  if (s.universe() != g.vertex_count()) throw Error(ErrorCode::DomainMismatch, "vertex set does not belong to graph");
  const auto in_s = s.mask();
  std::vector<char> out(g.vertex_count(), 0);
  for (Vertex x : s) {
    for (Vertex y : g.neighbors(x)) {
      if (!in_s[y]) out[y] = 1;
    }
  }
  return VertexSet::from_mask(out);
}

std::vector<int> bfs_distances(const Graph& g, std::span<const Vertex> sources) {
  std::vector<int> dist(g.vertex_count(), -1);
  std::deque<Vertex> queue;
  for (Vertex s : sources) {
    if (dist[s] < 0) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    Vertex x = queue.front();
    queue.pop_front();
    for (Vertex y : g.neighbors(x)) {
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    }
  }
  return dist;
}

std::vector<VertexSet> connected_components(const Graph& g, const VertexSet& members) {
  const auto in = members.mask();
  std::vector<char> seen(g.vertex_count(), 0);
  std::vector<VertexSet> out;
  for (Vertex start : members) {
    if (seen[start]) continue;
    std::vector<Vertex> comp{start};
    seen[start] = 1;
    for (std::size_t i = 0; i < comp.size(); ++i) {
      for (Vertex y : g.neighbors(comp[i])) {
        if (in[y] && !seen[y]) {
          seen[y] = 1;
          comp.push_back(y);
        }
      }
    }
    out.emplace_back(g.vertex_count(), std::move(comp));
  }
  return out;
}

Subgraph induced_subgraph(const Graph& g, const VertexSet& members) {
  Subgraph sub;
  sub.from_parent.assign(g.vertex_count(), -1);
  sub.to_parent = members.ids();
  for (std::size_t i = 0; i < sub.to_parent.size(); ++i) sub.from_parent[sub.to_parent[i]] = static_cast<Vertex>(i);
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) {
    Vertex a = sub.from_parent[e.first];
    Vertex b = sub.from_parent[e.second];
    if (a >= 0 && b >= 0) edges.push_back(Edge{std::min(a, b), std::max(a, b)});
  }
  sub.graph = make_graph_unchecked(sub.to_parent.size(), std::move(edges));
  return sub;
}

SimplePath::SimplePath(const Graph& g, std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw Error(ErrorCode::EmptyInput, "path has no vertices");
  std::vector<Vertex> sorted = vertices_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::InvalidVertex, "path repeats a vertex");
  }
  edges_.reserve(vertices_.size() - 1);
  for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) {
    auto e = g.edge_id(vertices_[i], vertices_[i + 1]);
    if (!e) throw Error(ErrorCode::InvalidVertex, fmt::format("{} and {} are not adjacent", vertices_[i], vertices_[i + 1]));
    edges_.push_back(*e);
  }
}

std::vector<SimplePath> enumerate_simple_paths(const VertexSet& a, const VertexSet& b, const Graph& g,
                                               std::size_t cap) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::EmptyInput, "path endpoints sets must be nonempty");
  if (!set_intersection(a, b).empty()) throw Error(ErrorCode::InvalidCondenser, "endpoint sets overlap");
  const auto in_a = a.mask();
  const auto in_b = b.mask();
  std::vector<char> on_path(g.vertex_count(), 0);
  std::vector<std::vector<Vertex>> found;
  std::vector<Vertex> stack;

  // Iterative DFS keeping (vertex, next neighbor index) frames; neighbor
  // lists are sorted, so paths come out in lexicographic order.
  std::vector<std::size_t> next;
  for (Vertex s : a) {
    stack.assign(1, s);
    next.assign(1, 0);
    on_path[s] = 1;
    while (!stack.empty()) {
      Vertex x = stack.back();
      auto nb = g.neighbors(x);
      if (next.back() == nb.size()) {
        on_path[x] = 0;
        stack.pop_back();
        next.pop_back();
        continue;
      }
      Vertex y = nb[next.back()++];
      if (on_path[y] || in_a[y]) continue;
      if (in_b[y]) {
        found.push_back(stack);
        found.back().push_back(y);
        if (found.size() > cap) throw Error(ErrorCode::TooManyPaths, fmt::format("more than {} simple paths", cap));
        continue;
      }
      on_path[y] = 1;
      stack.push_back(y);
      next.push_back(0);
    }
  }
  std::vector<SimplePath> out;
  out.reserve(found.size());
  for (auto& p : found) out.emplace_back(g, std::move(p));
  return out;
}

}  // namespace royden
