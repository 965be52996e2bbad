#include "royden/family.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <unordered_map>

#include <fmt/format.h>

#include "royden/error.hpp"

namespace royden {

GraphFamily GraphFamily::tree(int degree) {
  if (degree < 2) throw Error(ErrorCode::UnsupportedFamily, fmt::format("tree degree {} < 2", degree));
  return GraphFamily(FamilyKind::Tree, degree);
}

GraphFamily GraphFamily::parse(std::string_view label) {
  if (label == "z") return line();
  if (label == "z2") return square();
  if (label == "z3") return cube();
  if (label.starts_with("tree:")) {
    auto digits = label.substr(5);
    int d = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), d);
    if (ec == std::errc() && ptr == digits.data() + digits.size()) return tree(d);
  }
  throw Error(ErrorCode::UnsupportedFamily, fmt::format("unknown family '{}'", label));
}

int GraphFamily::dimension() const {
  switch (kind_) {
    case FamilyKind::Line: return 1;
    case FamilyKind::Square: return 2;
    case FamilyKind::Cube: return 3;
    case FamilyKind::Tree: return 0;
  }
  return 0;
}

std::string GraphFamily::label() const {
  switch (kind_) {
    case FamilyKind::Line: return "z";
    case FamilyKind::Square: return "z2";
    case FamilyKind::Cube: return "z3";
    case FamilyKind::Tree: return fmt::format("tree:{}", degree_);
  }
  return "?";
}

namespace {

std::size_t shell_size(const GraphFamily& family, int m) {
  if (m == 0) return 1;
  const auto mm = static_cast<std::size_t>(m);
  switch (family.kind()) {
    case FamilyKind::Line: return 2;
    case FamilyKind::Square: return 4 * mm;
    case FamilyKind::Cube: return 4 * mm * mm + 2;
    case FamilyKind::Tree: {
      std::size_t s = static_cast<std::size_t>(family.degree_bound());
      for (int i = 1; i < m; ++i) s *= static_cast<std::size_t>(family.degree_bound() - 1);
      return s;
    }
  }
  return 0;
}

std::int64_t pack(const std::array<int, 3>& p) {
  constexpr std::int64_t kSpan = 1 << 20;
  return ((static_cast<std::int64_t>(p[0]) + kSpan) * 2 * kSpan + (p[1] + kSpan)) * 2 * kSpan + (p[2] + kSpan);
}

int l1(const std::array<int, 3>& p) { return std::abs(p[0]) + std::abs(p[1]) + std::abs(p[2]); }

Ball lattice_ball(const GraphFamily& family, int radius) {
  const int dim = family.dimension();
  std::vector<std::array<int, 3>> pts;
  const int lo1 = -radius, hi1 = radius;
  const int lo2 = dim >= 2 ? -radius : 0, hi2 = dim >= 2 ? radius : 0;
  const int lo3 = dim >= 3 ? -radius : 0, hi3 = dim >= 3 ? radius : 0;
  for (int a = lo1; a <= hi1; ++a) {
    for (int b = lo2; b <= hi2; ++b) {
      for (int c = lo3; c <= hi3; ++c) {
        std::array<int, 3> p{a, b, c};
        if (l1(p) <= radius) pts.push_back(p);
      }
    }
  }
  std::sort(pts.begin(), pts.end(), [](const auto& x, const auto& y) {
    const int nx = l1(x), ny = l1(y);
    return nx != ny ? nx < ny : x < y;
  });

  Ball ball;
  ball.family = family;
  ball.radius = radius;
  std::unordered_map<std::int64_t, Vertex> index;
  index.reserve(pts.size() * 2);
  for (std::size_t i = 0; i < pts.size(); ++i) index.emplace(pack(pts[i]), static_cast<Vertex>(i));
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (int axis = 0; axis < dim; ++axis) {
      auto q = pts[i];
      ++q[axis];
      if (auto it = index.find(pack(q)); it != index.end()) {
        const auto v = static_cast<Vertex>(i);
        edges.push_back(Edge{std::min(v, it->second), std::max(v, it->second)});
      }
    }
  }
  ball.graph = make_graph_unchecked(pts.size(), std::move(edges));
  ball.distance.resize(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) ball.distance[i] = l1(pts[i]);
  ball.coords = std::move(pts);
  return ball;
}

Ball tree_ball(const GraphFamily& family, int radius) {
  const int d = family.degree_bound();
  Ball ball;
  ball.family = family;
  ball.radius = radius;
  std::vector<Edge> edges;
  ball.distance.push_back(0);
  ball.branch.push_back(-1);
  // Breadth-first numbering: children of earlier vertices come first.
  for (std::size_t v = 0; v < ball.distance.size(); ++v) {
    if (ball.distance[v] == radius) continue;
    const int children = v == 0 ? d : d - 1;
    for (int c = 0; c < children; ++c) {
      const auto child = static_cast<Vertex>(ball.distance.size());
      ball.distance.push_back(ball.distance[v] + 1);
      ball.branch.push_back(v == 0 ? c : ball.branch[v]);
      edges.push_back(Edge{static_cast<Vertex>(v), child});
    }
  }
  ball.graph = make_graph_unchecked(ball.distance.size(), std::move(edges));
  return ball;
}

}  // namespace

Vertex Ball::find(const std::array<int, 3>& point) const {
  if (coords.empty() || l1(point) > radius) return -1;
  auto cmp = [](const std::array<int, 3>& x, const std::array<int, 3>& y) {
    const int nx = l1(x), ny = l1(y);
    return nx != ny ? nx < ny : x < y;
  };
  auto it = std::lower_bound(coords.begin(), coords.end(), point, cmp);
  if (it == coords.end() || *it != point) return -1;
  return static_cast<Vertex>(it - coords.begin());
}

std::size_t ball_size(const GraphFamily& family, int radius) {
  std::size_t n = 0;
  for (int m = 0; m < radius; ++m) n += shell_size(family, m);
  return n;
}

Ball family_ball(const GraphFamily& family, int radius) {
  if (radius < 1) throw Error(ErrorCode::InvalidVertex, fmt::format("ball radius {} < 1", radius));
  Ball ball = family.is_lattice() ? lattice_ball(family, radius) : tree_ball(family, radius);
  const std::size_t n = ball.graph.vertex_count();
  const std::size_t inner = ball_size(family, radius);
  ball.interior = VertexSet::prefix(n, inner);
  std::vector<Vertex> shell;
  for (std::size_t v = inner; v < n; ++v) shell.push_back(static_cast<Vertex>(v));
  ball.boundary = VertexSet(n, std::move(shell));
  return ball;
}

Exhaustion::Exhaustion(std::vector<int> radii, std::vector<VertexSet> levels)
    : radii_(std::move(radii)), levels_(std::move(levels)) {
  for (std::size_t i = 1; i < levels_.size(); ++i) {
    if (levels_[i].size() <= levels_[i - 1].size() ||
        !std::includes(levels_[i].begin(), levels_[i].end(), levels_[i - 1].begin(), levels_[i - 1].end())) {
      throw Error(ErrorCode::NonIncreasingRadii, "exhaustion levels must be strictly nested");
    }
  }
}

Exhaustion Exhaustion::rebased(std::size_t universe) const {
  std::vector<VertexSet> out;
  out.reserve(levels_.size());
  for (const auto& l : levels_) out.emplace_back(universe, l.ids());
  return Exhaustion(radii_, std::move(out));
}

Exhaustion build_exhaustion(const GraphFamily& family, const std::vector<int>& radii) {
  if (radii.empty()) throw Error(ErrorCode::EmptyInput, "no radii given");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] < 1) throw Error(ErrorCode::NonIncreasingRadii, "radii must be >= 1");
    if (i > 0 && radii[i] <= radii[i - 1]) {
      throw Error(ErrorCode::NonIncreasingRadii, fmt::format("radius {} does not exceed {}", radii[i], radii[i - 1]));
    }
  }
  const std::size_t universe = ball_size(family, radii.back() + 1);
  std::vector<VertexSet> levels;
  for (int r : radii) levels.push_back(VertexSet::prefix(universe, ball_size(family, r)));
  return Exhaustion(radii, std::move(levels));
}

}  // namespace royden
