#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "royden/graph.hpp"

namespace royden {

enum class FamilyKind { Line, Square, Cube, Tree };

/// One of the infinite bounded-degree graphs Z, Z², Z³ or the d-regular tree
/// T_d, with base vertex o = id 0. Vertex ids are global: lattice points are
/// numbered by ℓ¹ norm then lexicographically by coordinates, tree vertices
/// in breadth-first order. A vertex therefore keeps its id in every ball.
class GraphFamily {
 public:
  static GraphFamily line() { return GraphFamily(FamilyKind::Line, 2); }
  static GraphFamily square() { return GraphFamily(FamilyKind::Square, 4); }
  static GraphFamily cube() { return GraphFamily(FamilyKind::Cube, 6); }
  static GraphFamily tree(int degree);
  /// "z", "z2", "z3" or "tree:<d>".
  static GraphFamily parse(std::string_view label);

  FamilyKind kind() const { return kind_; }
  /// Degree of every vertex of the infinite graph.
  int degree_bound() const { return degree_; }
  int dimension() const;
  bool is_lattice() const { return kind_ != FamilyKind::Tree; }
  std::string label() const;

  friend bool operator==(const GraphFamily&, const GraphFamily&) = default;

 private:
  GraphFamily(FamilyKind kind, int degree) : kind_(kind), degree_(degree) {}

  FamilyKind kind_;
  int degree_;
};

/// Finite graph induced by B_n(o) ∪ ∂B_n(o), where B_n(o) holds the vertices
/// at distance strictly less than n from o.
struct Ball {
  GraphFamily family = GraphFamily::line();
  int radius = 0;
  Graph graph;
  VertexSet interior;  // B_n(o)
  VertexSet boundary;  // ∂B_n(o): the vertices at distance exactly n
  std::vector<int> distance;
  /// Lattice coordinates (unused axes are 0); empty for trees.
  std::vector<std::array<int, 3>> coords;
  /// Tree branch: index of the root neighbor above the vertex, -1 for the
  /// root; empty for lattices.
  std::vector<int> branch;

  /// Id of a lattice point; -1 when it is outside the ball.
  Vertex find(const std::array<int, 3>& point) const;
};

Ball family_ball(const GraphFamily& family, int radius);

/// Number of vertices at distance < radius from o.
std::size_t ball_size(const GraphFamily& family, int radius);

/// Nested vertex sets U_1 ⊂ U_2 ⊂ ..., each a metric ball B_r(o).
class Exhaustion {
 public:
  Exhaustion(std::vector<int> radii, std::vector<VertexSet> levels);

  std::size_t size() const { return levels_.size(); }
  const VertexSet& level(std::size_t i) const { return levels_[i]; }
  const std::vector<VertexSet>& levels() const { return levels_; }
  const std::vector<int>& radii() const { return radii_; }

  /// Same levels expressed as subsets of a graph with `universe` vertices.
  Exhaustion rebased(std::size_t universe) const;

 private:
  std::vector<int> radii_;
  std::vector<VertexSet> levels_;
};

/// Levels are expressed in the universe of family_ball(family, max radius).
Exhaustion build_exhaustion(const GraphFamily& family, const std::vector<int>& radii);

}  // namespace royden
