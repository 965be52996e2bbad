#include <doctest.h>

#include <cstdlib>
#include <map>
#include <set>

#include "helpers.hpp"
#include "royden/family.hpp"

using namespace royden;
using testing::error_of;

namespace {

// Independent shell counts: enumerate lattice points in a box.
std::size_t lattice_ball_count(int dim, int radius) {
  std::size_t count = 0;
  const int lim = radius;
  for (int x = -lim; x <= lim; ++x) {
    for (int y = dim >= 2 ? -lim : 0; y <= (dim >= 2 ? lim : 0); ++y) {
      for (int z = dim >= 3 ? -lim : 0; z <= (dim >= 3 ? lim : 0); ++z) {
        if (std::abs(x) + std::abs(y) + std::abs(z) < radius) ++count;
      }
    }
  }
  return count;
}

}  // namespace

TEST_CASE("family labels parse and print") {
  for (const char* label : {"z", "z2", "z3", "tree:3", "tree:5"}) CHECK(GraphFamily::parse(label).label() == label);
  CHECK(GraphFamily::parse("tree:4").degree_bound() == 4);
  CHECK(GraphFamily::square().degree_bound() == 4);
  CHECK(error_of([] { GraphFamily::parse("z4"); }) == ErrorCode::UnsupportedFamily);
  CHECK(error_of([] { GraphFamily::parse("tree:1"); }) == ErrorCode::UnsupportedFamily);
  CHECK(error_of([] { GraphFamily::parse("tree:x"); }) == ErrorCode::UnsupportedFamily);
}

TEST_CASE("ball sizes match direct enumeration") {
  for (int dim = 1; dim <= 3; ++dim) {
    const auto fam = dim == 1 ? GraphFamily::line() : dim == 2 ? GraphFamily::square() : GraphFamily::cube();
    for (int r = 1; r <= 7; ++r) CHECK(ball_size(fam, r) == lattice_ball_count(dim, r));
  }
  // T_3 shells: 1, 3, 6, 12, ...
  const auto t3 = GraphFamily::tree(3);
  CHECK(ball_size(t3, 1) == 1);
  CHECK(ball_size(t3, 2) == 4);
  CHECK(ball_size(t3, 3) == 10);
  CHECK(ball_size(t3, 4) == 22);
  // T_4 shells: 1, 4, 12, 36
  CHECK(ball_size(GraphFamily::tree(4), 4) == 53);
}

TEST_CASE("lattice balls have the expected structure") {
  const Ball b = family_ball(GraphFamily::square(), 2);
  CHECK(b.graph.vertex_count() == 13);  // 1 + 4 + 8
  CHECK(b.interior.size() == 5);
  CHECK(b.boundary.size() == 8);
  CHECK(b.graph.connected());
  CHECK(b.coords[0] == std::array<int, 3>{0, 0, 0});
  for (std::size_t v = 0; v < b.graph.vertex_count(); ++v) {
    const auto& c = b.coords[v];
    CHECK(b.distance[v] == std::abs(c[0]) + std::abs(c[1]));
    CHECK(b.find(c) == static_cast<Vertex>(v));
  }
  // Ids grow with the ℓ¹ norm.
  for (std::size_t v = 1; v < b.graph.vertex_count(); ++v) CHECK(b.distance[v - 1] <= b.distance[v]);
  // Induced graph: two boundary points adjacent iff at lattice distance 1
  // (never for points of equal ℓ¹ norm on Z²).
  for (Vertex x : b.boundary) {
    for (Vertex y : b.graph.neighbors(x)) CHECK(b.distance[y] == 1);
  }
  CHECK(b.find({5, 0, 0}) == -1);
}

TEST_CASE("vertex ids are global across radii") {
  for (const auto& fam : {GraphFamily::line(), GraphFamily::square(), GraphFamily::cube(), GraphFamily::tree(3)}) {
    const Ball small = family_ball(fam, 3);
    const Ball big = family_ball(fam, 6);
    for (std::size_t v = 0; v < small.graph.vertex_count(); ++v) {
      CHECK(small.distance[v] == big.distance[v]);
      if (fam.is_lattice()) CHECK(small.coords[v] == big.coords[v]);
      if (!fam.is_lattice()) CHECK(small.branch[v] == big.branch[v]);
    }
    for (const auto& e : small.graph.edges()) CHECK(big.graph.adjacent(e.first, e.second));
  }
}

TEST_CASE("tree balls: degrees and branches") {
  const Ball b = family_ball(GraphFamily::tree(3), 4);
  CHECK(b.graph.vertex_count() == 46);  // 1 + 3 + 6 + 12 + 24
  CHECK(b.graph.edge_count() == 45);
  for (Vertex x : b.interior) CHECK(b.graph.degree(x) == 3);
  for (Vertex x : b.boundary) CHECK(b.graph.degree(x) == 1);
  CHECK(b.branch[0] == -1);
  std::map<int, int> per_branch;
  for (std::size_t v = 1; v < b.graph.vertex_count(); ++v) ++per_branch[b.branch[v]];
  CHECK(per_branch == std::map<int, int>{{0, 15}, {1, 15}, {2, 15}});
  CHECK(b.branch[1] == 0);
  CHECK(b.branch[2] == 1);
  CHECK(b.branch[3] == 2);
}

TEST_CASE("exhaustions nest and validate radii") {
  const auto ex = build_exhaustion(GraphFamily::square(), {1, 2, 4});
  CHECK(ex.size() == 3);
  CHECK(ex.level(0).size() == 1);
  CHECK(ex.level(1).size() == 5);
  CHECK(ex.level(2).size() == 25);
  CHECK(ex.level(2).universe() == family_ball(GraphFamily::square(), 4).graph.vertex_count());
  CHECK(ex.rebased(100).level(1).universe() == 100);
  CHECK(error_of([] { build_exhaustion(GraphFamily::line(), {2, 2}); }) == ErrorCode::NonIncreasingRadii);
  CHECK(error_of([] { build_exhaustion(GraphFamily::line(), {0, 2}); }) == ErrorCode::NonIncreasingRadii);
  CHECK(error_of([] { build_exhaustion(GraphFamily::line(), {}); }) == ErrorCode::EmptyInput);
  CHECK(error_of([] { family_ball(GraphFamily::line(), 0); }) == ErrorCode::InvalidVertex);
}
