#pragma once

#include <limits>
#include <vector>

#include "royden/calculus.hpp"
#include "royden/graph.hpp"

namespace royden {

/// Nonnegative function on the edges of a graph, indexed by EdgeId.
class EdgeWeight {
 public:
  EdgeWeight() = default;
  explicit EdgeWeight(std::size_t edge_count) : w_(edge_count, 0.0) {}
  explicit EdgeWeight(std::vector<double> weights);

  std::size_t size() const { return w_.size(); }
  double operator[](EdgeId e) const { return w_[e]; }
  void set(EdgeId e, double value);
  const std::vector<double>& values() const { return w_; }

  /// E_p(ω) = Σ_e ω(e)^p
  double energy(const Exponent& p) const;
  /// ω-length Σ_{e ∈ Ed(γ)} ω(e)
  double length(const SimplePath& path) const;

 private:
  std::vector<double> w_;
};

/// Either every simple path from A to B through S ∪ ∂S whose inner vertices
/// avoid A ∪ B, or every path from a vertex to the sphere of a given radius
/// around it (the plate family with A = {a}, B = that sphere, S = the open
/// ball).
struct PathFamilySpec {
  enum class Kind { Plates, ToSphere };

  Kind kind = Kind::Plates;
  VertexSet a;
  VertexSet b;
  VertexSet s;
  Vertex source = 0;
  int radius = 0;

  static PathFamilySpec plates(VertexSet a, VertexSet b, VertexSet s);
  static PathFamilySpec to_sphere(Vertex source, int radius);
};

struct ExtremalOptions {
  /// Stop once the ω-shortest family path has length >= 1 - tol.
  double tol = 1e-10;
  std::size_t max_cuts = 10000;
  /// Tolerance on the active-constraint dual subproblem.
  double inner_tol = 1e-13;
  std::size_t max_inner_sweeps = 200000;
};

struct ExtremalResult {
  /// λ_p = 1 / min E_p(ω); +inf for an empty family.
  double lambda = std::numeric_limits<double>::infinity();
  bool infinite = true;
  /// Admissible weight in the edge numbering of the input graph.
  EdgeWeight weight;
  /// Paths carrying a positive multiplier at the optimum.
  std::vector<SimplePath> active;
  /// Certified bracket lower <= min E_p <= upper (dual value, energy of the
  /// rescaled admissible weight).
  double energy_lower = 0.0;
  double energy_upper = 0.0;
  std::size_t cuts = 0;
};

/// Cutting planes: ω-shortest path separation, each restricted problem
/// solved by coordinate ascent on its Lagrangian dual.
ExtremalResult extremal_length(const Graph& g, const PathFamilySpec& spec, const Exponent& p,
                               const ExtremalOptions& opts = {});

/// Same program with an explicit list of path constraints, solved in the
/// edge weights by a primal log-barrier Newton method; stops once the
/// barrier gap is below rel_gap times the energy. Paths must be simple paths
/// of g. Active paths are those of length 1 (within 1e-6) at the optimum.
ExtremalResult extremal_length_of_paths(const Graph& g, const std::vector<SimplePath>& paths, const Exponent& p,
                                        double rel_gap = 1e-11, std::size_t max_iter = 5000);

/// Enumerates every path of the plate family (at most `cap`) and solves the
/// fully materialized program. Meant for graphs of a dozen vertices.
double extremal_length_bruteforce(const VertexSet& a, const VertexSet& b, const VertexSet& s, const Graph& g,
                                  const Exponent& p, std::size_t cap);

}  // namespace royden
