#pragma once

#include <string>
#include <vector>

#include "royden/calculus.hpp"
#include "royden/family.hpp"
#include "royden/solver.hpp"

namespace royden {

/// Plates A and B inside S ∪ ∂S.
struct Condenser {
  VertexSet a;
  VertexSet b;
  VertexSet s;
};

/// Throws InvalidCondenser unless A, B are nonempty, disjoint and inside
/// S ∪ ∂S.
void validate(const Condenser& c, const Graph& g);

struct CapacityResult {
  /// Minimal edge energy of u with u = 0 on A, u = 1 on B. Every edge of
  /// the graph induced by S ∪ ∂S is counted once; I_p(u, V) on the same
  /// graph is twice this value.
  double value = 0.0;
  VertexFunction potential;  // defined on S ∪ ∂S, values in [0, 1]
  SolveReport report;
  bool no_admissible = false;  // A and B are not connected inside S ∪ ∂S
};

/// Free vertices (S ∪ ∂S) \ (A ∪ B) get the p-harmonic extension of the
/// plate values on the graph induced by S ∪ ∂S. Free components touching
/// neither plate are set to 0.
CapacityResult capacity(const Graph& g, const Condenser& c, const Exponent& p, const SolveOptions& opts = {});

struct CapacityPoint {
  int radius = 0;
  double value = 0.0;
  double residual = 0.0;
  bool converged = true;
};

struct CapacitySequence {
  std::string family;
  double p = 2.0;
  std::vector<CapacityPoint> points;
};

/// For each radius n: capacity of (A, ball \ B_n(o), S) inside the ball of
/// the largest radius R, with S = B_R(o). Throws NotConverged if the values
/// increase by more than 1e-12 (relative) between radii.
CapacitySequence capacity_at_infinity(const VertexSet& a, const GraphFamily& family, const std::vector<int>& radii,
                                      const Exponent& p, const SolveOptions& opts = {});

enum class Parabolicity { ParabolicLikely, HyperbolicLikely, Inconclusive };

std::string to_string(Parabolicity v);

struct ClassifyOptions {
  double eps_zero = 1e-3;
  std::size_t min_points = 3;
  double exponent_threshold = -0.2;
  double flatness = 1e-4;
};

struct Verdict {
  Parabolicity classification = Parabolicity::Inconclusive;
  double fitted_exponent = 0.0;  // slope of log cap against log n
  double last_value = 0.0;
  std::string note;
};

/// Deterministic heuristic; a finite sequence can only suggest the limit.
Verdict classify_parabolicity(const CapacitySequence& seq, const ClassifyOptions& opts = {});

}  // namespace royden
