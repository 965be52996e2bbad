#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "royden/calculus.hpp"
#include "royden/family.hpp"
#include "royden/solver.hpp"

namespace royden {

/// A direction at infinity from a fixed menu: for lattices the half-space
/// x1 > 0 or x1 < 0, for trees the subtree below one root neighbor.
class DirectionSpec {
 public:
  enum class Kind { Positive, Negative, Branch };

  static DirectionSpec positive() { return DirectionSpec(Kind::Positive, 0); }
  static DirectionSpec negative() { return DirectionSpec(Kind::Negative, 0); }
  static DirectionSpec branch(int index) { return DirectionSpec(Kind::Branch, index); }
  /// "x+", "x-" or "branch:<i>".
  static DirectionSpec parse(std::string_view text);

  Kind kind() const { return kind_; }
  int index() const { return index_; }
  std::string label() const;

  /// Throws BadDirection when the spec does not fit the family.
  void check(const GraphFamily& family) const;
  /// Membership of a ball vertex; the root or the hyperplane x1 = 0 belong
  /// to no direction.
  bool contains(const Ball& ball, Vertex x) const;
  /// All members inside the ball (including its boundary sphere).
  VertexSet members(const Ball& ball) const;

  friend bool operator==(const DirectionSpec&, const DirectionSpec&) = default;

 private:
  DirectionSpec(Kind kind, int index) : kind_(kind), index_(index) {}

  Kind kind_;
  int index_;
};

struct ProbeThresholds {
  double massive = 0.9;
  double not_massive = 0.1;
  double nontrivial = 0.5;
  double trivial = 0.05;
  /// Energies count as bounded when each of the last three levels is at
  /// most (1 + slack) times the previous one.
  double energy_slack = 0.05;
  /// Allowed increase between consecutive inner potential approximants.
  double monotone_slack = 1e-10;
  /// Shell value for vertices in neither probe direction.
  double filler = 0.5;
};

enum class MassVerdict { MassiveLikely, NotMassiveLikely, Inconclusive };
enum class BoundaryVerdict { AtLeastTwoLikely, TrivialLikely, Inconclusive };

std::string to_string(MassVerdict v);
std::string to_string(BoundaryVerdict v);

struct InnerPotentialLevel {
  int radius = 0;
  double sup_inner = 0.0;  // max of u_n over D ∩ B_{r_1}
  double energy = 0.0;     // edge energy of u_n
  double residual = 0.0;
  bool converged = true;
};

struct InnerPotentialResult {
  /// u_n on the largest ball, extended by 1 on D outside B_n and by 0 off D.
  std::vector<VertexFunction> approximants;
  std::vector<InnerPotentialLevel> levels;
  VertexFunction limit;        // the last approximant
  double sup_estimate = 0.0;   // levels.back().sup_inner
  double energy = 0.0;         // I_p(u_N, D)
  bool energy_bounded = false;
  MassVerdict verdict = MassVerdict::Inconclusive;
  bool converged = true;
};

/// D is given in the universe of family_ball(family, max radius). At radius n
/// solves Δ_p u = 0 on D ∩ B_n with u = 0 on ∂D and u = 1 on D \ B_n.
/// Throws EmptyOuterBoundary when ∂D is empty and NotConverged when the
/// approximants fail to decrease.
InnerPotentialResult inner_potential(const VertexSet& d, const GraphFamily& family, const std::vector<int>& radii,
                                     const Exponent& p, const SolveOptions& opts = {},
                                     const ProbeThresholds& thresholds = {});
InnerPotentialResult inner_potential(const DirectionSpec& d, const GraphFamily& family, const std::vector<int>& radii,
                                     const Exponent& p, const SolveOptions& opts = {},
                                     const ProbeThresholds& thresholds = {});

/// Connected components of {x : h(x) > 1 - eps} over the defined vertices,
/// largest first, ties by smallest id.
std::vector<VertexSet> level_set_components(const Graph& g, const VertexFunction& h, double eps);

/// Components of {h > 1 - eps} followed by those of {h < eps}: the regions
/// where h is close to either of its two extreme boundary values.
std::vector<VertexSet> two_sided_components(const Graph& g, const VertexFunction& h, double eps);

struct ProbeLevel {
  int radius = 0;
  double oscillation = 0.0;  // sup h_n - inf h_n on B_{r_1}
  double energy = 0.0;       // edge energy of h_n
  double residual = 0.0;
  bool converged = true;
};

struct ProbeResult {
  Ball ball;        // the largest ball
  VertexFunction h; // h_N on the largest ball
  std::vector<ProbeLevel> levels;
  double oscillation = 0.0;
  double energy = 0.0;
  double residual = 0.0;
  bool energy_bounded = false;
  BoundaryVerdict verdict = BoundaryVerdict::Inconclusive;
  bool converged = true;
};

/// At radius n solves Δ_p h = 0 on B_n with data 1 on the plus part of the
/// sphere, 0 on the minus part and the filler value elsewhere. Throws
/// OverlappingDirections when the two directions share a vertex.
ProbeResult bhd_probe(const GraphFamily& family, const DirectionSpec& plus, const DirectionSpec& minus,
                      const std::vector<int>& radii, const Exponent& p, const SolveOptions& opts = {},
                      const ProbeThresholds& thresholds = {});

/// True when each of the last three values is at most (1 + slack) times its
/// predecessor.
bool bounded_trend(const std::vector<double>& values, double slack);

}  // namespace royden
