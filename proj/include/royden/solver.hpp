#pragma once

#include <optional>
#include <string>
#include <vector>

#include "royden/calculus.hpp"
#include "royden/family.hpp"
#include "royden/graph.hpp"

namespace royden {

/// Find f on S ∪ ∂S with f = g on ∂S and Δ_p f = 0 on S.
struct DirichletProblem {
  const Graph& graph;
  VertexSet interior;
  VertexFunction boundary_data;  // must be defined on ∂S
  Exponent p;
};

enum class SolverMethod {
  Automatic,   // damped Newton, coordinate sweeps when a line search stalls
  Coordinate,  // cyclic coordinate minimization only
  Newton,      // damped Newton only
};

struct SolveOptions {
  /// Residual tolerance on max_S |Δ_p f|; 0 selects 1e-10 for p = 2 and
  /// 1e-8 otherwise.
  double tol = 0.0;
  /// Budget of Newton steps plus coordinate sweeps.
  int max_iter = 20000;
  SolverMethod method = SolverMethod::Automatic;
  /// Start from the p = 2 solution; otherwise from the boundary mean.
  bool warm_start = true;
};

struct SolveReport {
  int iterations = 0;
  int newton_steps = 0;
  int sweeps = 0;
  double residual = 0.0;
  /// Edge energy over edges meeting S, each counted once.
  double energy = 0.0;
  bool converged = false;
  double wall_seconds = 0.0;
  double tolerance = 0.0;
  /// Steps where projection onto [min g, max g] changed the iterate, and
  /// how many of those raised the energy (always expected to be 0).
  int clamp_events = 0;
  int clamp_energy_increases = 0;
};

struct DirichletSolution {
  VertexFunction f;  // defined on S ∪ ∂S
  SolveReport report;
};

double default_tolerance(const Exponent& p);

/// Minimizes the edge energy with the given boundary values. Throws
/// EmptyBoundary when ∂S is empty and MissingValue when the data does not
/// cover ∂S. Running out of iterations is not an error: the best iterate is
/// returned with report.converged == false.
DirichletSolution solve_dirichlet(const DirichletProblem& prob, const SolveOptions& opts = {});

/// Reference solution for p = 2 by dense Gaussian elimination.
VertexFunction solve_p2_oracle(const DirichletProblem& prob);

/// max_{x ∈ S} |Δ_p f(x)|
double residual(const Graph& g, const VertexFunction& f, const VertexSet& s, const Exponent& p);

struct RoydenLevel {
  int radius = 0;
  /// sup |h_n| over U_n ∪ ∂U_n.
  double sup_h = 0.0;
  /// sup over the first level of |h_n - h_{n-1}|; absent at the first level.
  std::optional<double> drift;
  double energy_h = 0.0;  // I_p(h_n, V)
  double energy_u = 0.0;  // I_p(f - h_n, V)
  bool minimizer_holds = true;  // I_p(h_n, V) <= I_p(f, V)
  SolveReport report;
};

/// f = u + h with h p-harmonic on the last exhaustion level and u = f - h.
struct RoydenSplit {
  VertexFunction h;
  VertexFunction u;
  std::vector<RoydenLevel> levels;
  double energy_f = 0.0;
  bool converged = false;  // last drift below the drift tolerance
};

/// At each level U_n, h_n solves the Dirichlet problem on U_n with data f on
/// ∂U_n and equals f off U_n. `f` must be defined on all of g, and the
/// exhaustion must live in g's vertex range.
RoydenSplit royden_decompose(const Graph& g, const VertexFunction& f, const Exhaustion& ex, const Exponent& p,
                             double drift_tol = 1e-4, const SolveOptions& opts = {});

}  // namespace royden
