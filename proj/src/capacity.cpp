#include "royden/capacity.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "royden/error.hpp"

namespace royden {

void validate(const Condenser& c, const Graph& g) {
  const auto n = g.vertex_count();
  if (c.a.universe() != n || c.b.universe() != n || c.s.universe() != n) {
    throw Error(ErrorCode::DomainMismatch, "condenser sets do not belong to the graph");
  }
  if (c.a.empty() || c.b.empty()) throw Error(ErrorCode::InvalidCondenser, "plates must be nonempty");
  if (!set_intersection(c.a, c.b).empty()) throw Error(ErrorCode::InvalidCondenser, "plates overlap");
  const VertexSet closure = set_union(c.s, outer_boundary(c.s, g));
  if (!std::includes(closure.begin(), closure.end(), c.a.begin(), c.a.end()) ||
      !std::includes(closure.begin(), closure.end(), c.b.begin(), c.b.end())) {
    throw Error(ErrorCode::InvalidCondenser, "plates must lie in S ∪ ∂S");
  }
}

namespace {

CapacityResult capacity_on(const Graph& h, const VertexSet& a, const VertexSet& b, const Exponent& p,
                           const SolveOptions& opts) {
  const auto n = h.vertex_count();
  const auto in_a = a.mask();
  const auto in_b = b.mask();
  CapacityResult out;
  out.report.converged = true;

  std::vector<char> free(n, 0);
  for (std::size_t x = 0; x < n; ++x) free[x] = !in_a[x] && !in_b[x];

  // Plate connectivity inside the ambient graph.
  const auto dist = bfs_distances(h, a.ids());
  const bool admissible = std::any_of(b.begin(), b.end(), [&](Vertex y) { return dist[y] >= 0; });

  std::vector<double> u(n, 0.0);
  for (Vertex y : b) u[y] = 1.0;
  if (!admissible) {
    out.no_admissible = true;
    for (std::size_t x = 0; x < n; ++x) {
      if (free[x]) u[x] = dist[x] >= 0 ? 0.0 : 1.0;
    }
    out.potential = VertexFunction(std::move(u));
    return out;
  }

  std::vector<Vertex> interior;
  for (const auto& comp : connected_components(h, VertexSet::from_mask(free))) {
    bool touches = false;
    for (Vertex x : comp) {
      for (Vertex y : h.neighbors(x)) touches = touches || in_a[y] || in_b[y];
    }
    if (touches) interior.insert(interior.end(), comp.begin(), comp.end());
  }

  double plate_edges = 0.0;
  for (const auto& e : h.edges()) {
    if ((in_a[e.first] && in_b[e.second]) || (in_b[e.first] && in_a[e.second])) plate_edges += 1.0;
  }

  if (!interior.empty()) {
    VertexFunction data{std::vector<double>(u)};
    DirichletProblem prob{h, VertexSet(n, std::move(interior)), data, p};
    auto sol = solve_dirichlet(prob, opts);
    for (Vertex x : prob.interior) u[x] = sol.f(x);
    out.report = sol.report;
    out.value = sol.report.energy + plate_edges;
  } else {
    out.value = plate_edges;
  }
  out.potential = VertexFunction(std::move(u));
  return out;
}

}  // namespace

CapacityResult capacity(const Graph& g, const Condenser& c, const Exponent& p, const SolveOptions& opts) {
  validate(c, g);
  const VertexSet closure = set_union(c.s, outer_boundary(c.s, g));
  if (closure.size() == g.vertex_count()) return capacity_on(g, c.a, c.b, p, opts);

  const Subgraph sub = induced_subgraph(g, closure);
  auto local = [&](const VertexSet& s) {
    std::vector<Vertex> ids;
    for (Vertex x : s) ids.push_back(sub.from_parent[x]);
    return VertexSet(sub.graph.vertex_count(), std::move(ids));
  };
  CapacityResult r = capacity_on(sub.graph, local(c.a), local(c.b), p, opts);
  VertexFunction potential(g.vertex_count());
  for (std::size_t i = 0; i < sub.to_parent.size(); ++i) potential.set(sub.to_parent[i], r.potential(static_cast<Vertex>(i)));
  r.potential = std::move(potential);
  return r;
}

CapacitySequence capacity_at_infinity(const VertexSet& a, const GraphFamily& family, const std::vector<int>& radii,
                                      const Exponent& p, const SolveOptions& opts) {
  if (radii.empty()) throw Error(ErrorCode::EmptyInput, "no radii given");
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (radii[i] <= radii[i - 1]) throw Error(ErrorCode::NonIncreasingRadii, "radii must increase");
  }
  const Ball ball = family_ball(family, radii.back());
  const auto n = ball.graph.vertex_count();
  if (a.universe() != n) throw Error(ErrorCode::DomainMismatch, "plate A must be given in the universe of the largest ball");
  const std::size_t first = ball_size(family, radii.front());
  if (a.empty() || static_cast<std::size_t>(a.ids().back()) >= first) {
    throw Error(ErrorCode::InvalidCondenser, "plate A must lie in the smallest ball");
  }

  CapacitySequence seq;
  seq.family = family.label();
  seq.p = p.p();
  for (int r : radii) {
    const VertexSet level = VertexSet::prefix(n, ball_size(family, r));
    Condenser c{a, set_difference(VertexSet::all(n), level), ball.interior};
    auto res = capacity(ball.graph, c, p, opts);
    CapacityPoint pt{r, res.value, res.report.residual, res.report.converged};
    if (!seq.points.empty()) {
      const double prev = seq.points.back().value;
      if (pt.value > prev * (1.0 + 1e-12) + 1e-12) {
        throw Error(ErrorCode::NotConverged,
                    fmt::format("capacity increased from {} to {} at radius {}", prev, pt.value, r));
      }
    }
    spdlog::info("cap[{} p={} n={}] = {:.12g}", seq.family, seq.p, r, pt.value);
    seq.points.push_back(pt);
  }
  return seq;
}

std::string to_string(Parabolicity v) {
  switch (v) {
    case Parabolicity::ParabolicLikely: return "parabolic-likely";
    case Parabolicity::HyperbolicLikely: return "hyperbolic-likely";
    case Parabolicity::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Verdict classify_parabolicity(const CapacitySequence& seq, const ClassifyOptions& opts) {
  const auto& pts = seq.points;
  if (pts.size() < opts.min_points || pts.size() < 2) {
    throw Error(ErrorCode::TooFewPoints, fmt::format("{} points, need {}", pts.size(), std::max<std::size_t>(opts.min_points, 2)));
  }
  Verdict v;
  v.last_value = pts.back().value;

  // Least-squares slope of log cap against log n over positive values.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (const auto& pt : pts) {
    if (pt.value <= 0.0 || pt.radius <= 0) continue;
    const double x = std::log(static_cast<double>(pt.radius));
    const double y = std::log(pt.value);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  const double denom = static_cast<double>(m) * sxx - sx * sx;
  v.fitted_exponent = m >= 2 && denom > 0.0 ? (static_cast<double>(m) * sxy - sx * sy) / denom : 0.0;

  bool decreasing = pts.back().value < pts.front().value;
  for (std::size_t i = 1; i < pts.size(); ++i) decreasing = decreasing && pts[i].value <= pts[i - 1].value;
  const double last_step = std::abs(pts.back().value - pts[pts.size() - 2].value);

  if ((decreasing && v.fitted_exponent <= opts.exponent_threshold) || v.last_value < opts.eps_zero) {
    v.classification = Parabolicity::ParabolicLikely;
    v.note = fmt::format("capacity decays like n^{:.3f}; last value {:.3g}", v.fitted_exponent, v.last_value);
  } else if (last_step < opts.flatness && v.last_value > 10.0 * opts.eps_zero) {
    v.classification = Parabolicity::HyperbolicLikely;
    v.note = fmt::format("capacity levels off near {:.6g} (last step {:.2e})", v.last_value, last_step);
  } else {
    v.classification = Parabolicity::Inconclusive;
    v.note = fmt::format("no clear trend: exponent {:.3f}, last step {:.2e}", v.fitted_exponent, last_step);
  }
  v.note += "; finite truncation cannot prove either case";
  return v;
}

}  // namespace royden
