#include "royden/probe.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "royden/error.hpp"

namespace royden {

DirectionSpec DirectionSpec::parse(std::string_view text) {
  if (text == "x+") return positive();
  if (text == "x-") return negative();
  if (text.starts_with("branch:")) {
    auto digits = text.substr(7);
    int i = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), i);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && i >= 0) return branch(i);
  }
  throw Error(ErrorCode::BadDirection, fmt::format("unknown direction '{}'", text));
}

std::string DirectionSpec::label() const {
  switch (kind_) {
    case Kind::Positive: return "x+";
    case Kind::Negative: return "x-";
    case Kind::Branch: return fmt::format("branch:{}", index_);
  }
  return "?";
}

void DirectionSpec::check(const GraphFamily& family) const {
  if (kind_ == Kind::Branch) {
    if (family.is_lattice()) throw Error(ErrorCode::BadDirection, "branch directions need a tree family");
    if (index_ < 0 || index_ >= family.degree_bound()) {
      throw Error(ErrorCode::BadDirection, fmt::format("branch {} outside 0..{}", index_, family.degree_bound() - 1));
    }
  } else if (!family.is_lattice()) {
    throw Error(ErrorCode::BadDirection, "half-space directions need a lattice family");
  }
}

bool DirectionSpec::contains(const Ball& ball, Vertex x) const {
  switch (kind_) {
    case Kind::Positive: return ball.coords[x][0] > 0;
    case Kind::Negative: return ball.coords[x][0] < 0;
    case Kind::Branch: return ball.branch[x] == index_;
  }
  return false;
}

VertexSet DirectionSpec::members(const Ball& ball) const {
  check(ball.family);
  std::vector<Vertex> ids;
  for (std::size_t x = 0; x < ball.graph.vertex_count(); ++x) {
    if (contains(ball, static_cast<Vertex>(x))) ids.push_back(static_cast<Vertex>(x));
  }
  return VertexSet(ball.graph.vertex_count(), std::move(ids));
}

std::string to_string(MassVerdict v) {
  switch (v) {
    case MassVerdict::MassiveLikely: return "massive-likely";
    case MassVerdict::NotMassiveLikely: return "not-massive-likely";
    case MassVerdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string to_string(BoundaryVerdict v) {
  switch (v) {
    case BoundaryVerdict::AtLeastTwoLikely: return ">=2-likely";
    case BoundaryVerdict::TrivialLikely: return "trivial-likely";
    case BoundaryVerdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

bool bounded_trend(const std::vector<double>& values, double slack) {
  if (values.size() < 2) return false;
  const std::size_t from = values.size() >= 3 ? values.size() - 3 : 0;
  for (std::size_t i = from + 1; i < values.size(); ++i) {
    if (values[i] > (1.0 + slack) * values[i - 1]) return false;
  }
  return true;
}

namespace {

void check_radii(const std::vector<int>& radii) {
  if (radii.empty()) throw Error(ErrorCode::EmptyInput, "no radii given");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] < 1) throw Error(ErrorCode::NonIncreasingRadii, "radii must be >= 1");
    if (i > 0 && radii[i] <= radii[i - 1]) throw Error(ErrorCode::NonIncreasingRadii, "radii must increase");
  }
}

}  // namespace

InnerPotentialResult inner_potential(const VertexSet& d, const GraphFamily& family, const std::vector<int>& radii,
                                     const Exponent& p, const SolveOptions& opts, const ProbeThresholds& thresholds) {
  check_radii(radii);
  const Ball ball = family_ball(family, radii.back());
  const Graph& g = ball.graph;
  const auto n = g.vertex_count();
  if (d.universe() != n) throw Error(ErrorCode::DomainMismatch, "D must be given in the universe of the largest ball");
  if (d.empty()) throw Error(ErrorCode::EmptyInput, "D is empty");
  if (outer_boundary(d, g).empty()) throw Error(ErrorCode::EmptyOuterBoundary, "D has no outer boundary");

  const auto in_d = d.mask();
  const std::size_t inner = ball_size(family, radii.front());
  InnerPotentialResult out;
  std::vector<double> energies;
  for (int r : radii) {
    const std::size_t level = ball_size(family, r);
    std::vector<Vertex> interior;
    std::vector<double> data(n, 0.0);
    for (std::size_t x = 0; x < n; ++x) {
      if (!in_d[x]) continue;
      if (x < level) {
        interior.push_back(static_cast<Vertex>(x));
      } else {
        data[x] = 1.0;
      }
    }
    std::vector<double> u = data;
    SolveReport report;
    report.converged = true;
    if (!interior.empty()) {
      DirichletProblem prob{g, VertexSet(n, std::move(interior)), VertexFunction(std::vector<double>(data)), p};
      auto sol = solve_dirichlet(prob, opts);
      for (Vertex x : prob.interior) u[x] = sol.f(x);
      report = sol.report;
    }
    if (!out.approximants.empty()) {
      const auto prev = out.approximants.back().values();
      for (std::size_t x = 0; x < n; ++x) {
        if (u[x] > prev[x] + thresholds.monotone_slack) {
          throw Error(ErrorCode::NotConverged,
                      fmt::format("inner potential increased at vertex {} radius {} by {:.3e}", x, r, u[x] - prev[x]));
        }
      }
    }
    InnerPotentialLevel lv;
    lv.radius = r;
    for (std::size_t x = 0; x < inner; ++x) {
      if (in_d[x]) lv.sup_inner = std::max(lv.sup_inner, u[x]);
    }
    VertexFunction uf(std::move(u));
    lv.energy = edge_energy(g, uf, p);
    lv.residual = report.residual;
    lv.converged = report.converged;
    out.converged = out.converged && report.converged;
    energies.push_back(lv.energy);
    spdlog::info("inner potential r={} sup={:.6f} energy={:.6g}", r, lv.sup_inner, lv.energy);
    out.levels.push_back(lv);
    out.approximants.push_back(std::move(uf));
  }
  out.limit = out.approximants.back();
  out.sup_estimate = out.levels.back().sup_inner;
  out.energy = dirichlet_sum(g, out.limit, d, p);
  out.energy_bounded = bounded_trend(energies, thresholds.energy_slack);
  if (out.sup_estimate > thresholds.massive && out.energy_bounded) {
    out.verdict = MassVerdict::MassiveLikely;
  } else if (out.sup_estimate < thresholds.not_massive) {
    out.verdict = MassVerdict::NotMassiveLikely;
  }
  return out;
}

InnerPotentialResult inner_potential(const DirectionSpec& d, const GraphFamily& family, const std::vector<int>& radii,
                                     const Exponent& p, const SolveOptions& opts, const ProbeThresholds& thresholds) {
  d.check(family);
  check_radii(radii);
  const Ball ball = family_ball(family, radii.back());
  return inner_potential(d.members(ball), family, radii, p, opts, thresholds);
}

std::vector<VertexSet> level_set_components(const Graph& g, const VertexFunction& h, double eps) {
  std::vector<char> mask(g.vertex_count(), 0);
  for (std::size_t x = 0; x < mask.size(); ++x) {
    const auto v = static_cast<Vertex>(x);
    mask[x] = h.defined(v) && h(v) > 1.0 - eps;
  }
  auto comps = connected_components(g, VertexSet::from_mask(mask));
  std::stable_sort(comps.begin(), comps.end(), [](const VertexSet& a, const VertexSet& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.ids().front() < b.ids().front();
  });
  return comps;
}

std::vector<VertexSet> two_sided_components(const Graph& g, const VertexFunction& h, double eps) {
  auto out = level_set_components(g, h, eps);
  VertexFunction flipped(g.vertex_count());
  for (Vertex x : h.domain()) flipped.set(x, 1.0 - h(x));
  auto low = level_set_components(g, flipped, eps);
  out.insert(out.end(), low.begin(), low.end());
  return out;
}

ProbeResult bhd_probe(const GraphFamily& family, const DirectionSpec& plus, const DirectionSpec& minus,
                      const std::vector<int>& radii, const Exponent& p, const SolveOptions& opts,
                      const ProbeThresholds& thresholds) {
  plus.check(family);
  minus.check(family);
  if (plus == minus) throw Error(ErrorCode::OverlappingDirections, "plus and minus directions coincide");
  check_radii(radii);

  ProbeResult out;
  out.ball = family_ball(family, radii.back());
  const Graph& g = out.ball.graph;
  const auto n = g.vertex_count();
  const auto in_plus = plus.members(out.ball).mask();
  const auto in_minus = minus.members(out.ball).mask();
  for (std::size_t x = 0; x < n; ++x) {
    if (in_plus[x] && in_minus[x]) throw Error(ErrorCode::OverlappingDirections, "plus and minus directions overlap");
  }

  const std::size_t inner = ball_size(family, radii.front());
  std::vector<double> energies;
  VertexFunction h;
  for (int r : radii) {
    const std::size_t level = ball_size(family, r);
    const std::size_t outer = ball_size(family, r + 1);
    std::vector<double> data(n, 0.0);
    for (std::size_t x = level; x < outer; ++x) {
      data[x] = in_plus[x] ? 1.0 : in_minus[x] ? 0.0 : thresholds.filler;
    }
    DirichletProblem prob{g, VertexSet::prefix(n, level), VertexFunction(std::vector<double>(data)), p};
    auto sol = solve_dirichlet(prob, opts);

    ProbeLevel lv;
    lv.radius = r;
    double lo = 1.0, hi = 0.0;
    for (std::size_t x = 0; x < inner; ++x) {
      const double v = sol.f(static_cast<Vertex>(x));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    lv.oscillation = hi - lo;
    lv.energy = sol.report.energy;
    lv.residual = sol.report.residual;
    lv.converged = sol.report.converged;
    out.converged = out.converged && lv.converged;
    energies.push_back(lv.energy);
    spdlog::info("probe r={} osc={:.6f} energy={:.6g}", r, lv.oscillation, lv.energy);
    out.levels.push_back(lv);
    h = std::move(sol.f);
  }
  out.h = std::move(h);
  out.oscillation = out.levels.back().oscillation;
  out.energy = out.levels.back().energy;
  out.residual = out.levels.back().residual;
  out.energy_bounded = bounded_trend(energies, thresholds.energy_slack);
  if (out.oscillation > thresholds.nontrivial && out.energy_bounded) {
    out.verdict = BoundaryVerdict::AtLeastTwoLikely;
  } else if (out.oscillation < thresholds.trivial) {
    out.verdict = BoundaryVerdict::TrivialLikely;
  }
  return out;
}

}  // namespace royden
