#include "royden/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>

#include <Eigen/Dense>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "royden/error.hpp"

namespace royden {

EdgeWeight::EdgeWeight(std::vector<double> weights) : w_(std::move(weights)) {
  for (double v : w_) {
    if (!std::isfinite(v) || v < 0.0) throw Error(ErrorCode::NonFiniteValue, "edge weights must be finite and >= 0");
  }
}

void EdgeWeight::set(EdgeId e, double value) {
  if (!std::isfinite(value) || value < 0.0) throw Error(ErrorCode::NonFiniteValue, "edge weights must be finite and >= 0");
  w_.at(static_cast<std::size_t>(e)) = value;
}

double EdgeWeight::energy(const Exponent& p) const {
  CompensatedSum s;
  for (double v : w_) s.add(abs_pow(v, p.p()));
  return s.value();
}

double EdgeWeight::length(const SimplePath& path) const {
  CompensatedSum s;
  for (EdgeId e : path.edges()) s.add(w_[e]);
  return s.value();
}

PathFamilySpec PathFamilySpec::plates(VertexSet a, VertexSet b, VertexSet s) {
  PathFamilySpec spec;
  spec.kind = Kind::Plates;
  spec.a = std::move(a);
  spec.b = std::move(b);
  spec.s = std::move(s);
  return spec;
}

PathFamilySpec PathFamilySpec::to_sphere(Vertex source, int radius) {
  PathFamilySpec spec;
  spec.kind = Kind::ToSphere;
  spec.source = source;
  spec.radius = radius;
  return spec;
}

namespace {

// The family lives on the graph induced by S ∪ ∂S; paths are handled in its
// local numbering and mapped back at the end.
struct Resolved {
  Subgraph sub;
  VertexSet a;
  VertexSet b;
  std::vector<EdgeId> parent_edge;
};

Resolved resolve(const Graph& g, const PathFamilySpec& spec) {
  VertexSet a, b, s;
  if (spec.kind == PathFamilySpec::Kind::ToSphere) {
    if (!g.contains(spec.source)) throw Error(ErrorCode::InvalidVertex, "path source outside graph");
    if (spec.radius < 1) throw Error(ErrorCode::InvalidVertex, "sphere radius must be >= 1");
    const Vertex src = spec.source;
    const auto dist = bfs_distances(g, std::span<const Vertex>(&src, 1));
    std::vector<Vertex> sphere, inside;
    for (std::size_t x = 0; x < dist.size(); ++x) {
      if (dist[x] == spec.radius) sphere.push_back(static_cast<Vertex>(x));
      if (dist[x] >= 0 && dist[x] < spec.radius) inside.push_back(static_cast<Vertex>(x));
    }
    a = VertexSet(g.vertex_count(), {src});
    b = VertexSet(g.vertex_count(), std::move(sphere));
    s = VertexSet(g.vertex_count(), std::move(inside));
  } else {
    a = spec.a;
    b = spec.b;
    s = spec.s;
    if (a.universe() != g.vertex_count() || b.universe() != g.vertex_count() || s.universe() != g.vertex_count()) {
      throw Error(ErrorCode::DomainMismatch, "family sets do not belong to the graph");
    }
    if (a.empty()) throw Error(ErrorCode::InvalidCondenser, "path family needs a nonempty start set");
    if (!set_intersection(a, b).empty()) throw Error(ErrorCode::InvalidCondenser, "start and end sets overlap");
  }
  const VertexSet closure = set_union(set_union(s, outer_boundary(s, g)), set_union(a, b));
  Resolved r;
  r.sub = induced_subgraph(g, closure);
  const auto n = r.sub.graph.vertex_count();
  auto local = [&](const VertexSet& set) {
    std::vector<Vertex> ids;
    for (Vertex x : set) ids.push_back(r.sub.from_parent[x]);
    return VertexSet(n, std::move(ids));
  };
  r.a = local(a);
  r.b = local(b);
  for (const auto& e : r.sub.graph.edges()) {
    r.parent_edge.push_back(*g.edge_id(r.sub.to_parent[e.first], r.sub.to_parent[e.second]));
  }
  return r;
}

// ω-shortest path from A to B whose inner vertices avoid A ∪ B. Ties are
// broken towards the lower vertex id, both for predecessors and targets.
std::optional<std::vector<Vertex>> shortest_family_path(const Graph& h, const VertexSet& a, const VertexSet& b,
                                                        const std::vector<double>& w) {
  const auto n = h.vertex_count();
  const auto in_a = a.mask();
  const auto in_b = b.mask();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, inf);
  std::vector<Vertex> pred(n, -1);
  std::vector<char> done(n, 0);
  using Item = std::pair<double, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  for (Vertex x : a) {
    dist[x] = 0.0;
    queue.emplace(0.0, x);
  }
  while (!queue.empty()) {
    auto [d, x] = queue.top();
    queue.pop();
    if (done[x] || d > dist[x]) continue;
    done[x] = 1;
    if (in_b[x]) continue;
    auto nb = h.neighbors(x);
    auto ids = h.incident_edges(x);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const Vertex y = nb[k];
      if (in_a[y] || done[y]) continue;
      const double nd = d + w[ids[k]];
      if (nd < dist[y] || (nd == dist[y] && x < pred[y])) {
        const bool improved = nd < dist[y];
        dist[y] = nd;
        pred[y] = x;
        if (improved) queue.emplace(nd, y);
      }
    }
  }
  Vertex target = -1;
  for (Vertex y : b) {
    if (dist[y] < inf && (target < 0 || dist[y] < dist[target])) target = y;
  }
  if (target < 0) return std::nullopt;
  std::vector<Vertex> path{target};
  while (!in_a[path.back()]) path.push_back(pred[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

// Dual of min Σ ω^p s.t. ω-length(P_i) >= 1: with s_e = Σ_{i ∋ e} μ_i the
// inner minimizer is ω_e = (s_e / p)^{1/(p-1)} and
// D(μ) = Σ μ_i - (p-1) Σ_e (s_e / p)^q.
class DualState {
 public:
  DualState(std::size_t edge_count, double p) : s_(edge_count, 0.0), p_(p), q_(p / (p - 1.0)) {}

  double omega(EdgeId e) const { return s_[e] <= 0.0 ? 0.0 : std::pow(s_[e] / p_, 1.0 / (p_ - 1.0)); }

  std::vector<double> omegas() const {
    std::vector<double> w(s_.size());
    for (std::size_t e = 0; e < s_.size(); ++e) w[e] = omega(static_cast<EdgeId>(e));
    return w;
  }

  double length(const std::vector<EdgeId>& path) const {
    CompensatedSum s;
    for (EdgeId e : path) s.add(omega(e));
    return s.value();
  }

  double dual_value(const std::vector<double>& mu) const {
    CompensatedSum s;
    for (double m : mu) s.add(m);
    for (double se : s_) {
      if (se > 0.0) s.add(-(p_ - 1.0) * std::pow(se / p_, q_));
    }
    return s.value();
  }

  const std::vector<double>& loads() const { return s_; }

  void shift(const std::vector<EdgeId>& path, double delta) {
    for (EdgeId e : path) s_[e] = std::max(0.0, s_[e] + delta);
  }

  void reset(const std::vector<std::vector<EdgeId>>& paths, const std::vector<double>& mu) {
    std::fill(s_.begin(), s_.end(), 0.0);
    for (std::size_t i = 0; i < paths.size(); ++i) {
      for (EdgeId e : paths[i]) s_[e] += mu[i];
    }
  }

  /// Exact maximization of D along coordinate i: the new multiplier makes
  /// the path length 1, or is 0 if the path is already long enough.
  double best_multiplier(const std::vector<EdgeId>& path, double current) {
    shift(path, -current);
    auto len = [&](double m) {
      CompensatedSum s;
      for (EdgeId e : path) {
        const double se = s_[e] + m;
        if (se > 0.0) s.add(std::pow(se / p_, 1.0 / (p_ - 1.0)));
      }
      return s.value();
    };
    double result = 0.0;
    if (len(0.0) < 1.0) {
      double lo = 0.0;
      double hi = std::max(current, 1e-3);
      while (len(hi) < 1.0) {
        lo = hi;
        hi *= 2.0;
      }
      for (int it = 0; it < 200 && hi - lo > 1e-17 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (len(mid) < 1.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      result = 0.5 * (lo + hi);
    }
    shift(path, result);
    return result;
  }

 private:
  std::vector<double> s_;
  double p_;
  double q_;
};

// Largest violation of the restricted KKT conditions: len_i = 1 where
// μ_i > 0 and len_i >= 1 where μ_i = 0.
double kkt_violation(const DualState& st, const std::vector<std::vector<EdgeId>>& paths, const std::vector<double>& mu) {
  double viol = 0.0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const double len = st.length(paths[i]);
    viol = std::max(viol, mu[i] > 0.0 ? std::abs(len - 1.0) : std::max(0.0, 1.0 - len));
  }
  return viol;
}

// Projected Newton on φ(μ) = -D(μ) over μ >= 0. ∇φ_i = len_i - 1 and
// ∇²φ_ij = Σ_{e ∈ P_i ∩ P_j} ω_e / ((p - 1) s_e). Returns false when a step
// fails to decrease φ, leaving μ at the last accepted iterate.
bool projected_newton(DualState& st, const std::vector<std::vector<EdgeId>>& paths, std::vector<double>& mu,
                      double p, double tol, int max_steps) {
  const std::size_t k = paths.size();
  std::vector<double> grad(k), trial(k);
  for (int step = 0; step < max_steps; ++step) {
    st.reset(paths, mu);
    for (std::size_t i = 0; i < k; ++i) grad[i] = st.length(paths[i]) - 1.0;
    double pg = 0.0;
    for (std::size_t i = 0; i < k; ++i) pg = std::max(pg, mu[i] > 0.0 ? std::abs(grad[i]) : std::max(0.0, -grad[i]));
    if (pg <= tol) return true;

    const double eps = std::min(1e-9, pg);
    std::vector<int> free_index(k, -1);
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < k; ++i) {
      if (!(mu[i] <= eps && grad[i] > 0.0)) {
        free_index[i] = static_cast<int>(free.size());
        free.push_back(i);
      }
    }
    const auto& s = st.loads();
    double smax = 0.0;
    for (double v : s) smax = std::max(smax, v);
    const double sfloor = 1e-10 * smax + std::numeric_limits<double>::min();
    std::vector<double> curv(s.size());
    for (std::size_t e = 0; e < s.size(); ++e) {
      const double se = std::max(s[e], sfloor);
      curv[e] = std::pow(se / p, 1.0 / (p - 1.0)) / ((p - 1.0) * se);
    }
    // Paths through each edge, restricted to the free set.
    std::vector<std::vector<int>> through(s.size());
    for (std::size_t i : free) {
      for (EdgeId e : paths[i]) through[e].push_back(free_index[i]);
    }
    const auto nf = static_cast<Eigen::Index>(free.size());
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(nf, nf);
    for (std::size_t e = 0; e < s.size(); ++e) {
      for (int a : through[e]) {
        for (int b : through[e]) hess(a, b) += curv[e];
      }
    }
    const double reg = 1e-12 * (hess.trace() / std::max<Eigen::Index>(nf, 1)) + 1e-300;
    hess.diagonal().array() += reg;
    Eigen::VectorXd rhs(nf);
    for (Eigen::Index a = 0; a < nf; ++a) rhs[a] = -grad[free[static_cast<std::size_t>(a)]];
    const Eigen::VectorXd d = hess.ldlt().solve(rhs);

    std::vector<double> dir(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      if (free_index[i] >= 0) {
        dir[i] = d[free_index[i]];
      } else {
        double diag = 0.0;
        for (EdgeId e : paths[i]) diag += curv[e];
        dir[i] = -grad[i] / diag;
      }
    }
    const double phi0 = -st.dual_value(mu);
    bool accepted = false;
    for (double t = 1.0; t > 1e-12; t *= 0.5) {
      for (std::size_t i = 0; i < k; ++i) trial[i] = std::max(0.0, mu[i] + t * dir[i]);
      double decrease = 0.0;
      for (std::size_t i = 0; i < k; ++i) decrease += grad[i] * (trial[i] - mu[i]);
      st.reset(paths, trial);
      const double phi1 = -st.dual_value(trial);
      bool ok = phi1 <= phi0 + 1e-4 * decrease;
      if (!ok && phi1 <= phi0 + 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(phi0) + 1.0)) {
        ok = kkt_violation(st, paths, trial) < pg;
      }
      if (ok) {
        mu = trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      st.reset(paths, mu);
      return false;
    }
  }
  st.reset(paths, mu);
  return kkt_violation(st, paths, mu) <= tol;
}

ExtremalResult finish(const Graph& g, const Resolved* r, const std::vector<double>& local_w,
                      const std::vector<std::vector<Vertex>>& paths, const std::vector<double>& mu, double min_len,
                      double dual, const Exponent& p) {
  ExtremalResult out;
  out.infinite = false;
  std::vector<double> w(g.edge_count(), 0.0);
  for (std::size_t e = 0; e < local_w.size(); ++e) {
    const auto parent = r ? r->parent_edge[e] : static_cast<EdgeId>(e);
    w[parent] = local_w[e] / min_len;
  }
  out.weight = EdgeWeight(std::move(w));
  out.energy_upper = out.weight.energy(p);
  out.energy_lower = std::min(dual, out.energy_upper);
  out.lambda = 1.0 / out.energy_upper;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (mu[i] <= 0.0) continue;
    std::vector<Vertex> verts = paths[i];
    if (r) {
      for (auto& v : verts) v = r->sub.to_parent[v];
    }
    out.active.emplace_back(g, std::move(verts));
  }
  return out;
}

}  // namespace

ExtremalResult extremal_length(const Graph& g, const PathFamilySpec& spec, const Exponent& p,
                               const ExtremalOptions& opts) {
  const Resolved r = resolve(g, spec);
  const Graph& h = r.sub.graph;
  if (r.b.empty()) {
    ExtremalResult out;
    out.weight = EdgeWeight(g.edge_count());
    return out;
  }

  DualState state(h.edge_count(), p.p());
  std::vector<std::vector<Vertex>> paths;
  std::vector<std::vector<EdgeId>> path_edges;
  std::vector<double> mu;
  auto edges_of = [&](const std::vector<Vertex>& verts) {
    std::vector<EdgeId> es;
    for (std::size_t i = 0; i + 1 < verts.size(); ++i) es.push_back(*h.edge_id(verts[i], verts[i + 1]));
    return es;
  };

  std::size_t cuts = 0;
  double shortest = 0.0;
  std::vector<Vertex> shortest_path;
  while (true) {
    auto found = shortest_family_path(h, r.a, r.b, state.omegas());
    if (!found) {
      if (paths.empty()) {
        ExtremalResult out;
        out.weight = EdgeWeight(g.edge_count());
        return out;
      }
      throw Error(ErrorCode::EmptyFamily, "family lost its paths during separation");
    }
    shortest = state.length(edges_of(*found));
    shortest_path = *found;
    if (shortest >= 1.0 - opts.tol) break;
    if (std::find(paths.begin(), paths.end(), *found) != paths.end()) {
      // The restricted optimum makes every active path long; a violated
      // active path means the inner solve stopped early. Accept the bound.
      spdlog::debug("separation returned an active path (length {:.3e})", shortest);
      break;
    }
    if (++cuts > opts.max_cuts) {
      throw Error(ErrorCode::CutBudgetExceeded, fmt::format("more than {} cuts needed", opts.max_cuts));
    }
    paths.push_back(*found);
    path_edges.push_back(edges_of(*found));
    mu.push_back(0.0);

    // Seed the new multiplier by one coordinate pass, then Newton; plain
    // coordinate sweeps remain as the fallback.
    for (std::size_t i = 0; i < paths.size(); ++i) mu[i] = state.best_multiplier(path_edges[i], mu[i]);
    if (!projected_newton(state, path_edges, mu, p.p(), opts.inner_tol, 100)) {
      for (std::size_t sweep = 0; sweep < opts.max_inner_sweeps; ++sweep) {
        for (std::size_t i = 0; i < paths.size(); ++i) mu[i] = state.best_multiplier(path_edges[i], mu[i]);
        if (sweep % 16 == 15) state.reset(path_edges, mu);
        if (kkt_violation(state, path_edges, mu) <= opts.inner_tol) break;
      }
    }
  }
  state.reset(path_edges, mu);
  const auto w = state.omegas();
  auto out = finish(g, &r, w, paths, mu, shortest, state.dual_value(mu), p);
  out.cuts = cuts;
  return out;
}

ExtremalResult extremal_length_of_paths(const Graph& g, const std::vector<SimplePath>& paths, const Exponent& p,
                                        double rel_gap, std::size_t max_iter) {
  if (paths.empty()) {
    ExtremalResult out;
    out.weight = EdgeWeight(g.edge_count());
    return out;
  }
  const double pp = p.p();
  // Variables: edges on at least one path.
  std::vector<int> var(g.edge_count(), -1);
  std::vector<EdgeId> used;
  std::vector<std::vector<int>> rows;
  for (const auto& path : paths) {
    std::vector<int> row;
    for (EdgeId e : path.edges()) {
      if (var[e] < 0) {
        var[e] = static_cast<int>(used.size());
        used.push_back(e);
      }
      row.push_back(var[e]);
    }
    rows.push_back(std::move(row));
  }
  const auto m = static_cast<Eigen::Index>(used.size());
  const double constraints = static_cast<double>(rows.size() + used.size());

  // Log barrier: t Σ ω^p - Σ_i log(len_i - 1) - Σ_e log ω_e, started from
  // the strictly feasible ω = 2.
  Eigen::VectorXd w = Eigen::VectorXd::Constant(m, 2.0);
  auto slacks = [&](const Eigen::VectorXd& x, std::vector<double>& s) {
    s.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double len = 0.0;
      for (int v : rows[i]) len += x[v];
      s[i] = len - 1.0;
      if (!(s[i] > 0.0)) return false;
    }
    for (Eigen::Index v = 0; v < m; ++v) {
      if (!(x[v] > 0.0)) return false;
    }
    return true;
  };
  auto energy = [&](const Eigen::VectorXd& x) {
    CompensatedSum e;
    for (Eigen::Index v = 0; v < m; ++v) e.add(std::pow(x[v], pp));
    return e.value();
  };
  auto barrier = [&](const Eigen::VectorXd& x, double t, const std::vector<double>& s) {
    double b = t * energy(x);
    for (double si : s) b -= std::log(si);
    for (Eigen::Index v = 0; v < m; ++v) b -= std::log(x[v]);
    return b;
  };

  std::vector<double> s, trial_s;
  slacks(w, s);
  double t = constraints / std::max(energy(w), 1e-300);
  std::size_t steps = 0;
  while (true) {
    // Centering by damped Newton.
    for (int inner = 0; inner < 200 && steps < max_iter; ++inner, ++steps) {
      Eigen::VectorXd grad(m);
      Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(m, m);
      for (Eigen::Index v = 0; v < m; ++v) {
        grad[v] = t * pp * std::pow(w[v], pp - 1.0) - 1.0 / w[v];
        hess(v, v) = t * pp * (pp - 1.0) * std::pow(w[v], pp - 2.0) + 1.0 / (w[v] * w[v]);
      }
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const double inv = 1.0 / s[i];
        for (int a : rows[i]) {
          grad[a] -= inv;
          for (int b : rows[i]) hess(a, b) += inv * inv;
        }
      }
      const Eigen::VectorXd step = hess.ldlt().solve(-grad);
      const double decrement = -grad.dot(step);
      if (!(decrement > 1e-14)) break;
      const double f0 = barrier(w, t, s);
      double alpha = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 80; ++ls, alpha *= 0.5) {
        const Eigen::VectorXd cand = w + alpha * step;
        if (!slacks(cand, trial_s)) continue;
        if (barrier(cand, t, trial_s) <= f0 - 0.25 * alpha * decrement) {
          w = cand;
          s = trial_s;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    const double e = energy(w);
    if (constraints / t <= rel_gap * e || steps >= max_iter) break;
    t *= 8.0;
  }

  double min_len = INFINITY;
  for (double si : s) min_len = std::min(min_len, si + 1.0);
  std::vector<double> weight(g.edge_count(), 0.0);
  for (Eigen::Index v = 0; v < m; ++v) weight[used[v]] = w[v] / min_len;
  ExtremalResult out;
  out.infinite = false;
  out.weight = EdgeWeight(std::move(weight));
  out.energy_upper = out.weight.energy(p);
  out.energy_lower = std::max(0.0, energy(w) - constraints / t);
  if (steps >= max_iter && constraints / t > rel_gap * out.energy_upper) {
    throw Error(ErrorCode::NotConverged, "barrier method ran out of Newton steps");
  }
  out.lambda = 1.0 / out.energy_upper;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (out.weight.length(paths[i]) <= 1.0 + 1e-6) out.active.push_back(paths[i]);
  }
  return out;
}

double extremal_length_bruteforce(const VertexSet& a, const VertexSet& b, const VertexSet& s, const Graph& g,
                                  const Exponent& p, std::size_t cap) {
  const Resolved r = resolve(g, PathFamilySpec::plates(a, b, s));
  if (r.b.empty()) return std::numeric_limits<double>::infinity();
  const auto local_paths = enumerate_simple_paths(r.a, r.b, r.sub.graph, cap);
  std::vector<SimplePath> paths;
  for (const auto& lp : local_paths) {
    std::vector<Vertex> verts;
    for (Vertex v : lp.vertices()) verts.push_back(r.sub.to_parent[v]);
    paths.emplace_back(g, std::move(verts));
  }
  return extremal_length_of_paths(g, paths, p).lambda;
}

}  // namespace royden
