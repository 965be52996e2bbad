#include "royden/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "royden/error.hpp"

namespace royden {

double default_tolerance(const Exponent& p) { return p.is_two() ? 1e-10 : 1e-8; }

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;

// Working state of one Dirichlet solve: a dense value vector over the whole
// graph, the interior in local numbering and the edges whose energy moves.
class Engine {
 public:
  Engine(const Graph& g, std::vector<Vertex> interior, std::vector<double> values, double p)
      : g_(g), interior_(std::move(interior)), local_(g.vertex_count(), -1), f_(std::move(values)), p_(p) {
    for (std::size_t i = 0; i < interior_.size(); ++i) local_[interior_[i]] = static_cast<int>(i);
    for (const auto& e : g_.edges()) {
      if (local_[e.first] >= 0 || local_[e.second] >= 0) edges_.push_back(e);
    }
  }

  std::vector<double>& values() { return f_; }

  double energy(const std::vector<double>& f) const {
    CompensatedSum s;
    for (const auto& e : edges_) s.add(abs_pow(f[e.second] - f[e.first], p_));
    return s.value();
  }

  double laplacian(const std::vector<double>& f, Vertex x) const {
    CompensatedSum s;
    const double fx = f[x];
    for (Vertex y : g_.neighbors(x)) {
      if (f[y] != fx) s.add(signed_pow(f[y] - fx, p_));
    }
    return s.value();
  }

  std::vector<double> laplacians(const std::vector<double>& f) const {
    std::vector<double> r(interior_.size());
    for (std::size_t i = 0; i < interior_.size(); ++i) r[i] = laplacian(f, interior_[i]);
    return r;
  }

  static double max_abs(const std::vector<double>& r) {
    double m = 0.0;
    for (double v : r) m = std::max(m, std::abs(v));
    return m;
  }

  /// Solves Σ_y w_xy (δ_x - δ_y) = rhs_x over the interior, with δ = 0 on
  /// the boundary. Weights come per edge of edges_.
  std::vector<double> solve_weighted(const std::vector<double>& weights, const std::vector<double>& rhs) {
    const auto m = static_cast<Eigen::Index>(interior_.size());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(edges_.size() * 4);
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      const int a = local_[edges_[k].first];
      const int b = local_[edges_[k].second];
      const double w = weights[k];
      if (a >= 0) trip.emplace_back(a, a, w);
      if (b >= 0) trip.emplace_back(b, b, w);
      if (a >= 0 && b >= 0) {
        trip.emplace_back(a, b, -w);
        trip.emplace_back(b, a, -w);
      }
    }
    SparseMatrix mat(m, m);
    mat.setFromTriplets(trip.begin(), trip.end());
    if (!pattern_ready_) {
      ldlt_.analyzePattern(mat);
      pattern_ready_ = true;
    }
    ldlt_.factorize(mat);
    if (ldlt_.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "sparse factorization failed");
    Eigen::VectorXd b(m);
    for (Eigen::Index i = 0; i < m; ++i) b[i] = rhs[static_cast<std::size_t>(i)];
    Eigen::VectorXd x = ldlt_.solve(b);
    return std::vector<double>(x.data(), x.data() + m);
  }

  /// Harmonic (p = 2) extension of the current boundary values.
  void linear_solve() {
    std::vector<double> ones(edges_.size(), 1.0);
    std::vector<double> rhs(interior_.size(), 0.0);
    for (const auto& e : edges_) {
      const int a = local_[e.first];
      const int b = local_[e.second];
      if (a >= 0 && b < 0) rhs[a] += f_[e.second];
      if (b >= 0 && a < 0) rhs[b] += f_[e.first];
    }
    auto x = solve_weighted(ones, rhs);
    for (std::size_t i = 0; i < interior_.size(); ++i) f_[interior_[i]] = x[i];
  }

  /// Newton direction for E/p: H δ = Δ_p f with H the weighted Laplacian,
  /// w = (p-1) max(|d|, floor)^{p-2}.
  std::vector<double> newton_direction(const std::vector<double>& r, double floor) {
    std::vector<double> w(edges_.size());
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      const double d = std::max(std::abs(f_[edges_[k].second] - f_[edges_[k].first]), floor);
      w[k] = (p_ - 1.0) * std::pow(d, p_ - 2.0);
    }
    return solve_weighted(w, r);
  }

  /// One Gauss–Seidel pass of exact one-dimensional energy minimization.
  void coordinate_sweep() {
    for (Vertex x : interior_) f_[x] = minimize_at(x);
  }

  double minimize_at(Vertex x) const {
    auto nb = g_.neighbors(x);
    double a = std::numeric_limits<double>::infinity();
    double b = -a;
    bool flat = true;
    for (Vertex y : nb) {
      a = std::min(a, f_[y]);
      b = std::max(b, f_[y]);
      if (f_[y] != f_[x]) flat = false;
    }
    if (flat) return f_[x];
    if (a == b) return a;
    // F(t) = Σ |v - t|^{p-2}(v - t) is decreasing with a root in [a, b].
    auto F = [&](double t) {
      CompensatedSum s;
      for (Vertex y : nb) s.add(signed_pow(f_[y] - t, p_));
      return s.value();
    };
    auto dF = [&](double t) {
      double s = 0.0;
      for (Vertex y : nb) {
        const double d = std::abs(f_[y] - t);
        if (d == 0.0) return -std::numeric_limits<double>::infinity();
        s += std::pow(d, p_ - 2.0);
      }
      return -(p_ - 1.0) * s;
    };
    double t = std::clamp(f_[x], a, b);
    for (int it = 0; it < 200; ++it) {
      const double v = F(t);
      if (v == 0.0) return t;
      if (v > 0.0) {
        a = t;
      } else {
        b = t;
      }
      if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() * std::max({std::abs(a), std::abs(b), 1e-300})) break;
      const double d = dF(t);
      double next = std::isfinite(d) && d < 0.0 ? t - v / d : std::numeric_limits<double>::quiet_NaN();
      if (!(next > a && next < b)) next = 0.5 * (a + b);
      if (next == t) break;
      t = next;
    }
    return t;
  }

  const std::vector<Vertex>& interior() const { return interior_; }

 private:
  const Graph& g_;
  std::vector<Vertex> interior_;
  std::vector<int> local_;
  std::vector<double> f_;
  std::vector<Edge> edges_;
  double p_;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt_;
  bool pattern_ready_ = false;
};

void clamp_to(std::vector<double>& f, const std::vector<Vertex>& interior, double lo, double hi) {
  for (Vertex x : interior) f[x] = std::clamp(f[x], lo, hi);
}

}  // namespace

double residual(const Graph& g, const VertexFunction& f, const VertexSet& s, const Exponent& p) {
  double m = 0.0;
  for (Vertex x : s) m = std::max(m, std::abs(p_laplacian(g, f, x, p)));
  return m;
}

DirichletSolution solve_dirichlet(const DirichletProblem& prob, const SolveOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const Graph& g = prob.graph;
  if (prob.interior.universe() != g.vertex_count() || prob.boundary_data.universe() != g.vertex_count()) {
    throw Error(ErrorCode::DomainMismatch, "problem data does not live on the graph");
  }
  const VertexSet bd = outer_boundary(prob.interior, g);
  if (bd.empty()) throw Error(ErrorCode::EmptyBoundary, "interior has no outer boundary");
  if (!prob.boundary_data.defined_on(bd)) throw Error(ErrorCode::MissingValue, "boundary data does not cover ∂S");

  const double p = prob.p.p();
  const double tol = opts.tol > 0.0 ? opts.tol : default_tolerance(prob.p);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double mean = 0.0;
  std::vector<double> values(g.vertex_count(), 0.0);
  for (Vertex y : bd) {
    const double v = prob.boundary_data(y);
    values[y] = v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    mean += v;
  }
  mean /= static_cast<double>(bd.size());

  SolveReport report;
  report.tolerance = tol;
  auto finish = [&](const std::vector<double>& f) {
    VertexFunction out(g.vertex_count());
    for (Vertex y : bd) out.set(y, f[y]);
    for (Vertex x : prob.interior) out.set(x, f[x]);
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return DirichletSolution{std::move(out), report};
  };

  // Constant data: the constant is the unique minimizer.
  if (lo == hi) {
    for (Vertex x : prob.interior) values[x] = lo;
    report.converged = true;
    return finish(values);
  }

  Engine engine(g, prob.interior.ids(), std::move(values), p);
  auto& f = engine.values();
  if (opts.warm_start) {
    engine.linear_solve();
    clamp_to(f, engine.interior(), lo, hi);
  } else {
    for (Vertex x : engine.interior()) f[x] = mean;
  }

  const double rel_energy_tol = std::max(tol * tol, 16.0 * std::numeric_limits<double>::epsilon());
  const double floor = (p > 2.0 ? 1e-7 : 1e-14) * (hi - lo);
  // For p < 2 an edge difference of size d contributes d^{p-1} to the
  // residual, so round-off alone bounds how small the residual can get.
  const double attainable = p < 2.0 ? g.max_degree() * std::pow(1e-13 * (hi - lo), p - 1.0) : 0.0;
  const double stop_tol = std::max(tol, attainable);
  report.tolerance = stop_tol;
  double energy = engine.energy(f);
  auto r = engine.laplacians(f);
  double res = Engine::max_abs(r);
  bool have_change = false;
  double rel_change = std::numeric_limits<double>::infinity();

  std::vector<double> candidate;
  for (int it = 0; it < opts.max_iter; ++it) {
    if (res <= stop_tol && (have_change ? rel_change <= rel_energy_tol : prob.p.is_two() && opts.warm_start)) {
      report.converged = true;
      break;
    }
    ++report.iterations;
    bool stepped = false;
    if (opts.method != SolverMethod::Coordinate) {
      const auto delta = engine.newton_direction(r, prob.p.is_two() ? 0.0 : floor);
      double slope = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) slope += r[i] * delta[i];
      double t = 1.0;
      for (int ls = 0; ls < 60 && slope > 0.0; ++ls, t *= 0.5) {
        candidate = f;
        const auto& in = engine.interior();
        for (std::size_t i = 0; i < in.size(); ++i) candidate[in[i]] = f[in[i]] + t * delta[i];
        bool moved = false;
        std::vector<double> unclamped;
        for (Vertex x : in) {
          if (candidate[x] < lo || candidate[x] > hi) {
            moved = true;
            break;
          }
        }
        if (moved) {
          unclamped = candidate;
          clamp_to(candidate, in, lo, hi);
          ++report.clamp_events;
          if (engine.energy(candidate) > engine.energy(unclamped) * (1.0 + 1e-12) + 1e-300) {
            ++report.clamp_energy_increases;
          }
        }
        const double e = engine.energy(candidate);
        bool accept = e <= energy - 1e-4 * t * p * slope;
        if (!accept && e <= energy + 64.0 * std::numeric_limits<double>::epsilon() * std::abs(energy)) {
          // Near the optimum energy differences drown in round-off; accept
          // steps that still shrink the residual.
          std::swap(f, candidate);
          const double cres = Engine::max_abs(engine.laplacians(f));
          std::swap(f, candidate);
          accept = cres < res;
        }
        if (accept) {
          std::swap(f, candidate);
          stepped = true;
          ++report.newton_steps;
          break;
        }
      }
    }
    if (!stepped) {
      if (opts.method == SolverMethod::Newton) break;
      engine.coordinate_sweep();
      ++report.sweeps;
    }
    const double e = engine.energy(f);
    rel_change = std::abs(energy - e) / std::max(std::abs(e), std::numeric_limits<double>::min());
    have_change = true;
    energy = e;
    r = engine.laplacians(f);
    res = Engine::max_abs(r);
  }
  if (!report.converged && res <= stop_tol && have_change && rel_change <= rel_energy_tol) report.converged = true;
  report.residual = res;
  report.energy = energy;
  if (!report.converged) {
    spdlog::debug("dirichlet solve stopped after {} iterations, residual {:.3e}", report.iterations, res);
  }
  return finish(f);
}

VertexFunction solve_p2_oracle(const DirichletProblem& prob) {
  if (!prob.p.is_two()) throw Error(ErrorCode::InvalidExponent, "the linear oracle needs p = 2");
  const Graph& g = prob.graph;
  const VertexSet bd = outer_boundary(prob.interior, g);
  if (bd.empty()) throw Error(ErrorCode::EmptyBoundary, "interior has no outer boundary");
  if (!prob.boundary_data.defined_on(bd)) throw Error(ErrorCode::MissingValue, "boundary data does not cover ∂S");

  const auto& in = prob.interior.ids();
  const std::size_t m = in.size();
  std::vector<int> local(g.vertex_count(), -1);
  for (std::size_t i = 0; i < m; ++i) local[in[i]] = static_cast<int>(i);

  // Row x: deg(x) f(x) - Σ_{y interior} f(y) = Σ_{y boundary} g(y).
  std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    const Vertex x = in[i];
    a[i][i] = g.degree(x);
    for (Vertex y : g.neighbors(x)) {
      if (local[y] >= 0) {
        a[i][static_cast<std::size_t>(local[y])] -= 1.0;
      } else {
        a[i][m] += prob.boundary_data(y);
      }
    }
  }
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    for (std::size_t row = col + 1; row < m; ++row) {
      if (std::abs(a[row][col]) > std::abs(a[piv][col])) piv = row;
    }
    if (std::abs(a[piv][col]) < 1e-12) throw Error(ErrorCode::SingularSystem, "zero pivot in elimination");
    std::swap(a[piv], a[col]);
    for (std::size_t row = col + 1; row < m; ++row) {
      const double factor = a[row][col] / a[col][col];
      if (factor == 0.0) continue;
      for (std::size_t k = col; k <= m; ++k) a[row][k] -= factor * a[col][k];
    }
  }
  std::vector<double> x(m, 0.0);
  for (std::size_t i = m; i-- > 0;) {
    double s = a[i][m];
    for (std::size_t k = i + 1; k < m; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  VertexFunction out(g.vertex_count());
  for (Vertex y : bd) out.set(y, prob.boundary_data(y));
  for (std::size_t i = 0; i < m; ++i) out.set(in[i], x[i]);
  return out;
}

RoydenSplit royden_decompose(const Graph& g, const VertexFunction& f, const Exhaustion& ex, const Exponent& p,
                             double drift_tol, const SolveOptions& opts) {
  if (f.universe() != g.vertex_count() || !f.total()) {
    throw Error(ErrorCode::MissingValue, "f must be defined on every vertex of the ball");
  }
  if (ex.size() == 0) throw Error(ErrorCode::EmptyInput, "empty exhaustion");
  const VertexSet all = VertexSet::all(g.vertex_count());
  RoydenSplit split;
  split.energy_f = dirichlet_sum(g, f, all, p);
  const double energy_slack = 1e-9 * split.energy_f + 1e-12;
  const VertexSet& inner = ex.level(0);
  VertexFunction prev;
  for (std::size_t n = 0; n < ex.size(); ++n) {
    const VertexSet& level = ex.level(n);
    if (level.universe() != g.vertex_count()) throw Error(ErrorCode::DomainMismatch, "exhaustion level outside graph");
    const VertexSet bd = outer_boundary(level, g);
    auto sol = solve_dirichlet(DirichletProblem{g, level, f, p}, opts);
    std::vector<double> hv(f.values().begin(), f.values().end());
    for (Vertex x : level) hv[x] = sol.f(x);
    VertexFunction h(std::move(hv));

    RoydenLevel rec;
    rec.radius = ex.radii().empty() ? static_cast<int>(n + 1) : ex.radii()[n];
    for (Vertex x : set_union(level, bd)) rec.sup_h = std::max(rec.sup_h, std::abs(h(x)));
    if (n > 0) {
      double d = 0.0;
      for (Vertex x : inner) d = std::max(d, std::abs(h(x) - prev(x)));
      rec.drift = d;
    }
    rec.energy_h = dirichlet_sum(g, h, all, p);
    rec.energy_u = dirichlet_sum(g, f - h, all, p);
    rec.minimizer_holds = rec.energy_h <= split.energy_f + energy_slack;
    if (!rec.minimizer_holds) {
      spdlog::warn("level {}: I_p(h) = {} exceeds I_p(f) = {}", rec.radius, rec.energy_h, split.energy_f);
    }
    rec.report = sol.report;
    split.levels.push_back(rec);
    prev = std::move(h);
  }
  split.h = prev;
  split.u = f - prev;
  const auto& last = split.levels.back();
  split.converged = last.drift.has_value() && *last.drift < drift_tol &&
                    std::all_of(split.levels.begin(), split.levels.end(), [](const RoydenLevel& l) {
                      return l.report.converged;
                    });
  return split;
}

}  // namespace royden
