// Acceptance suite: one PASS/FAIL line per criterion, exit 1 on any failure.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "oracles.hpp"
#include "royden/capacity.hpp"
#include "royden/cli.hpp"
#include "royden/extremal.hpp"
#include "royden/probe.hpp"
#include "royden/random_graph.hpp"
#include "unit/helpers.hpp"

using namespace royden;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Graph segment_graph(int n) { return testing::path_graph(n); }

Condenser segment(int n) {
  std::vector<Vertex> in;
  for (int i = 1; i < n; ++i) in.push_back(i);
  const auto u = static_cast<std::size_t>(n + 1);
  return Condenser{VertexSet(u, {0}), VertexSet(u, {n}), VertexSet(u, in)};
}

const std::array<double, 5> kPathExponents{1.3, 1.5, 2.0, 3.0, 4.0};
const std::array<int, 6> kPathLengths{2, 4, 8, 16, 32, 64};

Outcome path_capacity() {
  const auto t0 = Clock::now();
  double worst = 0.0, worst_grid = 0.0;
  for (double p : kPathExponents) {
    for (int n : kPathLengths) {
      const double value = capacity(segment_graph(n), segment(n), Exponent(p)).value;
      worst = std::max(worst, std::abs(value - std::pow(n, 1.0 - p)));
      if (n <= 4) worst_grid = std::max(worst_grid, std::abs(value - oracle::path_energy_grid(n, p)));
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-6 && worst_grid <= 1e-6 && secs < 5.0,
          fmt::format("max |cap - n^(1-p)| = {:.2e}, grid oracle (n<=4) {:.2e}, {:.2f} s", worst, worst_grid, secs)};
}

Outcome path_duality() {
  double worst_lambda = 0.0, worst_rel = 0.0, worst_product = 0.0;
  for (double p : kPathExponents) {
    for (int n : kPathLengths) {
      const Graph g = segment_graph(n);
      const Condenser c = segment(n);
      const auto ext = extremal_length(g, PathFamilySpec::plates(c.a, c.b, c.s), Exponent(p));
      const double cap = capacity(g, c, Exponent(p)).value;
      const double expect = std::pow(n, p - 1.0);
      worst_lambda = std::max(worst_lambda, std::abs(ext.lambda - expect));
      worst_rel = std::max(worst_rel, std::abs(ext.lambda - expect) / expect);
      worst_product = std::max(worst_product, std::abs(ext.lambda * cap - 1.0));
    }
  }
  return {worst_lambda <= 1e-6 && worst_product <= 1e-5,
          fmt::format("max |lambda - n^(p-1)| = {:.2e} (relative {:.2e}), max |lambda*cap - 1| = {:.2e}", worst_lambda,
                      worst_rel, worst_product)};
}

Outcome p2_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(3);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto inst = testing::random_instance(rng, 40, 120);
    DirichletProblem prob{inst.graph, inst.interior, inst.data, Exponent(2.0)};
    const auto sol = solve_dirichlet(prob);
    const auto ref = solve_p2_oracle(prob);
    for (Vertex x : inst.interior) worst = std::max(worst, std::abs(sol.f(x) - ref(x)));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-8 && secs < 10.0, fmt::format("max difference {:.2e} over 50 graphs, {:.2f} s", worst, secs)};
}

Outcome identities() {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unit(-1.0, 1.0), exponent(1.1, 5.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 2 + rng() % 39;
    const std::size_t m = n - 1 + rng() % (std::min<std::size_t>(120, n * (n - 1) / 2) - n + 2);
    const Graph g = random_connected_graph(n, m, rng());
    std::vector<double> vals(n);
    for (auto& v : vals) v = unit(rng);
    if (i % 10 == 0) vals[0] = vals[n - 1];  // exercise zero differences
    const VertexFunction f(vals);
    const Exponent p(exponent(rng));
    const double full = dirichlet_sum(g, f, VertexSet::all(n), p);
    const double paired = pairing(g, f, f, p);
    const double edges = edge_energy(g, f, p);
    const double scale = std::max(full, 1e-300);
    worst = std::max({worst, std::abs(paired - full) / scale, std::abs(2.0 * edges - full) / scale});
  }
  return {worst <= 1e-12, fmt::format("max relative error {:.2e} over 100 triples", worst)};
}

Outcome comparison() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> exponent(1.3, 4.0), lift(0.0, 0.5);
  double order = 0.0, range = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto inst = testing::random_instance(rng, 30, 80);
    const Exponent p(exponent(rng));
    const VertexSet boundary = outer_boundary(inst.interior, inst.graph);
    std::vector<double> upper(inst.data.values().begin(), inst.data.values().end());
    for (auto& v : upper) v += (rng() % 4 == 0) ? 0.0 : lift(rng);
    const auto h1 = solve_dirichlet({inst.graph, inst.interior, inst.data, p}).f;
    const auto h2 = solve_dirichlet({inst.graph, inst.interior, VertexFunction(upper), p}).f;
    double lo = INFINITY, hi = -INFINITY;
    for (Vertex y : boundary) {
      lo = std::min(lo, inst.data(y));
      hi = std::max(hi, inst.data(y));
    }
    for (Vertex x : inst.interior) {
      order = std::max(order, h1(x) - h2(x));
      range = std::max({range, lo - h1(x), h1(x) - hi});
    }
  }
  return {order <= 1e-9 && range <= 1e-9,
          fmt::format("max ordering violation {:.2e}, max range violation {:.2e}", std::max(order, 0.0),
                      std::max(range, 0.0))};
}

const std::vector<int> kLineRadii{2, 4, 8, 16, 32, 64};

Outcome z_parabolic(std::vector<std::vector<double>>& values) {
  const auto z = GraphFamily::line();
  double worst = 0.0, worst_exp = 0.0;
  bool verdicts = true;
  for (double p : {1.5, 2.0, 3.0}) {
    const auto seq = capacity_at_infinity(VertexSet(ball_size(z, kLineRadii.back() + 1), {0}), z, kLineRadii, Exponent(p));
    std::vector<double> row;
    for (const auto& pt : seq.points) {
      worst = std::max(worst, std::abs(pt.value - 2.0 * std::pow(pt.radius, 1.0 - p)));
      row.push_back(pt.value);
    }
    values.push_back(row);
    const auto v = classify_parabolicity(seq);
    verdicts = verdicts && v.classification == Parabolicity::ParabolicLikely;
    worst_exp = std::max(worst_exp, std::abs(v.fitted_exponent - (1.0 - p)));
  }
  return {worst <= 1e-6 && verdicts && worst_exp <= 0.05,
          fmt::format("max |cap - 2n^(1-p)| = {:.2e}, max exponent error {:.2e}, verdicts {}", worst, worst_exp,
                      verdicts ? "parabolic-likely" : "wrong")};
}

Outcome t3_hyperbolic() {
  const auto t0 = Clock::now();
  const auto t3 = GraphFamily::tree(3);
  std::vector<int> radii;
  for (int r = 2; r <= 14; ++r) radii.push_back(r);
  const auto seq = capacity_at_infinity(VertexSet(ball_size(t3, 15), {0}), t3, radii, Exponent(2.0));
  bool monotone = true;
  double worst_oracle = 0.0;
  for (std::size_t i = 0; i < seq.points.size(); ++i) {
    if (i > 0 && seq.points[i].value > seq.points[i - 1].value) monotone = false;
    worst_oracle = std::max(worst_oracle, std::abs(seq.points[i].value - oracle::tree3_capacity_p2(seq.points[i].radius)));
  }
  const double last = seq.points.back().value;
  const auto v = classify_parabolicity(seq);
  const double secs = seconds_since(t0);
  return {monotone && std::abs(last - 1.5) <= 2e-2 && v.classification == Parabolicity::HyperbolicLikely &&
              worst_oracle <= 1e-8 && secs < 60.0,
          fmt::format("cap(14) = {:.6f}, recursion oracle max error {:.2e}, {}, verdict {}, {:.2f} s", last,
                      worst_oracle, monotone ? "nonincreasing" : "NOT monotone", to_string(v.classification), secs)};
}

// Relaxation cross-check of the radius-8 value: free vertices are B_8 \ {o}.
double z2_relaxation(double p) {
  const Ball ball = family_ball(GraphFamily::square(), 8);
  const auto n = ball.graph.vertex_count();
  std::vector<double> f(n, 1.0);
  std::vector<char> free(n, 0);
  f[0] = 0.0;
  for (Vertex x : ball.interior) {
    if (x != 0) {
      free[static_cast<std::size_t>(x)] = 1;
      f[static_cast<std::size_t>(x)] = 0.5;
    }
  }
  return oracle::relaxation_energy(ball.graph, f, free, p, 1e-12);
}

Outcome z2_split() {
  const auto z2 = GraphFamily::square();
  const std::vector<int> radii{8, 16, 32};
  std::vector<std::vector<double>> seqs;
  bool strict = true;
  double cross = 0.0;
  for (double p : {1.5, 3.0}) {
    const auto seq = capacity_at_infinity(VertexSet(ball_size(z2, 33), {0}), z2, radii, Exponent(p));
    std::vector<double> vals;
    for (const auto& pt : seq.points) vals.push_back(pt.value);
    for (std::size_t i = 1; i < vals.size(); ++i) strict = strict && vals[i] < vals[i - 1];
    cross = std::max(cross, std::abs(vals[0] - z2_relaxation(p)) / vals[0]);
    seqs.push_back(vals);
  }
  const double r15 = seqs[0].back() / seqs[0].front();
  const double r3 = seqs[1].back() / seqs[1].front();
  return {r15 > 0.5 && r3 < 0.3 && strict && cross <= 1e-6,
          fmt::format("p=1.5 {:.4f} -> {:.4f} (ratio {:.3f}); p=3 {:.4f} -> {:.4f} (ratio {:.3f}); {}; "
                      "relaxation oracle at n=8 relative error {:.2e}",
                      seqs[0].front(), seqs[0].back(), r15, seqs[1].front(), seqs[1].back(), r3,
                      strict ? "strictly decreasing" : "NOT strictly decreasing", cross)};
}

Outcome extremal_duality() {
  std::mt19937_64 rng(9);
  double worst_dual = 0.0, worst_cp = 0.0;
  int graphs = 0;
  while (graphs < 25) {
    const std::size_t n = 4 + rng() % 9;
    const std::size_t m = n - 1 + rng() % (std::min<std::size_t>(2 * n, n * (n - 1) / 2) - n + 2);
    const Graph g = random_connected_graph(n, m, rng());
    const auto a_id = static_cast<Vertex>(rng() % n);
    auto b_id = static_cast<Vertex>(rng() % n);
    if (b_id == a_id) b_id = static_cast<Vertex>((b_id + 1) % n);
    std::vector<Vertex> rest{a_id, b_id};
    for (std::size_t x = 0; x < n; ++x) {
      if (static_cast<Vertex>(x) != a_id && static_cast<Vertex>(x) != b_id && rng() % 5 != 0) {
        rest.push_back(static_cast<Vertex>(x));
      }
    }
    const VertexSet a(n, {a_id}), b(n, {b_id}), s(n, rest);
    const double bf = extremal_length_bruteforce(a, b, s, g, Exponent(2.0), 200000);
    const auto cp = extremal_length(g, PathFamilySpec::plates(a, b, s), Exponent(2.0));
    const double cap = capacity(g, Condenser{a, b, s}, Exponent(2.0)).value;
    ++graphs;
    if (cap == 0.0) {
      // No admissible path: both sides must be infinite.
      if (!std::isinf(bf) || !cp.infinite) worst_dual = INFINITY;
      continue;
    }
    worst_dual = std::max(worst_dual, std::abs(1.0 / bf - cap));
    worst_cp = std::max(worst_cp, std::abs(cp.lambda - bf));
  }
  return {worst_dual <= 1e-5 && worst_cp <= 1e-5,
          fmt::format("max |1/lambda - cap| = {:.2e}, max |cutting plane - brute force| = {:.2e} over 25 graphs",
                      worst_dual, worst_cp)};
}

Outcome royden_split() {
  const auto t3 = GraphFamily::tree(3);
  std::vector<int> radii;
  for (int r = 1; r <= 12; ++r) radii.push_back(r);
  const Ball ball = family_ball(t3, 12);
  const auto n = ball.graph.vertex_count();
  const Exhaustion ex = build_exhaustion(t3, radii);
  const Exponent p(2.0);

  std::vector<double> tent(n), constant(n, 1.0);
  for (std::size_t x = 0; x < n; ++x) tent[x] = std::max(0.0, 1.0 - ball.distance[x] / 4.0);
  auto with_bump = [&](std::vector<double> f) {
    for (std::size_t x = 0; x < ball_size(t3, 3); ++x) f[x] += 0.3 * (3 - ball.distance[x]);
    return f;
  };

  const auto split = royden_decompose(ball.graph, VertexFunction(tent), ex, p);
  bool decreasing = true;
  for (std::size_t i = 1; i < split.levels.size(); ++i) {
    const double prev = split.levels[i - 1].sup_h, cur = split.levels[i].sup_h;
    if (cur > prev || (prev > 0.0 && cur >= prev)) decreasing = false;
  }
  const double sup_last = split.levels.back().sup_h;

  const auto flat = royden_decompose(ball.graph, VertexFunction(constant), ex, p);
  bool exact = true;
  for (const auto& lv : flat.levels) exact = exact && lv.sup_h == 1.0 && lv.energy_u == 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    exact = exact && flat.h(static_cast<Vertex>(x)) == 1.0 && flat.u(static_cast<Vertex>(x)) == 0.0;
  }

  double bump_change = 0.0;
  const std::size_t inner = ball_size(t3, 2);
  for (const auto* base : {&tent, &constant}) {
    const auto plain = royden_decompose(ball.graph, VertexFunction(*base), ex, p);
    const auto bumped = royden_decompose(ball.graph, VertexFunction(with_bump(*base)), ex, p);
    for (std::size_t x = 0; x < inner; ++x) {
      bump_change = std::max(bump_change, std::abs(plain.h(static_cast<Vertex>(x)) - bumped.h(static_cast<Vertex>(x))));
    }
  }
  return {sup_last < 0.05 && decreasing && exact && bump_change < 1e-3,
          fmt::format("tent: sup|h| {:.3f} -> {:.3e} at n=12 ({}); constant: {}; bump changes h by {:.2e}",
                      split.levels.front().sup_h, sup_last, decreasing ? "decreasing" : "NOT decreasing",
                      exact ? "h = 1, u = 0 exactly" : "NOT exact", bump_change)};
}

Outcome massive_sets() {
  std::vector<int> line_radii{8, 16, 32, 64, 128}, tree_radii;
  for (int r = 8; r <= 14; ++r) tree_radii.push_back(r);
  bool ok = true;
  std::string detail;
  for (double p : {1.5, 2.0, 3.0}) {
    const auto z = inner_potential(DirectionSpec::positive(), GraphFamily::line(), line_radii, Exponent(p));
    const auto t = inner_potential(DirectionSpec::branch(0), GraphFamily::tree(3), tree_radii, Exponent(p));
    ok = ok && z.sup_estimate < 0.1 && z.verdict == MassVerdict::NotMassiveLikely && t.sup_estimate > 0.9 &&
         t.verdict == MassVerdict::MassiveLikely;
    detail += fmt::format("{}p={}: Z+ {:.4f} {}, T3 branch {:.4f} {}", detail.empty() ? "" : "; ", p, z.sup_estimate,
                          to_string(z.verdict), t.sup_estimate, to_string(t.verdict));
  }
  return {ok, detail};
}

Outcome boundary_probe() {
  std::vector<int> tree_radii, line_radii{4, 8, 16, 32, 64, 128};
  for (int r = 4; r <= 12; ++r) tree_radii.push_back(r);
  bool ok = true;
  std::string detail;
  for (double p : {1.5, 2.0, 3.0}) {
    const auto t = bhd_probe(GraphFamily::tree(3), DirectionSpec::branch(0), DirectionSpec::branch(1), tree_radii,
                             Exponent(p));
    const auto z = bhd_probe(GraphFamily::line(), DirectionSpec::positive(), DirectionSpec::negative(), line_radii,
                             Exponent(p));
    const auto sides = two_sided_components(t.ball.graph, t.h, 0.4);
    const auto upper = level_set_components(t.ball.graph, t.h, 0.4);
    ok = ok && t.verdict == BoundaryVerdict::AtLeastTwoLikely && t.oscillation > 0.5 &&
         z.verdict == BoundaryVerdict::TrivialLikely && z.oscillation < 0.05 && sides.size() >= 2;
    detail += fmt::format("{}p={}: T3 osc {:.3f} {}, Z osc {:.4f} {}, components {} (upper set alone {})",
                          detail.empty() ? "" : "; ", p, t.oscillation, to_string(t.verdict), z.oscillation,
                          to_string(z.verdict), sides.size(), upper.size());
  }
  return {ok, detail};
}

std::string run_process(const std::string& command, int& status) {
  std::string out;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) {
    status = -1;
    return out;
  }
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  status = pclose(pipe);
  return out;
}

Outcome cli_end_to_end(const std::vector<std::vector<double>>& expected) {
  const std::string cmd =
      fmt::format("'{}' capinf --family z --p 1.5,2,3 --radii 2:64:x2 --format csv 2>/dev/null", ROYDEN_CLI_PATH);
  int s1 = 0, s2 = 0;
  const std::string first = run_process(cmd, s1);
  const std::string second = run_process(cmd, s2);
  std::istringstream in(first);
  std::string line;
  std::getline(in, line);
  bool header = line == "family,p,n,cap,residual";
  double worst = 0.0;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    if (cells.size() != 5) return {false, fmt::format("malformed row '{}'", line)};
    const std::size_t pi = rows / kLineRadii.size(), ri = rows % kLineRadii.size();
    if (pi >= expected.size()) return {false, "too many rows"};
    const double cap = std::stod(cells[3]);
    const double n = std::stod(cells[2]);
    const double p = std::stod(cells[1]);
    worst = std::max({worst, std::abs(cap - expected[pi][ri]), std::abs(cap - 2.0 * std::pow(n, 1.0 - p))});
    ++rows;
  }
  const bool same = first == second;
  return {s1 == 0 && s2 == 0 && header && rows == 18 && worst <= 1e-6 && same,
          fmt::format("exit {} / {}, {} rows, max deviation from the in-process Z values {:.2e}, {}", s1, s2, rows, worst,
                      same ? "byte-identical" : "outputs DIFFER")};
}

}  // namespace

int main() {
  configure_logging();
  std::vector<std::vector<double>> z_values;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"path capacity closed form", path_capacity},
      {"path duality", path_duality},
      {"p=2 solver oracle equivalence", p2_oracle},
      {"pairing and energy identities", identities},
      {"comparison and maximum principles", comparison},
      {"Z parabolic", [&] { return z_parabolic(z_values); }},
      {"T_3 hyperbolic", t3_hyperbolic},
      {"Z^2 trend split", z2_split},
      {"extremal length duality at p=2", extremal_duality},
      {"Royden decomposition on T_3", royden_split},
      {"massive sets", massive_sets},
      {"boundary probe", boundary_probe},
      {"CLI end to end", [&] { return cli_end_to_end(z_values); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, fmt::format("threw: {}", e.what())};
    }
    if (!out.pass) ++failures;
    fmt::print("{} {:2d} {}: {} [{:.2f} s]\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, out.detail,
               seconds_since(t0));
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
  return failures == 0 ? 0 : 1;
}
