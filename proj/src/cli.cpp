#include "royden/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "royden/capacity.hpp"
#include "royden/error.hpp"
#include "royden/extremal.hpp"
#include "royden/family.hpp"
#include "royden/graph_io.hpp"
#include "royden/probe.hpp"
#include "royden/random_graph.hpp"
#include "royden/solver.hpp"

namespace royden {

namespace {

constexpr std::pair<Command, const char*> kCommands[] = {
    {Command::Dirichlet, "dirichlet"}, {Command::Capacity, "capacity"}, {Command::Capinf, "capinf"},
    {Command::Extremal, "extremal"},   {Command::Decompose, "decompose"}, {Command::Probe, "probe"},
    {Command::Classify, "classify"},
};

template <class T>
T parse_number(const std::string& text, const char* what) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::BadFlag, fmt::format("{}: cannot parse '{}'", what, text));
  }
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

std::vector<int> parse_ids(const std::string& text, const char* what) {
  std::vector<int> out;
  for (const auto& s : split(text, ',')) out.push_back(parse_number<int>(s, what));
  return out;
}

template <class T>
std::string join(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + fmt::format("{}", xs[i]);
  return out;
}

}  // namespace

std::string to_string(Command c) {
  for (const auto& [cmd, name] : kCommands) {
    if (cmd == c) return name;
  }
  return "?";
}

std::vector<int> parse_radii(const std::string& text) {
  std::vector<int> out;
  const auto parts = split(text, ':');
  if (parts.size() == 3) {
    const int start = parse_number<int>(parts[0], "--radii");
    const int stop = parse_number<int>(parts[1], "--radii");
    const std::string& step = parts[2];
    if (step.size() < 2 || (step[0] != 'x' && step[0] != '+')) {
      throw Error(ErrorCode::BadFlag, fmt::format("--radii: step '{}' must be xF or +s", step));
    }
    const int k = parse_number<int>(step.substr(1), "--radii");
    if (start < 1 || stop < start) throw Error(ErrorCode::BadFlag, "--radii: need 1 <= start <= stop");
    if (step[0] == 'x' && k < 2) throw Error(ErrorCode::BadFlag, "--radii: factor must be >= 2");
    if (step[0] == '+' && k < 1) throw Error(ErrorCode::BadFlag, "--radii: step must be >= 1");
    for (long long r = start; r <= stop; r = step[0] == 'x' ? r * k : r + k) out.push_back(static_cast<int>(r));
  } else if (parts.size() == 1) {
    out = parse_ids(text, "--radii");
  } else {
    throw Error(ErrorCode::BadFlag, fmt::format("--radii: cannot parse '{}'", text));
  }
  if (out.empty()) throw Error(ErrorCode::BadFlag, "--radii: empty list");
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] < 1) throw Error(ErrorCode::BadFlag, "--radii: radii must be >= 1");
    if (i > 0 && out[i] <= out[i - 1]) throw Error(ErrorCode::BadFlag, "--radii: radii must increase");
  }
  return out;
}

std::string usage() {
  return "usage: royden <command> [flags]\n"
         "commands: dirichlet capacity capinf extremal decompose probe classify\n"
         "  --family {z,z2,z3,tree:<d>} | --graph <path|random:<n>:<m>>\n"
         "  --p <list>  --radii <a:b:xF|a:b:+s|list>  --tol <t>  --max-iter <k>\n"
         "  --out <path>  --format {json,csv}  --seed <s>\n"
         "  --plate-a <ids>  --plate-b <ids>  --interior <ids>  --plus <dir>  --minus <dir>\n"
         "  --mode {bhd,inner}  --function {indicator,constant,bump}  --timing\n"
         "directions: x+ x- branch:<i>\n";
}

RunConfig parse_args(const std::vector<std::string>& tokens) {
  if (tokens.empty()) throw Error(ErrorCode::UnknownCommand, "missing command");
  RunConfig c;
  bool known = false;
  for (const auto& [cmd, name] : kCommands) {
    if (tokens[0] == name) {
      c.command = cmd;
      known = true;
    }
  }
  if (!known) throw Error(ErrorCode::UnknownCommand, fmt::format("unknown command '{}'", tokens[0]));

  CLI::App app{"royden"};
  app.set_help_flag();
  std::string family, graph, p, radii, tol, max_iter, format, out, seed, plate_a, plate_b, interior;
  app.add_option("--family", family);
  app.add_option("--graph", graph);
  app.add_option("--p", p);
  app.add_option("--radii", radii);
  app.add_option("--tol", tol);
  app.add_option("--max-iter", max_iter);
  app.add_option("--format", format);
  app.add_option("--out", out);
  app.add_option("--seed", seed);
  app.add_option("--plate-a", plate_a);
  app.add_option("--plate-b", plate_b);
  app.add_option("--interior", interior);
  app.add_option("--plus", c.plus);
  app.add_option("--minus", c.minus);
  app.add_option("--mode", c.mode);
  app.add_option("--function", c.function);
  app.add_flag("--timing", c.timing);

  std::vector<std::string> rest(tokens.rbegin(), tokens.rend() - 1);
  try {
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorCode::BadFlag, e.what());
  }

  const bool has_family = app.count("--family") > 0;
  const bool has_graph = app.count("--graph") > 0;
  if (has_family && has_graph) throw Error(ErrorCode::ConflictingSources, "give either --family or --graph, not both");
  if (!has_family && !has_graph) throw Error(ErrorCode::BadFlag, "one of --family or --graph is required");
  if (has_family) {
    try {
      c.family = GraphFamily::parse(family).label();
    } catch (const Error& e) {
      throw Error(ErrorCode::BadFlag, e.what());
    }
  } else {
    c.graph = graph;
  }
  if (app.count("--p")) {
    c.p.clear();
    for (const auto& s : split(p, ',')) {
      const double v = parse_number<double>(s, "--p");
      if (!(v > 1.0) || !std::isfinite(v)) throw Error(ErrorCode::BadFlag, fmt::format("--p: {} is not > 1", s));
      c.p.push_back(v);
    }
    if (c.p.empty()) throw Error(ErrorCode::BadFlag, "--p: empty list");
  }
  if (app.count("--radii")) c.radii = parse_radii(radii);
  if (app.count("--tol")) {
    c.tol = parse_number<double>(tol, "--tol");
    if (!(c.tol > 0.0)) throw Error(ErrorCode::BadFlag, "--tol must be > 0");
  }
  if (app.count("--max-iter")) {
    c.max_iter = parse_number<int>(max_iter, "--max-iter");
    if (c.max_iter < 1) throw Error(ErrorCode::BadFlag, "--max-iter must be >= 1");
  }
  if (app.count("--format")) {
    if (format == "json") {
      c.format = Format::Json;
    } else if (format == "csv") {
      c.format = Format::Csv;
    } else {
      throw Error(ErrorCode::BadFlag, fmt::format("--format: unknown '{}'", format));
    }
  }
  if (app.count("--out")) c.out = out;
  if (app.count("--seed")) c.seed = parse_number<std::uint64_t>(seed, "--seed");
  if (app.count("--plate-a")) c.plate_a = parse_ids(plate_a, "--plate-a");
  if (app.count("--plate-b")) c.plate_b = parse_ids(plate_b, "--plate-b");
  if (app.count("--interior")) c.interior = parse_ids(interior, "--interior");
  if (c.mode != "bhd" && c.mode != "inner") throw Error(ErrorCode::BadFlag, fmt::format("--mode: unknown '{}'", c.mode));
  if (c.function != "indicator" && c.function != "constant" && c.function != "bump") {
    throw Error(ErrorCode::BadFlag, fmt::format("--function: unknown '{}'", c.function));
  }
  for (const auto* dir : {&c.plus, &c.minus}) {
    if (dir->empty()) continue;
    try {
      DirectionSpec::parse(*dir);
    } catch (const Error& e) {
      throw Error(ErrorCode::BadFlag, e.what());
    }
  }
  return c;
}

std::vector<std::string> to_args(const RunConfig& c) {
  std::vector<std::string> a{to_string(c.command)};
  if (c.family) a.insert(a.end(), {"--family", *c.family});
  if (c.graph) a.insert(a.end(), {"--graph", *c.graph});
  a.insert(a.end(), {"--p", join(c.p)});
  if (!c.radii.empty()) a.insert(a.end(), {"--radii", join(c.radii)});
  if (c.tol > 0.0) a.insert(a.end(), {"--tol", fmt::format("{}", c.tol)});
  a.insert(a.end(), {"--max-iter", std::to_string(c.max_iter)});
  a.insert(a.end(), {"--format", c.format == Format::Csv ? "csv" : "json"});
  if (c.out) a.insert(a.end(), {"--out", *c.out});
  a.insert(a.end(), {"--seed", std::to_string(c.seed)});
  if (!c.plate_a.empty()) a.insert(a.end(), {"--plate-a", join(c.plate_a)});
  if (!c.plate_b.empty()) a.insert(a.end(), {"--plate-b", join(c.plate_b)});
  if (!c.interior.empty()) a.insert(a.end(), {"--interior", join(c.interior)});
  if (!c.plus.empty()) a.insert(a.end(), {"--plus", c.plus});
  if (!c.minus.empty()) a.insert(a.end(), {"--minus", c.minus});
  a.insert(a.end(), {"--mode", c.mode, "--function", c.function});
  if (c.timing) a.emplace_back("--timing");
  return a;
}

namespace {

nlohmann::json config_json(const RunConfig& c) {
  nlohmann::json j;
  j["command"] = to_string(c.command);
  if (c.family) j["family"] = *c.family;
  if (c.graph) j["graph"] = *c.graph;
  j["p"] = c.p;
  j["radii"] = c.radii;
  j["tol"] = c.tol;
  j["max_iter"] = c.max_iter;
  j["format"] = c.format == Format::Csv ? "csv" : "json";
  j["seed"] = c.seed;
  if (!c.plate_a.empty()) j["plate_a"] = c.plate_a;
  if (!c.plate_b.empty()) j["plate_b"] = c.plate_b;
  if (!c.interior.empty()) j["interior"] = c.interior;
  if (!c.plus.empty()) j["plus"] = c.plus;
  if (!c.minus.empty()) j["minus"] = c.minus;
  j["mode"] = c.mode;
  j["function"] = c.function;
  j["args"] = to_args(c);
  return j;
}

std::string p_key(double p) { return fmt::format("{}", p); }

class Runner {
 public:
  explicit Runner(const RunConfig& c) : c_(c) {
    opts_.tol = c.tol;
    opts_.max_iter = c.max_iter;
    ps_ = c.p;
    std::sort(ps_.begin(), ps_.end());
    ps_.erase(std::unique(ps_.begin(), ps_.end()), ps_.end());
    report_.command = to_string(c.command);
    report_.config = config_json(c);
  }

  Report& report() { return report_; }
  bool all_converged() const { return converged_; }

  void run() {
    switch (c_.command) {
      case Command::Dirichlet: c_.family ? dirichlet_family() : dirichlet_graph(); break;
      case Command::Capacity: c_.family ? capacity_family() : capacity_graph(); break;
      case Command::Capinf: capinf(); break;
      case Command::Classify: classify(); break;
      case Command::Extremal: c_.family ? extremal_family() : extremal_graph(); break;
      case Command::Decompose: decompose(); break;
      case Command::Probe: probe(); break;
    }
  }

 private:
  GraphFamily family() const {
    if (!c_.family) throw Error(ErrorCode::BadFlag, fmt::format("{} needs --family", to_string(c_.command)));
    if (c_.radii.empty()) throw Error(ErrorCode::BadFlag, "--radii is required with --family");
    return GraphFamily::parse(*c_.family);
  }

  Graph graph() const {
    const std::string& src = *c_.graph;
    if (src.starts_with("random:")) {
      const auto parts = split(src, ':');
      if (parts.size() != 3) throw Error(ErrorCode::BadFlag, "--graph random:<n>:<m>");
      return random_connected_graph(parse_number<std::size_t>(parts[1], "--graph"),
                                    parse_number<std::size_t>(parts[2], "--graph"), c_.seed);
    }
    return load_graph(src);
  }

  std::pair<VertexSet, VertexSet> plates(const Graph& g) const {
    const auto n = g.vertex_count();
    std::vector<Vertex> a(c_.plate_a.begin(), c_.plate_a.end());
    std::vector<Vertex> b(c_.plate_b.begin(), c_.plate_b.end());
    if (a.empty()) a = {0};
    if (b.empty()) b = {static_cast<Vertex>(n - 1)};
    return {VertexSet(n, a), VertexSet(n, b)};
  }

  VertexSet interior(const Graph& g) const {
    if (c_.interior.empty()) return VertexSet::all(g.vertex_count());
    return VertexSet(g.vertex_count(), std::vector<Vertex>(c_.interior.begin(), c_.interior.end()));
  }

  void note(const SolveReport& r) { converged_ = converged_ && r.converged; }

  void dirichlet_graph() {
    const Graph g = graph();
    auto [a, b] = plates(g);
    const auto n = g.vertex_count();
    const VertexSet interior = set_difference(VertexSet::all(n), set_union(a, b));
    std::vector<double> data(n, 0.0);
    for (Vertex x : b) data[x] = 1.0;
    report_.columns = {"p", "energy", "residual", "iterations", "converged"};
    for (double pv : ps_) {
      DirichletProblem prob{g, interior, VertexFunction(std::vector<double>(data)), Exponent(pv)};
      auto sol = solve_dirichlet(prob, opts_);
      note(sol.report);
      report_.rows.push_back({pv, sol.report.energy, sol.report.residual,
                              static_cast<std::int64_t>(sol.report.iterations), sol.report.converged});
      std::vector<double> values(sol.f.values().begin(), sol.f.values().end());
      report_.summary["solution"][p_key(pv)] = values;
    }
  }

  void dirichlet_family() {
    const GraphFamily fam = family();
    const DirectionSpec dir = c_.plus.empty()
                                  ? (fam.is_lattice() ? DirectionSpec::positive() : DirectionSpec::branch(0))
                                  : DirectionSpec::parse(c_.plus);
    dir.check(fam);
    report_.columns = {"family", "p", "n", "energy", "residual", "iterations", "converged"};
    for (double pv : ps_) {
      for (int r : c_.radii) {
        const Ball ball = family_ball(fam, r);
        std::vector<double> data(ball.graph.vertex_count(), 0.0);
        for (Vertex x : ball.boundary) data[x] = dir.contains(ball, x) ? 1.0 : 0.0;
        DirichletProblem prob{ball.graph, ball.interior, VertexFunction(std::move(data)), Exponent(pv)};
        auto sol = solve_dirichlet(prob, opts_);
        note(sol.report);
        report_.rows.push_back({fam.label(), pv, std::int64_t{r}, sol.report.energy, sol.report.residual,
                                static_cast<std::int64_t>(sol.report.iterations), sol.report.converged});
      }
    }
  }

  void capacity_graph() {
    const Graph g = graph();
    auto [a, b] = plates(g);
    report_.columns = {"p", "cap", "residual", "no_admissible"};
    for (double pv : ps_) {
      auto res = capacity(g, Condenser{a, b, interior(g)}, Exponent(pv), opts_);
      note(res.report);
      report_.rows.push_back({pv, res.value, res.report.residual, res.no_admissible});
    }
  }

  void capacity_family() {
    const GraphFamily fam = family();
    report_.columns = {"family", "p", "n", "cap", "residual", "no_admissible"};
    for (double pv : ps_) {
      for (int r : c_.radii) {
        const Ball ball = family_ball(fam, r);
        const auto n = ball.graph.vertex_count();
        Condenser cond{VertexSet(n, {0}), ball.boundary, ball.interior};
        auto res = capacity(ball.graph, cond, Exponent(pv), opts_);
        note(res.report);
        report_.rows.push_back({fam.label(), pv, std::int64_t{r}, res.value, res.report.residual, res.no_admissible});
      }
    }
  }

  CapacitySequence sequence(const GraphFamily& fam, double pv) {
    const auto n = ball_size(fam, c_.radii.back() + 1);
    std::vector<Vertex> a(c_.plate_a.begin(), c_.plate_a.end());
    if (a.empty()) a = {0};
    auto seq = capacity_at_infinity(VertexSet(n, a), fam, c_.radii, Exponent(pv), opts_);
    for (const auto& pt : seq.points) converged_ = converged_ && pt.converged;
    return seq;
  }

  void capinf() {
    const GraphFamily fam = family();
    report_.columns = {"family", "p", "n", "cap", "residual"};
    for (double pv : ps_) {
      const auto seq = sequence(fam, pv);
      for (const auto& pt : seq.points) {
        report_.rows.push_back({seq.family, pv, std::int64_t{pt.radius}, pt.value, pt.residual});
      }
    }
  }

  void classify() {
    const GraphFamily fam = family();
    report_.columns = {"family", "p", "classification", "fitted_exponent", "last_value", "note"};
    for (double pv : ps_) {
      const auto seq = sequence(fam, pv);
      const auto v = classify_parabolicity(seq);
      report_.rows.push_back({seq.family, pv, to_string(v.classification), v.fitted_exponent, v.last_value, v.note});
      nlohmann::json caps = nlohmann::json::array();
      for (const auto& pt : seq.points) caps.push_back({{"n", pt.radius}, {"cap", pt.value}});
      report_.summary["sequences"][p_key(pv)] = caps;
    }
  }

  static Cell lambda_cell(const ExtremalResult& r) {
    if (r.infinite) return std::string("inf");
    return r.lambda;
  }

  void extremal_graph() {
    const Graph g = graph();
    auto [a, b] = plates(g);
    report_.columns = {"p", "lambda", "energy_lower", "energy_upper", "cuts", "active_paths"};
    for (double pv : ps_) {
      auto res = extremal_length(g, PathFamilySpec::plates(a, b, interior(g)), Exponent(pv));
      report_.rows.push_back({pv, lambda_cell(res), res.energy_lower, res.energy_upper,
                              static_cast<std::int64_t>(res.cuts), static_cast<std::int64_t>(res.active.size())});
    }
  }

  void extremal_family() {
    const GraphFamily fam = family();
    report_.columns = {"family", "p", "n", "lambda", "energy_lower", "energy_upper", "cuts"};
    for (double pv : ps_) {
      for (int r : c_.radii) {
        const Ball ball = family_ball(fam, r);
        auto res = extremal_length(ball.graph, PathFamilySpec::to_sphere(0, r), Exponent(pv));
        report_.rows.push_back({fam.label(), pv, std::int64_t{r}, lambda_cell(res), res.energy_lower,
                                res.energy_upper, static_cast<std::int64_t>(res.cuts)});
      }
    }
  }

  void decompose() {
    const GraphFamily fam = family();
    const Ball ball = family_ball(fam, c_.radii.back());
    const auto n = ball.graph.vertex_count();
    std::vector<double> f(n, 0.0);
    if (c_.function == "indicator") {
      f[0] = 1.0;
    } else {
      std::fill(f.begin(), f.end(), 1.0);
      if (c_.function == "bump") f[0] += 0.5;
    }
    const Exhaustion ex = build_exhaustion(fam, c_.radii);
    report_.columns = {"family", "p", "n", "sup_h", "drift", "energy_h", "energy_u", "converged"};
    for (double pv : ps_) {
      auto split = royden_decompose(ball.graph, VertexFunction(std::vector<double>(f)), ex, Exponent(pv), 1e-4, opts_);
      for (const auto& lv : split.levels) {
        note(lv.report);
        report_.rows.push_back({fam.label(), pv, std::int64_t{lv.radius}, lv.sup_h,
                                lv.drift ? Cell{*lv.drift} : Cell{}, lv.energy_h, lv.energy_u, lv.report.converged});
      }
    }
  }

  void probe() {
    const GraphFamily fam = family();
    const bool lattice = fam.is_lattice();
    const DirectionSpec plus =
        c_.plus.empty() ? (lattice ? DirectionSpec::positive() : DirectionSpec::branch(0)) : DirectionSpec::parse(c_.plus);
    if (c_.mode == "inner") {
      report_.columns = {"family", "p", "n", "sup_inner", "energy", "residual"};
      for (double pv : ps_) {
        auto res = inner_potential(plus, fam, c_.radii, Exponent(pv), opts_);
        converged_ = converged_ && res.converged;
        for (const auto& lv : res.levels) {
          report_.rows.push_back({fam.label(), pv, std::int64_t{lv.radius}, lv.sup_inner, lv.energy, lv.residual});
        }
        report_.summary["verdict"][p_key(pv)] = {{"verdict", to_string(res.verdict)},
                                                 {"sup_estimate", res.sup_estimate},
                                                 {"energy_bounded", res.energy_bounded}};
      }
      return;
    }
    const DirectionSpec minus = c_.minus.empty() ? (lattice ? DirectionSpec::negative() : DirectionSpec::branch(1))
                                                 : DirectionSpec::parse(c_.minus);
    report_.columns = {"family", "p", "n", "oscillation", "energy", "residual"};
    for (double pv : ps_) {
      auto res = bhd_probe(fam, plus, minus, c_.radii, Exponent(pv), opts_);
      converged_ = converged_ && res.converged;
      for (const auto& lv : res.levels) {
        report_.rows.push_back({fam.label(), pv, std::int64_t{lv.radius}, lv.oscillation, lv.energy, lv.residual});
      }
      report_.summary["verdict"][p_key(pv)] = {{"verdict", to_string(res.verdict)},
                                               {"oscillation", res.oscillation},
                                               {"energy_bounded", res.energy_bounded}};
    }
  }

  const RunConfig& c_;
  SolveOptions opts_;
  std::vector<double> ps_;
  Report report_;
  bool converged_ = true;
};

}  // namespace

RunOutcome execute(const RunConfig& config) {
  RunOutcome out;
  Runner runner(config);
  const auto start = std::chrono::steady_clock::now();
  try {
    runner.run();
    out.exit_code = runner.all_converged() ? 0 : 2;
    if (out.exit_code == 2) runner.report().error = "NotConverged: a solve stopped at the iteration limit";
  } catch (const Error& e) {
    out.exit_code = e.code() == ErrorCode::NotConverged ? 2 : 1;
    runner.report().error = e.what();
  }
  if (config.timing) {
    runner.report().wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  out.report = std::move(runner.report());
  out.bytes = emit_report(out.report, config.format);
  return out;
}

int run_cli(const std::vector<std::string>& tokens) {
  if (tokens.empty() || tokens[0] == "--help" || tokens[0] == "-h" || tokens[0] == "help") {
    std::cout << usage();
    return tokens.empty() ? 1 : 0;
  }
  RunConfig config;
  try {
    config = parse_args(tokens);
  } catch (const Error& e) {
    std::cerr << "royden: " << e.what() << "\n" << usage();
    return 1;
  }
  try {
    RunOutcome outcome = execute(config);
    if (config.out) {
      write_file(*config.out, outcome.bytes);
    } else {
      std::cout << outcome.bytes;
      std::cout.flush();
    }
    if (outcome.report.error) std::cerr << "royden: " << *outcome.report.error << "\n";
    return outcome.exit_code;
  } catch (const Error& e) {
    std::cerr << "royden: " << e.what() << "\n";
    return e.code() == ErrorCode::NotConverged ? 2 : 1;
  }
}

void configure_logging() {
  auto logger = spdlog::get("royden");
  if (!logger) logger = spdlog::stderr_logger_mt("royden");
  spdlog::set_default_logger(logger);
  const char* env = std::getenv("ROYDEN_LOG");
  const std::string level = env ? env : "";
  if (level == "off") {
    spdlog::set_level(spdlog::level::off);
  } else if (level == "info") {
    spdlog::set_level(spdlog::level::info);
  } else if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else {
    spdlog::set_level(spdlog::level::warn);
  }
}

}  // namespace royden
