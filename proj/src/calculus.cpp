#include "royden/calculus.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "royden/error.hpp"

namespace royden {

Exponent::Exponent(double p) : p_(p), q_(0.0) {
  if (!std::isfinite(p) || !(p > 1.0)) throw Error(ErrorCode::InvalidExponent, fmt::format("p = {} must exceed 1", p));
  q_ = p / (p - 1.0);
}

VertexFunction::VertexFunction(std::size_t universe) : values_(universe, 0.0), defined_(universe, 0) {}

VertexFunction::VertexFunction(std::vector<double> values) : values_(std::move(values)), defined_(values_.size(), 1) {
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, "vertex function values must be finite");
  }
}

VertexFunction VertexFunction::constant(std::size_t universe, double c) {
  return VertexFunction(std::vector<double>(universe, c));
}

VertexFunction VertexFunction::indicator(std::size_t universe, const VertexSet& support) {
  std::vector<double> v(universe, 0.0);
  for (Vertex x : support) v[x] = 1.0;
  return VertexFunction(std::move(v));
}

double VertexFunction::operator()(Vertex x) const {
  if (!defined(x)) throw Error(ErrorCode::MissingValue, fmt::format("no value at vertex {}", x));
  return values_[x];
}

void VertexFunction::set(Vertex x, double value) {
  if (x < 0 || static_cast<std::size_t>(x) >= values_.size()) {
    throw Error(ErrorCode::InvalidVertex, fmt::format("vertex {} outside function universe", x));
  }
  if (!std::isfinite(value)) throw Error(ErrorCode::NonFiniteValue, fmt::format("non-finite value at vertex {}", x));
  values_[x] = value;
  defined_[x] = 1;
}

void VertexFunction::erase(Vertex x) {
  if (defined(x)) {
    values_[x] = 0.0;
    defined_[x] = 0;
  }
}

VertexSet VertexFunction::domain() const { return VertexSet::from_mask(defined_); }

bool VertexFunction::defined_on(const VertexSet& s) const {
  return std::all_of(s.begin(), s.end(), [&](Vertex x) { return defined(x); });
}

bool VertexFunction::total() const {
  return std::all_of(defined_.begin(), defined_.end(), [](char c) { return c != 0; });
}

namespace {

VertexFunction combine(const VertexFunction& a, const VertexFunction& b, double sign) {
  if (a.universe() != b.universe() || a.domain() != b.domain()) {
    throw Error(ErrorCode::DomainMismatch, "functions have different domains");
  }
  VertexFunction out(a.universe());
  for (std::size_t x = 0; x < a.universe(); ++x) {
    const auto v = static_cast<Vertex>(x);
    if (a.defined(v)) out.set(v, a.values()[x] + sign * b.values()[x]);
  }
  return out;
}

void require_graph(const Graph& g, const VertexFunction& f) {
  if (f.universe() != g.vertex_count()) throw Error(ErrorCode::DomainMismatch, "function does not live on this graph");
}

}  // namespace

VertexFunction operator+(const VertexFunction& a, const VertexFunction& b) { return combine(a, b, 1.0); }
VertexFunction operator-(const VertexFunction& a, const VertexFunction& b) { return combine(a, b, -1.0); }

VertexFunction VertexFunction::scaled(double lambda, double shift) const {
  VertexFunction out(universe());
  for (std::size_t x = 0; x < universe(); ++x) {
    const auto v = static_cast<Vertex>(x);
    if (defined(v)) out.set(v, lambda * values_[x] + shift);
  }
  return out;
}

double gradient_p(const Graph& g, const VertexFunction& f, Vertex x, const Exponent& p) {
  require_graph(g, f);
  const double fx = f(x);
  CompensatedSum sum;
  for (Vertex y : g.neighbors(x)) sum.add(abs_pow(f(y) - fx, p.p()));
  return sum.value();
}

double dirichlet_sum(const Graph& g, const VertexFunction& f, const VertexSet& s, const Exponent& p) {
  require_graph(g, f);
  CompensatedSum sum;
  for (Vertex x : s) {
    const double fx = f(x);
    for (Vertex y : g.neighbors(x)) sum.add(abs_pow(f(y) - fx, p.p()));
  }
  return sum.value();
}

double p_laplacian(const Graph& g, const VertexFunction& f, Vertex x, const Exponent& p) {
  require_graph(g, f);
  const double fx = f(x);
  CompensatedSum sum;
  for (Vertex y : g.neighbors(x)) {
    const double fy = f(y);
    if (fy != fx) sum.add(signed_pow(fy - fx, p.p()));
  }
  return sum.value();
}

double pairing(const Graph& g, const VertexFunction& h, const VertexFunction& f, const Exponent& p) {
  require_graph(g, h);
  require_graph(g, f);
  if (!h.total() || !f.total()) throw Error(ErrorCode::MissingValue, "pairing needs functions defined on all of V");
  CompensatedSum sum;
  for (std::size_t xi = 0; xi < g.vertex_count(); ++xi) {
    const auto x = static_cast<Vertex>(xi);
    const double hx = h(x);
    const double fx = f(x);
    for (Vertex y : g.neighbors(x)) {
      const double dh = h(y) - hx;
      if (dh != 0.0) sum.add(signed_pow(dh, p.p()) * (f(y) - fx));
    }
  }
  return sum.value();
}

double edge_energy(const Graph& g, const VertexFunction& f, const Exponent& p) {
  require_graph(g, f);
  CompensatedSum sum;
  for (const auto& e : g.edges()) sum.add(abs_pow(f(e.second) - f(e.first), p.p()));
  return sum.value();
}

double edge_energy(const Graph& g, const VertexFunction& f, const VertexSet& s, const Exponent& p) {
  require_graph(g, f);
  const auto in = s.mask();
  CompensatedSum sum;
  for (const auto& e : g.edges()) {
    if (in[e.first] || in[e.second]) sum.add(abs_pow(f(e.second) - f(e.first), p.p()));
  }
  return sum.value();
}

double norm(const Graph& g, const VertexFunction& f, Vertex o, const Exponent& p, NormKind kind) {
  require_graph(g, f);
  const double energy = dirichlet_sum(g, f, VertexSet::all(g.vertex_count()), p);
  if (kind == NormKind::Dp) return std::pow(energy + abs_pow(f(o), p.p()), 1.0 / p.p());
  double sup = 0.0;
  for (std::size_t x = 0; x < g.vertex_count(); ++x) sup = std::max(sup, std::abs(f(static_cast<Vertex>(x))));
  return std::pow(energy, 1.0 / p.p()) + sup;
}

}  // namespace royden
