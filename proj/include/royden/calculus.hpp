#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "royden/graph.hpp"

namespace royden {

/// Exponent p > 1 together with its conjugate q = p / (p - 1).
class Exponent {
 public:
  explicit Exponent(double p);

  double p() const { return p_; }
  double q() const { return q_; }
  bool is_two() const { return p_ == 2.0; }

 private:
  double p_;
  double q_;
};

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// |t|^p
inline double abs_pow(double t, double p) { return t == 0.0 ? 0.0 : std::pow(std::abs(t), p); }

/// |t|^{p-2} t, written as sign(t)|t|^{p-1}; exactly 0 at t = 0 for every p.
inline double signed_pow(double t, double p) {
  if (t == 0.0) return 0.0;
  const double m = std::pow(std::abs(t), p - 1.0);
  return t > 0.0 ? m : -m;
}

/// Real-valued function on a subset of the vertices of a graph. Values are
/// kept densely over the whole vertex range with a definedness mask.
class VertexFunction {
 public:
  VertexFunction() = default;
  /// Empty domain over a graph with `universe` vertices.
  explicit VertexFunction(std::size_t universe);
  /// Defined everywhere.
  explicit VertexFunction(std::vector<double> values);

  static VertexFunction constant(std::size_t universe, double c);
  static VertexFunction indicator(std::size_t universe, const VertexSet& support);

  std::size_t universe() const { return values_.size(); }
  bool defined(Vertex x) const { return x >= 0 && static_cast<std::size_t>(x) < values_.size() && defined_[x]; }
  /// Throws MissingValue when x is outside the domain.
  double operator()(Vertex x) const;
  /// Throws NonFiniteValue for NaN or infinite values.
  void set(Vertex x, double value);
  void erase(Vertex x);

  VertexSet domain() const;
  bool defined_on(const VertexSet& s) const;
  bool total() const;
  /// Raw storage; entries outside the domain are 0.
  std::span<const double> values() const { return values_; }

  /// Pointwise sum/difference on the common domain; domains must match.
  friend VertexFunction operator+(const VertexFunction& a, const VertexFunction& b);
  friend VertexFunction operator-(const VertexFunction& a, const VertexFunction& b);
  VertexFunction scaled(double lambda, double shift = 0.0) const;

 private:
  std::vector<double> values_;
  std::vector<char> defined_;
};

/// Σ_{y ∈ N_x} |f(y) - f(x)|^p
double gradient_p(const Graph& g, const VertexFunction& f, Vertex x, const Exponent& p);

/// I_p(f, S) = Σ_{x ∈ S} gradient_p(f, x). Counts an edge inside S twice and
/// an edge from S to ∂S once.
double dirichlet_sum(const Graph& g, const VertexFunction& f, const VertexSet& s, const Exponent& p);

/// Σ_{y ∈ N_x} |f(y) - f(x)|^{p-2}(f(y) - f(x)); terms with f(y) = f(x) are 0.
double p_laplacian(const Graph& g, const VertexFunction& f, Vertex x, const Exponent& p);

/// ⟨Δ_p h, f⟩ = Σ_x Σ_{y ∈ N_x} |h(y)-h(x)|^{p-2}(h(y)-h(x))(f(y)-f(x)).
double pairing(const Graph& g, const VertexFunction& h, const VertexFunction& f, const Exponent& p);

/// Σ over undirected edges of |f(y) - f(x)|^p.
double edge_energy(const Graph& g, const VertexFunction& f, const Exponent& p);

/// Edge energy restricted to edges with at least one endpoint in s.
double edge_energy(const Graph& g, const VertexFunction& f, const VertexSet& s, const Exponent& p);

enum class NormKind { Dp, BDp };

/// Dp:  (I_p(f, V) + |f(o)|^p)^{1/p}
/// BDp: I_p(f, V)^{1/p} + sup_V |f|
double norm(const Graph& g, const VertexFunction& f, Vertex o, const Exponent& p, NormKind kind);

}  // namespace royden
