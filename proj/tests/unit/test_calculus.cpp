#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "royden/calculus.hpp"
#include "royden/random_graph.hpp"

using namespace royden;
using testing::error_of;

TEST_CASE("exponent and conjugate") {
  CHECK(Exponent(2.0).q() == doctest::Approx(2.0));
  CHECK(Exponent(3.0).q() == doctest::Approx(1.5));
  CHECK(Exponent(1.5).q() == doctest::Approx(3.0));
  CHECK(Exponent(2.0).is_two());
  CHECK(error_of([] { Exponent(1.0); }) == ErrorCode::InvalidExponent);
  CHECK(error_of([] { Exponent(0.5); }) == ErrorCode::InvalidExponent);
  CHECK(error_of([] { Exponent(std::nan("")); }) == ErrorCode::InvalidExponent);
}

TEST_CASE("vertex functions track their domain") {
  VertexFunction f(4);
  CHECK_FALSE(f.total());
  f.set(1, 2.5);
  CHECK(f(1) == 2.5);
  CHECK(f.domain() == VertexSet(4, {1}));
  CHECK(error_of([&] { f(0); }) == ErrorCode::MissingValue);
  CHECK(error_of([&] { f.set(0, INFINITY); }) == ErrorCode::NonFiniteValue);
  f.erase(1);
  CHECK(f.domain().empty());
  auto c = VertexFunction::constant(3, 2.0);
  auto ind = VertexFunction::indicator(3, VertexSet(3, {1}));
  auto sum = c + ind;
  CHECK(sum(1) == 3.0);
  CHECK((sum - c)(0) == 0.0);
  CHECK(c.scaled(2.0, 1.0)(2) == 5.0);
  CHECK(error_of([&] { c + VertexFunction::constant(4, 1.0); }) == ErrorCode::DomainMismatch);
}

TEST_CASE("p-Laplacian on hand examples") {
  auto g = testing::path_graph(2);  // 0-1-2
  VertexFunction f(std::vector<double>{0.0, 1.0, 3.0});
  // Δ_p f(1) = |−1|^{p−2}(−1) + |2|^{p−2}·2
  CHECK(p_laplacian(g, f, 1, Exponent(2.0)) == doctest::Approx(1.0));
  CHECK(p_laplacian(g, f, 1, Exponent(3.0)) == doctest::Approx(-1.0 + 4.0));
  CHECK(p_laplacian(g, f, 1, Exponent(1.5)) == doctest::Approx(-1.0 + std::sqrt(2.0)));
  // Zero differences contribute exactly 0, also for p < 2.
  VertexFunction flat(std::vector<double>{1.0, 1.0, 1.0});
  CHECK(p_laplacian(g, flat, 1, Exponent(1.2)) == 0.0);
  // Spike on Z: indicator of an interior vertex has |Δ_p| = 2.
  VertexFunction spike(std::vector<double>{0.0, 1.0, 0.0});
  CHECK(std::abs(p_laplacian(g, spike, 1, Exponent(3.0))) == doctest::Approx(2.0));
  CHECK(gradient_p(g, f, 1, Exponent(2.0)) == doctest::Approx(5.0));
}

TEST_CASE("energies, pairing and norms on a triangle") {
  auto g = testing::cycle_graph(3);
  VertexFunction f(std::vector<double>{0.0, 1.0, 3.0});
  const Exponent p2(2.0);
  // Edge differences 1, 2, 3.
  CHECK(edge_energy(g, f, p2) == doctest::Approx(14.0));
  CHECK(dirichlet_sum(g, f, VertexSet::all(3), p2) == doctest::Approx(28.0));
  CHECK(dirichlet_sum(g, f, VertexSet(3, {0}), p2) == doctest::Approx(1.0 + 9.0));
  CHECK(edge_energy(g, f, VertexSet(3, {0}), p2) == doctest::Approx(10.0));
  CHECK(pairing(g, f, f, p2) == doctest::Approx(28.0));
  CHECK(norm(g, f, 0, p2, NormKind::Dp) == doctest::Approx(std::sqrt(28.0)));
  CHECK(norm(g, f, 1, p2, NormKind::Dp) == doctest::Approx(std::sqrt(29.0)));
  CHECK(norm(g, f, 0, p2, NormKind::BDp) == doctest::Approx(std::sqrt(28.0) + 3.0));
  VertexFunction partial(3);
  partial.set(0, 1.0);
  CHECK(error_of([&] { pairing(g, partial, f, p2); }) == ErrorCode::MissingValue);
}

TEST_CASE("pairing(h,h) = I_p(h,V) = 2 edge energy on random instances") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 5 + rng() % 20;
    const std::size_t m = n - 1 + rng() % (n);
    auto g = random_connected_graph(n, std::min(m, n * (n - 1) / 2), rng());
    std::vector<double> vals(n);
    for (auto& v : vals) v = static_cast<double>(rng() % 2001) / 1000.0 - 1.0;
    VertexFunction f(vals);
    const Exponent p(1.1 + static_cast<double>(rng() % 300) / 100.0);
    const double ip = dirichlet_sum(g, f, VertexSet::all(n), p);
    CHECK(pairing(g, f, f, p) == doctest::Approx(ip).epsilon(1e-12));
    CHECK(2.0 * edge_energy(g, f, p) == doctest::Approx(ip).epsilon(1e-12));
  }
}

TEST_CASE("compensated summation recovers small terms") {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000; ++i) s.add(1e-16);
  s.add(-1.0);
  CHECK(s.value() == doctest::Approx(1e-13).epsilon(1e-6));
  CHECK(signed_pow(-2.0, 3.0) == doctest::Approx(-4.0));
  CHECK(signed_pow(0.0, 1.2) == 0.0);
  CHECK(abs_pow(-2.0, 3.0) == doctest::Approx(8.0));
}
