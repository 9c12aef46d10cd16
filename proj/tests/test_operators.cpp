#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "plgraph/error.hpp"
#include "plgraph/operators.hpp"

using namespace plgraph;

namespace {

Field random_field(std::size_t n, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Field f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = u(rng);
  return f;
}

}  // namespace

TEST_CASE("Laplacian of a constant vanishes") {
  for (const auto& ball : {build_tree_ball({Branching::constant(3), 3}), build_lattice_ball({2, 4.5})}) {
    const auto lap = laplacian(ball, Field(ball.size(), 3.25));
    CHECK(lap.size() == ball.interior_count());
    CHECK(lap.max_abs() == 0.0);
  }
}

TEST_CASE("Laplacian hand values") {
  SUBCASE("x^2 on Z^1 at the origin") {
    const auto ball = build_lattice_ball({1, 3.0});
    Field f(ball.size());
    for (Vertex v = 0; v < ball.size(); ++v) f[v] = static_cast<double>(ball.norm2(v));
    const std::vector<std::int64_t> origin{0};
    CHECK(laplacian_at(ball, f.values(), *ball.find(origin)) == 1.0);
  }
  SUBCASE("f = r on the binary tree at the root") {
    const auto ball = build_tree_ball({Branching::constant(2), 2});
    Field f(ball.size());
    for (Vertex v = 0; v < ball.size(); ++v) f[v] = ball.layer(v);
    CHECK(laplacian_at(ball, f.values(), 0) == 2.0);
  }
}

TEST_CASE("Laplacian rejects halo vertices") {
  const auto ball = build_lattice_ball({1, 2.5});
  const Field f(ball.size());
  CHECK_THROWS_AS(laplacian_at(ball, f.values(), static_cast<Vertex>(ball.size() - 1)), DomainError);
  CHECK_THROWS_AS(laplacian(ball, Field(3)), DomainError);
}

TEST_CASE("Schrodinger residual examples") {
  const auto ball = build_lattice_ball({2, 3.5});
  const Field zero_in(ball.interior_count());
  CHECK(schrodinger_residual(ball, Field(ball.size(), 1.0), Field(ball.size()), zero_in).max_abs() == 0.0);
  const auto r = schrodinger_residual(ball, Field(ball.size(), 1.0), Field(ball.size(), 1.0), zero_in);
  CHECK(r.min() == -1.0);
  CHECK(r.max() == -1.0);
  CHECK(classify(r) == Classification::supersolution);
}

TEST_CASE("classification") {
  const std::vector<double> zero(4, 0.0), minus(4, -1.0), plus(4, 1.0), mixed{-1.0, 1.0};
  CHECK(classify(zero) == Classification::solution);
  CHECK(classify(minus, 1e-9) == Classification::supersolution);
  CHECK(classify(plus) == Classification::subsolution);
  CHECK(classify(mixed) == Classification::neither);
  const std::vector<double> tiny{-5e-10, 5e-10};
  CHECK(classify(tiny, 1e-9) == Classification::solution);
  CHECK(classify(tiny, 1e-10) == Classification::neither);
  CHECK(is_subsolution(Classification::solution));
  CHECK_FALSE(is_supersolution(Classification::subsolution));
}

TEST_CASE("power potential is positive and uses the right distance") {
  const PowerPotential tree_v{2.0, 1.0, Metric::combinatorial, std::nullopt};
  const auto tree = build_tree_ball({Branching::constant(2), 3});
  const auto Vt = tree_v.evaluate(tree);
  for (Vertex v = 0; v < tree.size(); ++v) CHECK(Vt[v] == doctest::Approx(2.0 / (1.0 + tree.layer(v))));

  const PowerPotential lat_v{1.0, 3.0, Metric::euclidean, std::nullopt};
  const auto lat = build_lattice_ball({3, 8.0});
  const auto Vl = lat_v.evaluate(lat);
  CHECK(Vl.min() > 0.0);
  for (Vertex v = 0; v < lat.size(); ++v) CHECK(Vl[v] == doctest::Approx(std::pow(1.0 + lat.distance(v), -3.0)));

  const PowerPotential floored{1.0, 1.0, Metric::combinatorial, 0.25};
  CHECK(floored.at_distance(10.0) == 0.25);
  CHECK_THROWS_AS(lat_v.evaluate(tree), DomainError);
}

TEST_CASE("residual is linear in (u, f)") {
  std::mt19937 rng(11);
  const auto ball = build_lattice_ball({3, 4.0});
  const auto V = PowerPotential{1.0, 1.0, Metric::euclidean, std::nullopt}.evaluate(ball);
  for (int trial = 0; trial < 10; ++trial) {
    const auto u1 = random_field(ball.size(), rng), u2 = random_field(ball.size(), rng);
    const auto f1 = random_field(ball.interior_count(), rng), f2 = random_field(ball.interior_count(), rng);
    const double a = 1.7, b = -0.3;
    Field u(ball.size()), f(ball.interior_count());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = a * u1[i] + b * u2[i];
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = a * f1[i] + b * f2[i];
    const auto r = schrodinger_residual(ball, V, u, f);
    const auto r1 = schrodinger_residual(ball, V, u1, f1), r2 = schrodinger_residual(ball, V, u2, f2);
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double expect = a * r1[i] + b * r2[i];
      CHECK(std::abs(r[i] - expect) <= 1e-12 * std::max(1.0, std::abs(expect)));
    }
  }
}

TEST_CASE("discrete Green identity") {
  std::mt19937 rng(5);
  for (const auto& ball : {build_lattice_ball({2, 7.5}), build_tree_ball({Branching::constant(2), 5})}) {
    // Support strictly inside: zero on interior vertices adjacent to the halo.
    std::vector<char> inner(ball.size(), 0);
    for (Vertex v = 0; v < ball.interior_count(); ++v) {
      inner[v] = 1;
      for (Vertex y : ball.neighbors(v)) {
        if (!ball.is_interior(y)) inner[v] = 0;
      }
    }
    auto phi = random_field(ball.size(), rng), psi = random_field(ball.size(), rng);
    for (Vertex v = 0; v < ball.size(); ++v) {
      if (!inner[v]) phi[v] = psi[v] = 0.0;
    }
    const auto lap = laplacian(ball, phi);
    double lhs = 0.0, rhs = 0.0;
    for (Vertex x = 0; x < ball.interior_count(); ++x) lhs += ball.mu(x) * lap[x] * psi[x];
    for (Vertex x = 0; x < ball.size(); ++x) {
      const auto nb = ball.neighbors(x);
      const auto w = ball.weights(x);
      for (std::size_t k = 0; k < nb.size(); ++k) rhs += w[k] * (phi[nb[k]] - phi[x]) * (psi[nb[k]] - psi[x]);
    }
    rhs *= -0.5;
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
  }
}
