#include <doctest.h>

#include <cmath>
#include <vector>

#include "plgraph/error.hpp"
#include "plgraph/experiments.hpp"
#include "plgraph/radial.hpp"

using namespace plgraph;

TEST_CASE("zero boundary gives the zero solution at every radius") {
  ExhaustionConfig cfg;
  cfg.graph = LatticeFamily{3};
  cfg.potential = {1.0, 3.0, Metric::euclidean, std::nullopt};
  cfg.gamma = 0.0;
  cfg.radii = {3, 5, 7};
  const auto table = exhaustion_run(cfg);
  REQUIRE(table.rows.size() == 3);
  for (const auto& row : table.rows) {
    CHECK(row.u_probe == 0.0);
    CHECK(row.min_u == 0.0);
    CHECK(row.max_u == 0.0);
  }
  CHECK(table.monotone);
}

TEST_CASE("lattice exhaustion is monotone with one row per radius and probe") {
  ExhaustionConfig cfg;
  cfg.graph = LatticeFamily{3};
  cfg.potential = {1.0, 3.0, Metric::euclidean, std::nullopt};
  cfg.radii = {4, 8, 12};
  cfg.probes = {{0, 0, 0}, {1, 0, 0}};
  const auto table = exhaustion_run(cfg);
  REQUIRE(table.rows.size() == 6);
  CHECK(table.rows[0].probe_id == "0:0:0");
  CHECK(table.rows[1].probe_id == "1:0:0");
  CHECK_FALSE(table.rows[0].delta_prev.has_value());
  for (std::size_t k = 2; k < table.rows.size(); ++k) {
    REQUIRE(table.rows[k].delta_prev.has_value());
    CHECK(*table.rows[k].delta_prev <= 0.0);
  }
  CHECK(table.monotone);
  CHECK(table.rows[1].u_probe > table.rows[0].u_probe);  // closer to the halo
}

TEST_CASE("tree exhaustion matches the radial solve and converges for p = 2") {
  ExhaustionConfig cfg;
  cfg.graph = TreeFamily{Branching::power(2)};
  cfg.potential = {1.0, 1.0, Metric::combinatorial, std::nullopt};
  cfg.radii = {100, 1000, 10000};
  const auto table = exhaustion_run(cfg);
  REQUIRE(table.rows.size() == 3);
  CHECK(table.monotone);
  CHECK(table.converged);
  REQUIRE(table.limit.has_value());
  CHECK(*table.limit > 0.36);
  const auto V = radial_potential(cfg.potential, 100);
  const auto u = radial_dirichlet_solve(tree_profile(Branching::power(2), 100), V, std::vector<double>(101, 0.0), 1.0);
  CHECK(table.rows[0].u_probe == u.values[0]);
}

TEST_CASE("exhaustion input checks") {
  ExhaustionConfig cfg;
  cfg.radii = {5, 5};
  CHECK_THROWS_AS(exhaustion_run(cfg), DomainError);
  cfg.radii = {};
  CHECK_THROWS_AS(exhaustion_run(cfg), DomainError);
  cfg.radii = {3};
  cfg.probes = {{9, 9, 9}};
  CHECK_THROWS_AS(exhaustion_run(cfg), DomainError);
  cfg.graph = TreeFamily{Branching::constant(2)};
  cfg.radii = {2.5};
  cfg.probes = {};
  CHECK_THROWS_AS(exhaustion_run(cfg), DomainError);
}

TEST_CASE("tree phase sweep classification") {
  PhaseSweepConfig cfg;
  cfg.branchings = {Branching::constant(2), Branching::power(2)};
  cfg.alphas = {1.0, 2.0};
  const auto cells = tree_phase_sweep(cfg);
  REQUIRE(cells.size() == 4);
  CHECK(cells[0].regime == Regime::unique_evidence);     // b0 = 2, alpha = 1
  CHECK(cells[1].regime == Regime::nonunique_evidence);  // b0 = 2, alpha = 2
  CHECK(cells[2].regime == Regime::nonunique_evidence);  // (r+1)^2, alpha = 1
  CHECK(cells[0].probe_values.size() == 3);
  for (std::size_t k = 1; k < 3; ++k) CHECK(cells[0].probe_values[k] < cells[0].probe_values[k - 1]);
  CHECK(cells[2].probe_values[1] > cfg.threshold);
  CHECK(std::string(to_string(Regime::inconclusive)) == "inconclusive");
}

TEST_CASE("a still-flat small value is inconclusive") {
  PhaseSweepConfig cfg;
  cfg.branchings = {Branching::constant(1)};
  cfg.alphas = {0.0};
  cfg.radii = {20};
  cfg.threshold = 1e-3;
  const auto cells = tree_phase_sweep(cfg);
  REQUIRE(cells.size() == 1);
  // The path with V = 1 damps quickly; one radius cannot show decay.
  CHECK(cells[0].regime == Regime::inconclusive);
}

TEST_CASE("growth ratios") {
  BarrierSpec gauge;
  gauge.family = BarrierFamily::growth_gauge;
  gauge.params.alpha = 1.0;

  SUBCASE("u = 0") {
    const std::vector<double> u(12, 0.0);
    for (const auto& g : growth_ratio_profile(u, gauge)) CHECK(g.ratio == 0.0);
  }
  SUBCASE("u = -gauge") {
    const auto z = evaluate_radial(gauge, 20);
    std::vector<double> u(z.size());
    for (std::size_t r = 0; r < z.size(); ++r) u[r] = -z[r];
    for (const auto& g : growth_ratio_profile(u, gauge)) CHECK(g.ratio == doctest::Approx(1.0));
  }
  SUBCASE("bounded exhaustion solution decays like 1/log r") {
    const std::size_t R = 10000;
    const auto V = radial_potential({1.0, 1.0, Metric::combinatorial, std::nullopt}, R);
    const auto u = radial_dirichlet_solve(tree_profile(Branching::constant(2), R), V, std::vector<double>(R + 1, 0.0), 1.0);
    const auto ratios = growth_ratio_profile(u.values, gauge);
    for (std::size_t r = 3; r < ratios.size(); ++r) CHECK(ratios[r].ratio <= 1.0 / std::log(static_cast<double>(r)) + 1e-12);
  }
  SUBCASE("whole-ball version groups vertices by distance") {
    const auto ball = build_lattice_ball({2, 4.5});
    BarrierSpec lat = gauge;
    lat.params.alpha = 2.0;
    const auto ratios = growth_ratio_profile(ball, Field(ball.size(), 0.0), lat);
    CHECK(ratios.front().distance == 0.0);
    for (std::size_t k = 1; k < ratios.size(); ++k) CHECK(ratios[k].distance > ratios[k - 1].distance);
  }
}
