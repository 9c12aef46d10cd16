#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "plgraph/barriers.hpp"
#include "plgraph/dirichlet.hpp"
#include "plgraph/error.hpp"
#include "plgraph/radial.hpp"

using namespace plgraph;

namespace {

PowerPotential tree_potential(double alpha) { return {1.0, alpha, Metric::combinatorial, std::nullopt}; }

DirichletProblem random_problem(const GraphBall& ball, std::mt19937& rng, double f_lo, double f_hi, double g_lo,
                                double g_hi) {
  std::uniform_real_distribution<double> v(0.0, 2.0), f(f_lo, f_hi), g(g_lo, g_hi);
  Field V(ball.size()), F(ball.interior_count()), G(ball.halo_count());
  for (std::size_t i = 0; i < V.size(); ++i) V[i] = v(rng);
  for (std::size_t i = 0; i < F.size(); ++i) F[i] = f(rng);
  for (std::size_t i = 0; i < G.size(); ++i) G[i] = g(rng);
  return DirichletProblem(ball, V, F, G);
}

}  // namespace

TEST_CASE("one-unknown systems assembled by hand") {
  SUBCASE("Z^1 with interior {0}") {
    const auto ball = build_lattice_ball({1, 1.0});
    REQUIRE(ball.interior_count() == 1);
    DirichletProblem p(ball, Field(ball.size(), 1.0), Field(1), Field(2, 1.0));
    const auto sys = assemble(p);
    CHECK(sys.n == 1);
    CHECK(sys.diagonal(0) == 4.0);
    CHECK(sys.rhs[0] == 2.0);
    const auto report = solve(p);
    CHECK(report.u[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(report.method == SolveMethod::direct);
  }
  SUBCASE("binary tree root") {
    const auto ball = build_tree_ball({Branching::constant(2), 0});
    DirichletProblem p(ball, Field(ball.size(), 1.0), Field(1), Field(2, 1.0));
    const auto sys = assemble(p);
    CHECK(sys.diagonal(0) == 3.0);
    CHECK(sys.rhs[0] == 2.0);
    CHECK(solve(p).u[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  }
}

TEST_CASE("assembled matrix is symmetric") {
  std::mt19937 rng(2);
  const auto ball = build_lattice_ball({2, 5.5});
  const auto sys = assemble(random_problem(ball, rng, -1, 1, -1, 1));
  for (std::size_t i = 0; i < sys.n; ++i) {
    CHECK(sys.columns[sys.row_offsets[i]] == i);
    for (std::size_t k = sys.row_offsets[i]; k < sys.row_offsets[i + 1]; ++k) {
      const std::size_t j = sys.columns[k];
      double back = 0.0;
      for (std::size_t m = sys.row_offsets[j]; m < sys.row_offsets[j + 1]; ++m) {
        if (sys.columns[m] == i) back = sys.values[m];
      }
      CHECK(back == sys.values[k]);
    }
  }
}

TEST_CASE("constant and zero data") {
  const auto ball = build_lattice_ball({3, 4.5});
  const auto c = solve(DirichletProblem(ball, Field(ball.size()), Field(ball.interior_count()), Field(ball.halo_count(), 2.5)));
  for (double v : c.u.values()) CHECK(v == doctest::Approx(2.5).epsilon(1e-11));
  const auto z = solve(DirichletProblem::constant(ball, {1.0, 1.0, Metric::euclidean, std::nullopt}, 0.0, 0.0));
  CHECK(z.u.max_abs() == 0.0);
  CHECK(z.converged);
}

TEST_CASE("CG and direct agree on a random Z^2 system of radius 6") {
  std::mt19937 rng(17);
  const auto ball = build_lattice_ball({2, 6.0});
  for (int trial = 0; trial < 5; ++trial) {
    const auto sys = assemble(random_problem(ball, rng, -1, 1, -1, 1));
    const auto cg = conjugate_gradient(sys, 1e-14, 10 * sys.n);
    const auto direct = direct_solve(sys);
    CHECK(cg.converged);
    for (std::size_t i = 0; i < sys.n; ++i) CHECK(std::abs(cg.x[i] - direct.x[i]) <= 1e-9);
    CHECK(relative_residual(sys, direct.x) <= 1e-12);
  }
}

TEST_CASE("solution satisfies the equation") {
  std::mt19937 rng(23);
  const auto ball = build_lattice_ball({3, 7.0});
  const auto p = random_problem(ball, rng, -1, 1, 0, 1);
  const auto report = solve(p);
  CHECK(report.method == SolveMethod::conjugate_gradient);
  CHECK(report.converged);
  CHECK(report.relative_residual <= 1e-12);
  CHECK(report.pde_residual <= 1e-9);
  CHECK(schrodinger_residual(ball, p.potential(), report.u, p.f()).max_abs() <= 1e-9);
}

TEST_CASE("a solve capped at one iteration reports non-convergence") {
  std::mt19937 rng(29);
  const auto ball = build_lattice_ball({3, 6.0});
  SolveOptions o;
  o.method = SolveMethod::conjugate_gradient;
  o.max_iterations = 1;
  const auto report = solve(random_problem(ball, rng, -1, 1, 0, 1), o);
  CHECK_FALSE(report.converged);
}

TEST_CASE("direct solve rejects an indefinite matrix") {
  LinearSystem sys;
  sys.n = 1;
  sys.row_offsets = {0, 1};
  sys.columns = {0};
  sys.values = {-1.0};
  sys.rhs = {1.0};
  CHECK_THROWS_AS(direct_solve(sys), SolverError);
}

TEST_CASE("weak maximum principle and boundedness") {
  std::mt19937 rng(31);
  for (const auto& ball : {build_lattice_ball({2, 5.5}), build_tree_ball({Branching::constant(2), 5})}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto p = random_problem(ball, rng, -1.0, 0.0, 0.0, 1.0);
      const auto report = solve(p);
      CHECK(report.min_u >= -1e-9 * comparison_scale(p, report.u));

      DirichletProblem homogeneous(ball, p.potential(), Field(ball.interior_count()), p.g());
      const auto h = solve(homogeneous);
      CHECK(h.min_u >= -1e-9);
      CHECK(h.max_u <= p.g().max() + 1e-9);
    }
  }
}

TEST_CASE("comparison check") {
  std::mt19937 rng(37);
  const auto ball = build_lattice_ball({3, 4.5});
  const auto p = random_problem(ball, rng, -1.0, 0.0, 0.0, 1.0);
  const auto u = solve(p).u;
  CHECK(comparison_check(p, u, u).pass);
  CHECK(comparison_check(p, Field(ball.size()), u).pass);
  CHECK_THROWS_AS(comparison_check(p, u, Field(ball.size())), ClassificationError);
  Field bigger = u;
  bigger[ball.size() - 1] += 1.0;  // breaks the halo ordering
  CHECK_THROWS_AS(comparison_check(p, bigger, u), ClassificationError);
}

TEST_CASE("zero lies below a scaled shifted barrier") {
  const auto ball = build_tree_ball({Branching::constant(2), 6});
  const auto V = tree_potential(1.0);
  BarrierSpec spec;
  spec.family = BarrierFamily::tree_log;
  spec.params.alpha = 1.0;
  spec.params.M = 0.1;
  REQUIRE(verify(spec, VerificationDomain::on_ball(ball, V)).pass);
  const auto Z = evaluate(spec, ball);
  const auto zbar = shift(Z, Z.max());
  const auto p = DirichletProblem::constant(ball, V, 0.0, 0.0);
  for (double a : {0.01, 1.0, 5.0}) {
    Field upper(ball.size());
    for (std::size_t i = 0; i < upper.size(); ++i) upper[i] = -a * zbar[i];
    CHECK(upper.min() >= a);
    CHECK(comparison_check(p, Field(ball.size()), upper).pass);
  }
}

TEST_CASE("certificate on a small tree") {
  const auto ball = build_tree_ball({Branching::constant(2), 6});
  const auto V = tree_potential(1.0).evaluate(ball);
  BarrierSpec spec;
  spec.family = BarrierFamily::tree_log;
  spec.params.alpha = 1.0;
  spec.params.M = 0.1;
  const auto Z = evaluate(spec, ball);
  const std::vector<double> schedule{1.0, 0.1, 0.01};

  SUBCASE("u = 0 passes every alpha") {
    const auto r = pl_certificate(ball, V, Field(ball.size()), Z, schedule);
    CHECK(r.all_passed);
    CHECK(r.growth_condition_met);
    CHECK(r.smallest_alpha == 0.01);
    CHECK(r.max_ratio == 0.0);
    CHECK(r.shift_H == Z.max());
  }
  SUBCASE("u = -Z_bar fails the halo hypothesis") {
    const auto zbar = shift(Z, Z.max());
    Field u(ball.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = -zbar[i];
    const std::vector<double> below_one{0.5, 0.1};
    const auto r = pl_certificate(ball, V, u, Z, below_one);
    CHECK_FALSE(r.growth_condition_met);
    CHECK_FALSE(r.all_passed);
    for (const auto& s : r.steps) CHECK_FALSE(s.halo_ok);
  }
}

TEST_CASE("radial certificate on the binary tree of radius 50") {
  const std::size_t R = 50;
  const auto geometry = tree_profile(Branching::constant(2), R);
  const auto V = radial_potential(tree_potential(1.0), R);
  const auto u = radial_dirichlet_solve(geometry, V, std::vector<double>(R + 1, 0.0), -1.0);

  const auto domain = VerificationDomain::tree(Branching::constant(2), R, tree_potential(1.0));
  BarrierSpec spec;
  spec.family = BarrierFamily::tree_log;
  spec.params.alpha = 1.0;
  SearchOptions o;
  o.which = SearchParameter::M;
  const auto found = search_parameter(spec, domain, o);
  REQUIRE(found.feasible);
  spec.params.M = found.value;
  const auto Z = evaluate_radial(spec, R);

  const std::vector<double> schedule{1.0, 0.1, 0.01};
  const auto r = pl_certificate_radial(geometry, V, u.values, Z, schedule);
  CHECK(r.all_passed);
  CHECK(r.smallest_alpha == 0.01);
  CHECK(r.max_ratio <= 0.01);
  CHECK(r.radius == 51.0);
}

TEST_CASE("nested lattice balls give monotone solutions") {
  const PowerPotential V{1.0, 1.0, Metric::euclidean, std::nullopt};
  const auto small = build_lattice_ball({2, 5.0});
  const auto large = build_lattice_ball({2, 9.0});
  const auto us = solve(DirichletProblem::constant(small, V, 0.0, 1.0)).u;
  const auto ul = solve(DirichletProblem::constant(large, V, 0.0, 1.0)).u;
  for (Vertex v = 0; v < small.interior_count(); ++v) {
    const auto w = large.find(small.label(v));
    REQUIRE(w.has_value());
    CHECK(ul[*w] <= us[v] + 1e-10);
  }
}

TEST_CASE("problem input checks") {
  const auto ball = build_lattice_ball({1, 2.5});
  CHECK_THROWS_AS(DirichletProblem(ball, Field(ball.size()), Field(1), Field(ball.halo_count())), DomainError);
  CHECK_THROWS_AS(pl_certificate(ball, Field(1), Field(1), Field(1), std::vector<double>{1.0}), DomainError);
}
