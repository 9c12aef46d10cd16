#include <benchmark/benchmark.h>

#include <vector>

#include "plgraph/dirichlet.hpp"
#include "plgraph/graph_ball.hpp"
#include "plgraph/radial.hpp"

using namespace plgraph;

static void BM_LatticeBuild(benchmark::State& state) {
  const LatticeSpec spec{3, static_cast<double>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(build_lattice_ball(spec));
}
BENCHMARK(BM_LatticeBuild)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_TreeBuild(benchmark::State& state) {
  const TreeSpec spec{Branching::constant(2), static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(build_tree_ball(spec));
}
BENCHMARK(BM_TreeBuild)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

// CG on the Z^3 ball, alpha = 3 potential, unit boundary.
static void BM_LatticeCG(benchmark::State& state) {
  const auto ball = build_lattice_ball({3, static_cast<double>(state.range(0))});
  const auto problem = DirichletProblem::constant(ball, PowerPotential{1.0, 3.0, Metric::euclidean, {}}, 0.0, 1.0);
  const auto system = assemble(problem);
  std::size_t iterations = 0;
  for (auto _ : state) {
    auto s = conjugate_gradient(system, 1e-12, 10 * system.n);
    iterations = s.iterations;
    benchmark::DoNotOptimize(s.x.data());
  }
  state.counters["unknowns"] = static_cast<double>(system.n);
  state.counters["cg_iterations"] = static_cast<double>(iterations);
}
BENCHMARK(BM_LatticeCG)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_DirectSolve(benchmark::State& state) {
  const auto ball = build_lattice_ball({2, static_cast<double>(state.range(0))});
  const auto problem = DirichletProblem::constant(ball, PowerPotential{1.0, 1.0, Metric::euclidean, {}}, 0.0, 1.0);
  const auto system = assemble(problem);
  for (auto _ : state) benchmark::DoNotOptimize(direct_solve(system).x.data());
  state.counters["unknowns"] = static_cast<double>(system.n);
}
BENCHMARK(BM_DirectSolve)->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_RadialSolve(benchmark::State& state) {
  const auto R = static_cast<std::size_t>(state.range(0));
  const auto geometry = tree_profile(Branching::power(2), R);
  const auto V = radial_potential(PowerPotential{1.0, 1.0, Metric::combinatorial, {}}, R);
  const std::vector<double> f(R + 1, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(radial_dirichlet_solve(geometry, V, f, 1.0).values.data());
}
BENCHMARK(BM_RadialSolve)->Arg(1000)->Arg(10000)->Arg(100000);
BENCHMARK_MAIN();
