#include "plgraph/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "plgraph/error.hpp"
#include "plgraph/radial.hpp"

namespace plgraph {

FamilySpec with_radius(const GraphFamily& family, double radius) {
  if (const auto* tree = std::get_if<TreeFamily>(&family)) {
    if (!(radius >= 0.0) || radius != std::floor(radius)) {
      throw DomainError("tree radii must be nonnegative integers");
    }
    return TreeSpec{tree->branching, static_cast<std::size_t>(radius)};
  }
  return LatticeSpec{std::get<LatticeFamily>(family).dimension, radius};
}

namespace {

BarrierSpec gauge_for(const PowerPotential& V, Metric metric) {
  // Outside the admissible alpha window the gauge is only used for
  // inspection, so clamp instead of rejecting.
  const double top = metric == Metric::euclidean ? 2.0 : 1.0;
  BarrierSpec g;
  g.family = BarrierFamily::growth_gauge;
  g.params.alpha = std::clamp(V.alpha, 0.0, top);
  g.strict = false;
  return g;
}

double max_ratio(const std::vector<GrowthRatio>& ratios) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& r : ratios) m = std::max(m, r.ratio);
  return m;
}

}  // namespace

ExhaustionTable exhaustion_run(const ExhaustionConfig& config) {
  if (config.radii.empty()) throw DomainError("exhaustion_run: no radii");
  for (std::size_t k = 1; k < config.radii.size(); ++k) {
    if (!(config.radii[k] > config.radii[k - 1])) throw DomainError("exhaustion_run: radii must be strictly increasing");
  }
  if (!std::isfinite(config.gamma)) throw DomainError("exhaustion_run: gamma must be finite");

  const bool tree = std::holds_alternative<TreeFamily>(config.graph);
  const Metric metric = tree ? Metric::combinatorial : Metric::euclidean;
  const auto gauge = gauge_for(config.potential, metric);

  std::vector<std::vector<std::int64_t>> probes = config.probes;
  if (probes.empty()) {
    if (tree) probes.push_back({0, 0});
    else probes.push_back(std::vector<std::int64_t>(std::get<LatticeFamily>(config.graph).dimension, 0));
  }

  ExhaustionTable table;
  const double slack = config.monotone_tolerance * std::max(1.0, std::abs(config.gamma));
  std::vector<std::optional<double>> previous(probes.size());

  for (double radius : config.radii) {
    std::vector<double> probe_values;
    double min_u = 0.0, max_u = 0.0, growth = 0.0;
    std::size_t iterations = 0;

    if (tree) {
      const auto spec = std::get<TreeSpec>(with_radius(config.graph, radius));
      const auto geometry = tree_profile(spec.branching, spec.radius);
      const auto V = radial_potential(config.potential, spec.radius);
      const std::vector<double> f(spec.radius + 1, 0.0);
      const auto u = radial_dirichlet_solve(geometry, V, f, config.gamma);
      for (const auto& p : probes) {
        if (p.size() != 2 || p[0] < 0 || p[1] < 0 || static_cast<std::size_t>(p[0]) > spec.radius + 1) {
          throw DomainError("exhaustion_run: tree probe outside the ball");
        }
        probe_values.push_back(u.values[static_cast<std::size_t>(p[0])]);
      }
      min_u = *std::min_element(u.values.begin(), u.values.end());
      max_u = *std::max_element(u.values.begin(), u.values.end());
      growth = max_ratio(growth_ratio_profile(u.values, gauge));
    } else {
      const GraphBall ball = build_ball(with_radius(config.graph, radius), config.limits);
      const auto problem = DirichletProblem::constant(ball, config.potential, 0.0, config.gamma);
      const auto report = solve(problem, config.solver);
      if (!report.converged) {
        throw SolverError("exhaustion_run: solve did not converge at radius " + std::to_string(radius) +
                          " (relative residual " + std::to_string(report.relative_residual) + ")");
      }
      for (const auto& p : probes) {
        const auto v = ball.find(p);
        if (!v) throw DomainError("exhaustion_run: probe outside the ball at radius " + std::to_string(radius));
        probe_values.push_back(report.u[*v]);
      }
      min_u = report.min_u;
      max_u = report.max_u;
      iterations = report.iterations;
      growth = max_ratio(growth_ratio_profile(ball, report.u, gauge));
    }

    for (std::size_t k = 0; k < probes.size(); ++k) {
      ExhaustionRow row;
      row.radius = radius;
      row.probe_id.clear();
      for (auto c : probes[k]) {
        if (!row.probe_id.empty()) row.probe_id += ':';
        row.probe_id += std::to_string(c);
      }
      row.u_probe = probe_values[k];
      row.min_u = min_u;
      row.max_u = max_u;
      row.max_growth_ratio = growth;
      row.iterations = iterations;
      if (previous[k]) {
        row.delta_prev = probe_values[k] - *previous[k];
        row.monotone = config.gamma >= 0.0 ? *row.delta_prev <= slack : *row.delta_prev >= -slack;
        table.monotone = table.monotone && row.monotone;
      }
      previous[k] = probe_values[k];
      table.rows.push_back(row);
    }
  }

  if (config.radii.size() >= 2) {
    const auto& last = table.rows[table.rows.size() - probes.size()];
    if (last.delta_prev && std::abs(*last.delta_prev) < config.convergence_delta) {
      table.converged = true;
      table.limit = last.u_probe;
    }
  }
  return table;
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::unique_evidence: return "unique_regime_evidence";
    case Regime::nonunique_evidence: return "nonunique_regime_evidence";
    case Regime::inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::vector<PhaseCell> tree_phase_sweep(const PhaseSweepConfig& config) {
  if (!(config.gamma > 0.0)) throw DomainError("tree_phase_sweep: gamma must be positive");
  if (config.radii.empty()) throw DomainError("tree_phase_sweep: no radii");
  std::vector<PhaseCell> cells;
  for (const auto& b : config.branchings) {
    for (double alpha : config.alphas) {
      PhaseCell cell;
      cell.branching = b;
      cell.alpha = alpha;
      const PowerPotential V{config.c0, alpha, Metric::combinatorial, std::nullopt};
      for (std::size_t R : config.radii) {
        const auto geometry = tree_profile(b, R);
        const auto Vr = radial_potential(V, R);
        const std::vector<double> f(R + 1, 0.0);
        cell.probe_values.push_back(radial_dirichlet_solve(geometry, Vr, f, config.gamma).values[0]);
      }
      const double last = cell.probe_values.back() / config.gamma;
      if (last > config.threshold) {
        cell.regime = Regime::nonunique_evidence;
      } else if (cell.probe_values.size() >= 2 &&
                 cell.probe_values.back() < cell.probe_values[cell.probe_values.size() - 2]) {
        cell.regime = Regime::unique_evidence;
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

std::vector<GrowthRatio> growth_ratio_profile(const GraphBall& ball, const Field& u, const BarrierSpec& gauge) {
  if (u.size() != ball.size()) throw DomainError("growth_ratio_profile: u must cover the whole ball");
  const Field Z = evaluate(gauge, ball);
  std::map<double, double> shells;
  for (Vertex x = 0; x < ball.size(); ++x) {
    const double ratio = u[x] / std::abs(Z[x]);
    auto [it, inserted] = shells.emplace(ball.distance(x), ratio);
    if (!inserted) it->second = std::max(it->second, ratio);
  }
  std::vector<GrowthRatio> out;
  out.reserve(shells.size());
  for (const auto& [d, r] : shells) out.push_back({d, r});
  return out;
}

std::vector<GrowthRatio> growth_ratio_profile(std::span<const double> u, const BarrierSpec& gauge) {
  if (u.size() < 2) throw DomainError("growth_ratio_profile: profile needs layers 0..R+1");
  const auto Z = evaluate_radial(gauge, u.size() - 2);
  std::vector<GrowthRatio> out(u.size());
  for (std::size_t r = 0; r < u.size(); ++r) out[r] = {static_cast<double>(r), u[r] / std::abs(Z[r])};
  return out;
}

}  // namespace plgraph
