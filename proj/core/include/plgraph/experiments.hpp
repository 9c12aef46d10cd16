#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "plgraph/barriers.hpp"
#include "plgraph/dirichlet.hpp"
#include "plgraph/graph_ball.hpp"
#include "plgraph/operators.hpp"

namespace plgraph {

/// Graph family without a radius; the exhaustion supplies the radii.
struct TreeFamily {
  Branching branching;
};
struct LatticeFamily {
  int dimension = 3;
};
using GraphFamily = std::variant<TreeFamily, LatticeFamily>;

FamilySpec with_radius(const GraphFamily& family, double radius);

/// Nested-ball construction: for each radius solve L u = 0 inside with
/// u = gamma on the halo and follow u at the probe vertices.
struct ExhaustionConfig {
  GraphFamily graph = LatticeFamily{};
  PowerPotential potential;
  double gamma = 1.0;
  std::vector<double> radii;
  /// Vertex labels; empty means the center vertex.
  std::vector<std::vector<std::int64_t>> probes;
  double monotone_tolerance = 1e-9;
  double convergence_delta = 1e-6;
  SolveOptions solver;
  BallLimits limits;
};

struct ExhaustionRow {
  double radius = 0.0;
  std::string probe_id;
  double u_probe = 0.0;
  double min_u = 0.0;
  double max_u = 0.0;
  std::optional<double> delta_prev;  // u_probe(R_k) - u_probe(R_{k-1})
  bool monotone = true;
  /// max over layers of u / |growth gauge| (gauge built for the potential's alpha).
  double max_growth_ratio = 0.0;
  std::size_t iterations = 0;
};

struct ExhaustionTable {
  std::vector<ExhaustionRow> rows;  // radius-major, probes in config order
  bool monotone = true;
  /// Successive values of the first probe differ by less than convergence_delta.
  bool converged = false;
  std::optional<double> limit;
};

/// Trees are solved through the radial reduction (exact for radial data), so
/// tree probes may be any vertex label; lattices use the full ball.
/// Throws SolverError on non-convergence; a monotonicity breach beyond the
/// tolerance clears `monotone` on the row and the table.
ExhaustionTable exhaustion_run(const ExhaustionConfig& config);

enum class Regime { unique_evidence, nonunique_evidence, inconclusive };
const char* to_string(Regime r);

struct PhaseSweepConfig {
  std::vector<Branching> branchings;
  std::vector<double> alphas;
  double gamma = 1.0;
  double c0 = 1.0;
  std::vector<std::size_t> radii{100, 1000, 10000};
  double threshold = 1e-3;
};

struct PhaseCell {
  Branching branching;
  double alpha = 0.0;
  std::vector<double> probe_values;  // u_R(root), one per radius
  Regime regime = Regime::inconclusive;
};

/// Classification at the largest radius: u/gamma above threshold is
/// nonuniqueness evidence; at or below threshold and still decreasing is
/// uniqueness evidence.
std::vector<PhaseCell> tree_phase_sweep(const PhaseSweepConfig& config);

struct GrowthRatio {
  double distance = 0.0;
  double ratio = 0.0;  // max over the shell of u / |gauge|
};

/// Per-shell max of u/|Z~|, shells being equal-distance vertex sets.
std::vector<GrowthRatio> growth_ratio_profile(const GraphBall& ball, const Field& u, const BarrierSpec& gauge);
/// Radial version: u over layers 0..R+1.
std::vector<GrowthRatio> growth_ratio_profile(std::span<const double> u, const BarrierSpec& gauge);

}  // namespace plgraph
