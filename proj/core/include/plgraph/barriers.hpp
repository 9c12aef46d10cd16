#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plgraph/graph_ball.hpp"
#include "plgraph/operators.hpp"
#include "plgraph/radial.hpp"

namespace plgraph {

/// Closed-form barrier families.
///
///   tree_power       Z(r)  = -M r^(1-alpha) - 1              alpha in [0, 1)
///   tree_log         Z(r)  = -M log(2 + r)                    alpha <= 1
///   growth_gauge     Z~    = -rho^(1-alpha) | -log rho         (trees, rho > 1)
///                          = -|x|^(2-alpha) | -log |x|         (lattices, |x| > 2)
///   lattice_power    Z(x)  = -K |x|^(2 beta) - 1              0 < beta < (2 - alpha)/2
///   lattice_log      Z(x)  = -K log(|x|^2 + 2)
///   lattice_inverse  h(x)  = sigma / (K + |x|^2)^gamma        super-barrier, n >= 3
///   tree_inverse     h(r)  = (1 + r)^(-beta)                  super-barrier, beta < alpha + p - 1
///
/// Sub-barriers want (1/V) Lap Z >= -1, super-barriers want (1/V) Lap h <= -1.
enum class BarrierFamily { tree_power, tree_log, growth_gauge, lattice_power, lattice_log, lattice_inverse, tree_inverse };
enum class BarrierDirection { sub, super };

const char* to_string(BarrierFamily family);
BarrierFamily parse_barrier_family(std::string_view name);

struct BarrierParams {
  double M = 1.0;
  double K = 1.0;
  double beta = 0.5;
  double gamma = 0.5;
  double sigma = 1.0;
  double alpha = 0.0;  // decay exponent of the potential the barrier is built for
};

struct BarrierSpec {
  BarrierFamily family = BarrierFamily::tree_power;
  BarrierParams params;
  /// Reject parameters outside the window each family is stated for.
  bool strict = true;

  BarrierDirection direction() const;
};

/// What the barrier is evaluated against.
struct BarrierContext {
  Metric metric = Metric::combinatorial;
  int dimension = 0;             // lattice dimension, 0 for trees
  std::optional<int> tree_power;  // p when the tree has power branching
};

BarrierContext context_of(const GraphBall& ball);

/// Throws ParameterError on a metric mismatch and, in strict mode, on
/// parameters outside the family's window.
void check_parameters(const BarrierSpec& spec, const BarrierContext& context);

/// Barrier value at combinatorial layer r (tree metric families).
double barrier_at_layer(const BarrierSpec& spec, double r);
/// Barrier value at a lattice point with |x|^2 = norm2 (lattice metric families).
double barrier_at_norm2(const BarrierSpec& spec, std::int64_t norm2, int dimension);

/// Tabulates the barrier on every vertex of the ball.
Field evaluate(const BarrierSpec& spec, const GraphBall& ball);
/// Tabulates a combinatorial-metric barrier on layers 0..R+1.
std::vector<double> evaluate_radial(const BarrierSpec& spec, std::size_t radius,
                                    const BarrierContext& context = {});

/// Z_bar = Z - H - 1. Throws DomainError when H < max Z.
Field shift(const Field& Z, double H);

/// Interior points on which barrier inequalities are checked: either the
/// vertices of a ball or the layers of a radial (tree) reduction.
class VerificationDomain {
 public:
  /// `V` is a whole-ball potential field. The ball must outlive the domain.
  static VerificationDomain on_ball(const GraphBall& ball, Field V);
  static VerificationDomain on_ball(const GraphBall& ball, const PowerPotential& V);
  /// Radial reduction: layers 0..R of `geometry`, potential V(r) for r = 0..R.
  static VerificationDomain radial(RadialProfile geometry, std::vector<double> V, BarrierContext context = {});
  /// Spherically symmetric tree with the given branching, layers 0..radius.
  static VerificationDomain tree(const Branching& branching, std::size_t radius, const PowerPotential& V);

  std::size_t size() const { return distance_.size(); }
  double distance(std::size_t i) const { return distance_[i]; }
  std::string label(std::size_t i) const;
  const BarrierContext& context() const { return context_; }

  /// (1/V) Lap B at every point.
  std::vector<double> normalized_laplacian(const BarrierSpec& spec) const;

 private:
  const GraphBall* ball_ = nullptr;
  Field ball_potential_;
  RadialProfile radial_;
  std::vector<double> radial_potential_;
  std::vector<double> distance_;
  BarrierContext context_;
};

struct VerifyOptions {
  double tolerance = 1e-9;
  /// Only points with distance >= min_radius are checked. For super-barriers
  /// without a min_radius (and not lattice_inverse, which defaults to 1) the
  /// cutoff R0 is found by scanning inward from the outermost layer.
  std::optional<double> min_radius;
  std::optional<double> max_radius;
};

struct MarginReport {
  BarrierDirection direction = BarrierDirection::sub;
  bool pass = false;
  /// sub: min of (1/V) Lap Z + 1; super: max of (1/V) Lap h + 1.
  double margin = 0.0;
  std::string worst_vertex;
  double worst_distance = 0.0;
  /// Smallest distance from which the super inequality holds on the rest of
  /// the domain.
  std::optional<double> r0;
  /// Largest distance covered by the check; nothing is claimed beyond it.
  double verified_radius = 0.0;
  std::size_t points_checked = 0;
};

MarginReport verify(const BarrierSpec& spec, const VerificationDomain& domain, const VerifyOptions& options = {});

enum class SearchParameter { M, K, sigma };
const char* to_string(SearchParameter p);
SearchParameter parse_search_parameter(std::string_view name);

struct SearchOptions {
  SearchParameter which = SearchParameter::M;
  double lo = 0.0;  // exclusive
  double hi = 10.0;
  int iterations = 60;
  VerifyOptions verify;
};

struct SearchResult {
  bool feasible = false;
  double value = 0.0;
  MarginReport report;
};

/// Bisection for the largest passing M/K (sub-barriers) or the smallest
/// passing sigma (super-barriers) in (lo, hi].
SearchResult search_parameter(const BarrierSpec& spec, const VerificationDomain& domain, const SearchOptions& options);

}  // namespace plgraph
