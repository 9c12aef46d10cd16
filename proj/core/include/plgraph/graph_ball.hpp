#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace plgraph {

using Vertex = std::uint32_t;

/// Which distance a ball is truncated in and potentials are measured in.
enum class Metric { combinatorial, euclidean };

/// Branching function r -> b(r) of a spherically symmetric tree.
struct Branching {
  enum class Kind { constant, power };

  Kind kind = Kind::constant;
  std::uint64_t b0 = 2;  // constant family
  int p = 1;             // power family: b(r) = (r + 1)^p

  static Branching constant(std::uint64_t b0);
  static Branching power(int p);

  /// Exact integer value; throws CapacityError on overflow.
  std::uint64_t at(std::uint64_t r) const;
  /// Floating-point value, used by the radial recurrences where b(r) may be huge.
  double value(std::uint64_t r) const;

  std::string describe() const;

  friend bool operator==(const Branching&, const Branching&) = default;
};

struct TreeSpec {
  Branching branching;
  std::size_t radius = 1;  // interior = layers 0..radius, halo = layer radius + 1
};

struct LatticeSpec {
  int dimension = 1;
  double radius = 1.0;  // interior = { x : |x| < radius }
};

using FamilySpec = std::variant<TreeSpec, LatticeSpec>;

struct BallLimits {
  std::size_t max_vertices = 5'000'000;
};

/// Raw storage of a ball. Vertices [0, interior_count) form the interior, the
/// rest the halo. Adjacency is CSR with both directions of every edge stored.
/// Labels are fixed-width integer tuples: (layer, index) for trees,
/// coordinates for lattices.
struct GraphBallParts {
  std::size_t label_width = 0;
  std::vector<std::int64_t> labels;
  std::vector<std::size_t> offsets{0};
  std::vector<Vertex> neighbors;
  std::vector<double> weights;
  std::vector<double> mu;
  std::vector<std::uint32_t> layer;  // combinatorial distance to the center set
  std::vector<double> distance;      // distance to the center set in `metric`
  std::vector<Vertex> center;
  std::size_t interior_count = 0;
  Metric metric = Metric::combinatorial;
  std::optional<FamilySpec> family;
};

/// Finite truncation of an infinite weighted graph (G, omega, mu) with an
/// interior/halo split. Immutable after construction.
class GraphBall {
 public:
  GraphBall() = default;
  /// Takes the parts as-is; structural problems are reported by validate(),
  /// only gross size mismatches throw DomainError.
  explicit GraphBall(GraphBallParts parts);

  std::size_t size() const { return parts_.mu.size(); }
  std::size_t interior_count() const { return parts_.interior_count; }
  std::size_t halo_count() const { return size() - interior_count(); }
  bool is_interior(Vertex v) const { return v < parts_.interior_count; }

  std::span<const Vertex> neighbors(Vertex v) const;
  std::span<const double> weights(Vertex v) const;
  /// omega(x, y); zero when there is no stored edge.
  double weight(Vertex x, Vertex y) const;

  double mu(Vertex v) const { return parts_.mu[v]; }
  /// deg(x) = sum_y omega(x, y).
  double degree(Vertex v) const;
  std::uint32_t layer(Vertex v) const { return parts_.layer[v]; }
  double distance(Vertex v) const { return parts_.distance[v]; }
  std::uint32_t max_layer() const;

  std::span<const std::int64_t> label(Vertex v) const;
  std::string label_string(Vertex v) const;
  std::optional<Vertex> find(std::span<const std::int64_t> label) const;

  /// |x|^2 for lattice balls, computed exactly from the coordinates.
  std::int64_t norm2(Vertex v) const;

  std::span<const Vertex> center_set() const { return parts_.center; }
  Metric metric() const { return parts_.metric; }
  const std::optional<FamilySpec>& family() const { return parts_.family; }
  /// Lattice dimension, or 0 for non-lattice balls.
  int dimension() const;

  const GraphBallParts& parts() const { return parts_; }

 private:
  GraphBallParts parts_;
  std::vector<Vertex> by_label_;  // permutation sorting vertices by label
};

GraphBall build_tree_ball(const TreeSpec& spec, const BallLimits& limits = {});
GraphBall build_lattice_ball(const LatticeSpec& spec, const BallLimits& limits = {});
GraphBall build_ball(const FamilySpec& spec, const BallLimits& limits = {});

/// Outer and inner degree of an interior vertex x with layer r >= 1.
struct DegreePair {
  double outer = 0.0;
  double inner = 0.0;
};
DegreePair outer_inner_degree(const GraphBall& ball, Vertex x);

enum class ViolationKind {
  asymmetric_weight,
  self_loop,
  negative_weight,
  nonpositive_measure,
  closure,
  disconnected,
  layer_adjacency,
};

struct Violation {
  ViolationKind kind;
  Vertex vertex;
  std::string message;
};

const char* to_string(ViolationKind kind);

/// Checks every structural invariant of the ball. Empty result means valid.
std::vector<Violation> validate(const GraphBall& ball);

}  // namespace plgraph
