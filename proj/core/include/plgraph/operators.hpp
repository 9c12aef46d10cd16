#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "plgraph/graph_ball.hpp"

namespace plgraph {

/// Real-valued vertex function. Whole-ball fields have ball.size() entries;
/// interior fields (residuals, data f) have ball.interior_count() entries and
/// share the interior's vertex numbering.
class Field {
 public:
  Field() = default;
  explicit Field(std::size_t size, double value = 0.0) : values_(size, value) {}
  explicit Field(std::vector<double> values) : values_(std::move(values)) {}

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double min() const;
  double max() const;
  double max_abs() const;

  friend bool operator==(const Field&, const Field&) = default;

 private:
  std::vector<double> values_;
};

/// V(x) = c0 * (1 + dist(x, center))^(-alpha), optionally floored.
struct PowerPotential {
  double c0 = 1.0;
  double alpha = 0.0;
  Metric metric = Metric::combinatorial;
  std::optional<double> floor;

  double at_distance(double dist) const;
  /// Tabulates V on every vertex. Combinatorial metric uses the layer index,
  /// Euclidean metric needs a Euclidean ball.
  Field evaluate(const GraphBall& ball) const;
};

/// (1/mu(x)) * sum_y [f(y) - f(x)] omega(x, y) at an interior vertex.
double laplacian_at(const GraphBall& ball, std::span<const double> f, Vertex x);

/// Laplacian on every interior vertex (interior-sized result).
Field laplacian(const GraphBall& ball, const Field& f);

/// r(x) = Lap u(x) - V(x) u(x) - f(x) on the interior. `V` and `u` are
/// whole-ball fields, `f` is an interior field.
Field schrodinger_residual(const GraphBall& ball, const Field& V, const Field& u, const Field& f);
Field schrodinger_residual(const GraphBall& ball, const PowerPotential& V, const Field& u, const Field& f);

enum class Classification { subsolution, supersolution, solution, neither };

const char* to_string(Classification c);

/// Sub iff min residual >= -tol, super iff max residual <= tol.
Classification classify(std::span<const double> residual, double tolerance = 1e-9);
inline Classification classify(const Field& residual, double tolerance = 1e-9) {
  return classify(residual.values(), tolerance);
}

inline bool is_subsolution(Classification c) {
  return c == Classification::subsolution || c == Classification::solution;
}
inline bool is_supersolution(Classification c) {
  return c == Classification::supersolution || c == Classification::solution;
}

}  // namespace plgraph
