#include "plgraph/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "plgraph/error.hpp"

namespace plgraph {

double Field::min() const {
  double m = std::numeric_limits<double>::infinity();
  for (double v : values_) m = std::min(m, v);
  return m;
}

double Field::max() const {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : values_) m = std::max(m, v);
  return m;
}

double Field::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double PowerPotential::at_distance(double dist) const {
  double v = c0 * std::pow(1.0 + dist, -alpha);
  if (floor) v = std::max(v, *floor);
  return v;
}

Field PowerPotential::evaluate(const GraphBall& ball) const {
  if (!(c0 > 0.0)) throw DomainError("potential requires c0 > 0");
  if (!(alpha >= 0.0)) throw DomainError("potential requires alpha >= 0");
  if (floor && !(*floor > 0.0)) throw DomainError("potential floor must be strictly positive");
  if (metric == Metric::euclidean && ball.metric() != Metric::euclidean) {
    throw DomainError("euclidean potential requested on a combinatorially truncated ball");
  }
  Field V(ball.size());
  for (Vertex x = 0; x < ball.size(); ++x) {
    const double d = metric == Metric::combinatorial ? static_cast<double>(ball.layer(x)) : ball.distance(x);
    V[x] = at_distance(d);
  }
  return V;
}

double laplacian_at(const GraphBall& ball, std::span<const double> f, Vertex x) {
  if (x >= ball.size()) throw DomainError("laplacian: vertex out of range");
  if (!ball.is_interior(x)) {
    throw DomainError("laplacian: vertex " + ball.label_string(x) + " is on the halo (incomplete neighborhood)");
  }
  if (f.size() != ball.size()) throw DomainError("laplacian: field must be defined on the whole ball");
  const auto nbrs = ball.neighbors(x);
  const auto w = ball.weights(x);
  const double fx = f[x];
  double sum = 0.0;
  for (std::size_t k = 0; k < nbrs.size(); ++k) sum += (f[nbrs[k]] - fx) * w[k];
  return sum / ball.mu(x);
}

Field laplacian(const GraphBall& ball, const Field& f) {
  Field out(ball.interior_count());
  for (Vertex x = 0; x < ball.interior_count(); ++x) out[x] = laplacian_at(ball, f.values(), x);
  return out;
}

Field schrodinger_residual(const GraphBall& ball, const Field& V, const Field& u, const Field& f) {
  if (V.size() != ball.size() || u.size() != ball.size()) {
    throw DomainError("schrodinger_residual: V and u must be defined on the whole ball");
  }
  if (f.size() != ball.interior_count()) throw DomainError("schrodinger_residual: f must be an interior field");
  Field r(ball.interior_count());
  for (Vertex x = 0; x < ball.interior_count(); ++x) {
    r[x] = laplacian_at(ball, u.values(), x) - V[x] * u[x] - f[x];
  }
  return r;
}

Field schrodinger_residual(const GraphBall& ball, const PowerPotential& V, const Field& u, const Field& f) {
  return schrodinger_residual(ball, V.evaluate(ball), u, f);
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::subsolution: return "subsolution";
    case Classification::supersolution: return "supersolution";
    case Classification::solution: return "solution";
    case Classification::neither: return "neither";
  }
  return "unknown";
}

Classification classify(std::span<const double> residual, double tolerance) {
  if (tolerance < 0.0) throw DomainError("classify: tolerance must be nonnegative");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double r : residual) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  const bool sub = residual.empty() || lo >= -tolerance;
  const bool super = residual.empty() || hi <= tolerance;
  if (sub && super) return Classification::solution;
  if (sub) return Classification::subsolution;
  if (super) return Classification::supersolution;
  return Classification::neither;
}

}  // namespace plgraph
