#include "plgraph/graph_ball.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <sstream>

#include "plgraph/error.hpp"

namespace plgraph {

namespace {

bool mul_overflows(std::uint64_t a, std::uint64_t b, std::uint64_t& out) {
  return __builtin_mul_overflow(a, b, &out);
}

bool label_less(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

Branching Branching::constant(std::uint64_t b0) {
  if (b0 < 1) throw DomainError("constant branching requires b0 >= 1");
  Branching b;
  b.kind = Kind::constant;
  b.b0 = b0;
  return b;
}

Branching Branching::power(int p) {
  if (p < 0) throw DomainError("power branching requires p >= 0");
  Branching b;
  b.kind = Kind::power;
  b.p = p;
  return b;
}

std::uint64_t Branching::at(std::uint64_t r) const {
  if (kind == Kind::constant) return b0;
  std::uint64_t result = 1;
  for (int k = 0; k < p; ++k) {
    if (mul_overflows(result, r + 1, result)) {
      throw CapacityError("branching value (r+1)^p overflows at r = " + std::to_string(r));
    }
  }
  return result;
}

double Branching::value(std::uint64_t r) const {
  if (kind == Kind::constant) return static_cast<double>(b0);
  return std::pow(static_cast<double>(r) + 1.0, p);
}

std::string Branching::describe() const {
  if (kind == Kind::constant) return "constant:" + std::to_string(b0);
  return "power:" + std::to_string(p);
}

GraphBall::GraphBall(GraphBallParts parts) : parts_(std::move(parts)) {
  const std::size_t n = parts_.mu.size();
  if (parts_.offsets.size() != n + 1) throw DomainError("GraphBall: offsets must have size() + 1 entries");
  if (parts_.neighbors.size() != parts_.offsets.back() || parts_.weights.size() != parts_.neighbors.size()) {
    throw DomainError("GraphBall: adjacency arrays disagree with offsets");
  }
  if (parts_.labels.size() != n * parts_.label_width) throw DomainError("GraphBall: label array has wrong size");
  if (parts_.layer.size() != n || parts_.distance.size() != n) {
    throw DomainError("GraphBall: layer/distance arrays have wrong size");
  }
  if (parts_.interior_count > n) throw DomainError("GraphBall: interior_count exceeds vertex count");
  for (std::size_t v = 0; v < n; ++v) {
    if (parts_.offsets[v] > parts_.offsets[v + 1]) throw DomainError("GraphBall: offsets not monotone");
  }
  for (Vertex y : parts_.neighbors) {
    if (y >= n) throw DomainError("GraphBall: neighbor index out of range");
  }
  for (Vertex c : parts_.center) {
    if (c >= n) throw DomainError("GraphBall: center vertex out of range");
  }

  by_label_.resize(n);
  std::iota(by_label_.begin(), by_label_.end(), Vertex{0});
  std::sort(by_label_.begin(), by_label_.end(),
            [this](Vertex a, Vertex b) { return label_less(label(a), label(b)); });
}

std::span<const Vertex> GraphBall::neighbors(Vertex v) const {
  const auto begin = parts_.offsets[v];
  return {parts_.neighbors.data() + begin, parts_.offsets[v + 1] - begin};
}

std::span<const double> GraphBall::weights(Vertex v) const {
  const auto begin = parts_.offsets[v];
  return {parts_.weights.data() + begin, parts_.offsets[v + 1] - begin};
}

double GraphBall::weight(Vertex x, Vertex y) const {
  const auto nbrs = neighbors(x);
  const auto w = weights(x);
  for (std::size_t k = 0; k < nbrs.size(); ++k) {
    if (nbrs[k] == y) return w[k];
  }
  return 0.0;
}

double GraphBall::degree(Vertex v) const {
  double sum = 0.0;
  for (double w : weights(v)) sum += w;
  return sum;
}

std::uint32_t GraphBall::max_layer() const {
  if (parts_.layer.empty()) return 0;
  return *std::max_element(parts_.layer.begin(), parts_.layer.end());
}

std::span<const std::int64_t> GraphBall::label(Vertex v) const {
  return {parts_.labels.data() + static_cast<std::size_t>(v) * parts_.label_width, parts_.label_width};
}

std::string GraphBall::label_string(Vertex v) const {
  std::string out;
  for (std::int64_t c : label(v)) {
    if (!out.empty()) out += ':';
    out += std::to_string(c);
  }
  return out;
}

std::optional<Vertex> GraphBall::find(std::span<const std::int64_t> key) const {
  if (key.size() != parts_.label_width) return std::nullopt;
  auto it = std::lower_bound(by_label_.begin(), by_label_.end(), key,
                             [this](Vertex v, std::span<const std::int64_t> k) { return label_less(label(v), k); });
  if (it == by_label_.end()) return std::nullopt;
  const auto found = label(*it);
  if (!std::equal(found.begin(), found.end(), key.begin(), key.end())) return std::nullopt;
  return *it;
}

int GraphBall::dimension() const {
  if (parts_.family && std::holds_alternative<LatticeSpec>(*parts_.family)) {
    return std::get<LatticeSpec>(*parts_.family).dimension;
  }
  return 0;
}

std::int64_t GraphBall::norm2(Vertex v) const {
  if (dimension() == 0) throw DomainError("norm2 is only defined on lattice balls");
  std::int64_t s = 0;
  for (std::int64_t c : label(v)) s += c * c;
  return s;
}

GraphBall build_tree_ball(const TreeSpec& spec, const BallLimits& limits) {
  const std::size_t R = spec.radius;
  // Layer sizes for r = 0..R+1.
  std::vector<std::uint64_t> layer_size{1};
  std::uint64_t total = 1;
  for (std::size_t r = 0; r <= R; ++r) {
    const std::uint64_t b = spec.branching.at(r);
    if (b < 1) throw DomainError("branching values must be positive");
    std::uint64_t next = 0;
    if (mul_overflows(layer_size.back(), b, next) || next > limits.max_vertices ||
        total + next > limits.max_vertices) {
      throw CapacityError("tree ball of radius " + std::to_string(R) + " with branching " +
                          spec.branching.describe() + " exceeds the vertex cap of " +
                          std::to_string(limits.max_vertices));
    }
    layer_size.push_back(next);
    total += next;
  }

  std::vector<std::uint64_t> layer_start(layer_size.size() + 1, 0);
  for (std::size_t r = 0; r < layer_size.size(); ++r) layer_start[r + 1] = layer_start[r] + layer_size[r];

  GraphBallParts parts;
  parts.label_width = 2;
  parts.metric = Metric::combinatorial;
  parts.family = spec;
  parts.center = {0};
  parts.interior_count = layer_start[R + 1];
  parts.labels.reserve(2 * total);
  parts.mu.assign(total, 1.0);
  parts.layer.reserve(total);
  parts.distance.reserve(total);
  parts.offsets.reserve(total + 1);
  const std::size_t edges = 2 * (total - 1);
  parts.neighbors.reserve(edges);
  parts.weights.reserve(edges);

  for (std::size_t r = 0; r < layer_size.size(); ++r) {
    const bool has_children = r <= R;
    const std::uint64_t b = has_children ? spec.branching.at(r) : 0;
    const std::uint64_t b_prev = r >= 1 ? spec.branching.at(r - 1) : 0;
    for (std::uint64_t i = 0; i < layer_size[r]; ++i) {
      parts.labels.push_back(static_cast<std::int64_t>(r));
      parts.labels.push_back(static_cast<std::int64_t>(i));
      parts.layer.push_back(static_cast<std::uint32_t>(r));
      parts.distance.push_back(static_cast<double>(r));
      if (r >= 1) {
        parts.neighbors.push_back(static_cast<Vertex>(layer_start[r - 1] + i / b_prev));
        parts.weights.push_back(1.0);
      }
      for (std::uint64_t c = 0; c < b; ++c) {
        parts.neighbors.push_back(static_cast<Vertex>(layer_start[r + 1] + i * b + c));
        parts.weights.push_back(1.0);
      }
      parts.offsets.push_back(parts.neighbors.size());
    }
  }
  return GraphBall(std::move(parts));
}

namespace {

// Flat, lexicographically sorted list of lattice points.
struct PointSet {
  int n = 0;
  std::vector<std::int64_t> coords;

  std::size_t size() const { return n == 0 ? 0 : coords.size() / n; }
  std::span<const std::int64_t> at(std::size_t i) const { return {coords.data() + i * n, static_cast<std::size_t>(n)}; }

  std::optional<std::size_t> find(std::span<const std::int64_t> key) const {
    std::size_t lo = 0, hi = size();
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (label_less(at(mid), key)) lo = mid + 1;
      else hi = mid;
    }
    if (lo < size() && std::equal(key.begin(), key.end(), at(lo).begin())) return lo;
    return std::nullopt;
  }
};

void enumerate_interior(int n, std::int64_t m, double r2, std::size_t cap, std::vector<std::int64_t>& prefix,
                        std::int64_t partial, PointSet& out) {
  const int k = static_cast<int>(prefix.size());
  if (k == n) {
    out.coords.insert(out.coords.end(), prefix.begin(), prefix.end());
    if (out.size() > cap) throw CapacityError("lattice ball exceeds the vertex cap of " + std::to_string(cap));
    return;
  }
  for (std::int64_t c = -m; c <= m; ++c) {
    const std::int64_t next = partial + c * c;
    if (static_cast<double>(next) >= r2) continue;
    prefix.push_back(c);
    enumerate_interior(n, m, r2, cap, prefix, next, out);
    prefix.pop_back();
  }
}

}  // namespace

GraphBall build_lattice_ball(const LatticeSpec& spec, const BallLimits& limits) {
  const int n = spec.dimension;
  if (n < 1) throw DomainError("lattice dimension must be >= 1");
  if (!(spec.radius >= 1.0) || !std::isfinite(spec.radius)) throw DomainError("lattice radius must be >= 1");
  const double r2 = spec.radius * spec.radius;
  const auto m = static_cast<std::int64_t>(std::ceil(spec.radius));

  PointSet interior{n, {}};
  std::vector<std::int64_t> prefix;
  enumerate_interior(n, m, r2, limits.max_vertices, prefix, 0, interior);

  auto is_interior_point = [&](std::span<const std::int64_t> x) {
    std::int64_t s = 0;
    for (auto c : x) s += c * c;
    return static_cast<double>(s) < r2;
  };

  PointSet halo{n, {}};
  std::vector<std::int64_t> y(n);
  for (std::size_t i = 0; i < interior.size(); ++i) {
    const auto x = interior.at(i);
    for (int k = 0; k < n; ++k) {
      for (std::int64_t s : {-1, 1}) {
        std::copy(x.begin(), x.end(), y.begin());
        y[k] += s;
        if (!is_interior_point(y)) halo.coords.insert(halo.coords.end(), y.begin(), y.end());
      }
    }
  }
  {
    std::vector<std::size_t> order(halo.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return label_less(halo.at(a), halo.at(b)); });
    std::vector<std::int64_t> sorted;
    sorted.reserve(halo.coords.size());
    for (std::size_t idx : order) {
      const auto p = halo.at(idx);
      if (!sorted.empty() &&
          std::equal(p.begin(), p.end(), sorted.end() - n)) {
        continue;
      }
      sorted.insert(sorted.end(), p.begin(), p.end());
    }
    halo.coords = std::move(sorted);
  }
  const std::size_t total = interior.size() + halo.size();
  if (total > limits.max_vertices) {
    throw CapacityError("lattice ball exceeds the vertex cap of " + std::to_string(limits.max_vertices));
  }

  GraphBallParts parts;
  parts.label_width = static_cast<std::size_t>(n);
  parts.metric = Metric::euclidean;
  parts.family = spec;
  parts.interior_count = interior.size();
  parts.labels = interior.coords;
  parts.labels.insert(parts.labels.end(), halo.coords.begin(), halo.coords.end());
  parts.mu.assign(total, 2.0 * n);
  parts.layer.reserve(total);
  parts.distance.reserve(total);
  parts.offsets.reserve(total + 1);
  parts.neighbors.reserve(total * 2 * n);
  parts.weights.reserve(total * 2 * n);

  auto lookup = [&](std::span<const std::int64_t> key) -> std::optional<Vertex> {
    if (is_interior_point(key)) {
      if (auto i = interior.find(key)) return static_cast<Vertex>(*i);
      return std::nullopt;
    }
    if (auto h = halo.find(key)) return static_cast<Vertex>(interior.size() + *h);
    return std::nullopt;
  };

  std::vector<Vertex> local;
  for (std::size_t v = 0; v < total; ++v) {
    const auto x = std::span<const std::int64_t>(parts.labels.data() + v * n, static_cast<std::size_t>(n));
    std::int64_t l1 = 0, sq = 0;
    for (auto c : x) {
      l1 += c < 0 ? -c : c;
      sq += c * c;
    }
    parts.layer.push_back(static_cast<std::uint32_t>(l1));
    parts.distance.push_back(std::sqrt(static_cast<double>(sq)));
    if (l1 == 0) parts.center.push_back(static_cast<Vertex>(v));

    local.clear();
    for (int k = 0; k < n; ++k) {
      for (std::int64_t s : {-1, 1}) {
        std::copy(x.begin(), x.end(), y.begin());
        y[k] += s;
        if (auto w = lookup(y)) local.push_back(*w);
      }
    }
    std::sort(local.begin(), local.end());
    for (Vertex w : local) {
      parts.neighbors.push_back(w);
      parts.weights.push_back(1.0);
    }
    parts.offsets.push_back(parts.neighbors.size());
  }
  return GraphBall(std::move(parts));
}

GraphBall build_ball(const FamilySpec& spec, const BallLimits& limits) {
  return std::visit(
      [&](const auto& s) -> GraphBall {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, TreeSpec>) return build_tree_ball(s, limits);
        else return build_lattice_ball(s, limits);
      },
      spec);
}

DegreePair outer_inner_degree(const GraphBall& ball, Vertex x) {
  if (x >= ball.size()) throw DomainError("outer_inner_degree: vertex out of range");
  if (!ball.is_interior(x)) {
    throw DomainError("outer_inner_degree: vertex " + ball.label_string(x) + " is on the halo");
  }
  const auto r = ball.layer(x);
  if (r == 0) throw DomainError("outer_inner_degree: vertex " + ball.label_string(x) + " lies in the center set");
  DegreePair d;
  const auto nbrs = ball.neighbors(x);
  const auto w = ball.weights(x);
  for (std::size_t k = 0; k < nbrs.size(); ++k) {
    const auto ry = ball.layer(nbrs[k]);
    if (ry == r + 1) d.outer += w[k];
    else if (ry + 1 == r) d.inner += w[k];
  }
  d.outer /= ball.mu(x);
  d.inner /= ball.mu(x);
  return d;
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::asymmetric_weight: return "asymmetric_weight";
    case ViolationKind::self_loop: return "self_loop";
    case ViolationKind::negative_weight: return "negative_weight";
    case ViolationKind::nonpositive_measure: return "nonpositive_measure";
    case ViolationKind::closure: return "closure";
    case ViolationKind::disconnected: return "disconnected";
    case ViolationKind::layer_adjacency: return "layer_adjacency";
  }
  return "unknown";
}

namespace {

std::optional<std::size_t> expected_degree(const GraphBall& ball, Vertex x) {
  const auto& family = ball.family();
  if (!family) return std::nullopt;
  if (const auto* tree = std::get_if<TreeSpec>(&*family)) {
    const auto r = ball.layer(x);
    return static_cast<std::size_t>(tree->branching.at(r)) + (r >= 1 ? 1 : 0);
  }
  return static_cast<std::size_t>(2 * std::get<LatticeSpec>(*family).dimension);
}

}  // namespace

std::vector<Violation> validate(const GraphBall& ball) {
  std::vector<Violation> out;
  const auto n = static_cast<Vertex>(ball.size());

  for (Vertex x = 0; x < n; ++x) {
    if (!(ball.mu(x) > 0.0) || !std::isfinite(ball.mu(x))) {
      out.push_back({ViolationKind::nonpositive_measure, x, "mu(" + ball.label_string(x) + ") is not positive"});
    }
    const auto nbrs = ball.neighbors(x);
    const auto w = ball.weights(x);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const Vertex y = nbrs[k];
      if (y == x && w[k] != 0.0) {
        out.push_back({ViolationKind::self_loop, x, "omega(x, x) != 0 at " + ball.label_string(x)});
        continue;
      }
      if (!(w[k] >= 0.0) || !std::isfinite(w[k])) {
        out.push_back({ViolationKind::negative_weight, x,
                       "omega(" + ball.label_string(x) + ", " + ball.label_string(y) + ") is negative or not finite"});
      }
      const auto back = ball.neighbors(y);
      const bool reverse_stored = std::find(back.begin(), back.end(), x) != back.end();
      const double reverse = ball.weight(y, x);
      if (reverse != w[k] && (x < y || !reverse_stored)) {
        out.push_back({ViolationKind::asymmetric_weight, x,
                       "omega(" + ball.label_string(x) + ", " + ball.label_string(y) + ") != omega(" +
                           ball.label_string(y) + ", " + ball.label_string(x) + ")"});
      }
    }
  }

  for (Vertex x = 0; x < ball.interior_count(); ++x) {
    if (auto expected = expected_degree(ball, x)) {
      std::size_t positive = 0;
      for (double w : ball.weights(x)) positive += w > 0.0 ? 1 : 0;
      if (positive != *expected) {
        out.push_back({ViolationKind::closure, x,
                       "interior vertex " + ball.label_string(x) + " has " + std::to_string(positive) +
                           " neighbors in the ball, expected " + std::to_string(*expected)});
      }
    }
    const auto r = ball.layer(x);
    if (r >= 1) {
      const auto nbrs = ball.neighbors(x);
      const auto w = ball.weights(x);
      for (std::size_t k = 0; k < nbrs.size(); ++k) {
        if (w[k] <= 0.0) continue;
        const auto ry = ball.layer(nbrs[k]);
        if (ry != r + 1 && ry + 1 != r) {
          out.push_back({ViolationKind::layer_adjacency, x,
                         "edge " + ball.label_string(x) + " -- " + ball.label_string(nbrs[k]) +
                             " does not join consecutive layers"});
        }
      }
    }
  }

  // Interior connectivity through positive-weight interior edges.
  if (ball.interior_count() > 0) {
    std::vector<char> seen(ball.interior_count(), 0);
    std::deque<Vertex> queue{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!queue.empty()) {
      const Vertex x = queue.front();
      queue.pop_front();
      const auto nbrs = ball.neighbors(x);
      const auto w = ball.weights(x);
      for (std::size_t k = 0; k < nbrs.size(); ++k) {
        const Vertex y = nbrs[k];
        if (w[k] > 0.0 && ball.is_interior(y) && !seen[y]) {
          seen[y] = 1;
          ++reached;
          queue.push_back(y);
        }
      }
    }
    if (reached != ball.interior_count()) {
      for (Vertex x = 0; x < ball.interior_count(); ++x) {
        if (!seen[x]) {
          out.push_back({ViolationKind::disconnected, x,
                         "interior is not connected: " + ball.label_string(x) + " is unreachable"});
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace plgraph
