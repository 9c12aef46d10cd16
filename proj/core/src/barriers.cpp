#include "plgraph/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "plgraph/error.hpp"

namespace plgraph {

const char* to_string(BarrierFamily family) {
  switch (family) {
    case BarrierFamily::tree_power: return "tree_power";
    case BarrierFamily::tree_log: return "tree_log";
    case BarrierFamily::growth_gauge: return "growth_gauge";
    case BarrierFamily::lattice_power: return "lattice_power";
    case BarrierFamily::lattice_log: return "lattice_log";
    case BarrierFamily::lattice_inverse: return "lattice_inverse";
    case BarrierFamily::tree_inverse: return "tree_inverse";
  }
  return "unknown";
}

BarrierFamily parse_barrier_family(std::string_view name) {
  for (auto f : {BarrierFamily::tree_power, BarrierFamily::tree_log, BarrierFamily::growth_gauge,
                 BarrierFamily::lattice_power, BarrierFamily::lattice_log, BarrierFamily::lattice_inverse,
                 BarrierFamily::tree_inverse}) {
    if (name == to_string(f)) return f;
  }
  throw DomainError("unknown barrier family '" + std::string(name) + "'");
}

BarrierDirection BarrierSpec::direction() const {
  return family == BarrierFamily::lattice_inverse || family == BarrierFamily::tree_inverse ? BarrierDirection::super
                                                                                           : BarrierDirection::sub;
}

BarrierContext context_of(const GraphBall& ball) {
  BarrierContext c;
  c.metric = ball.metric();
  c.dimension = ball.dimension();
  if (ball.family()) {
    if (const auto* tree = std::get_if<TreeSpec>(&*ball.family())) {
      if (tree->branching.kind == Branching::Kind::power) c.tree_power = tree->branching.p;
    }
  }
  return c;
}

namespace {

bool is_tree_family(BarrierFamily f) {
  return f == BarrierFamily::tree_power || f == BarrierFamily::tree_log || f == BarrierFamily::tree_inverse;
}

bool is_lattice_family(BarrierFamily f) {
  return f == BarrierFamily::lattice_power || f == BarrierFamily::lattice_log || f == BarrierFamily::lattice_inverse;
}

[[noreturn]] void reject(const BarrierSpec& spec, const std::string& why) {
  throw ParameterError(std::string(to_string(spec.family)) + ": " + why);
}

}  // namespace

void check_parameters(const BarrierSpec& spec, const BarrierContext& context) {
  const auto& p = spec.params;
  if (is_tree_family(spec.family) && context.metric != Metric::combinatorial) {
    reject(spec, "tree barriers need a combinatorially layered ball");
  }
  if ((is_lattice_family(spec.family) || (spec.family == BarrierFamily::growth_gauge &&
                                          context.metric == Metric::euclidean)) &&
      (context.metric != Metric::euclidean || context.dimension < 1)) {
    reject(spec, "lattice barriers need a lattice ball");
  }
  if (!spec.strict) return;

  switch (spec.family) {
    case BarrierFamily::tree_power:
      if (!(p.alpha >= 0.0 && p.alpha < 1.0)) reject(spec, "needs alpha in [0, 1)");
      if (!(p.M > 0.0)) reject(spec, "needs M > 0");
      break;
    case BarrierFamily::tree_log:
      if (!(p.alpha >= 0.0 && p.alpha <= 1.0)) reject(spec, "needs alpha in [0, 1]");
      if (!(p.M > 0.0)) reject(spec, "needs M > 0");
      break;
    case BarrierFamily::growth_gauge: {
      const double top = context.metric == Metric::euclidean ? 2.0 : 1.0;
      if (!(p.alpha >= 0.0 && p.alpha <= top)) {
        reject(spec, "needs alpha in [0, " + std::to_string(static_cast<int>(top)) + "]");
      }
      break;
    }
    case BarrierFamily::lattice_power:
      if (!(p.alpha >= 0.0 && p.alpha < 2.0)) reject(spec, "needs alpha in [0, 2)");
      if (!(p.beta > 0.0 && p.beta < (2.0 - p.alpha) / 2.0)) {
        reject(spec, "needs 0 < beta < (2 - alpha)/2 = " + std::to_string((2.0 - p.alpha) / 2.0));
      }
      if (!(p.K > 0.0)) reject(spec, "needs K > 0");
      break;
    case BarrierFamily::lattice_log:
      if (!(p.alpha >= 0.0 && p.alpha <= 2.0)) reject(spec, "needs alpha in [0, 2]");
      if (!(p.K > 0.0)) reject(spec, "needs K > 0");
      break;
    case BarrierFamily::lattice_inverse: {
      const int n = context.dimension;
      if (n < 3) reject(spec, "needs dimension n >= 3");
      if (!(p.gamma > 0.0 && p.gamma < (n - 2) / 2.0)) reject(spec, "needs 0 < gamma < (n - 2)/2");
      if (!(p.gamma <= (p.alpha - 2.0) / 2.0)) reject(spec, "needs gamma <= (alpha - 2)/2");
      if (!(p.K > (p.gamma + 1.0) / 2.0)) reject(spec, "needs K > (gamma + 1)/2");
      if (!(p.sigma > 0.0)) reject(spec, "needs sigma > 0");
      break;
    }
    case BarrierFamily::tree_inverse:
      if (!(p.beta > 0.0)) reject(spec, "needs beta > 0");
      if (context.tree_power && !(p.beta < p.alpha + *context.tree_power - 1.0)) {
        reject(spec, "needs beta < alpha + p - 1");
      }
      break;
  }
}

double barrier_at_layer(const BarrierSpec& spec, double r) {
  const auto& p = spec.params;
  switch (spec.family) {
    case BarrierFamily::tree_power: return -p.M * std::pow(r, 1.0 - p.alpha) - 1.0;
    case BarrierFamily::tree_log: return -p.M * std::log(2.0 + r);
    case BarrierFamily::tree_inverse: return std::pow(1.0 + r, -p.beta);
    case BarrierFamily::growth_gauge: {
      const double rho = r > 1.0 ? r : 2.0;  // constant below the first defined layer
      return p.alpha == 1.0 ? -std::log(rho) : -std::pow(rho, 1.0 - p.alpha);
    }
    default: throw ParameterError(std::string(to_string(spec.family)) + " is not a layer barrier");
  }
}

double barrier_at_norm2(const BarrierSpec& spec, std::int64_t norm2, int dimension) {
  const auto& p = spec.params;
  const auto s = static_cast<double>(norm2);
  switch (spec.family) {
    case BarrierFamily::lattice_power: return -p.K * std::pow(s, p.beta) - 1.0;
    case BarrierFamily::lattice_log: return -p.K * std::log(s + 2.0);
    case BarrierFamily::lattice_inverse: return p.sigma / std::pow(p.K + s, p.gamma);
    case BarrierFamily::growth_gauge: {
      // Below |x| > 2 use the value at the smallest lattice norm beyond 2.
      const double first = dimension == 1 ? 9.0 : 5.0;
      const double radius = std::sqrt(norm2 > 4 ? s : first);
      return p.alpha == 2.0 ? -std::log(radius) : -std::pow(radius, 2.0 - p.alpha);
    }
    default: throw ParameterError(std::string(to_string(spec.family)) + " is not a lattice barrier");
  }
}

Field evaluate(const BarrierSpec& spec, const GraphBall& ball) {
  const auto context = context_of(ball);
  check_parameters(spec, context);
  Field Z(ball.size());
  const bool lattice = context.metric == Metric::euclidean;
  for (Vertex x = 0; x < ball.size(); ++x) {
    Z[x] = lattice ? barrier_at_norm2(spec, ball.norm2(x), context.dimension)
                   : barrier_at_layer(spec, static_cast<double>(ball.layer(x)));
  }
  return Z;
}

std::vector<double> evaluate_radial(const BarrierSpec& spec, std::size_t radius, const BarrierContext& context) {
  if (context.metric != Metric::combinatorial) throw ParameterError("radial barriers live on combinatorial layers");
  check_parameters(spec, context);
  std::vector<double> out(radius + 2);
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = barrier_at_layer(spec, static_cast<double>(r));
  return out;
}

Field shift(const Field& Z, double H) {
  const double sup = Z.max();
  if (H < sup) {
    throw DomainError("shift: H = " + std::to_string(H) + " is below sup Z = " + std::to_string(sup));
  }
  Field out(Z.size());
  for (std::size_t i = 0; i < Z.size(); ++i) out[i] = Z[i] - H - 1.0;
  return out;
}

VerificationDomain VerificationDomain::on_ball(const GraphBall& ball, Field V) {
  if (V.size() != ball.size()) throw DomainError("VerificationDomain: potential must cover the whole ball");
  VerificationDomain d;
  d.ball_ = &ball;
  d.ball_potential_ = std::move(V);
  d.context_ = context_of(ball);
  d.distance_.resize(ball.interior_count());
  for (Vertex x = 0; x < ball.interior_count(); ++x) {
    if (!(d.ball_potential_[x] > 0.0)) throw DomainError("VerificationDomain: V must be positive on the interior");
    d.distance_[x] = ball.distance(x);
  }
  return d;
}

VerificationDomain VerificationDomain::on_ball(const GraphBall& ball, const PowerPotential& V) {
  return on_ball(ball, V.evaluate(ball));
}

VerificationDomain VerificationDomain::radial(RadialProfile geometry, std::vector<double> V, BarrierContext context) {
  const std::size_t R = geometry.radius();
  if (V.size() < R + 1) throw DomainError("VerificationDomain: V must cover layers 0..R");
  if (context.metric != Metric::combinatorial) throw DomainError("VerificationDomain: radial domains are combinatorial");
  VerificationDomain d;
  d.radial_ = std::move(geometry);
  d.radial_potential_ = std::move(V);
  d.context_ = context;
  d.distance_.resize(R + 1);
  for (std::size_t r = 0; r <= R; ++r) {
    if (!(d.radial_potential_[r] > 0.0)) throw DomainError("VerificationDomain: V must be positive on layers 0..R");
    d.distance_[r] = static_cast<double>(r);
  }
  return d;
}

VerificationDomain VerificationDomain::tree(const Branching& branching, std::size_t radius, const PowerPotential& V) {
  BarrierContext c;
  c.metric = Metric::combinatorial;
  if (branching.kind == Branching::Kind::power) c.tree_power = branching.p;
  return radial(tree_profile(branching, radius), radial_potential(V, radius), c);
}

std::string VerificationDomain::label(std::size_t i) const {
  if (ball_) return ball_->label_string(static_cast<Vertex>(i));
  return std::to_string(i);
}

std::vector<double> VerificationDomain::normalized_laplacian(const BarrierSpec& spec) const {
  std::vector<double> out(size());
  if (ball_) {
    const Field Z = evaluate(spec, *ball_);
    for (Vertex x = 0; x < ball_->interior_count(); ++x) {
      out[x] = laplacian_at(*ball_, Z.values(), x) / ball_potential_[x];
    }
    return out;
  }
  RadialProfile profile = radial_;
  profile.values = evaluate_radial(spec, radial_.radius(), context_);
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = radial_laplacian(profile, r) / radial_potential_[r];
  return out;
}

MarginReport verify(const BarrierSpec& spec, const VerificationDomain& domain, const VerifyOptions& options) {
  const auto normalized = domain.normalized_laplacian(spec);
  MarginReport report;
  report.direction = spec.direction();

  std::optional<double> min_radius = options.min_radius;
  if (!min_radius && spec.family == BarrierFamily::lattice_inverse) min_radius = 1.0;
  const double max_radius = options.max_radius.value_or(std::numeric_limits<double>::infinity());

  std::vector<std::size_t> region;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    if (domain.distance(i) <= max_radius) region.push_back(i);
  }
  auto margin_of = [&](std::size_t i) { return normalized[i] + 1.0; };

  // Picks the worst point of `points` (first in domain order on ties).
  auto worst_of = [&](const std::vector<std::size_t>& points, bool take_min) {
    std::size_t best = points.front();
    for (std::size_t i : points) {
      const double m = margin_of(i);
      if (take_min ? m < margin_of(best) : m > margin_of(best)) best = i;
    }
    return best;
  };
  auto restrict_from = [&](double from) {
    std::vector<std::size_t> out;
    for (std::size_t i : region) {
      if (domain.distance(i) >= from) out.push_back(i);
    }
    return out;
  };
  auto finish = [&](const std::vector<std::size_t>& points, std::size_t worst) {
    report.margin = margin_of(worst);
    report.worst_vertex = domain.label(worst);
    report.worst_distance = domain.distance(worst);
    report.points_checked = points.size();
    report.verified_radius = 0.0;
    for (std::size_t i : points) report.verified_radius = std::max(report.verified_radius, domain.distance(i));
  };

  if (report.direction == BarrierDirection::sub) {
    const auto points = min_radius ? restrict_from(*min_radius) : region;
    if (points.empty()) throw DomainError("verify: no points in the requested radius window");
    const auto worst = worst_of(points, true);
    finish(points, worst);
    report.pass = report.margin >= -options.tolerance;
    return report;
  }

  if (region.empty()) throw DomainError("verify: no points in the requested radius window");

  // Scan inward for the smallest R0 with the inequality holding on [R0, max].
  std::vector<std::size_t> by_distance = region;
  std::stable_sort(by_distance.begin(), by_distance.end(),
                   [&](std::size_t a, std::size_t b) { return domain.distance(a) < domain.distance(b); });
  std::size_t k = by_distance.size();
  while (k > 0) {
    const double d = domain.distance(by_distance[k - 1]);
    std::size_t j = k;
    bool shell_ok = true;
    while (j > 0 && domain.distance(by_distance[j - 1]) == d) {
      shell_ok = shell_ok && margin_of(by_distance[j - 1]) <= options.tolerance;
      --j;
    }
    if (!shell_ok) break;
    report.r0 = d;
    k = j;
  }

  if (min_radius) {
    const auto points = restrict_from(*min_radius);
    if (points.empty()) throw DomainError("verify: no points in the requested radius window");
    finish(points, worst_of(points, false));
    report.pass = report.margin <= options.tolerance;
  } else if (report.r0) {
    const auto points = restrict_from(*report.r0);
    finish(points, worst_of(points, false));
    report.pass = true;
  } else {
    finish(region, worst_of(region, false));
    report.pass = false;
  }
  return report;
}

const char* to_string(SearchParameter p) {
  switch (p) {
    case SearchParameter::M: return "M";
    case SearchParameter::K: return "K";
    case SearchParameter::sigma: return "sigma";
  }
  return "unknown";
}

SearchParameter parse_search_parameter(std::string_view name) {
  if (name == "M") return SearchParameter::M;
  if (name == "K") return SearchParameter::K;
  if (name == "sigma") return SearchParameter::sigma;
  throw DomainError("unknown search parameter '" + std::string(name) + "'");
}

SearchResult search_parameter(const BarrierSpec& spec, const VerificationDomain& domain, const SearchOptions& options) {
  const bool fits = [&] {
    switch (options.which) {
      case SearchParameter::M:
        return spec.family == BarrierFamily::tree_power || spec.family == BarrierFamily::tree_log;
      case SearchParameter::K:
        return spec.family == BarrierFamily::lattice_power || spec.family == BarrierFamily::lattice_log;
      case SearchParameter::sigma: return spec.family == BarrierFamily::lattice_inverse;
    }
    return false;
  }();
  if (!fits) {
    throw ParameterError(std::string("parameter ") + to_string(options.which) + " cannot be searched for " +
                         to_string(spec.family));
  }
  if (!(options.hi > options.lo) || options.iterations < 1) throw DomainError("search_parameter: empty window");

  auto with = [&](double value) {
    BarrierSpec s = spec;
    switch (options.which) {
      case SearchParameter::M: s.params.M = value; break;
      case SearchParameter::K: s.params.K = value; break;
      case SearchParameter::sigma: s.params.sigma = value; break;
    }
    return s;
  };
  auto passes = [&](double value) { return verify(with(value), domain, options.verify).pass; };

  SearchResult result;
  double lo = options.lo, hi = options.hi;
  if (spec.direction() == BarrierDirection::sub) {
    // Margin is concave in the scale and equals 1 at zero: feasible set is (0, M*].
    if (passes(hi)) {
      result.feasible = true;
      result.value = hi;
    } else {
      bool any = false;
      for (int it = 0; it < options.iterations; ++it) {
        const double mid = lo + (hi - lo) / 2.0;
        if (passes(mid)) {
          lo = mid;
          any = true;
        } else {
          hi = mid;
        }
      }
      result.feasible = any;
      result.value = any ? lo : hi;
    }
  } else {
    // Margin is convex in sigma and equals 1 at zero: feasible set is [sigma*, inf).
    if (!passes(hi)) {
      result.feasible = false;
      result.value = hi;
    } else {
      result.feasible = true;
      for (int it = 0; it < options.iterations; ++it) {
        const double mid = lo + (hi - lo) / 2.0;
        if (passes(mid)) hi = mid;
        else lo = mid;
      }
      result.value = hi;
    }
  }
  result.report = verify(with(result.value), domain, options.verify);
  return result;
}

}  // namespace plgraph
