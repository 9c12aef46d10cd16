#include "plgraph/radial.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "plgraph/error.hpp"

namespace plgraph {

RadialProfile tree_profile(const Branching& branching, std::size_t radius) {
  RadialProfile p;
  p.values.assign(radius + 2, 0.0);
  p.dplus.resize(radius + 1);
  p.dminus.resize(radius + 1);
  for (std::size_t r = 0; r <= radius; ++r) {
    p.dplus[r] = branching.value(r);
    p.dminus[r] = r == 0 ? 0.0 : 1.0;
  }
  return p;
}

namespace {

bool close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

RadialProfile profile_of(const GraphBall& ball, double rel_tolerance) {
  if (ball.interior_count() == 0) throw DomainError("profile_of: empty interior");
  std::uint32_t R = 0;
  for (Vertex x = 0; x < ball.interior_count(); ++x) R = std::max(R, ball.layer(x));
  for (Vertex x = static_cast<Vertex>(ball.interior_count()); x < ball.size(); ++x) {
    if (ball.layer(x) != R + 1) {
      throw DomainError("profile_of: halo vertex " + ball.label_string(x) + " is not on layer R + 1");
    }
  }

  std::vector<std::optional<double>> plus(R + 1), minus(R + 1);
  for (Vertex x = 0; x < ball.interior_count(); ++x) {
    const auto r = ball.layer(x);
    double dp = 0.0, dm = 0.0;
    if (r == 0) {
      const auto nbrs = ball.neighbors(x);
      const auto w = ball.weights(x);
      for (std::size_t k = 0; k < nbrs.size(); ++k) {
        if (ball.layer(nbrs[k]) == 1) dp += w[k];
      }
      dp /= ball.mu(x);
    } else {
      const auto d = outer_inner_degree(ball, x);
      dp = d.outer;
      dm = d.inner;
    }
    if (!plus[r]) {
      plus[r] = dp;
      minus[r] = dm;
    } else if (!close(*plus[r], dp, rel_tolerance) || !close(*minus[r], dm, rel_tolerance)) {
      throw DomainError("ball is not weakly spherically symmetric: degrees vary within layer " + std::to_string(r) +
                        " (at " + ball.label_string(x) + ")");
    }
  }

  RadialProfile p;
  p.values.assign(R + 2, 0.0);
  p.dplus.resize(R + 1);
  p.dminus.resize(R + 1);
  for (std::uint32_t r = 0; r <= R; ++r) {
    if (!plus[r]) throw DomainError("profile_of: interior misses layer " + std::to_string(r));
    p.dplus[r] = *plus[r];
    p.dminus[r] = *minus[r];
  }
  return p;
}

double radial_laplacian(const RadialProfile& profile, std::size_t r) {
  const std::size_t R = profile.radius();
  if (r > R) throw DomainError("radial_laplacian: layer " + std::to_string(r) + " is not interior");
  if (profile.values.size() != R + 2) throw DomainError("radial_laplacian: values must cover layers 0..R+1");
  const auto& f = profile.values;
  double out = profile.dplus[r] * (f[r + 1] - f[r]);
  if (r >= 1) out += profile.dminus[r] * (f[r - 1] - f[r]);
  return out;
}

std::vector<double> radial_potential(const PowerPotential& V, std::size_t radius) {
  std::vector<double> out(radius + 2);
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = V.at_distance(static_cast<double>(r));
  return out;
}

RadialProfile radial_dirichlet_solve(const RadialProfile& geometry, std::span<const double> V,
                                     std::span<const double> f, double boundary) {
  const std::size_t R = geometry.radius();
  const std::size_t n = R + 1;
  if (geometry.dplus.size() != n || geometry.dminus.size() != n) {
    throw DomainError("radial_dirichlet_solve: degree arrays must cover layers 0..R");
  }
  if (V.size() < n || f.size() < n) throw DomainError("radial_dirichlet_solve: V and f must cover layers 0..R");
  for (std::size_t r = 0; r < n; ++r) {
    if (!(geometry.dplus[r] > 0.0)) throw DomainError("radial_dirichlet_solve: dplus must be positive");
    if (r >= 1 && !(geometry.dminus[r] > 0.0)) throw DomainError("radial_dirichlet_solve: dminus must be positive");
    if (!(V[r] >= 0.0)) throw DomainError("radial_dirichlet_solve: V must be nonnegative");
  }

  // Row r: -dminus u(r-1) + (dplus + dminus + V) u(r) - dplus u(r+1) = -f(r).
  std::vector<double> cprime(n), dprime(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double lower = r >= 1 ? -geometry.dminus[r] : 0.0;
    const double diag = geometry.dplus[r] + (r >= 1 ? geometry.dminus[r] : 0.0) + V[r];
    const double upper = -geometry.dplus[r];
    double rhs = -f[r];
    if (r == R) rhs -= upper * boundary;
    const double pivot = r == 0 ? diag : diag - lower * cprime[r - 1];
    if (!(std::abs(pivot) > 0.0) || !std::isfinite(pivot)) {
      throw SolverError("radial_dirichlet_solve: singular tridiagonal pivot at layer " + std::to_string(r));
    }
    cprime[r] = r == R ? 0.0 : upper / pivot;
    dprime[r] = (rhs - (r >= 1 ? lower * dprime[r - 1] : 0.0)) / pivot;
  }

  RadialProfile out = geometry;
  out.values.assign(R + 2, 0.0);
  out.values[R + 1] = boundary;
  out.values[R] = dprime[R];
  for (std::size_t r = R; r-- > 0;) out.values[r] = dprime[r] - cprime[r] * out.values[r + 1];
  return out;
}

double radial_residual(const RadialProfile& u, std::span<const double> V, std::span<const double> f) {
  const std::size_t R = u.radius();
  double worst = 0.0;
  for (std::size_t r = 0; r <= R; ++r) {
    const double res = radial_laplacian(u, r) - V[r] * u.values[r] - f[r];
    const double scale = u.dplus[r] + u.dminus[r] + V[r];
    worst = std::max(worst, std::abs(res) / scale);
  }
  return worst;
}

Field lift(const GraphBall& ball, std::span<const double> values) {
  Field u(ball.size());
  for (Vertex x = 0; x < ball.size(); ++x) {
    const auto r = ball.layer(x);
    if (r >= values.size()) throw DomainError("lift: profile does not reach layer " + std::to_string(r));
    u[x] = values[r];
  }
  return u;
}

double lift_and_check(const GraphBall& ball, const RadialProfile& profile) {
  const auto geometry = profile_of(ball);
  if (geometry.radius() != profile.radius()) {
    throw DomainError("lift_and_check: profile radius " + std::to_string(profile.radius()) +
                      " does not match ball radius " + std::to_string(geometry.radius()));
  }
  const Field u = lift(ball, profile.values);
  double worst = 0.0;
  for (Vertex x = 0; x < ball.interior_count(); ++x) {
    const double full = laplacian_at(ball, u.values(), x);
    const double reduced = radial_laplacian(profile, ball.layer(x));
    worst = std::max(worst, std::abs(full - reduced));
  }
  return worst;
}

}  // namespace plgraph
