#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "plgraph/graph_ball.hpp"
#include "plgraph/operators.hpp"

namespace plgraph {

/// A spherically symmetric function on a weakly spherically symmetric ball,
/// together with the per-layer outer/inner degrees. Layers 0..R are interior,
/// layer R + 1 carries boundary data.
struct RadialProfile {
  std::vector<double> values;  // r = 0..R+1
  std::vector<double> dplus;   // r = 0..R
  std::vector<double> dminus;  // r = 0..R; dminus[0] == 0

  std::size_t radius() const { return dplus.empty() ? 0 : dplus.size() - 1; }
};

/// Degrees of a spherically symmetric tree: dplus(r) = b(r), dminus(r) = 1.
/// Values are zero-initialised.
RadialProfile tree_profile(const Branching& branching, std::size_t radius);

/// Reads the per-layer degrees off a ball. Throws DomainError when the ball is
/// not weakly spherically symmetric with respect to its center set, or when its
/// interior is not exactly the layers 0..R.
RadialProfile profile_of(const GraphBall& ball, double rel_tolerance = 1e-12);

/// dplus(r)[f(r+1) - f(r)] + dminus(r)[f(r-1) - f(r)], 0 <= r <= R. At the
/// root only the outward term is present.
double radial_laplacian(const RadialProfile& profile, std::size_t r);

/// V(r) for r = 0..R+1 on the combinatorial layers.
std::vector<double> radial_potential(const PowerPotential& V, std::size_t radius);

/// Solves radial_laplacian(u)(r) - V(r) u(r) = f(r) for 0 <= r <= R with
/// u(R+1) = boundary by direct tridiagonal elimination. `geometry` supplies
/// dplus/dminus; its values are ignored. V and f need at least R + 1 entries.
RadialProfile radial_dirichlet_solve(const RadialProfile& geometry, std::span<const double> V,
                                     std::span<const double> f, double boundary);

/// Largest row-scaled residual |Lu - Vu - f| / (dplus + dminus + V) of a radial solution.
double radial_residual(const RadialProfile& u, std::span<const double> V, std::span<const double> f);

/// u(x) = values[layer(x)].
Field lift(const GraphBall& ball, std::span<const double> values);

/// Lifts the profile onto the ball and returns the largest absolute
/// discrepancy between the full Laplacian and the radial one over the interior.
double lift_and_check(const GraphBall& ball, const RadialProfile& profile);

}  // namespace plgraph
