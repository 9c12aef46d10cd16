#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plgraph/graph_ball.hpp"
#include "plgraph/operators.hpp"
#include "plgraph/radial.hpp"

namespace plgraph {

/// L u = f on the interior, u = g on the halo, with L = Lap - V.
/// The ball is referenced, not owned.
class DirichletProblem {
 public:
  /// `V` covers the whole ball, `f` the interior and `g` the halo (halo
  /// vertex h has index h - interior_count() in `g`).
  DirichletProblem(const GraphBall& ball, Field V, Field f, Field g);

  /// Constant data convenience constructor.
  static DirichletProblem constant(const GraphBall& ball, const PowerPotential& V, double f, double g);

  const GraphBall& ball() const { return *ball_; }
  const Field& potential() const { return V_; }
  const Field& f() const { return f_; }
  const Field& g() const { return g_; }

  /// Whole-ball field that equals `interior` inside and g on the halo.
  Field extend(std::span<const double> interior) const;

 private:
  const GraphBall* ball_;
  Field V_;
  Field f_;
  Field g_;
};

/// Symmetric matrix in CSR form over the interior unknowns, with right-hand side.
struct LinearSystem {
  std::size_t n = 0;
  std::vector<std::size_t> row_offsets{0};
  std::vector<Vertex> columns;
  std::vector<double> values;
  std::vector<double> rhs;

  void multiply(std::span<const double> x, std::span<double> y) const;
  double diagonal(std::size_t row) const;
};

/// Row x: (deg(x) + mu(x) V(x)) u(x) - sum_{y interior} omega(x,y) u(y)
///        = -mu(x) f(x) + sum_{y halo} omega(x,y) g(y).
LinearSystem assemble(const DirichletProblem& problem);

enum class SolveMethod { automatic, conjugate_gradient, direct };
const char* to_string(SolveMethod m);

struct SolveOptions {
  SolveMethod method = SolveMethod::automatic;
  double tolerance = 1e-12;           // relative residual
  std::size_t direct_cap = 500;       // automatic uses direct below this many unknowns
  std::optional<std::size_t> max_iterations;  // default 10 * n
};

struct LinearSolution {
  std::vector<double> x;
  SolveMethod method = SolveMethod::conjugate_gradient;
  std::size_t iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Diagonally preconditioned conjugate gradients.
LinearSolution conjugate_gradient(const LinearSystem& system, double tolerance, std::size_t max_iterations);
/// Dense Cholesky elimination; throws SolverError if the matrix is not SPD.
LinearSolution direct_solve(const LinearSystem& system);
LinearSolution solve(const LinearSystem& system, const SolveOptions& options = {});

/// Relative residual ||b - A x|| / ||b|| (0 when b == 0 and x == 0).
double relative_residual(const LinearSystem& system, std::span<const double> x);

struct SolveReport {
  Field u;  // whole ball, halo = g
  SolveMethod method = SolveMethod::conjugate_gradient;
  std::size_t iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  double min_u = 0.0;
  double max_u = 0.0;
  /// max |L u - f| over the interior, recomputed from the operator.
  double pde_residual = 0.0;
};

/// Assembles and solves. A non-converged solve comes back with converged ==
/// false; callers decide whether that is fatal.
SolveReport solve(const DirichletProblem& problem, const SolveOptions& options = {});

/// Comparison tolerance 1e-9 * max(1, max|g|, max|u|).
double comparison_scale(const DirichletProblem& problem, const Field& u);

struct ComparisonReport {
  bool pass = false;
  double worst_gap = 0.0;  // max over interior of u_sub - u_super
  std::string worst_vertex;
};

/// Weak maximum principle check: u_sub <= u_super + tolerance on the
/// interior. Throws ClassificationError if u_sub is not a subsolution, u_super
/// not a supersolution, or u_sub > u_super somewhere on the halo.
ComparisonReport comparison_check(const DirichletProblem& problem, const Field& u_sub, const Field& u_super,
                                  double tolerance = 1e-9);

struct CertificateStep {
  double alpha = 0.0;
  bool halo_ok = false;      // u < alpha |Z_bar| on the halo
  bool interior_ok = false;  // u <= alpha |Z_bar| on the interior
  double worst_gap = 0.0;    // max over the interior of u - alpha |Z_bar|
};

/// Phragmen-Lindelof comparison at a finite radius: for each alpha, the
/// halo hypothesis u < -alpha Z_bar is tested and, where it holds, the
/// comparison u <= -alpha Z_bar is asserted on the interior.
struct CertificateReport {
  std::vector<CertificateStep> steps;
  /// False when the halo hypothesis failed for every alpha: the growth
  /// condition is not met at this radius (a scope statement, not a refutation).
  bool growth_condition_met = false;
  bool all_passed = false;
  /// Smallest alpha that passed both halo and interior checks.
  std::optional<double> smallest_alpha;
  /// max over the interior of u / |Z_bar|.
  double max_ratio = 0.0;
  /// Largest distance covered; nothing is claimed beyond the halo.
  double radius = 0.0;
  double shift_H = 0.0;
};

/// `Z` is a whole-ball sub-barrier field satisfying Lap Z >= -V; it is shifted
/// by H = max Z internally. `u` must be a subsolution of L u = 0.
CertificateReport pl_certificate(const GraphBall& ball, const Field& V, const Field& u, const Field& Z,
                                 std::span<const double> alpha_schedule, double tolerance = 1e-9);

/// Same certificate on a radial (tree) reduction: profiles over layers 0..R+1.
CertificateReport pl_certificate_radial(const RadialProfile& geometry, std::span<const double> V,
                                        std::span<const double> u, std::span<const double> Z,
                                        std::span<const double> alpha_schedule, double tolerance = 1e-9);

}  // namespace plgraph
