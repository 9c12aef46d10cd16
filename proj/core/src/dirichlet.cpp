#include "plgraph/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "plgraph/barriers.hpp"
#include "plgraph/error.hpp"

namespace plgraph {

DirichletProblem::DirichletProblem(const GraphBall& ball, Field V, Field f, Field g)
    : ball_(&ball), V_(std::move(V)), f_(std::move(f)), g_(std::move(g)) {
  if (ball.interior_count() == 0) throw DomainError("DirichletProblem: interior is empty");
  if (V_.size() != ball.size()) throw DomainError("DirichletProblem: V must cover the whole ball");
  if (f_.size() != ball.interior_count()) throw DomainError("DirichletProblem: f must cover the interior");
  if (g_.size() != ball.halo_count()) throw DomainError("DirichletProblem: g must cover the halo");
  for (Vertex x = 0; x < ball.interior_count(); ++x) {
    if (!(V_[x] >= 0.0)) throw DomainError("DirichletProblem: V must be nonnegative on the interior");
  }
}

DirichletProblem DirichletProblem::constant(const GraphBall& ball, const PowerPotential& V, double f, double g) {
  return DirichletProblem(ball, V.evaluate(ball), Field(ball.interior_count(), f), Field(ball.halo_count(), g));
}

Field DirichletProblem::extend(std::span<const double> interior) const {
  if (interior.size() != ball_->interior_count()) throw DomainError("extend: wrong interior size");
  Field u(ball_->size());
  std::copy(interior.begin(), interior.end(), u.values().begin());
  std::copy(g_.values().begin(), g_.values().end(), u.values().begin() + static_cast<std::ptrdiff_t>(interior.size()));
  return u;
}

void LinearSystem::multiply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t k = row_offsets[i]; k < row_offsets[i + 1]; ++k) sum += values[k] * x[columns[k]];
    y[i] = sum;
  }
}

double LinearSystem::diagonal(std::size_t row) const {
  for (std::size_t k = row_offsets[row]; k < row_offsets[row + 1]; ++k) {
    if (columns[k] == row) return values[k];
  }
  return 0.0;
}

LinearSystem assemble(const DirichletProblem& problem) {
  const auto& ball = problem.ball();
  const auto& V = problem.potential();
  const auto& f = problem.f();
  const auto& g = problem.g();
  const std::size_t n = ball.interior_count();

  LinearSystem sys;
  sys.n = n;
  sys.rhs.resize(n);
  sys.row_offsets.reserve(n + 1);
  for (Vertex x = 0; x < n; ++x) {
    const auto nbrs = ball.neighbors(x);
    const auto w = ball.weights(x);
    double diag = ball.mu(x) * V[x];
    double rhs = -ball.mu(x) * f[x];
    const std::size_t row_start = sys.columns.size();
    sys.columns.push_back(x);
    sys.values.push_back(0.0);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const Vertex y = nbrs[k];
      if (y == x) continue;
      diag += w[k];
      if (ball.is_interior(y)) {
        sys.columns.push_back(y);
        sys.values.push_back(-w[k]);
      } else {
        rhs += w[k] * g[y - n];
      }
    }
    sys.values[row_start] = diag;
    sys.rhs[x] = rhs;
    sys.row_offsets.push_back(sys.columns.size());
  }
  return sys;
}

const char* to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::automatic: return "automatic";
    case SolveMethod::conjugate_gradient: return "conjugate_gradient";
    case SolveMethod::direct: return "direct";
  }
  return "unknown";
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace

double relative_residual(const LinearSystem& system, std::span<const double> x) {
  std::vector<double> ax(system.n);
  system.multiply(x, ax);
  double rr = 0.0;
  for (std::size_t i = 0; i < system.n; ++i) {
    const double d = system.rhs[i] - ax[i];
    rr += d * d;
  }
  const double bn = norm(system.rhs);
  if (bn == 0.0) return std::sqrt(rr);
  return std::sqrt(rr) / bn;
}

LinearSolution conjugate_gradient(const LinearSystem& system, double tolerance, std::size_t max_iterations) {
  const std::size_t n = system.n;
  LinearSolution out;
  out.method = SolveMethod::conjugate_gradient;
  out.x.assign(n, 0.0);
  const double bnorm = norm(system.rhs);
  if (bnorm == 0.0) {
    out.converged = true;
    return out;
  }

  std::vector<double> inv_diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = system.diagonal(i);
    if (!(d > 0.0)) throw SolverError("conjugate_gradient: nonpositive diagonal entry at row " + std::to_string(i));
    inv_diag[i] = 1.0 / d;
  }

  std::vector<double> r = system.rhs, z(n), p(n), q(n);
  auto precondition = [&] {
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  };
  auto restart = [&] {
    system.multiply(out.x, q);
    for (std::size_t i = 0; i < n; ++i) r[i] = system.rhs[i] - q[i];
    precondition();
    p = z;
  };
  precondition();
  p = z;
  double rz = dot(r, z);

  constexpr std::size_t kReplaceEvery = 50;
  std::size_t it = 0;
  while (it < max_iterations) {
    system.multiply(p, q);
    const double pq = dot(p, q);
    if (!(pq > 0.0)) throw SolverError("conjugate_gradient: matrix is not positive definite");
    const double step = rz / pq;
    for (std::size_t i = 0; i < n; ++i) {
      out.x[i] += step * p[i];
      r[i] -= step * q[i];
    }
    ++it;
    if (it % kReplaceEvery == 0) {
      restart();
      rz = dot(r, z);
    }
    if (norm(r) <= tolerance * bnorm) {
      // Confirm against the true residual before accepting.
      restart();
      rz = dot(r, z);
      if (norm(r) <= tolerance * bnorm) break;
      continue;
    }
    precondition();
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  out.iterations = it;
  out.relative_residual = relative_residual(system, out.x);
  out.converged = out.relative_residual <= tolerance;
  return out;
}

LinearSolution direct_solve(const LinearSystem& system) {
  const std::size_t n = system.n;
  std::vector<double> a(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = system.row_offsets[i]; k < system.row_offsets[i + 1]; ++k) {
      a[i * n + system.columns[k]] += system.values[k];
    }
  }
  // In-place Cholesky, lower triangle.
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
    if (!(d > 0.0)) throw SolverError("direct_solve: matrix is not positive definite");
    const double l = std::sqrt(d);
    a[j * n + j] = l;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = s / l;
    }
  }
  LinearSolution out;
  out.method = SolveMethod::direct;
  out.x = system.rhs;
  for (std::size_t i = 0; i < n; ++i) {
    double s = out.x[i];
    for (std::size_t k = 0; k < i; ++k) s -= a[i * n + k] * out.x[k];
    out.x[i] = s / a[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = out.x[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[k * n + i] * out.x[k];
    out.x[i] = s / a[i * n + i];
  }
  out.relative_residual = relative_residual(system, out.x);
  out.converged = true;
  return out;
}

LinearSolution solve(const LinearSystem& system, const SolveOptions& options) {
  SolveMethod method = options.method;
  if (method == SolveMethod::automatic) {
    method = system.n < options.direct_cap ? SolveMethod::direct : SolveMethod::conjugate_gradient;
  }
  if (method == SolveMethod::direct) return direct_solve(system);
  return conjugate_gradient(system, options.tolerance, options.max_iterations.value_or(10 * system.n));
}

SolveReport solve(const DirichletProblem& problem, const SolveOptions& options) {
  const auto system = assemble(problem);
  auto linear = solve(system, options);
  SolveReport report;
  report.method = linear.method;
  report.iterations = linear.iterations;
  report.relative_residual = linear.relative_residual;
  report.converged = linear.converged;
  report.u = problem.extend(linear.x);
  report.min_u = report.u.min();
  report.max_u = report.u.max();
  report.pde_residual =
      schrodinger_residual(problem.ball(), problem.potential(), report.u, problem.f()).max_abs();
  return report;
}

double comparison_scale(const DirichletProblem& problem, const Field& u) {
  return std::max({1.0, problem.g().max_abs(), u.max_abs()});
}

ComparisonReport comparison_check(const DirichletProblem& problem, const Field& u_sub, const Field& u_super,
                                  double tolerance) {
  const auto& ball = problem.ball();
  if (u_sub.size() != ball.size() || u_super.size() != ball.size()) {
    throw DomainError("comparison_check: fields must cover the whole ball");
  }
  const double tol = tolerance * std::max(comparison_scale(problem, u_sub), u_super.max_abs());

  const auto sub = classify(schrodinger_residual(ball, problem.potential(), u_sub, problem.f()), tol);
  if (!is_subsolution(sub)) throw ClassificationError("comparison_check: u_sub is not a subsolution");
  const auto super = classify(schrodinger_residual(ball, problem.potential(), u_super, problem.f()), tol);
  if (!is_supersolution(super)) throw ClassificationError("comparison_check: u_super is not a supersolution");
  for (Vertex h = static_cast<Vertex>(ball.interior_count()); h < ball.size(); ++h) {
    if (u_sub[h] > u_super[h] + tol) {
      throw ClassificationError("comparison_check: u_sub > u_super on the halo at " + ball.label_string(h));
    }
  }

  ComparisonReport report;
  report.worst_gap = -std::numeric_limits<double>::infinity();
  for (Vertex x = 0; x < ball.interior_count(); ++x) {
    const double gap = u_sub[x] - u_super[x];
    if (gap > report.worst_gap) {
      report.worst_gap = gap;
      report.worst_vertex = ball.label_string(x);
    }
  }
  report.pass = report.worst_gap <= tol;
  return report;
}

namespace {

// Shared comparison logic of the two certificate entry points. Interior and
// halo values come as separate spans; the residual minima are precomputed.
struct CertificateInputs {
  std::span<const double> u_interior, u_halo;
  std::span<const double> zbar_interior, zbar_halo;
  double u_residual_min;
  double zbar_residual_min;
};

CertificateReport certify(const CertificateInputs& in, std::span<const double> schedule, double tolerance) {
  if (schedule.empty()) throw DomainError("pl_certificate: empty alpha schedule");
  double umax = 0.0;
  for (double v : in.u_interior) umax = std::max(umax, std::abs(v));
  for (double v : in.u_halo) umax = std::max(umax, std::abs(v));
  const double tol = tolerance * std::max(1.0, umax);

  if (in.zbar_residual_min < -tol) {
    throw ClassificationError("pl_certificate: shifted barrier is not a subsolution of L u = 0");
  }

  CertificateReport report;
  report.all_passed = true;
  for (double alpha : schedule) {
    if (!(alpha > 0.0)) throw DomainError("pl_certificate: alpha must be positive");
    CertificateStep step;
    step.alpha = alpha;
    step.halo_ok = true;
    for (std::size_t i = 0; i < in.u_halo.size(); ++i) {
      if (!(in.u_halo[i] < -alpha * in.zbar_halo[i])) {
        step.halo_ok = false;
        break;
      }
    }
    step.worst_gap = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < in.u_interior.size(); ++i) {
      step.worst_gap = std::max(step.worst_gap, in.u_interior[i] + alpha * in.zbar_interior[i]);
    }
    if (step.halo_ok) {
      report.growth_condition_met = true;
      if (in.u_residual_min < -tol) {
        throw ClassificationError("pl_certificate: u is not a subsolution of L u = 0");
      }
      step.interior_ok = step.worst_gap <= tol;
      if (step.interior_ok && (!report.smallest_alpha || alpha < *report.smallest_alpha)) {
        report.smallest_alpha = alpha;
      }
    }
    report.all_passed = report.all_passed && step.halo_ok && step.interior_ok;
    report.steps.push_back(step);
  }
  report.max_ratio = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < in.u_interior.size(); ++i) {
    report.max_ratio = std::max(report.max_ratio, in.u_interior[i] / std::abs(in.zbar_interior[i]));
  }
  return report;
}

}  // namespace

CertificateReport pl_certificate(const GraphBall& ball, const Field& V, const Field& u, const Field& Z,
                                 std::span<const double> alpha_schedule, double tolerance) {
  if (u.size() != ball.size() || Z.size() != ball.size() || V.size() != ball.size()) {
    throw DomainError("pl_certificate: V, u and Z must cover the whole ball");
  }
  const double H = Z.max();
  const Field zbar = shift(Z, H);
  const Field zero(ball.interior_count());
  const double u_res = schrodinger_residual(ball, V, u, zero).min();
  const double z_res = schrodinger_residual(ball, V, zbar, zero).min();

  const auto ni = static_cast<std::ptrdiff_t>(ball.interior_count());
  CertificateInputs in{u.values().first(ball.interior_count()), u.values().subspan(ni),
                       zbar.values().first(ball.interior_count()), zbar.values().subspan(ni), u_res, z_res};
  auto report = certify(in, alpha_schedule, tolerance);
  report.shift_H = H;
  for (Vertex x = 0; x < ball.size(); ++x) report.radius = std::max(report.radius, ball.distance(x));
  return report;
}

CertificateReport pl_certificate_radial(const RadialProfile& geometry, std::span<const double> V,
                                        std::span<const double> u, std::span<const double> Z,
                                        std::span<const double> alpha_schedule, double tolerance) {
  const std::size_t R = geometry.radius();
  if (u.size() != R + 2 || Z.size() != R + 2 || V.size() < R + 1) {
    throw DomainError("pl_certificate_radial: profiles must cover layers 0..R+1");
  }
  const double H = *std::max_element(Z.begin(), Z.end());
  std::vector<double> zbar(Z.size());
  for (std::size_t r = 0; r < Z.size(); ++r) zbar[r] = Z[r] - H - 1.0;

  auto residual_min = [&](std::span<const double> w) {
    RadialProfile p = geometry;
    p.values.assign(w.begin(), w.end());
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r <= R; ++r) m = std::min(m, radial_laplacian(p, r) - V[r] * w[r]);
    return m;
  };
  const std::span<const double> zs(zbar);
  CertificateInputs in{u.first(R + 1), u.subspan(R + 1), zs.first(R + 1), zs.subspan(R + 1), residual_min(u),
                       residual_min(zs)};
  auto report = certify(in, alpha_schedule, tolerance);
  report.shift_H = H;
  report.radius = static_cast<double>(R + 1);
  return report;
}

}  // namespace plgraph
