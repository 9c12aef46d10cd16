// plgraph: command-line front end for the graph, barrier, Dirichlet and
// experiment routines.
//
// Exit codes: 0 success, 1 a check failed (verification, strict parameter
// window, solver), 2 usage or input error.

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "plgraph/barriers.hpp"
#include "plgraph/dirichlet.hpp"
#include "plgraph/error.hpp"
#include "plgraph/experiments.hpp"
#include "plgraph/graph_ball.hpp"
#include "plgraph/io.hpp"
#include "plgraph/radial.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace plgraph;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown once the command ran but its check did not hold.
struct CheckFailed {};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s;
    for (const auto& item : v) s += (s.empty() ? "" : ",") + scalar_text(item);
    return s;
  }
  return v.dump();
}

/// Fills options that were not given on the command line from a flat JSON
/// object keyed by long option name.
void apply_flat_config(CLI::App* sub, const std::string& path) {
  const json cfg = read_json(path);
  if (!cfg.is_object()) throw UsageError(path + ": expected a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (!opt || key == "config") throw UsageError(path + ": unknown key \"" + key + "\"");
    if (opt->count() > 0) continue;  // command line wins
    opt->add_result(scalar_text(value));
    opt->run_callback();
  }
}

std::optional<double> parse_number(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string> split(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_number_list(const std::string& s, const char* what) {
  std::vector<double> out;
  for (const auto& item : split(s)) {
    const auto v = parse_number(item);
    if (!v) throw UsageError(std::string(what) + ": '" + item + "' is not a number");
    out.push_back(*v);
  }
  if (out.empty()) throw UsageError(std::string(what) + ": empty list");
  return out;
}

/// Writes `content` to <out>/<name>, or to stdout when no directory is given.
void emit(const std::string& out_dir, const std::string& name, const std::string& content) {
  if (out_dir.empty()) {
    std::cout << content;
    return;
  }
  fs::create_directories(out_dir);
  const fs::path path = fs::path(out_dir) / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path.string());
  f << content;
  std::cerr << "wrote " << path.string() << '\n';
}

// ---------------------------------------------------------------------------
// Shared graph / potential flags

struct GraphArgs {
  std::string graph = "tree";
  std::string branching = "constant:2";
  int dim = 3;
  double radius = 10.0;
};

void add_graph_flags(CLI::App* sub, GraphArgs& g) {
  sub->add_option("--graph", g.graph, "tree or lattice")->check(CLI::IsMember({"tree", "lattice"}));
  sub->add_option("--branching", g.branching, "tree branching, constant:<b0> or power:<p>");
  sub->add_option("--dim", g.dim, "lattice dimension")->check(CLI::PositiveNumber);
  sub->add_option("--radius", g.radius, "tree radius R (layers 0..R) or lattice radius (|x| < radius)");
}

FamilySpec family_of(const GraphArgs& g) {
  if (g.graph == "tree") return with_radius(TreeFamily{io::parse_branching(g.branching)}, g.radius);
  return LatticeSpec{g.dim, g.radius};
}

Metric metric_of(const GraphArgs& g) { return g.graph == "tree" ? Metric::combinatorial : Metric::euclidean; }

// ---------------------------------------------------------------------------
// graph validate

struct ValidateArgs {
  std::string config, out;
  GraphArgs g;
};

int run_validate(ValidateArgs& a) {
  const auto ball = build_ball(family_of(a.g));
  const auto violations = validate(ball);
  emit(a.out, "validate.json", io::to_json(violations) + "\n");
  if (!violations.empty()) throw CheckFailed{};
  return 0;
}

// ---------------------------------------------------------------------------
// barrier verify / barrier search

struct BarrierArgs {
  std::string config, out;
  GraphArgs g;
  std::string family;
  double alpha = 1.0, c0 = 1.0, tolerance = 1e-9;
  std::optional<double> M, K, beta, gamma, sigma, min_radius, max_radius;
  bool lenient = false;
  // search only
  std::string parameter;
  double lo = 0.0, hi = 10.0;
  int iterations = 60;
};

void add_barrier_flags(CLI::App* sub, BarrierArgs& a) {
  sub->add_option("--config", a.config, "JSON object keyed by flag name");
  sub->add_option("--out", a.out, "output directory");
  add_graph_flags(sub, a.g);
  sub->add_option("--family", a.family,
                  "tree_power, tree_log, growth_gauge, lattice_power, lattice_log, lattice_inverse, tree_inverse");
  sub->add_option("--alpha", a.alpha, "potential decay exponent");
  sub->add_option("--c0", a.c0, "potential scale");
  sub->add_option("--M", a.M);
  sub->add_option("--K", a.K);
  sub->add_option("--beta", a.beta);
  sub->add_option("--gamma", a.gamma);
  sub->add_option("--sigma", a.sigma);
  sub->add_option("--tolerance", a.tolerance);
  sub->add_option("--min-radius", a.min_radius, "only check points at distance >= this");
  sub->add_option("--max-radius", a.max_radius, "only check points at distance <= this");
  sub->add_flag("--lenient", a.lenient, "accept parameters outside the family's window");
}

BarrierSpec spec_of(const BarrierArgs& a) {
  if (a.family.empty()) throw UsageError("--family is required");
  BarrierSpec spec;
  try {
    spec.family = parse_barrier_family(a.family);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  spec.strict = !a.lenient;
  auto& p = spec.params;
  p.alpha = a.alpha;
  if (a.M) p.M = *a.M;
  if (a.K) p.K = *a.K;
  if (a.beta) p.beta = *a.beta;
  if (a.gamma) p.gamma = *a.gamma;
  if (a.sigma) p.sigma = *a.sigma;
  return spec;
}

/// Barrier commands infer the graph from the family when --graph is absent.
void infer_graph(CLI::App* sub, BarrierArgs& a) {
  if (sub->get_option("--graph")->count() > 0 || a.family.empty()) return;
  if (a.family.rfind("lattice_", 0) == 0) a.g.graph = "lattice";
}

template <class F>
auto with_domain(const BarrierArgs& a, F&& body) {
  const PowerPotential V{a.c0, a.alpha, metric_of(a.g), std::nullopt};
  if (a.g.graph == "tree") {
    const auto tree = std::get<TreeSpec>(family_of(a.g));
    return body(VerificationDomain::tree(tree.branching, tree.radius, V));
  }
  const auto ball = build_ball(family_of(a.g));
  return body(VerificationDomain::on_ball(ball, V));
}

VerifyOptions verify_options(const BarrierArgs& a) {
  VerifyOptions o;
  o.tolerance = a.tolerance;
  o.min_radius = a.min_radius;
  o.max_radius = a.max_radius;
  return o;
}

int run_barrier_verify(CLI::App* sub, BarrierArgs& a) {
  infer_graph(sub, a);
  const auto spec = spec_of(a);
  const auto report = with_domain(a, [&](const VerificationDomain& d) { return verify(spec, d, verify_options(a)); });
  emit(a.out, "verify.json", io::to_json(report) + "\n");
  if (!report.pass) throw CheckFailed{};
  return 0;
}

int run_barrier_search(CLI::App* sub, BarrierArgs& a) {
  infer_graph(sub, a);
  const auto spec = spec_of(a);
  SearchOptions o;
  if (a.parameter.empty()) {
    switch (spec.family) {
      case BarrierFamily::tree_power:
      case BarrierFamily::tree_log: o.which = SearchParameter::M; break;
      case BarrierFamily::lattice_power:
      case BarrierFamily::lattice_log: o.which = SearchParameter::K; break;
      case BarrierFamily::lattice_inverse: o.which = SearchParameter::sigma; break;
      default: throw UsageError(std::string(to_string(spec.family)) + " has no searchable parameter");
    }
  } else {
    try {
      o.which = parse_search_parameter(a.parameter);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  o.lo = a.lo;
  o.hi = a.hi;
  o.iterations = a.iterations;
  o.verify = verify_options(a);
  const auto result =
      with_domain(a, [&](const VerificationDomain& d) { return search_parameter(spec, d, o); });
  std::optional<double> value;
  if (result.feasible) value = result.value;
  emit(a.out, "search.json", io::to_json(result.report, value, to_string(o.which)) + "\n");
  if (!result.feasible) throw CheckFailed{};
  return 0;
}

// ---------------------------------------------------------------------------
// dirichlet solve

struct DirichletArgs {
  std::string config, out;
  GraphArgs g;
  double alpha = 1.0, c0 = 1.0;
  std::string boundary = "1";
  std::string f = "0";
  std::string method = "auto";
  double tol = 1e-12;
};

Field constant_or_csv(const std::string& text, const GraphBall& ball, Vertex first, std::size_t count) {
  if (const auto v = parse_number(text)) return Field(count, *v);
  std::ifstream in(text);
  if (!in) throw UsageError("'" + text + "' is neither a number nor a readable CSV file");
  return io::read_field_csv(in, ball, first, count);
}

int run_dirichlet(DirichletArgs& a) {
  const auto ball = build_ball(family_of(a.g));
  const PowerPotential V{a.c0, a.alpha, metric_of(a.g), std::nullopt};
  const auto ni = static_cast<Vertex>(ball.interior_count());
  DirichletProblem problem(ball, V.evaluate(ball), constant_or_csv(a.f, ball, 0, ball.interior_count()),
                           constant_or_csv(a.boundary, ball, ni, ball.halo_count()));
  SolveOptions o;
  o.tolerance = a.tol;
  o.method = a.method == "cg" ? SolveMethod::conjugate_gradient
             : a.method == "direct" ? SolveMethod::direct
                                    : SolveMethod::automatic;
  const auto report = solve(problem, o);
  std::ostringstream csv;
  io::write_field_csv(csv, ball, report.u, "u");
  emit(a.out, "solution.csv", csv.str());
  if (a.out.empty()) std::cerr << io::to_json(report) << '\n';
  else emit(a.out, "solve.json", io::to_json(report) + "\n");
  if (!report.converged) throw CheckFailed{};
  return 0;
}

// ---------------------------------------------------------------------------
// radial solve

struct RadialArgs {
  std::string config, out;
  std::string branching = "constant:2";
  double alpha = 1.0, c0 = 1.0, boundary = 1.0, f = 0.0;
  std::size_t radius = 100;
};

int run_radial(RadialArgs& a) {
  const auto geometry = tree_profile(io::parse_branching(a.branching), a.radius);
  const auto V = radial_potential(PowerPotential{a.c0, a.alpha, Metric::combinatorial, std::nullopt}, a.radius);
  const std::vector<double> f(a.radius + 1, a.f);
  const auto u = radial_dirichlet_solve(geometry, V, f, a.boundary);
  std::ostringstream csv;
  io::write_radial_csv(csv, u, V);
  emit(a.out, "radial.csv", csv.str());
  return 0;
}

// ---------------------------------------------------------------------------
// experiment exhaustion

struct ExhaustionArgs {
  std::string config, out;
  std::optional<std::string> graph, branching, radii;
  std::optional<int> dim;
  std::optional<double> alpha, c0, gamma;
};

int run_exhaustion(ExhaustionArgs& a) {
  json doc = a.config.empty() ? json::object() : read_json(a.config);
  if (!doc.is_object()) throw UsageError(a.config + ": expected a JSON object");

  if (a.graph || a.branching || a.dim) {
    json g = doc.value("graph", json::object());
    if (a.graph) g["family"] = *a.graph;
    if (a.dim) g["n"] = *a.dim;
    if (a.branching) {
      const auto b = io::parse_branching(*a.branching);
      g["branching"] = b.kind == Branching::Kind::constant ? json{{"kind", "constant"}, {"b0", b.b0}}
                                                           : json{{"kind", "power"}, {"p", b.p}};
    }
    if (!g.contains("family")) g["family"] = "lattice";
    if (g["family"] == "lattice" && !g.contains("n")) g["n"] = 3;
    doc["graph"] = g;
  }
  if (a.alpha || a.c0) {
    json p = doc.value("potential", json{{"kind", "power"}, {"c0", 1.0}, {"alpha", 1.0}});
    if (a.alpha) p["alpha"] = *a.alpha;
    if (a.c0) p["c0"] = *a.c0;
    doc["potential"] = p;
  }
  if (doc.contains("graph") && !doc.contains("potential")) {
    doc["potential"] = {{"kind", "power"}, {"c0", 1.0}, {"alpha", 1.0}};
  }
  if (doc.contains("graph") && doc["graph"].value("family", "") == "lattice" && doc.contains("potential") &&
      !doc["potential"].contains("metric")) {
    doc["potential"]["metric"] = "euclidean";
  }
  if (a.gamma) doc["gamma"] = *a.gamma;
  if (a.radii) doc["radii"] = parse_number_list(*a.radii, "--radii");
  if (!doc.contains("gamma")) doc["gamma"] = 1.0;

  io::ExhaustionDocument parsed;
  try {
    parsed = io::parse_exhaustion_config(doc.dump());
  } catch (const DomainError& e) {
    throw UsageError(std::string("exhaustion config: ") + e.what());
  }
  const std::string out = !a.out.empty() ? a.out : parsed.out.value_or("");
  const auto table = exhaustion_run(parsed.config);
  std::ostringstream csv;
  io::write_exhaustion_csv(csv, table);
  emit(out, "exhaustion.csv", csv.str());

  json summary = {{"monotone", table.monotone},
                  {"converged", table.converged},
                  {"limit", table.limit ? json(*table.limit) : json(nullptr)},
                  {"convergence_delta", parsed.config.convergence_delta}};
  if (out.empty()) std::cerr << summary.dump(2) << '\n';
  else emit(out, "exhaustion.json", summary.dump(2) + "\n");
  if (!table.monotone) {
    std::cerr << "monotonicity violated beyond tolerance\n";
    throw CheckFailed{};
  }
  return 0;
}

// ---------------------------------------------------------------------------
// experiment phase-sweep

struct PhaseArgs {
  std::string config, out;
  std::string branchings = "constant:2,power:2";
  std::string alphas = "1,2";
  std::string radii = "100,1000,10000";
  double gamma = 1.0, c0 = 1.0, threshold = 1e-3;
};

int run_phase(PhaseArgs& a) {
  PhaseSweepConfig cfg;
  for (const auto& b : split(a.branchings)) cfg.branchings.push_back(io::parse_branching(b));
  cfg.alphas = parse_number_list(a.alphas, "--alphas");
  cfg.radii.clear();
  for (double r : parse_number_list(a.radii, "--radii")) {
    if (!(r >= 1.0) || r != std::floor(r)) throw UsageError("--radii: tree radii must be positive integers");
    cfg.radii.push_back(static_cast<std::size_t>(r));
  }
  cfg.gamma = a.gamma;
  cfg.c0 = a.c0;
  cfg.threshold = a.threshold;
  const auto cells = tree_phase_sweep(cfg);
  std::ostringstream csv;
  io::write_phase_csv(csv, cells, cfg);
  emit(a.out, "phase.csv", csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"plgraph: Schrodinger operators on weighted graphs"};
  app.failure_message(CLI::FailureMessage::help);
  app.require_subcommand(1);

  auto* graph = app.add_subcommand("graph", "graph balls")->require_subcommand(1);
  auto* barrier = app.add_subcommand("barrier", "barrier families")->require_subcommand(1);
  auto* dirichlet = app.add_subcommand("dirichlet", "Dirichlet problems")->require_subcommand(1);
  auto* radial = app.add_subcommand("radial", "radial reduction on trees")->require_subcommand(1);
  auto* experiment = app.add_subcommand("experiment", "exhaustion experiments")->require_subcommand(1);

  ValidateArgs va;
  auto* validate_cmd = graph->add_subcommand("validate", "check the structural invariants of a ball");
  validate_cmd->add_option("--config", va.config, "JSON object keyed by flag name");
  validate_cmd->add_option("--out", va.out, "output directory");
  add_graph_flags(validate_cmd, va.g);

  BarrierArgs bv, bs;
  auto* verify_cmd = barrier->add_subcommand("verify", "check a barrier inequality pointwise");
  add_barrier_flags(verify_cmd, bv);
  auto* search_cmd = barrier->add_subcommand("search", "bisect for the barrier constant");
  add_barrier_flags(search_cmd, bs);
  search_cmd->add_option("--parameter", bs.parameter, "M, K or sigma (default: by family)");
  search_cmd->add_option("--lo", bs.lo, "exclusive lower end of the window");
  search_cmd->add_option("--hi", bs.hi, "upper end of the window");
  search_cmd->add_option("--iterations", bs.iterations, "bisection steps")->check(CLI::PositiveNumber);

  DirichletArgs da;
  auto* solve_cmd = dirichlet->add_subcommand("solve", "solve (Lap - V) u = f with u = g on the halo");
  solve_cmd->add_option("--config", da.config, "JSON object keyed by flag name");
  solve_cmd->add_option("--out", da.out, "output directory");
  add_graph_flags(solve_cmd, da.g);
  solve_cmd->add_option("--alpha", da.alpha, "potential decay exponent");
  solve_cmd->add_option("--c0", da.c0, "potential scale");
  solve_cmd->add_option("--boundary", da.boundary, "halo value: a constant or a vertex_id,value CSV");
  solve_cmd->add_option("--f", da.f, "right-hand side: a constant or a vertex_id,value CSV");
  solve_cmd->add_option("--method", da.method, "auto, cg or direct")->check(CLI::IsMember({"auto", "cg", "direct"}));
  solve_cmd->add_option("--tol", da.tol, "relative residual target");

  RadialArgs ra;
  auto* radial_cmd = radial->add_subcommand("solve", "tridiagonal solve of the radial problem");
  radial_cmd->add_option("--config", ra.config, "JSON object keyed by flag name");
  radial_cmd->add_option("--out", ra.out, "output directory");
  radial_cmd->add_option("--branching", ra.branching, "constant:<b0> or power:<p>");
  radial_cmd->add_option("--alpha", ra.alpha, "potential decay exponent");
  radial_cmd->add_option("--c0", ra.c0, "potential scale");
  radial_cmd->add_option("--boundary", ra.boundary, "value on layer R+1");
  radial_cmd->add_option("--f", ra.f, "constant right-hand side");
  radial_cmd->add_option("--radius", ra.radius, "R");

  ExhaustionArgs ea;
  auto* exhaustion_cmd = experiment->add_subcommand("exhaustion", "nested-ball exhaustion");
  exhaustion_cmd->add_option("--config", ea.config, "{graph, potential, gamma, radii, probes, out}");
  exhaustion_cmd->add_option("--out", ea.out, "output directory (overrides the config)");
  exhaustion_cmd->add_option("--graph", ea.graph, "tree or lattice")->check(CLI::IsMember({"tree", "lattice"}));
  exhaustion_cmd->add_option("--branching", ea.branching, "constant:<b0> or power:<p>");
  exhaustion_cmd->add_option("--dim", ea.dim, "lattice dimension");
  exhaustion_cmd->add_option("--alpha", ea.alpha, "potential decay exponent");
  exhaustion_cmd->add_option("--c0", ea.c0, "potential scale");
  exhaustion_cmd->add_option("--gamma", ea.gamma, "boundary value");
  exhaustion_cmd->add_option("--radii", ea.radii, "comma-separated increasing radii");

  PhaseArgs pa;
  auto* phase_cmd = experiment->add_subcommand("phase-sweep", "uniqueness regime sweep on trees");
  phase_cmd->add_option("--config", pa.config, "JSON object keyed by flag name");
  phase_cmd->add_option("--out", pa.out, "output directory");
  phase_cmd->add_option("--branchings", pa.branchings, "comma-separated branchings");
  phase_cmd->add_option("--alphas", pa.alphas, "comma-separated alphas");
  phase_cmd->add_option("--radii", pa.radii, "comma-separated radii");
  phase_cmd->add_option("--gamma", pa.gamma, "boundary value");
  phase_cmd->add_option("--c0", pa.c0, "potential scale");
  phase_cmd->add_option("--threshold", pa.threshold, "u(root)/gamma above this is nonuniqueness evidence");

  if (argc < 2) {
    std::cerr << app.help();
    return 2;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    auto flat = [](CLI::App* sub, const std::string& config) {
      if (!config.empty()) apply_flat_config(sub, config);
    };
    if (*validate_cmd) return flat(validate_cmd, va.config), run_validate(va);
    if (*verify_cmd) return flat(verify_cmd, bv.config), run_barrier_verify(verify_cmd, bv);
    if (*search_cmd) return flat(search_cmd, bs.config), run_barrier_search(search_cmd, bs);
    if (*solve_cmd) return flat(solve_cmd, da.config), run_dirichlet(da);
    if (*radial_cmd) return flat(radial_cmd, ra.config), run_radial(ra);
    if (*exhaustion_cmd) return run_exhaustion(ea);
    if (*phase_cmd) return flat(phase_cmd, pa.config), run_phase(pa);
  } catch (const CheckFailed&) {
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return 1;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return 1;
  } catch (const ClassificationError& e) {
    std::cerr << "classification error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  std::cerr << app.help();
  return 2;
}
