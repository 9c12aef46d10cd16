#include "plgraph/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "plgraph/error.hpp"

namespace plgraph::io {

using nlohmann::json;

namespace {

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("invalid JSON: ") + e.what());
  }
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw DomainError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw DomainError(std::string("field \"") + key + "\" has the wrong type");
  }
}

Branching branching_from(const json& j) {
  const auto kind = field<std::string>(j, "kind");
  if (kind == "constant") return Branching::constant(field<std::uint64_t>(j, "b0"));
  if (kind == "power") return Branching::power(field<int>(j, "p"));
  throw DomainError("branching kind must be \"constant\" or \"power\", got \"" + kind + "\"");
}

json branching_json(const Branching& b) {
  if (b.kind == Branching::Kind::constant) return {{"kind", "constant"}, {"b0", b.b0}};
  return {{"kind", "power"}, {"p", b.p}};
}

GraphFamily family_from(const json& j) {
  const auto family = field<std::string>(j, "family");
  if (family == "tree") return TreeFamily{branching_from(field<json>(j, "branching"))};
  if (family == "lattice") {
    const int n = field<int>(j, "n");
    if (n < 1) throw DomainError("lattice dimension n must be >= 1");
    return LatticeFamily{n};
  }
  throw DomainError("family must be \"tree\" or \"lattice\", got \"" + family + "\"");
}

PowerPotential potential_from(const json& j) {
  const auto kind = field<std::string>(j, "kind");
  if (kind != "power") throw DomainError("potential kind must be \"power\", got \"" + kind + "\"");
  PowerPotential V;
  V.c0 = field<double>(j, "c0");
  V.alpha = field<double>(j, "alpha");
  const auto metric = j.contains("metric") ? field<std::string>(j, "metric") : std::string("combinatorial");
  if (metric == "combinatorial") V.metric = Metric::combinatorial;
  else if (metric == "euclidean") V.metric = Metric::euclidean;
  else throw DomainError("potential metric must be \"combinatorial\" or \"euclidean\", got \"" + metric + "\"");
  if (j.contains("floor")) V.floor = field<double>(j, "floor");
  if (!(V.c0 > 0.0)) throw DomainError("potential c0 must be positive");
  if (!(V.alpha >= 0.0)) throw DomainError("potential alpha must be nonnegative");
  return V;
}

json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

FamilySpec parse_family_spec(std::string_view json_text) {
  const auto j = parse(json_text);
  const auto family = family_from(j);
  const double radius = field<double>(j, "radius");
  return with_radius(family, radius);
}

GraphFamily parse_graph_family(std::string_view json_text) { return family_from(parse(json_text)); }

std::string to_json(const FamilySpec& spec) {
  json j;
  if (const auto* t = std::get_if<TreeSpec>(&spec)) {
    j = {{"family", "tree"}, {"branching", branching_json(t->branching)}, {"radius", t->radius}};
  } else {
    const auto& l = std::get<LatticeSpec>(spec);
    j = {{"family", "lattice"}, {"n", l.dimension}, {"radius", l.radius}};
  }
  return j.dump();
}

PowerPotential parse_potential_spec(std::string_view json_text) { return potential_from(parse(json_text)); }

std::string to_json(const PowerPotential& V) {
  json j = {{"kind", "power"},
            {"c0", V.c0},
            {"alpha", V.alpha},
            {"metric", V.metric == Metric::combinatorial ? "combinatorial" : "euclidean"}};
  if (V.floor) j["floor"] = *V.floor;
  return j.dump();
}

Branching parse_branching(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw DomainError("branching must look like constant:<b0> or power:<p>");
  const auto kind = text.substr(0, colon);
  const auto value = text.substr(colon + 1);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw DomainError("branching value '" + std::string(value) + "' is not an integer");
  }
  if (kind == "constant") {
    if (v < 1) throw DomainError("constant branching requires b0 >= 1");
    return Branching::constant(static_cast<std::uint64_t>(v));
  }
  if (kind == "power") return Branching::power(static_cast<int>(v));
  throw DomainError("branching kind must be constant or power");
}

ExhaustionDocument parse_exhaustion_config(std::string_view json_text) {
  const auto j = parse(json_text);
  ExhaustionDocument doc;
  doc.config.graph = family_from(field<json>(j, "graph"));
  doc.config.potential = potential_from(field<json>(j, "potential"));
  doc.config.gamma = field<double>(j, "gamma");
  doc.config.radii = field<std::vector<double>>(j, "radii");
  if (j.contains("probes")) doc.config.probes = field<std::vector<std::vector<std::int64_t>>>(j, "probes");
  if (j.contains("out")) doc.out = field<std::string>(j, "out");
  return doc;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

void write_field_csv(std::ostream& os, const GraphBall& ball, const Field& field, std::string_view value_column) {
  if (field.size() != ball.size() && field.size() != ball.interior_count()) {
    throw DomainError("write_field_csv: field size matches neither the ball nor its interior");
  }
  os << "vertex_id," << value_column << '\n';
  for (Vertex x = 0; x < field.size(); ++x) os << ball.label_string(x) << ',' << format_double(field[x]) << '\n';
}

Field read_field_csv(std::istream& is, const GraphBall& ball, Vertex first, std::size_t count) {
  Field out(count);
  std::vector<char> seen(count, 0);
  std::string line;
  bool header = true;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("vertex_id", 0) == 0) continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DomainError("CSV line " + std::to_string(line_no) + ": expected two columns");
    std::vector<std::int64_t> label;
    std::stringstream ids(line.substr(0, comma));
    std::string part;
    while (std::getline(ids, part, ':')) label.push_back(std::stoll(part));
    const auto v = ball.find(label);
    if (!v || *v < first || *v >= first + count) {
      throw DomainError("CSV line " + std::to_string(line_no) + ": vertex " + line.substr(0, comma) +
                        " is not in the expected vertex range");
    }
    const auto idx = *v - first;
    if (seen[idx]) throw DomainError("CSV line " + std::to_string(line_no) + ": duplicate vertex");
    seen[idx] = 1;
    out[idx] = std::stod(line.substr(comma + 1));
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (!seen[i]) throw DomainError("CSV: missing value for vertex " + ball.label_string(static_cast<Vertex>(first + i)));
  }
  return out;
}

void write_radial_csv(std::ostream& os, const RadialProfile& u, std::span<const double> V) {
  os << "r,u,Dplus,Dminus,V\n";
  const std::size_t R = u.radius();
  for (std::size_t r = 0; r < u.values.size(); ++r) {
    os << r << ',' << format_double(u.values[r]) << ',';
    if (r <= R) os << format_double(u.dplus[r]) << ',' << format_double(u.dminus[r]);
    else os << ',';
    os << ',' << (r < V.size() ? format_double(V[r]) : std::string()) << '\n';
  }
}

void write_exhaustion_csv(std::ostream& os, const ExhaustionTable& table) {
  os << "R,probe_id,u_probe,min_u,max_u,delta_prev\n";
  for (const auto& row : table.rows) {
    os << format_double(row.radius) << ',' << row.probe_id << ',' << format_double(row.u_probe) << ','
       << format_double(row.min_u) << ',' << format_double(row.max_u) << ','
       << (row.delta_prev ? format_double(*row.delta_prev) : std::string()) << '\n';
  }
}

void write_growth_csv(std::ostream& os, double radius, const std::vector<GrowthRatio>& ratios, bool header) {
  if (header) os << "R,distance,ratio\n";
  for (const auto& g : ratios) {
    os << format_double(radius) << ',' << format_double(g.distance) << ',' << format_double(g.ratio) << '\n';
  }
}

void write_phase_csv(std::ostream& os, const std::vector<PhaseCell>& cells, const PhaseSweepConfig& config) {
  os << "branching,alpha,R,u_root,regime,threshold\n";
  for (const auto& c : cells) {
    for (std::size_t k = 0; k < c.probe_values.size(); ++k) {
      os << c.branching.describe() << ',' << format_double(c.alpha) << ',' << config.radii[k] << ','
         << format_double(c.probe_values[k]) << ',' << to_string(c.regime) << ','
         << format_double(config.threshold) << '\n';
    }
  }
}

std::string to_json(const MarginReport& report, std::optional<double> parameter,
                    std::optional<std::string_view> parameter_name) {
  json j = {{"pass", report.pass},
            {"direction", report.direction == BarrierDirection::sub ? "sub" : "super"},
            {"margin", number(report.margin)},
            {"worst_vertex", report.worst_vertex},
            {"worst_distance", number(report.worst_distance)},
            {"R0", report.r0 ? number(*report.r0) : json(nullptr)},
            {"verified_radius", number(report.verified_radius)},
            {"points_checked", report.points_checked},
            {"parameter", parameter ? number(*parameter) : json(nullptr)}};
  if (parameter_name) j["parameter_name"] = std::string(*parameter_name);
  return j.dump(2);
}

std::string to_json(const SolveReport& report) {
  json j = {{"method", to_string(report.method)},
            {"iterations", report.iterations},
            {"relative_residual", number(report.relative_residual)},
            {"converged", report.converged},
            {"min_u", number(report.min_u)},
            {"max_u", number(report.max_u)},
            {"pde_residual", number(report.pde_residual)}};
  return j.dump(2);
}

std::string to_json(const std::vector<Violation>& violations) {
  json list = json::array();
  for (const auto& v : violations) list.push_back({{"kind", to_string(v.kind)}, {"message", v.message}});
  json j = {{"valid", violations.empty()}, {"violations", list}};
  return j.dump(2);
}

std::string to_json(const CertificateReport& report) {
  json steps = json::array();
  for (const auto& s : report.steps) {
    steps.push_back({{"alpha", s.alpha},
                     {"halo_ok", s.halo_ok},
                     {"interior_ok", s.interior_ok},
                     {"worst_gap", number(s.worst_gap)}});
  }
  json j = {{"growth_condition_met", report.growth_condition_met},
            {"all_passed", report.all_passed},
            {"smallest_alpha", report.smallest_alpha ? json(*report.smallest_alpha) : json(nullptr)},
            {"max_ratio", number(report.max_ratio)},
            {"radius", number(report.radius)},
            {"shift_H", number(report.shift_H)},
            {"steps", steps}};
  return j.dump(2);
}

}  // namespace plgraph::io
