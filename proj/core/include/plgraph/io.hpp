#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plgraph/barriers.hpp"
#include "plgraph/dirichlet.hpp"
#include "plgraph/experiments.hpp"
#include "plgraph/graph_ball.hpp"
#include "plgraph/operators.hpp"
#include "plgraph/radial.hpp"

namespace plgraph::io {

/// {"family":"tree","branching":{"kind":"constant","b0":2}|{"kind":"power","p":2},"radius":R}
/// {"family":"lattice","n":3,"radius":R}
/// Errors are DomainError with the offending field named.
FamilySpec parse_family_spec(std::string_view json_text);
/// Same document with "radius" optional/ignored.
GraphFamily parse_graph_family(std::string_view json_text);
std::string to_json(const FamilySpec& spec);

/// {"kind":"power","c0":1.0,"alpha":1.0,"metric":"combinatorial"|"euclidean"[,"floor":x]}
PowerPotential parse_potential_spec(std::string_view json_text);
std::string to_json(const PowerPotential& V);

/// "constant:2" or "power:2".
Branching parse_branching(std::string_view text);

struct ExhaustionDocument {
  ExhaustionConfig config;
  std::optional<std::string> out;
};
/// {graph, potential, gamma, radii, probes, out}
ExhaustionDocument parse_exhaustion_config(std::string_view json_text);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

/// Columns vertex_id,<value_column>. Whole-ball or interior fields.
void write_field_csv(std::ostream& os, const GraphBall& ball, const Field& field,
                     std::string_view value_column = "value");
/// Reads vertex_id,value rows for the vertices [first, first + count) of the
/// ball; every vertex in that range must appear exactly once.
Field read_field_csv(std::istream& is, const GraphBall& ball, Vertex first, std::size_t count);

/// Columns r,u,Dplus,Dminus,V for layers 0..R+1 (degrees blank on R+1).
void write_radial_csv(std::ostream& os, const RadialProfile& u, std::span<const double> V);
/// Columns R,probe_id,u_probe,min_u,max_u,delta_prev.
void write_exhaustion_csv(std::ostream& os, const ExhaustionTable& table);
/// Columns R,distance,ratio.
void write_growth_csv(std::ostream& os, double radius, const std::vector<GrowthRatio>& ratios, bool header);
/// Columns branching,alpha,R,u_root,regime,threshold.
void write_phase_csv(std::ostream& os, const std::vector<PhaseCell>& cells, const PhaseSweepConfig& config);

/// {pass, margin, worst_vertex, R0, parameter, ...}
std::string to_json(const MarginReport& report, std::optional<double> parameter = std::nullopt,
                    std::optional<std::string_view> parameter_name = std::nullopt);
std::string to_json(const SolveReport& report);
std::string to_json(const std::vector<Violation>& violations);
std::string to_json(const CertificateReport& report);

}  // namespace plgraph::io
