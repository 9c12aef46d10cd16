#include <doctest.h>

#include <sstream>
#include <string>

#include "plgraph/error.hpp"
#include "plgraph/io.hpp"

using namespace plgraph;

TEST_CASE("family specs") {
  const auto tree = io::parse_family_spec(R"({"family":"tree","branching":{"kind":"power","p":2},"radius":3})");
  REQUIRE(std::holds_alternative<TreeSpec>(tree));
  CHECK(std::get<TreeSpec>(tree).branching == Branching::power(2));
  CHECK(std::get<TreeSpec>(tree).radius == 3);
  CHECK(io::parse_family_spec(io::to_json(tree)).index() == 0);

  const auto lat = io::parse_family_spec(R"({"family":"lattice","n":3,"radius":10.5})");
  REQUIRE(std::holds_alternative<LatticeSpec>(lat));
  CHECK(std::get<LatticeSpec>(lat).dimension == 3);
  CHECK(std::get<LatticeSpec>(lat).radius == 10.5);

  CHECK_THROWS_AS(io::parse_family_spec(R"({"family":"torus","radius":1})"), DomainError);
  CHECK_THROWS_AS(io::parse_family_spec(R"({"family":"lattice","n":3})"), DomainError);
  CHECK_THROWS_AS(io::parse_family_spec("{not json"), DomainError);
  CHECK_THROWS_AS(io::parse_family_spec(R"({"family":"tree","branching":{"kind":"constant","b0":2},"radius":1.5})"),
                  DomainError);
}

TEST_CASE("potential specs") {
  const auto V = io::parse_potential_spec(R"({"kind":"power","c0":2,"alpha":1.5,"metric":"euclidean"})");
  CHECK(V.c0 == 2.0);
  CHECK(V.alpha == 1.5);
  CHECK(V.metric == Metric::euclidean);
  const auto back = io::parse_potential_spec(io::to_json(V));
  CHECK(back.alpha == V.alpha);
  CHECK_THROWS_AS(io::parse_potential_spec(R"({"kind":"power","c0":0,"alpha":1})"), DomainError);
  CHECK_THROWS_AS(io::parse_potential_spec(R"({"kind":"yukawa","c0":1,"alpha":1})"), DomainError);
}

TEST_CASE("branching strings") {
  CHECK(io::parse_branching("constant:3") == Branching::constant(3));
  CHECK(io::parse_branching("power:2") == Branching::power(2));
  CHECK_THROWS_AS(io::parse_branching("power"), DomainError);
  CHECK_THROWS_AS(io::parse_branching("constant:x"), DomainError);
  CHECK_THROWS_AS(io::parse_branching("constant:0"), DomainError);
}

TEST_CASE("exhaustion config") {
  const auto doc = io::parse_exhaustion_config(R"({
    "graph": {"family": "lattice", "n": 3},
    "potential": {"kind": "power", "c0": 1, "alpha": 3, "metric": "euclidean"},
    "gamma": 1, "radii": [10, 20], "probes": [[0, 0, 0]], "out": "o"})");
  CHECK(std::get<LatticeFamily>(doc.config.graph).dimension == 3);
  CHECK(doc.config.radii == std::vector<double>{10, 20});
  CHECK(doc.config.probes.size() == 1);
  CHECK(doc.out == "o");
  CHECK_THROWS_AS(io::parse_exhaustion_config(R"({"gamma": 1})"), DomainError);
}

TEST_CASE("doubles round-trip") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17}) CHECK(std::stod(io::format_double(v)) == v);
}

TEST_CASE("field CSV round-trip") {
  const auto ball = build_lattice_ball({2, 2.5});
  Field f(ball.size());
  for (Vertex v = 0; v < ball.size(); ++v) f[v] = 0.1 * v - 1.0 / 3.0;
  std::stringstream ss;
  io::write_field_csv(ss, ball, f, "u");
  CHECK(ss.str().rfind("vertex_id,u\n", 0) == 0);
  const auto back = io::read_field_csv(ss, ball, 0, ball.size());
  CHECK(back == f);

  std::stringstream partial("vertex_id,value\n0:0,1\n");
  CHECK_THROWS_AS(io::read_field_csv(partial, ball, 0, ball.interior_count()), DomainError);
}

TEST_CASE("CSV and JSON writers") {
  ExhaustionTable t;
  ExhaustionRow row;
  row.radius = 10;
  row.probe_id = "0:0:0";
  row.u_probe = 0.5;
  row.min_u = 0.5;
  row.max_u = 1;
  t.rows.push_back(row);
  std::stringstream ss;
  io::write_exhaustion_csv(ss, t);
  CHECK(ss.str() == "R,probe_id,u_probe,min_u,max_u,delta_prev\n10,0:0:0,0.5,0.5,1,\n");

  MarginReport m;
  m.pass = true;
  m.margin = 0.25;
  m.worst_vertex = "0";
  const auto js = io::to_json(m, 0.5, "M");
  CHECK(js.find("\"pass\": true") != std::string::npos);
  CHECK(js.find("\"R0\": null") != std::string::npos);
  CHECK(js.find("\"parameter\": 0.5") != std::string::npos);

  std::stringstream rs;
  auto u = tree_profile(Branching::constant(2), 1);
  u.values = {0.5, 0.75, 1.0};
  const std::vector<double> V{1, 0.5, 1.0 / 3.0};
  io::write_radial_csv(rs, u, V);
  CHECK(rs.str() == "r,u,Dplus,Dminus,V\n0,0.5,2,0,1\n1,0.75,2,1,0.5\n2,1,,,0.3333333333333333\n");
}
