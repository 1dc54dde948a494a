#include <doctest.h>

#include <set>

#include "oracle/dot_reader.hpp"
#include "soliton/graph.hpp"

using namespace soliton;

namespace {

const char* kPath = R"(# path graph
edge 1 a 1
edge a b 2
edge b 2 1
)";

bool has_rule(const ValidationReport& r, const std::string& rule, const std::string& subject) {
  for (const Violation& v : r.violations) {
    if (v.rule == rule && v.subject == subject) return true;
  }
  return false;
}

GraphError parse_error(const std::string& text) {
  try {
    parse_graph(text);
  } catch (const GraphError& e) {
    return e;
  }
  FAIL("expected a parse error");
  return GraphError(GraphError::Kind::Syntax, "unreachable");
}

}  // namespace

TEST_CASE("path graph parses into canonical order") {
  WeightedGraph g = parse_graph(kPath);
  const Topology& t = g.topology();
  CHECK(t.names() == std::vector<NodeId>{"1", "2", "a", "b"});
  REQUIRE(t.edge_count() == 3);
  CHECK(t.edge_label(0) == "1-a");
  CHECK(t.edge_label(1) == "2-b");
  CHECK(t.edge_label(2) == "a-b");
  CHECK(g.weights() == Weights{1, 1, 2});
  CHECK(t.is_exterior(*t.find("1")));
  CHECK_FALSE(t.is_exterior(*t.find("a")));
  CHECK(g.node_weight(*t.find("a")) == 3);
  CHECK(t.edge_between(*t.find("a"), *t.find("b")) == EdgeIndex{2});
  CHECK_FALSE(t.edge_between(*t.find("1"), *t.find("b")).has_value());
  CHECK(exterior_nodes(g) == std::set<NodeId>{"1", "2"});
  CHECK(validate(g).ok());
}

TEST_CASE("edge order in the file does not matter") {
  WeightedGraph a = parse_graph(kPath);
  WeightedGraph b = parse_graph("edge b a 2\nedge 2 b 1\nedge a 1 1\n");
  CHECK(a == b);
  CHECK(a.key() == b.key());
}

TEST_CASE("parse errors carry kind and position") {
  GraphError loop = parse_error("edge 1 a 1\nedge a a 2\n");
  CHECK(loop.kind() == GraphError::Kind::SelfLoop);
  CHECK(loop.line() == 2);

  GraphError dup = parse_error("edge 1 a 1\nedge a 1 2\n");
  CHECK(dup.kind() == GraphError::Kind::DuplicateEdge);
  CHECK(dup.line() == 2);

  GraphError weight = parse_error("edge 1 a 3\n");
  CHECK(weight.kind() == GraphError::Kind::BadWeight);
  CHECK(weight.column() == 10);

  CHECK(parse_error("edge 1 a\n").kind() == GraphError::Kind::Syntax);
  CHECK(parse_error("vertex a\n").kind() == GraphError::Kind::Syntax);
  CHECK(parse_error("edge 1 a- 1\n").kind() == GraphError::Kind::Syntax);
  CHECK(parse_error("node a sideways\n").kind() == GraphError::Kind::Syntax);
}

TEST_CASE("missing file is an I/O error") {
  try {
    load_graph("/nonexistent/graph.txt");
    FAIL("expected an error");
  } catch (const GraphError& e) {
    CHECK(e.kind() == GraphError::Kind::Io);
  }
}

TEST_CASE("validate reports each broken rule") {
  SUBCASE("interior weight") {
    ValidationReport r = validate(parse_graph("edge 1 a 1\nedge a b 1\nedge b 2 1\n"));
    CHECK(has_rule(r, "interior-weight", "a"));
    CHECK(has_rule(r, "interior-weight", "b"));
  }
  SUBCASE("degree above three") {
    ValidationReport r =
        validate(parse_graph("edge 1 a 1\nedge 2 a 1\nedge 3 a 1\nedge 4 a 1\n"));
    CHECK(has_rule(r, "degree", "a"));
  }
  SUBCASE("isolated node") {
    ValidationReport r = validate(parse_graph("node z\nedge 1 2 1\n"));
    CHECK(has_rule(r, "degree", "z"));
  }
  SUBCASE("component without exterior node") {
    ValidationReport r =
        validate(parse_graph("edge a b 2\nedge b c 1\nedge c d 2\nedge d a 1\nedge 1 2 1\n"));
    CHECK(has_rule(r, "component-exterior", "a"));
    CHECK(r.violations.size() == 1);
  }
  SUBCASE("declared role disagrees with degree") {
    ValidationReport r = validate(parse_graph("node a exterior\nedge 1 a 1\nedge a b 2\nedge b 2 1\n"));
    CHECK(has_rule(r, "declared-role", "a"));
  }
  SUBCASE("empty graph") {
    CHECK(has_rule(validate(parse_graph("# nothing\n")), "nonempty", "-"));
  }
}

TEST_CASE("print then parse is the identity") {
  for (const char* text : {kPath, "node a interior\nedge 1 a 2\nedge a b 1\nedge b c 2\nedge c a 1\n"}) {
    WeightedGraph g = parse_graph(text);
    WeightedGraph back = parse_graph(print_graph(g));
    CHECK(back == g);
    CHECK(back.key() == g.key());
    CHECK(back.declared_roles() == g.declared_roles());
  }
}

TEST_CASE("state keys separate every weight assignment") {
  // Ten edges: a path through seven interior nodes plus a triangle.
  WeightedGraph g = parse_graph(
      "edge 1 a 1\nedge a b 2\nedge b c 1\nedge c d 2\nedge d e 1\nedge e f 2\nedge f g 1\n"
      "edge g h 2\nedge h f 1\nedge h 2 1\n");
  const std::size_t edges = g.topology().edge_count();
  REQUIRE(edges == 10);
  std::set<StateKey> keys;
  for (std::uint32_t mask = 0; mask < (1u << edges); ++mask) {
    Weights w(edges);
    for (std::size_t e = 0; e < edges; ++e) w[e] = (mask >> e) & 1 ? 2 : 1;
    StateKey k = g.with_weights(w).key();
    CHECK(k.signature().size() == edges);
    keys.insert(k);
  }
  CHECK(keys.size() == (1u << edges));
}

TEST_CASE("DOT export keeps nodes, edges and double bonds") {
  WeightedGraph g = parse_graph(kPath);
  oracle::DotGraph d = oracle::read_dot(export_dot(g));
  CHECK(d.kind == "graph");
  CHECK(d.nodes.size() == 4);
  CHECK(d.nodes["1"]["shape"] == "box");
  CHECK(d.nodes["a"].count("shape") == 0);
  REQUIRE(d.edges.size() == 3);
  std::size_t doubled = 0;
  for (const oracle::DotEdge& e : d.edges) {
    auto u = *g.topology().find(e.from);
    auto v = *g.topology().find(e.to);
    int w = g.weight(*g.topology().edge_between(u, v));
    CHECK((e.attrs.count("color") == 1) == (w == 2));
    doubled += w == 2 ? 1 : 0;
  }
  CHECK(doubled == 1);
}

TEST_CASE("connected components are labelled in node order") {
  WeightedGraph g = parse_graph("edge x y 1\nedge 1 2 1\n");
  // names: 1, 2, x, y
  CHECK(connected_components(g.topology()) == std::vector<std::size_t>{0, 0, 1, 1});
}

TEST_CASE("builder rejects what the parser rejects") {
  CHECK_THROWS_AS(GraphBuilder().add_edge("a", "a", 1), GraphError);
  CHECK_THROWS_AS(GraphBuilder().add_edge("a", "b", 0), GraphError);
  GraphBuilder b;
  b.add_edge("a", "b", 1);
  CHECK_THROWS_AS(b.add_edge("b", "a", 2), GraphError);
}
