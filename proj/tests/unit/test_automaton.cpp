#include <doctest.h>

#include "oracle/dot_reader.hpp"
#include "soliton/automaton.hpp"
#include "soliton/families.hpp"

using namespace soliton;

namespace {

WeightedGraph c4() { return parse_graph("edge 1 a 1\nedge a b 2\nedge b c 1\nedge c d 2\nedge d a 1\n"); }

WeightedGraph path_graph() { return parse_graph("edge 1 a 1\nedge a b 2\nedge b 2 1\n"); }

}  // namespace

TEST_CASE("path graph automaton flips back and forth") {
  WeightedGraph g = path_graph();
  SolitonAutomaton a(g, {parse_burst("(1,2)!"), parse_burst("(2,1)!")});
  REQUIRE(a.states().size() == 2);
  CHECK(a.base() == g);
  CHECK(a.states()[0].key() < a.states()[1].key());
  std::size_t s0 = a.initial();
  std::size_t s1 = 1 - s0;
  CHECK(a.transition(s0, 0) == std::vector<std::size_t>{s1});
  CHECK(a.transition(s1, 0) == std::vector<std::size_t>{s0});
  // Once flipped, a soliton from 2 finds 2-b doubled and crosses back.
  CHECK(a.transition(s1, 1) == std::vector<std::size_t>{s0});
  CHECK(is_deterministic(a).holds);
  CHECK(is_strongly_deterministic(a).holds);
  CHECK(degree_of_nondeterminism(a) == 1);
}

TEST_CASE("empty result loops back to the same state") {
  WeightedGraph g = path_graph();
  SolitonAutomaton a(g, {parse_burst("(1,1)!")});
  REQUIRE(a.states().size() == 1);
  CHECK(a.result(0, 0).empty());
  CHECK(a.transition(0, 0) == std::vector<std::size_t>{0});
  CHECK(is_deterministic(a).holds);
  CHECK(degree_of_nondeterminism(a) == 1);
}

TEST_CASE("G_g degrees") {
  for (std::size_t g = 1; g <= 4; ++g) {
    SolitonAutomaton a(gen_gg(g), {parse_burst("(1,2)!")});
    CHECK(degree_of_nondeterminism(a) == g);
    CHECK(is_deterministic(a).holds == (g == 1));
  }
  SolitonAutomaton three(gen_gg(3), {parse_burst("(1,2)!")});
  Verdict v = is_deterministic(three);
  REQUIRE(v.witnesses.size() == 1);
  CHECK(v.witnesses[0].kind == "nondeterministic");
  CHECK(v.witnesses[0].evidence == "|Result|=3");
  CHECK(v.witnesses[0].state == gen_gg(3).key());
}

TEST_CASE("C4-chestnut determinism levels") {
  SolitonAutomaton single(c4(), {parse_burst("(1,1)!")});
  CHECK(is_strongly_deterministic(single).holds);
  CHECK(is_perfectly_deterministic(single).holds);

  SolitonAutomaton pair(c4(), {parse_burst("(1,1)|1(1,1)!")});
  Verdict strong = is_strongly_deterministic(pair);
  CHECK_FALSE(strong.holds);
  REQUIRE(strong.witnesses.size() == 1);
  CHECK(strong.witnesses[0].kind == "multiple-total-trails");
  CHECK(is_perfectly_deterministic(pair).holds);
  CHECK(is_deterministic(pair).holds);
  CHECK_FALSE(imperfect_trails(pair).holds);
}

TEST_CASE("running burst sequences") {
  WeightedGraph g = gen_gg(2);
  Burst b = parse_burst("(1,2)!");
  SolitonAutomaton a(g, {b});
  std::vector<Burst> once{b}, twice{b, b};
  std::set<StateKey> after_one = run_burst_sequence(a, g.key(), once);
  CHECK(after_one.size() == 2);
  CHECK(run_burst_sequence(a, g.key(), twice) == std::set<StateKey>{g.key()});
  CHECK(run_burst_sequence(a, after_one, once) == std::set<StateKey>{g.key()});
  CHECK(run_burst_sequence(a, g.key(), {}) == std::set<StateKey>{g.key()});
  std::vector<Burst> foreign{parse_burst("(2,1)!")};
  CHECK_THROWS_AS(run_burst_sequence(a, g.key(), foreign), std::invalid_argument);
  CHECK_THROWS_AS(run_burst_sequence(a, StateKey(Weights(g.weights().size(), 1)), once), std::invalid_argument);
  CHECK(states_fixpoint(g, {b}).size() == 3);
}

TEST_CASE("determinism report round-trips through JSON") {
  SolitonAutomaton a(gen_gg(2), {parse_burst("(1,2)!")});
  DeterminismReport r = analyze(a);
  CHECK_FALSE(r.deterministic);
  CHECK(r.degree == 2);
  DeterminismReport back = determinism_report_from_json(to_json(r));
  CHECK(back.deterministic == r.deterministic);
  CHECK(back.strongly_deterministic == r.strongly_deterministic);
  CHECK(back.perfectly_deterministic == r.perfectly_deterministic);
  CHECK(back.degree == r.degree);
  REQUIRE(back.witnesses.size() == r.witnesses.size());
  for (std::size_t i = 0; i < r.witnesses.size(); ++i) {
    CHECK(back.witnesses[i].state == r.witnesses[i].state);
    CHECK(back.witnesses[i].burst == r.witnesses[i].burst);
    CHECK(back.witnesses[i].kind == r.witnesses[i].kind);
    CHECK(back.witnesses[i].evidence == r.witnesses[i].evidence);
  }
  CHECK(to_json(back) == to_json(r));
}

TEST_CASE("automaton DOT export") {
  SolitonAutomaton a(gen_gg(2), {parse_burst("(1,2)!")});
  oracle::DotGraph d = oracle::read_dot(export_dot(a));
  CHECK(d.kind == "digraph");
  CHECK(d.nodes.size() == a.states().size());
  std::size_t initial = 0, transitions = 0;
  for (const auto& [id, attrs] : d.nodes) initial += attrs.count("peripheries");
  CHECK(initial == 1);
  for (std::size_t s = 0; s < a.states().size(); ++s) transitions += a.transition(s, 0).size();
  CHECK(d.edges.size() == transitions);
  for (const oracle::DotEdge& e : d.edges) CHECK(e.attrs.at("label") == "(1,2)!");
}
