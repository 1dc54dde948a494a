#include <doctest.h>

#include <cstdlib>
#include <map>
#include <random>
#include <set>

#include "oracle/literal_trails.hpp"
#include "soliton/engine.hpp"
#include "soliton/families.hpp"

using namespace soliton;

namespace {

WeightedGraph path_graph() { return parse_graph("edge 1 a 1\nedge a b 2\nedge b 2 1\n"); }

WeightedGraph c4() { return parse_graph("edge 1 a 1\nedge a b 2\nedge b c 1\nedge c d 2\nedge d a 1\n"); }

// Centre c with one double bond to exterior 1.
WeightedGraph star() { return parse_graph("edge 1 c 2\nedge 2 c 1\nedge 3 c 1\n"); }

std::vector<std::string> names(const SolitonPath& p, const Topology& t) {
  std::vector<std::string> out;
  for (NodeIndex n : p.nodes) out.push_back(t.name(n));
  return out;
}

Place at(const WeightedGraph& g, const std::string& n) { return Place::at(*g.topology().find(n)); }

Weights weights_of(const WeightedGraph& g, const std::map<std::string, int>& by_label) {
  Weights w = g.weights();
  for (EdgeIndex e = 0; e < g.topology().edge_count(); ++e) {
    auto it = by_label.find(g.topology().edge_label(e));
    if (it != by_label.end()) w[e] = static_cast<std::uint8_t>(it->second);
  }
  return w;
}

Place to_place(const oracle::Pos& p, const Topology& t) {
  if (p.kind == oracle::Pos::At) return Place::at(*t.find(p.node));
  if (p.kind == oracle::Pos::Waiting) return Place::waiting(p.count);
  return Place::departed();
}

Placement to_placement(const oracle::Map& m, const Topology& t) {
  Placement out;
  for (const oracle::Pos& p : m) out.push_back(to_place(p, t));
  return out;
}

// Every trail invariant that can be read off a materialized trail.
void check_trail_invariants(const Trail& t, const Burst& b) {
  const Topology& topo = *t.topology;
  for (std::size_t j = 1; j < t.steps.size(); ++j) {
    const Placement& before = t.steps[j - 1].positions;
    const Placement& after = t.steps[j].positions;
    std::set<EdgeIndex> crossed;
    for (std::size_t i = 0; i < before.size(); ++i) {
      if (!before[i].is_node() || !after[i].is_node()) continue;
      EdgeIndex e = *topo.edge_between(before[i].node(), after[i].node());
      CHECK_MESSAGE(crossed.insert(e).second, "two solitons crossed one edge at step ", j);
      CHECK(t.steps[j].weights[e] == 3 - t.steps[j - 1].weights[e]);
    }
    for (EdgeIndex e = 0; e < topo.edge_count(); ++e) {
      if (!crossed.contains(e)) CHECK(t.steps[j].weights[e] == t.steps[j - 1].weights[e]);
    }
    if (j < 2) continue;
    const Placement& two_back = t.steps[j - 2].positions;
    for (std::size_t i = 0; i < before.size(); ++i) {
      if (!after[i].is_departed()) {
        CHECK(after[i] != before[i]);
        CHECK(after[i] != two_back[i]);
      }
      if (two_back[i].is_node() && before[i].is_node() && after[i].is_node() && !topo.is_exterior(before[i].node())) {
        EdgeIndex in = *topo.edge_between(two_back[i].node(), before[i].node());
        EdgeIndex out = *topo.edge_between(before[i].node(), after[i].node());
        CHECK(t.steps[j - 2].weights[in] != t.steps[j - 1].weights[out]);
      }
    }
  }
  CHECK(t.total == is_final(t.steps.back().positions));
  (void)b;
}

}  // namespace

TEST_CASE("potential successor maps") {
  WeightedGraph g = path_graph();
  SUBCASE("countdowns tick down") {
    SolitonDynamics d(g, parse_burst("(1,2)|3(2,1)!"));
    ExtendedConfiguration ec = d.start();
    CHECK(ec.current.positions[1] == Place::waiting(3));
    for (const Placement& p : d.potential_successor_maps(ec)) CHECK(p[1] == Place::waiting(2));
  }
  SUBCASE("a soliton on b may go to either neighbour") {
    SolitonDynamics d(g, parse_burst("(1,1)!"));
    ExtendedConfiguration ec{{g.weights(), {at(g, "b")}}, Placement{at(g, "a")}};
    std::vector<Placement> maps = d.potential_successor_maps(ec);
    std::set<Placement> got(maps.begin(), maps.end());
    CHECK(got == std::set<Placement>{{at(g, "a")}, {at(g, "2")}});
  }
  SUBCASE("the exit node offers departure and neighbours") {
    WeightedGraph c = c4();
    SolitonDynamics d(c, parse_burst("(1,1)!"));
    std::vector<Placement> maps = d.potential_successor_maps(d.start());
    std::set<Placement> got(maps.begin(), maps.end());
    CHECK(got == std::set<Placement>{{at(c, "a")}, {Place::departed()}});
    // ... but the first-step rule keeps only the move onto the graph.
    std::vector<Placement> legal = d.successor_set(d.start());
    CHECK(legal == std::vector<Placement>{{at(c, "a")}});
  }
}

TEST_CASE("trail successors") {
  SUBCASE("path graph first step") {
    WeightedGraph g = path_graph();
    SolitonDynamics d(g, parse_burst("(1,2)!"));
    std::vector<ExtendedConfiguration> next = d.trail_successors(d.start());
    REQUIRE(next.size() == 1);
    CHECK(next[0].current.positions == Placement{at(g, "a")});
    CHECK(next[0].current.weights == weights_of(g, {{"1-a", 2}}));
    CHECK(next[0].previous == Placement{at(g, "1")});
  }
  SUBCASE("alternation forces the double bond after a single one") {
    WeightedGraph g = c4();
    SolitonDynamics d(g, parse_burst("(1,1)!"));
    ExtendedConfiguration after_entry = d.trail_successors(d.start()).at(0);
    std::vector<ExtendedConfiguration> next = d.trail_successors(after_entry);
    REQUIRE(next.size() == 1);
    CHECK(next[0].current.positions == Placement{at(g, "b")});
  }
  SUBCASE("two solitons on one node with the same only move") {
    WeightedGraph g = path_graph();
    SolitonDynamics d(g, parse_burst("(1,2)|0(1,2)!"));
    ExtendedConfiguration ec{{weights_of(g, {{"1-a", 2}}), {at(g, "a"), at(g, "a")}},
                             Placement{at(g, "1"), at(g, "1")}};
    CHECK(d.trail_successors(ec).empty());
  }
  SUBCASE("final configurations have no successors") {
    WeightedGraph g = path_graph();
    SolitonDynamics d(g, parse_burst("(1,2)!"));
    ExtendedConfiguration done{{g.weights(), {Place::departed()}}, Placement{at(g, "2")}};
    CHECK(d.trail_successors(done).empty());
    CHECK(d.successor_set(done).empty());
  }
  SUBCASE("forced moves give singleton successor sets") {
    WeightedGraph g = path_graph();
    SolitonDynamics d(g, parse_burst("(1,2)!"));
    ExtendedConfiguration ec = d.start();
    for (int step = 0; step < 4; ++step) {
      std::vector<Placement> s = d.successor_set(ec);
      REQUIRE(s.size() == 1);
      ec = d.trail_successors(ec).at(0);
    }
    CHECK(is_final(ec.current.positions));
  }
  SUBCASE("solitons entering together may not share an exterior node") {
    WeightedGraph g = path_graph();
    SolitonDynamics d(g, parse_burst("(2,1)|2(1,2)|0(1,2)!"));
    ExtendedConfiguration ec = d.start();
    ec = d.trail_successors(ec).at(0);
    REQUIRE(ec.current.positions[1] == Place::waiting(1));
    CHECK(d.trail_successors(ec).empty());
  }
}

TEST_CASE("trail successors agree with the literal stepper") {
  std::mt19937_64 rng(7);
  std::size_t compared = 0;
  for (int instance = 0; instance < 40; ++instance) {
    WeightedGraph g = gen_random_soliton_graph(8, rng());
    std::set<NodeId> ext_set = exterior_nodes(g);
    std::vector<NodeId> ext(ext_set.begin(), ext_set.end());
    auto pick = [&] { return ext[rng() % ext.size()]; };
    std::size_t m = 1 + rng() % 3;
    std::vector<BurstPair> pairs;
    std::vector<unsigned> gaps;
    for (std::size_t i = 0; i < m; ++i) pairs.push_back({pick(), pick()});
    for (std::size_t i = 1; i < m; ++i) gaps.push_back(static_cast<unsigned>(rng() % 3));
    Burst b(pairs, gaps);
    SolitonDynamics d(g, b);
    oracle::Stepper st(g, b);
    const Topology& t = g.topology();

    std::set<oracle::State> seen{st.start()};
    std::vector<oracle::State> work{st.start()};
    while (!work.empty() && seen.size() < 5000) {
      oracle::State s = work.back();
      work.pop_back();
      ExtendedConfiguration ec{{s.cur_w, to_placement(s.cur, t)}, std::nullopt};
      if (s.has_prev) ec.previous = to_placement(s.prev, t);

      std::set<std::pair<Weights, Placement>> expected, got;
      for (const oracle::State& n : st.next(s)) {
        expected.insert({n.cur_w, to_placement(n.cur, t)});
        if (seen.insert(n).second) work.push_back(n);
      }
      for (const ExtendedConfiguration& n : d.trail_successors(ec)) got.insert({n.current.weights, n.current.positions});
      CHECK(got == expected);
      ++compared;
    }
  }
  CHECK(compared > 100);
}

TEST_CASE("successor equivalence") {
  WeightedGraph g = c4();
  SolitonDynamics d(g, parse_burst("(1,1)|1(1,1)!"));
  ConfigurationGraph cg(d);
  CHECK(d.successor_equivalent(d.start(), d.start()));

  bool found_negative = false, found_two_way = false;
  for (ConfigurationGraph::Id v = 0; v < cg.size(); ++v) {
    std::vector<Placement> succ = d.successor_set(cg.config(v));
    if (succ.size() == 2) {
      // One map takes a soliton out to the exterior node, the other keeps it in the cycle.
      const Placement& x = succ[0];
      const Placement& y = succ[1];
      for (std::size_t i = 0; i < x.size(); ++i) {
        bool x_out = x[i] == at(g, "1"), y_out = y[i] == at(g, "1");
        bool x_in = x[i] == at(g, "b"), y_in = y[i] == at(g, "b");
        if ((x_out && y_in) || (x_in && y_out)) found_two_way = true;
      }
    }
    for (ConfigurationGraph::Id u = 0; u < v; ++u) {
      const ExtendedConfiguration& a = cg.config(u);
      const ExtendedConfiguration& b = cg.config(v);
      bool same_class = cg.class_of(u) == cg.class_of(v);
      CHECK(same_class == d.successor_equivalent(a, b));
      if (a.current == b.current && !same_class) found_negative = true;
      if (a.current.weights != b.current.weights) CHECK_FALSE(d.successor_equivalent(a, b));
    }
  }
  CHECK(found_negative);
  CHECK(found_two_way);
}

TEST_CASE("perfect trails") {
  SUBCASE("path graph") {
    WeightedGraph g = path_graph();
    std::vector<Trail> ts = enumerate_perfect_trails(g, parse_burst("(1,2)!"), 0);
    REQUIRE(ts.size() == 1);
    CHECK(names(soliton_path(ts[0], 0), g.topology()) == std::vector<std::string>{"1", "a", "b", "2"});
    CHECK(ts[0].total);
    CHECK(ts[0].perfect);
    CHECK(used_edges(ts[0]).size() == 3);
  }
  SUBCASE("C4-chestnut, one soliton tours the cycle") {
    WeightedGraph g = c4();
    std::vector<Trail> ts = enumerate_perfect_trails(g, parse_burst("(1,1)!"), 0);
    REQUIRE(ts.size() == 1);
    CHECK(names(soliton_path(ts[0], 0), g.topology()) ==
          std::vector<std::string>{"1", "a", "b", "c", "d", "a", "1"});
    CHECK(used_edges(ts[0]).size() == 5);
    // The entry edge is crossed twice and ends where it started.
    CHECK(ts[0].steps.back().weights[0] == g.weights()[0]);
  }
  SUBCASE("C4-chestnut, two solitons") {
    WeightedGraph g = c4();
    Burst b = parse_burst("(1,1)|1(1,1)!");
    std::vector<Trail> ts = enumerate_perfect_trails(g, b, 0);
    REQUIRE(ts.size() == 1);
    check_trail_invariants(ts[0], b);
    CHECK(enumerate_perfect_trails(g, b, 1).size() == 1);
  }
  SUBCASE("waiting prefix is not part of the soliton path") {
    WeightedGraph g = path_graph();
    std::vector<Trail> ts = enumerate_perfect_trails(g, parse_burst("(1,2)|5(2,1)!"), 0);
    REQUIRE(ts.size() == 1);
    SolitonPath second = soliton_path(ts[0], 1);
    CHECK(names(second, g.topology()) == std::vector<std::string>{"2", "b", "a", "1"});
    CHECK(flipped_edges(ts[0], 0).empty());
  }
}

TEST_CASE("trail multiplicity") {
  CHECK(trail_multiplicity(path_graph(), parse_burst("(1,2)!")).kind == TrailMultiplicity::Kind::One);
  CHECK(trail_multiplicity(c4(), parse_burst("(1,1)|1(1,1)!")).kind == TrailMultiplicity::Kind::Infinite);
  // Arriving over a single bond, the only double bond leads to exterior 1.
  CHECK(trail_multiplicity(star(), parse_burst("(2,3)!")).kind == TrailMultiplicity::Kind::Zero);
  // Reaching the far exterior node that is not the exit is a dead end.
  CHECK(trail_multiplicity(path_graph(), parse_burst("(1,1)!")).kind == TrailMultiplicity::Kind::Zero);
  CHECK(result(star(), parse_burst("(2,3)!")).empty());

  TrailMultiplicity m = trail_multiplicity(gen_gg(3), parse_burst("(1,2)!"));
  CHECK(m.kind == TrailMultiplicity::Kind::Finite);
  CHECK(m.count == 3);
  CHECK(m.to_string() == "finite(3)");
}

TEST_CASE("result") {
  SUBCASE("path graph flips every edge") {
    WeightedGraph g = path_graph();
    std::vector<WeightedGraph> r = result(g, parse_burst("(1,2)!"));
    REQUIRE(r.size() == 1);
    CHECK(r[0].weights() == weights_of(g, {{"1-a", 2}, {"a-b", 1}, {"2-b", 2}}));
    CHECK(validate(r[0]).ok());
  }
  SUBCASE("C4-chestnut rotates the cycle") {
    WeightedGraph g = c4();
    std::vector<WeightedGraph> r = result(g, parse_burst("(1,1)!"));
    REQUIRE(r.size() == 1);
    CHECK(r[0].weights() == weights_of(g, {{"1-a", 1}, {"a-b", 1}, {"b-c", 2}, {"c-d", 1}, {"a-d", 2}}));
  }
  SUBCASE("G_g has g outcomes") {
    for (std::size_t g = 1; g <= 4; ++g) {
      std::vector<WeightedGraph> r = result(gen_gg(g), parse_burst("(1,2)!"));
      CHECK(r.size() == g);
      for (const WeightedGraph& s : r) CHECK(validate(s).ok());
    }
  }
}

TEST_CASE("result equals the end states of listed perfect trails") {
  std::mt19937_64 rng(99);
  for (int instance = 0; instance < 30; ++instance) {
    WeightedGraph g = gen_random_soliton_graph(9, rng());
    std::set<NodeId> ext_set = exterior_nodes(g);
    std::vector<NodeId> ext(ext_set.begin(), ext_set.end());
    Burst b({{ext[rng() % ext.size()], ext[rng() % ext.size()]}, {ext[rng() % ext.size()], ext[rng() % ext.size()]}},
            {static_cast<unsigned>(rng() % 3)});
    std::set<Weights> listed;
    for (const Trail& t : enumerate_perfect_trails(g, b, 0)) {
      listed.insert(t.steps.back().weights);
      check_trail_invariants(t, b);
    }
    std::set<Weights> fast;
    for (const WeightedGraph& r : result(g, b)) fast.insert(r.weights());
    CHECK(fast == listed);
  }
}

TEST_CASE("listing total trails") {
  WeightedGraph g = c4();
  Burst b = parse_burst("(1,1)|1(1,1)!");
  TrailListing five = enumerate_total_trails(g, b, 5);
  CHECK(five.trails.size() == 5);
  CHECK(five.truncated);
  for (std::size_t i = 1; i < five.trails.size(); ++i) {
    CHECK(five.trails[i - 1].steps.size() <= five.trails[i].steps.size());
    check_trail_invariants(five.trails[i], b);
  }
  TrailListing one = enumerate_total_trails(path_graph(), parse_burst("(1,2)!"), 5);
  CHECK(one.trails.size() == 1);
  CHECK_FALSE(one.truncated);
}

TEST_CASE("trail dump format") {
  WeightedGraph g = path_graph();
  std::vector<Trail> ts = enumerate_perfect_trails(g, parse_burst("(1,2)!"), 0);
  REQUIRE(ts.size() == 1);
  CHECK(dump_trail(ts[0]) ==
        "t=0 pos=(1) flips=[]\n"
        "t=1 pos=(a) flips=[1-a]\n"
        "t=2 pos=(b) flips=[a-b]\n"
        "t=3 pos=(2) flips=[2-b]\n"
        "t=4 pos=(-) flips=[]\n");
}

TEST_CASE("configuration graph diagnostics") {
  SolitonDynamics d(c4(), parse_burst("(1,1)|1(1,1)!"));
  ConfigurationGraph cg(d);
  CHECK(cg.has_imperfect_trail(true));
  CHECK(cg.has_imperfect_trail(false));
  CHECK(cg.can_finish(cg.start()));

  SolitonDynamics single(path_graph(), parse_burst("(1,2)!"));
  ConfigurationGraph line(single);
  CHECK(line.size() == 5);
  CHECK_FALSE(line.has_imperfect_trail(false));
  CHECK(line.distance_to_final(line.start()) == 4);

  BurstOutcome o = analyze_burst(c4(), parse_burst("(1,1)|1(1,1)!"));
  CHECK(o.multiplicity.kind == TrailMultiplicity::Kind::Infinite);
  CHECK(o.perfect_trails == 1);
  CHECK(o.imperfect_total_trail);
  CHECK(o.results.size() == 1);
  CHECK(o.used_edges.size() == 5);
}

TEST_CASE("resource cap") {
  ExplorationLimits tiny;
  tiny.max_configurations = 3;
  SolitonDynamics d(path_graph(), parse_burst("(1,2)!"));
  CHECK_THROWS_AS(ConfigurationGraph(d, tiny), ResourceLimitExceeded);

  setenv("SOLITON_MAX_CONFIGS", "1234", 1);
  CHECK(ExplorationLimits::from_environment().max_configurations == 1234);
  setenv("SOLITON_MAX_CONFIGS", "junk", 1);
  CHECK(ExplorationLimits::from_environment().max_configurations == ExplorationLimits{}.max_configurations);
  unsetenv("SOLITON_MAX_CONFIGS");
}
