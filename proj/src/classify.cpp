#include "soliton/classify.hpp"

#include <algorithm>
#include <map>
#include <queue>

namespace soliton {

namespace {

bool connected(const Topology& t) {
  std::vector<std::size_t> comp = connected_components(t);
  return std::all_of(comp.begin(), comp.end(), [](std::size_t c) { return c == 0; });
}

std::vector<NodeId> sorted_exterior(const WeightedGraph& g) {
  std::set<NodeId> x = exterior_nodes(g);
  return {x.begin(), x.end()};
}

/// Nodes left after repeatedly removing degree-1 nodes, in walking order.
/// Only meaningful for connected unicyclic graphs.
std::vector<NodeIndex> unique_cycle(const Topology& t) {
  std::vector<std::size_t> degree(t.node_count());
  std::vector<bool> removed(t.node_count(), false);
  std::queue<NodeIndex> leaves;
  for (NodeIndex n = 0; n < t.node_count(); ++n) {
    degree[n] = t.degree(n);
    if (degree[n] <= 1) leaves.push(n);
  }
  while (!leaves.empty()) {
    NodeIndex n = leaves.front();
    leaves.pop();
    if (removed[n]) continue;
    removed[n] = true;
    for (const Incidence& inc : t.incident(n)) {
      if (!removed[inc.neighbor] && --degree[inc.neighbor] == 1) leaves.push(inc.neighbor);
    }
  }
  std::vector<NodeIndex> cycle;
  NodeIndex first = 0;
  while (first < t.node_count() && removed[first]) ++first;
  if (first == t.node_count()) return cycle;
  NodeIndex prev = first, cur = first;
  do {
    cycle.push_back(cur);
    NodeIndex next = cur;
    for (const Incidence& inc : t.incident(cur)) {
      if (!removed[inc.neighbor] && inc.neighbor != prev && !(cycle.size() > 1 && inc.neighbor == cycle[cycle.size() - 2])) {
        next = inc.neighbor;
        break;
      }
    }
    prev = cur;
    cur = next;
  } while (cur != first && cycle.size() <= t.node_count());
  return cycle;
}

}  // namespace

bool is_tree(const WeightedGraph& g) {
  const Topology& t = g.topology();
  return t.node_count() > 0 && t.edge_count() + 1 == t.node_count() && connected(t);
}

ChestnutCheck is_chestnut(const WeightedGraph& g) {
  const Topology& t = g.topology();
  ChestnutCheck out;
  ChestnutEvidence& ev = out.evidence;

  if (t.node_count() == 0 || !connected(t)) {
    ev.violations.push_back("graph is not connected");
    return out;
  }
  if (t.edge_count() != t.node_count()) {
    ev.violations.push_back("not unicyclic: |E|=" + std::to_string(t.edge_count()) +
                            ", |N|=" + std::to_string(t.node_count()));
    return out;
  }

  std::vector<NodeIndex> cycle = unique_cycle(t);
  const std::size_t len = cycle.size();
  std::vector<std::size_t> position(t.node_count(), len);
  for (std::size_t i = 0; i < len; ++i) {
    position[cycle[i]] = i;
    ev.cycle.push_back(t.name(cycle[i]));
  }
  if (len % 2 != 0) ev.violations.push_back("cycle has odd length " + std::to_string(len));

  std::vector<NodeIndex> entries;
  for (NodeIndex n : cycle) {
    if (t.degree(n) == 3) {
      entries.push_back(n);
      ev.entry_points.push_back(t.name(n));
    }
  }

  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t k = i + 1; k < entries.size(); ++k) {
      std::size_t arc = (position[entries[k]] + len - position[entries[i]]) % len;
      CycleDistance d{t.name(entries[i]), t.name(entries[k]), arc, len - arc, arc % 2 == 0};
      if (!d.even) {
        ev.violations.push_back("entry points " + d.a + " and " + d.b + " at odd cycle distance " +
                                std::to_string(arc) + "/" + std::to_string(len - arc));
      }
      ev.parity.push_back(std::move(d));
    }
  }

  // Hanging trees: distances from each entry point, off the cycle.
  for (NodeIndex entry : entries) {
    for (const Incidence& inc : t.incident(entry)) {
      if (position[inc.neighbor] != len) continue;
      int w = g.weight(inc.edge);
      ev.notes.push_back("entry edge " + t.edge_label(inc.edge) + " has weight " + std::to_string(w) +
                         (w == 1 ? "" : " (a chestnut's entry edges carry weight 1)"));

      std::queue<std::pair<NodeIndex, std::size_t>> queue;
      std::vector<bool> seen(t.node_count(), false);
      seen[entry] = true;
      seen[inc.neighbor] = true;
      queue.push({inc.neighbor, 1});
      while (!queue.empty()) {
        auto [n, dist] = queue.front();
        queue.pop();
        if (t.degree(n) >= 3) {
          BranchPoint b{t.name(n), t.name(entry), dist, dist % 2 == 0};
          if (!b.even) {
            ev.violations.push_back("paths meet at " + b.node + ", odd distance " + std::to_string(dist) +
                                    " from entry " + b.entry);
          }
          ev.branch_points.push_back(std::move(b));
        }
        for (const Incidence& next : t.incident(n)) {
          if (!seen[next.neighbor]) {
            seen[next.neighbor] = true;
            queue.push({next.neighbor, dist + 1});
          }
        }
      }
    }
  }
  if (entries.empty()) ev.violations.push_back("no path leads into the cycle");

  out.is_chestnut = ev.violations.empty();
  return out;
}

EdgeSweep used_edges_bounded(const WeightedGraph& g, const Bounds& bounds, const ExplorationLimits& limits) {
  EdgeSweep out;
  out.bounds = bounds;
  std::vector<Burst> bursts = all_bursts(sorted_exterior(g), bounds);
  out.bursts = bursts.size();

  std::set<Weights> seen{g.weights()};
  std::vector<Weights> frontier{g.weights()};
  for (std::size_t s = 0; s < frontier.size(); ++s) {
    WeightedGraph state = g.with_weights(frontier[s]);
    for (const Burst& b : bursts) {
      try {
        BurstOutcome o = analyze_burst(state, b, limits);
        out.edges.insert(o.used_edges.begin(), o.used_edges.end());
        for (const Weights& w : o.results) {
          if (seen.insert(w).second) frontier.push_back(w);
        }
      } catch (const ResourceLimitExceeded& e) {
        out.complete = false;
        if (out.note.empty()) out.note = e.what();
      }
    }
  }
  out.states = frontier.size();
  return out;
}

ImperviousPaths impervious_paths_bounded(const WeightedGraph& g, const Bounds& bounds,
                                         const ExplorationLimits& limits) {
  const Topology& t = g.topology();
  EdgeSweep sweep = used_edges_bounded(g, bounds, limits);
  ImperviousPaths out;
  out.bounds = bounds;
  out.complete = sweep.complete;
  out.caveat = "bounded sweep (max burst length " + std::to_string(bounds.max_burst_length) +
               ", max gap " + std::to_string(bounds.max_gap) +
               "): unused edges are candidates only; longer bursts may use them";

  std::vector<bool> unused(t.edge_count(), true);
  for (EdgeIndex e : sweep.edges) unused[e] = false;
  std::vector<std::size_t> degree(t.node_count(), 0);
  for (EdgeIndex e = 0; e < t.edge_count(); ++e) {
    if (unused[e]) {
      ++degree[t.ends(e).u];
      ++degree[t.ends(e).v];
    }
  }

  std::vector<bool> taken(t.edge_count(), false);
  auto walk = [&](NodeIndex from, EdgeIndex first) {
    std::vector<NodeIndex> path{from};
    NodeIndex cur = from;
    EdgeIndex e = first;
    for (;;) {
      taken[e] = true;
      cur = t.ends(e).other(cur);
      path.push_back(cur);
      if (degree[cur] != 2 || cur == from) break;
      std::optional<EdgeIndex> next;
      for (const Incidence& inc : t.incident(cur)) {
        if (unused[inc.edge] && !taken[inc.edge]) next = inc.edge;
      }
      if (!next) break;
      e = *next;
    }
    return path;
  };

  std::vector<std::vector<NodeIndex>> paths;
  for (NodeIndex n = 0; n < t.node_count(); ++n) {
    if (degree[n] == 0 || degree[n] == 2) continue;
    for (const Incidence& inc : t.incident(n)) {
      if (unused[inc.edge] && !taken[inc.edge]) paths.push_back(walk(n, inc.edge));
    }
  }
  // What is left are closed chains of unused edges.
  for (NodeIndex n = 0; n < t.node_count(); ++n) {
    for (const Incidence& inc : t.incident(n)) {
      if (unused[inc.edge] && !taken[inc.edge]) paths.push_back(walk(n, inc.edge));
    }
  }

  for (auto& p : paths) {
    if (p.back() < p.front()) std::reverse(p.begin(), p.end());
  }
  std::sort(paths.begin(), paths.end());
  for (const auto& p : paths) {
    std::vector<NodeId> names;
    for (NodeIndex n : p) names.push_back(t.name(n));
    out.paths.push_back(std::move(names));
  }
  return out;
}

BoundedVerdict graph_determinism_bounded(const WeightedGraph& g, DeterminismKind kind, const Bounds& bounds,
                                         const ExplorationLimits& limits) {
  SolitonAutomaton a(g, all_bursts(sorted_exterior(g), bounds), limits);
  BoundedVerdict out;
  out.bounds = bounds;
  out.states = a.states().size();
  out.bursts = a.alphabet().size();
  switch (kind) {
    case DeterminismKind::Deterministic:
      out.verdict = is_deterministic(a);
      break;
    case DeterminismKind::Strong:
      out.verdict = is_strongly_deterministic(a);
      break;
    case DeterminismKind::Perfect:
      out.verdict = is_perfectly_deterministic(a);
      break;
  }
  return out;
}

ClassifyReport classify(const WeightedGraph& g, const Bounds& bounds, const ExplorationLimits& limits) {
  const Topology& t = g.topology();
  ClassifyReport r;
  r.bounds = bounds;
  r.is_tree = is_tree(g);
  ChestnutCheck chestnut = is_chestnut(g);
  r.is_chestnut = chestnut.is_chestnut;
  r.chestnut_evidence = std::move(chestnut.evidence);

  EdgeSweep sweep = used_edges_bounded(g, bounds, limits);
  for (EdgeIndex e = 0; e < t.edge_count(); ++e) {
    if (!sweep.edges.contains(e)) r.unused_edges_bounded.push_back({t.name(t.ends(e).u), t.name(t.ends(e).v)});
  }
  r.impervious_paths = impervious_paths_bounded(g, bounds, limits).paths;
  r.indecomposable_bounded = r.unused_edges_bounded.empty();
  r.complete = sweep.complete;
  r.caveat = "indecomposability checked only for bursts of length <= " +
             std::to_string(bounds.max_burst_length) + " with gaps <= " + std::to_string(bounds.max_gap);
  if (!sweep.complete) r.caveat += "; sweep incomplete: " + sweep.note;
  return r;
}

nlohmann::json to_json(const ClassifyReport& r) {
  const ChestnutEvidence& ev = r.chestnut_evidence;
  nlohmann::json parity = nlohmann::json::array();
  for (const CycleDistance& d : ev.parity) {
    parity.push_back({{"a", d.a}, {"b", d.b}, {"arc", d.arc}, {"other_arc", d.other_arc}, {"even", d.even}});
  }
  nlohmann::json branches = nlohmann::json::array();
  for (const BranchPoint& b : ev.branch_points) {
    branches.push_back({{"node", b.node}, {"entry", b.entry}, {"distance", b.distance}, {"even", b.even}});
  }
  nlohmann::json unused = nlohmann::json::array();
  for (const auto& [a, b] : r.unused_edges_bounded) unused.push_back({a, b});
  return {{"is_tree", r.is_tree},
          {"is_chestnut", r.is_chestnut},
          {"chestnut_evidence",
           {{"cycle", ev.cycle},
            {"entry_points", ev.entry_points},
            {"parity", parity},
            {"branch_points", branches},
            {"violations", ev.violations},
            {"notes", ev.notes}}},
          {"indecomposable_bounded", r.indecomposable_bounded},
          {"bounds", {{"max_burst_length", r.bounds.max_burst_length}, {"max_gap", r.bounds.max_gap}}},
          {"unused_edges_bounded", unused},
          {"impervious_paths", r.impervious_paths},
          {"complete", r.complete},
          {"caveat", r.caveat}};
}

ClassifyReport classify_report_from_json(const nlohmann::json& j) {
  ClassifyReport r;
  r.is_tree = j.at("is_tree").get<bool>();
  r.is_chestnut = j.at("is_chestnut").get<bool>();
  const auto& ev = j.at("chestnut_evidence");
  r.chestnut_evidence.cycle = ev.at("cycle").get<std::vector<NodeId>>();
  r.chestnut_evidence.entry_points = ev.at("entry_points").get<std::vector<NodeId>>();
  for (const auto& d : ev.at("parity")) {
    r.chestnut_evidence.parity.push_back({d.at("a").get<NodeId>(), d.at("b").get<NodeId>(),
                                          d.at("arc").get<std::size_t>(), d.at("other_arc").get<std::size_t>(),
                                          d.at("even").get<bool>()});
  }
  for (const auto& b : ev.at("branch_points")) {
    r.chestnut_evidence.branch_points.push_back({b.at("node").get<NodeId>(), b.at("entry").get<NodeId>(),
                                                 b.at("distance").get<std::size_t>(), b.at("even").get<bool>()});
  }
  r.chestnut_evidence.violations = ev.at("violations").get<std::vector<std::string>>();
  r.chestnut_evidence.notes = ev.at("notes").get<std::vector<std::string>>();
  r.indecomposable_bounded = j.at("indecomposable_bounded").get<bool>();
  r.bounds.max_burst_length = j.at("bounds").at("max_burst_length").get<std::size_t>();
  r.bounds.max_gap = j.at("bounds").at("max_gap").get<unsigned>();
  for (const auto& e : j.at("unused_edges_bounded")) {
    r.unused_edges_bounded.push_back({e.at(0).get<NodeId>(), e.at(1).get<NodeId>()});
  }
  r.impervious_paths = j.at("impervious_paths").get<std::vector<std::vector<NodeId>>>();
  r.complete = j.at("complete").get<bool>();
  r.caveat = j.at("caveat").get<std::string>();
  return r;
}

}  // namespace soliton
