#include "soliton/engine.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace soliton {

namespace {

inline void hash_combine(std::size_t& seed, std::size_t value) {
  seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

std::size_t hash_weights(const Weights& w) {
  std::size_t h = w.size();
  for (std::uint8_t x : w) hash_combine(h, x);
  return h;
}

std::size_t hash_placement(const Placement& p) {
  std::size_t h = p.size();
  for (Place x : p) hash_combine(h, static_cast<std::size_t>(static_cast<std::uint32_t>(x.raw())));
  return h;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max()
                                                           : a + b;
}

}  // namespace

std::size_t ExtendedConfigurationHash::operator()(const ExtendedConfiguration& ec) const {
  std::size_t h = hash_weights(ec.current.weights);
  hash_combine(h, hash_placement(ec.current.positions));
  hash_combine(h, ec.previous ? hash_placement(*ec.previous) : 0x51ed27);
  return h;
}

PositionMap to_position_map(const Placement& p, const Topology& t) {
  PositionMap out;
  out.reserve(p.size());
  for (Place x : p) {
    if (x.is_node()) {
      out.push_back(Position::at(t.name(x.node())));
    } else if (x.is_waiting()) {
      out.push_back(Position::waiting(x.countdown()));
    } else {
      out.push_back(Position::departed());
    }
  }
  return out;
}

bool is_final(const Placement& p) {
  return std::all_of(p.begin(), p.end(), [](Place x) { return x.is_departed(); });
}

ExplorationLimits ExplorationLimits::from_environment() {
  ExplorationLimits limits;
  if (const char* env = std::getenv("SOLITON_MAX_CONFIGS")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) limits.max_configurations = static_cast<std::size_t>(v);
  }
  return limits;
}

std::string TrailMultiplicity::to_string() const {
  switch (kind) {
    case Kind::Zero:
      return "zero";
    case Kind::One:
      return "one";
    case Kind::Finite:
      return "finite(" + std::to_string(count) + ")";
    case Kind::Infinite:
      break;
  }
  return "infinite";
}

// --- SolitonDynamics --------------------------------------------------------

SolitonDynamics::SolitonDynamics(const WeightedGraph& g, const Burst& b)
    : graph_(g), burst_(bind_burst(b, g)) {}

ExtendedConfiguration SolitonDynamics::start() const {
  ExtendedConfiguration ec;
  ec.current.weights = graph_.weights();
  for (const Position& p : initial_position_map(burst_.burst)) {
    ec.current.positions.push_back(p.is_node() ? Place::at(*topology().find(p.node()))
                                               : Place::waiting(p.countdown()));
  }
  return ec;
}

std::vector<Place> SolitonDynamics::raw_options(const ExtendedConfiguration& ec, std::size_t i) const {
  Place cur = ec.current.positions[i];
  if (cur.is_departed()) return {Place::departed()};
  if (cur.is_waiting()) {
    return {cur.countdown() > 1 ? Place::waiting(cur.countdown() - 1) : Place::at(burst_.entry[i])};
  }
  std::vector<Place> out;
  for (const Incidence& inc : topology().incident(cur.node())) out.push_back(Place::at(inc.neighbor));
  if (cur.node() == burst_.exit[i]) out.push_back(Place::departed());
  return out;
}

bool SolitonDynamics::locally_admissible(const ExtendedConfiguration& ec, std::size_t i,
                                         Place next) const {
  const Topology& t = topology();
  Place cur = ec.current.positions[i];
  if (!ec.previous) {
    // First step: a soliton placed on a node must move onto the graph.
    return !cur.is_node() || next.is_node();
  }
  Place prev = (*ec.previous)[i];
  if (cur.is_node()) {
    NodeIndex n = cur.node();
    if (t.is_exterior(n)) {
      // Just entered: must move in.
      if (prev == Place::waiting(1) && !next.is_node()) return false;
      // Arrived at its exit by traversal: must leave.
      if (n == burst_.exit[i] && prev.is_node() && !next.is_departed()) return false;
    } else if (prev.is_node()) {
      // Alternation: weight of the edge just crossed (before the flip) must
      // differ from the weight of the edge taken next.
      if (!next.is_node()) return false;
      EdgeIndex in = *t.edge_between(prev.node(), n);
      EdgeIndex out = *t.edge_between(n, next.node());
      int in_before = 3 - ec.current.weights[in];
      if (in_before == ec.current.weights[out]) return false;
    }
  }
  // No standing still, no immediate reversal.
  if (!next.is_departed() && (next == cur || next == prev)) return false;
  return true;
}

bool SolitonDynamics::jointly_admissible(const Placement& current, const Placement& next) const {
  const std::size_t m = current.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = i + 1; k < m; ++k) {
      Place ci = current[i], ck = current[k];
      if (ci.is_node() && ck.is_node()) {
        // Solitons sharing a node leave it on different edges (and cannot
        // both depart through the same exterior node).
        if (ci == ck && next[i] == next[k]) return false;
        // No swapping along an edge.
        if (next[i] == ck && next[k] == ci) return false;
      } else if (!ci.is_node() && !ck.is_node()) {
        // Two solitons cannot enter through the same exterior node at once.
        if (next[i].is_node() && next[i] == next[k]) return false;
      }
    }
  }
  return true;
}

std::vector<Placement> SolitonDynamics::potential_successor_maps(const ExtendedConfiguration& ec) const {
  const std::size_t m = solitons();
  std::vector<std::vector<Place>> options(m);
  for (std::size_t i = 0; i < m; ++i) options[i] = raw_options(ec, i);
  std::vector<Placement> out;
  Placement cur(m, Place::departed());
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == m) {
      out.push_back(cur);
      return;
    }
    for (Place p : options[i]) {
      cur[i] = p;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

std::vector<ExtendedConfiguration> SolitonDynamics::trail_successors(const ExtendedConfiguration& ec) const {
  std::vector<ExtendedConfiguration> out;
  const Placement& current = ec.current.positions;
  if (soliton::is_final(current)) return out;
  const std::size_t m = solitons();

  std::vector<std::vector<Place>> options(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (Place p : raw_options(ec, i)) {
      if (locally_admissible(ec, i, p)) options[i].push_back(p);
    }
    if (options[i].empty()) return out;
  }

  const Topology& t = topology();
  Placement next(m, Place::departed());
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == m) {
      if (!jointly_admissible(current, next)) return;
      ExtendedConfiguration succ;
      succ.current.weights = ec.current.weights;
      succ.current.positions = next;
      succ.previous = current;
      for (std::size_t s = 0; s < m; ++s) {
        if (current[s].is_node() && next[s].is_node()) {
          EdgeIndex e = *t.edge_between(current[s].node(), next[s].node());
          succ.current.weights[e] = static_cast<std::uint8_t>(3 - succ.current.weights[e]);
        }
      }
      out.push_back(std::move(succ));
      return;
    }
    for (Place p : options[i]) {
      next[i] = p;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

std::vector<Placement> SolitonDynamics::successor_set(const ExtendedConfiguration& ec) const {
  std::vector<Placement> out;
  for (const ExtendedConfiguration& s : trail_successors(ec)) out.push_back(s.current.positions);
  std::sort(out.begin(), out.end());
  return out;
}

bool SolitonDynamics::successor_equivalent(const ExtendedConfiguration& a,
                                           const ExtendedConfiguration& b) const {
  return a.current == b.current && successor_set(a) == successor_set(b);
}

// --- ConfigurationGraph -----------------------------------------------------

namespace {

struct ClassKey {
  const Configuration* config;
  std::vector<Placement> successors;

  bool operator==(const ClassKey& o) const {
    return config->weights == o.config->weights && config->positions == o.config->positions &&
           successors == o.successors;
  }
};

struct ClassKeyHash {
  std::size_t operator()(const ClassKey& k) const {
    std::size_t h = hash_weights(k.config->weights);
    hash_combine(h, hash_placement(k.config->positions));
    for (const Placement& p : k.successors) hash_combine(h, hash_placement(p));
    return h;
  }
};

}  // namespace

ConfigurationGraph::ConfigurationGraph(const SolitonDynamics& dynamics, const ExplorationLimits& limits) {
  std::unordered_map<ExtendedConfiguration, Id, ExtendedConfigurationHash> index;
  std::vector<std::vector<Id>> adjacency;

  auto intern = [&](ExtendedConfiguration ec) -> Id {
    auto it = index.find(ec);
    if (it != index.end()) return it->second;
    if (configs_.size() >= limits.max_configurations) {
      throw ResourceLimitExceeded("more than " + std::to_string(limits.max_configurations) +
                                  " extended configurations for burst " +
                                  dynamics.burst().burst.to_string());
    }
    Id id = static_cast<Id>(configs_.size());
    index.emplace(ec, id);
    configs_.push_back(std::move(ec));
    adjacency.emplace_back();
    return id;
  };

  intern(dynamics.start());
  for (Id v = 0; v < configs_.size(); ++v) {
    std::vector<ExtendedConfiguration> next = dynamics.trail_successors(configs_[v]);
    std::vector<Id> ids;
    ids.reserve(next.size());
    for (ExtendedConfiguration& s : next) ids.push_back(intern(std::move(s)));
    adjacency[v] = std::move(ids);
  }

  const std::size_t n = configs_.size();
  offsets_.assign(n + 1, 0);
  for (Id v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + adjacency[v].size();
  succ_.reserve(offsets_[n]);
  for (auto& list : adjacency) succ_.insert(succ_.end(), list.begin(), list.end());

  final_.resize(n);
  for (Id v = 0; v < n; ++v) final_[v] = soliton::is_final(configs_[v].current.positions);

  // Successor-equivalence classes: equal configuration and equal successor set.
  std::unordered_map<ClassKey, std::uint32_t, ClassKeyHash> classes;
  class_.resize(n);
  for (Id v = 0; v < n; ++v) {
    ClassKey key{&configs_[v].current, {}};
    for (Id s : successors(v)) key.successors.push_back(configs_[s].current.positions);
    std::sort(key.successors.begin(), key.successors.end());
    auto [it, inserted] = classes.emplace(std::move(key), static_cast<std::uint32_t>(classes.size()));
    class_[v] = it->second;
  }
  class_count_ = classes.size();

  // Reverse BFS from final vertices.
  std::vector<std::vector<Id>> reverse(n);
  for (Id v = 0; v < n; ++v) {
    for (Id s : successors(v)) reverse[s].push_back(v);
  }
  constexpr auto unreached = std::numeric_limits<std::size_t>::max();
  distance_.assign(n, unreached);
  can_finish_.assign(n, false);
  std::queue<Id> queue;
  for (Id v = 0; v < n; ++v) {
    if (final_[v]) {
      distance_[v] = 0;
      can_finish_[v] = true;
      queue.push(v);
    }
  }
  while (!queue.empty()) {
    Id v = queue.front();
    queue.pop();
    for (Id p : reverse[v]) {
      if (!can_finish_[p]) {
        can_finish_[p] = true;
        distance_[p] = distance_[v] + 1;
        queue.push(p);
      }
    }
  }
}

bool ConfigurationGraph::has_imperfect_trail(bool total_only) const {
  const std::size_t n = size();
  auto allowed = [&](Id v) { return !total_only || can_finish_[v]; };
  if (!allowed(start())) return false;

  // Any cycle among allowed vertices repeats a configuration outright.
  std::vector<std::uint8_t> colour(n, 0);  // 0 new, 1 on stack, 2 done
  std::vector<std::pair<Id, std::size_t>> stack;
  for (Id root = 0; root < n; ++root) {
    if (!allowed(root) || colour[root] != 0) continue;
    stack.push_back({root, 0});
    colour[root] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      auto succ = successors(v);
      if (next < succ.size()) {
        Id s = succ[next++];
        if (!allowed(s)) continue;
        if (colour[s] == 1) return true;
        if (colour[s] == 0) {
          colour[s] = 1;
          stack.push_back({s, 0});
        }
      } else {
        colour[v] = 2;
        stack.pop_back();
      }
    }
  }

  // Acyclic: look for a path between two distinct members of one class.
  std::unordered_map<std::uint32_t, std::vector<Id>> members;
  for (Id v = 0; v < n; ++v) {
    if (allowed(v)) members[class_[v]].push_back(v);
  }
  std::vector<std::uint32_t> seen(n, 0);
  std::uint32_t stamp = 0;
  for (const auto& [cls, list] : members) {
    if (list.size() < 2) continue;
    for (Id from : list) {
      ++stamp;
      std::vector<Id> work{from};
      seen[from] = stamp;
      while (!work.empty()) {
        Id v = work.back();
        work.pop_back();
        for (Id s : successors(v)) {
          if (!allowed(s) || seen[s] == stamp) continue;
          if (class_[s] == cls) return true;
          seen[s] = stamp;
          work.push_back(s);
        }
      }
    }
  }
  return false;
}

// --- trail enumeration ------------------------------------------------------

void for_each_perfect_trail(const ConfigurationGraph& graph,
                            const std::function<bool(std::span<const ConfigurationGraph::Id>)>& visit,
                            const ExplorationLimits& limits) {
  using Id = ConfigurationGraph::Id;
  if (!graph.can_finish(graph.start())) return;

  std::vector<std::uint8_t> on_path(graph.class_count(), 0);
  std::vector<Id> path{graph.start()};
  std::vector<std::size_t> cursor{0};
  on_path[graph.class_of(graph.start())] = 1;
  std::size_t steps = 0;

  while (!path.empty()) {
    Id v = path.back();
    if (graph.is_final(v)) {
      if (!visit(path)) return;
      on_path[graph.class_of(v)] = 0;
      path.pop_back();
      cursor.pop_back();
      continue;
    }
    auto succ = graph.successors(v);
    std::size_t& next = cursor.back();
    bool descended = false;
    while (next < succ.size()) {
      Id s = succ[next++];
      if (!graph.can_finish(s) || on_path[graph.class_of(s)]) continue;
      if (++steps > limits.max_search_steps) {
        throw ResourceLimitExceeded("perfect-trail search exceeded " +
                                    std::to_string(limits.max_search_steps) + " steps");
      }
      on_path[graph.class_of(s)] = 1;
      path.push_back(s);
      cursor.push_back(0);
      // A perfect trail never repeats a class, hence never an extended configuration.
      if (path.size() > graph.size()) throw std::logic_error("perfect trail longer than configuration space");
      descended = true;
      break;
    }
    if (!descended) {
      on_path[graph.class_of(v)] = 0;
      path.pop_back();
      cursor.pop_back();
    }
  }
}

Trail materialize(const ConfigurationGraph& graph, const SolitonDynamics& dynamics,
                  std::span<const ConfigurationGraph::Id> vertices, bool perfect) {
  Trail t;
  t.topology = dynamics.graph().shared_topology();
  for (auto v : vertices) t.steps.push_back(graph.config(v).current);
  t.total = !vertices.empty() && graph.is_final(vertices.back());
  t.perfect = perfect;
  return t;
}

std::vector<Trail> enumerate_perfect_trails(const WeightedGraph& g, const Burst& b, std::size_t cap,
                                            const ExplorationLimits& limits) {
  SolitonDynamics dynamics(g, b);
  ConfigurationGraph graph(dynamics, limits);
  std::vector<Trail> out;
  for_each_perfect_trail(
      graph,
      [&](std::span<const ConfigurationGraph::Id> path) {
        out.push_back(materialize(graph, dynamics, path, true));
        return cap == 0 || out.size() < cap;
      },
      limits);
  return out;
}

TrailMultiplicity trail_multiplicity(const ConfigurationGraph& graph) {
  using Id = ConfigurationGraph::Id;
  TrailMultiplicity out;
  if (!graph.can_finish(graph.start())) return out;

  // Post-order over the vertices that can still finish; a back edge means a
  // cycle on some accepting path, hence infinitely many total trails.
  const std::size_t n = graph.size();
  std::vector<std::uint8_t> colour(n, 0);
  std::vector<std::uint64_t> count(n, 0);
  std::vector<std::pair<Id, std::size_t>> stack{{graph.start(), 0}};
  colour[graph.start()] = 1;
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    auto succ = graph.successors(v);
    if (next < succ.size()) {
      Id s = succ[next++];
      if (!graph.can_finish(s)) continue;
      if (colour[s] == 1) {
        out.kind = TrailMultiplicity::Kind::Infinite;
        return out;
      }
      if (colour[s] == 0) {
        colour[s] = 1;
        stack.push_back({s, 0});
      }
    } else {
      std::uint64_t c = graph.is_final(v) ? 1 : 0;
      for (Id s : succ) {
        if (graph.can_finish(s)) c = saturating_add(c, count[s]);
      }
      count[v] = c;
      colour[v] = 2;
      stack.pop_back();
    }
  }
  out.count = count[graph.start()];
  out.kind = out.count == 1 ? TrailMultiplicity::Kind::One : TrailMultiplicity::Kind::Finite;
  return out;
}

TrailMultiplicity trail_multiplicity(const WeightedGraph& g, const Burst& b, const ExplorationLimits& limits) {
  SolitonDynamics dynamics(g, b);
  return trail_multiplicity(ConfigurationGraph(dynamics, limits));
}

namespace {

// End weights of perfect total trails. Every final vertex qualifies: if a
// trail to it visits two successor-equivalent configurations, the part in
// between can be cut out (both have the same weights, positions and
// successor maps, so the continuation stays legal and reaches the same
// extended configuration). Repeating this yields a perfect trail.
std::vector<Weights> final_weights(const ConfigurationGraph& graph) {
  std::vector<Weights> out;
  for (ConfigurationGraph::Id v = 0; v < graph.size(); ++v) {
    if (graph.is_final(v)) out.push_back(graph.config(v).current.weights);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

BurstOutcome analyze_burst(const WeightedGraph& g, const Burst& b, const ExplorationLimits& limits) {
  SolitonDynamics dynamics(g, b);
  ConfigurationGraph graph(dynamics, limits);
  BurstOutcome out;
  out.configurations = graph.size();
  out.multiplicity = trail_multiplicity(graph);

  out.results = final_weights(graph);

  // A unique total trail is perfect: shortcutting a repeated class would
  // give a second one. Otherwise search, stopping once two are found.
  using Kind = TrailMultiplicity::Kind;
  if (out.multiplicity.kind == Kind::Zero || out.multiplicity.kind == Kind::One) {
    out.perfect_trails = out.multiplicity.count;
  } else {
    for_each_perfect_trail(
        graph,
        [&](std::span<const ConfigurationGraph::Id>) { return ++out.perfect_trails < 2; },
        limits);
  }

  std::set<EdgeIndex> used;
  const Topology& t = g.topology();
  for (ConfigurationGraph::Id v = 0; v < graph.size(); ++v) {
    const Placement& from = graph.config(v).current.positions;
    for (ConfigurationGraph::Id s : graph.successors(v)) {
      const Placement& to = graph.config(s).current.positions;
      for (std::size_t i = 0; i < from.size(); ++i) {
        if (from[i].is_node() && to[i].is_node()) used.insert(*t.edge_between(from[i].node(), to[i].node()));
      }
    }
  }
  out.used_edges.assign(used.begin(), used.end());

  out.imperfect_trail = graph.has_imperfect_trail(false);
  out.imperfect_total_trail = graph.has_imperfect_trail(true);
  return out;
}

std::vector<WeightedGraph> result(const WeightedGraph& g, const Burst& b, const ExplorationLimits& limits) {
  SolitonDynamics dynamics(g, b);
  std::vector<WeightedGraph> out;
  for (const Weights& w : final_weights(ConfigurationGraph(dynamics, limits))) out.push_back(g.with_weights(w));
  return out;
}

TrailListing enumerate_total_trails(const WeightedGraph& g, const Burst& b, std::size_t limit,
                                    const ExplorationLimits& limits) {
  using Id = ConfigurationGraph::Id;
  SolitonDynamics dynamics(g, b);
  ConfigurationGraph graph(dynamics, limits);
  TrailListing out;
  if (!graph.can_finish(graph.start()) || limit == 0) {
    out.truncated = limit == 0 && graph.can_finish(graph.start());
    return out;
  }
  TrailMultiplicity multiplicity = trail_multiplicity(graph);
  std::size_t core = 0;
  for (Id v = 0; v < graph.size(); ++v) core += graph.can_finish(v) ? 1 : 0;

  // Iterative deepening keeps the output shortest-first even when the set of
  // trails is infinite.
  std::vector<Id> path;
  std::size_t steps = 0;
  std::function<void(Id, std::size_t)> extend = [&](Id v, std::size_t remaining) {
    if (out.trails.size() >= limit) return;
    path.push_back(v);
    if (remaining == 0) {
      if (graph.is_final(v)) out.trails.push_back(materialize(graph, dynamics, path, false));
    } else {
      for (Id s : graph.successors(v)) {
        if (!graph.can_finish(s) || graph.distance_to_final(s) > remaining - 1) continue;
        if (++steps > limits.max_search_steps) throw ResourceLimitExceeded("trail listing exceeded search budget");
        extend(s, remaining - 1);
      }
    }
    path.pop_back();
  };
  bool infinite = multiplicity.kind == TrailMultiplicity::Kind::Infinite;
  for (std::size_t length = graph.distance_to_final(graph.start());
       out.trails.size() < limit && (infinite || length < core); ++length) {
    extend(graph.start(), length);
  }
  out.truncated = infinite || multiplicity.count > out.trails.size();
  return out;
}

// --- trail inspection -------------------------------------------------------

SolitonPath soliton_path(const Trail& t, std::size_t soliton) {
  SolitonPath path;
  path.soliton = soliton;
  for (const Configuration& c : t.steps) {
    Place p = c.positions.at(soliton);
    if (p.is_node()) path.nodes.push_back(p.node());
  }
  return path;
}

std::vector<EdgeIndex> flipped_edges(const Trail& t, std::size_t j) {
  std::vector<EdgeIndex> out;
  if (j == 0 || j >= t.steps.size()) return out;
  const Placement& before = t.steps[j - 1].positions;
  const Placement& after = t.steps[j].positions;
  for (std::size_t i = 0; i < before.size(); ++i) {
    if (before[i].is_node() && after[i].is_node()) {
      out.push_back(*t.topology->edge_between(before[i].node(), after[i].node()));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::set<EdgeIndex> used_edges(const Trail& t) {
  std::set<EdgeIndex> out;
  for (std::size_t j = 1; j < t.steps.size(); ++j) {
    for (EdgeIndex e : flipped_edges(t, j)) out.insert(e);
  }
  return out;
}

std::string dump_trail(const Trail& t) {
  std::ostringstream out;
  for (std::size_t j = 0; j < t.steps.size(); ++j) {
    out << "t=" << j << " pos=" << to_string(to_position_map(t.steps[j].positions, *t.topology))
        << " flips=[";
    std::vector<EdgeIndex> flips = flipped_edges(t, j);
    for (std::size_t k = 0; k < flips.size(); ++k) {
      if (k > 0) out << ',';
      out << t.topology->edge_label(flips[k]);
    }
    out << "]\n";
  }
  return out.str();
}

}  // namespace soliton
