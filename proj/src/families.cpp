#include "soliton/families.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <sstream>

namespace soliton {

namespace {

/// a, b, ..., z, aa, ab, ...
std::string letter_name(std::size_t k) {
  std::string s;
  ++k;
  while (k > 0) {
    --k;
    s.insert(s.begin(), static_cast<char>('a' + k % 26));
    k /= 26;
  }
  return s;
}

std::string n_(std::size_t i) { return "n" + std::to_string(i); }
std::string v_(std::size_t i) { return "v" + std::to_string(i); }

using Adjacency = std::vector<std::set<std::size_t>>;

/// Names leaves 1, 2, ... and the rest a, b, ... in index order, then picks
/// weights. nullopt if the shape admits none.
std::optional<WeightedGraph> realize(const Adjacency& adj) {
  std::vector<NodeId> names(adj.size());
  std::size_t leaves = 0, inner = 0;
  for (std::size_t i = 0; i < adj.size(); ++i) {
    names[i] = adj[i].size() == 1 ? std::to_string(++leaves) : letter_name(inner++);
  }
  GraphBuilder b;
  for (const NodeId& n : names) b.add_node(n);
  for (std::size_t i = 0; i < adj.size(); ++i) {
    for (std::size_t j : adj[i]) {
      if (i < j) b.add_edge(names[i], names[j], 1);
    }
  }
  WeightedGraph shape = b.build();
  std::optional<Weights> w = assign_soliton_weights(shape.topology());
  if (!w) return std::nullopt;
  return shape.with_weights(*w);
}

/// Random tree with maximum degree 3: each new node hangs off an earlier one
/// that still has room.
Adjacency random_tree(std::size_t nodes, std::mt19937_64& rng) {
  Adjacency adj(nodes);
  for (std::size_t i = 1; i < nodes; ++i) {
    std::vector<std::size_t> open;
    for (std::size_t j = 0; j < i; ++j) {
      if (adj[j].size() < 3) open.push_back(j);
    }
    std::size_t parent = open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng)];
    adj[i].insert(parent);
    adj[parent].insert(i);
  }
  return adj;
}

}  // namespace

std::string FamilySpec::describe() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::Gg:
      out << "gg g=" << g;
      break;
    case Kind::Chestnut:
      out << "chestnut cycle=" << cycle_length << " attachments=";
      for (std::size_t i = 0; i < attachments.size(); ++i) {
        out << (i ? "," : "") << attachments[i].position << ":" << attachments[i].length;
      }
      break;
    case Kind::Tree:
      out << "tree nodes=" << nodes << " seed=" << seed;
      break;
  }
  return out.str();
}

WeightedGraph gen_gg(std::size_t g) {
  if (g < 1) throw FamilyError(FamilyError::Kind::BadParameter, "gg needs g >= 1");
  GraphBuilder b;
  b.add_edge("1", n_(1), 1);
  for (std::size_t i = 1; i < 2 * g; ++i) b.add_edge(n_(i), n_(i + 1), i % 2 == 1 ? 2 : 1);

  if (g == 1) {
    b.add_edge(n_(2), v_(1), 1);
    b.add_edge(v_(1), "2", 2);
    return b.build();
  }
  const std::size_t r = 2 * g - 3;
  for (std::size_t i = 1; i < r; ++i) b.add_edge(v_(i), v_(i + 1), i % 2 == 1 ? 2 : 1);
  b.add_edge(v_(r), "2", 2);
  b.add_edge(n_(2), v_(1), 1);
  for (std::size_t k = 2; k <= g; ++k) b.add_edge(n_(2 * k), v_(2 * k - 3), 1);
  return b.build();
}

WeightedGraph gen_chestnut(std::size_t cycle_length, const std::vector<Attachment>& attachments) {
  using K = FamilyError::Kind;
  if (cycle_length < 4) throw FamilyError(K::BadParameter, "cycle length must be at least 4");
  if (cycle_length % 2 != 0) throw FamilyError(K::Parity, "cycle length must be even");
  if (attachments.empty()) throw FamilyError(K::BadParameter, "a chestnut needs at least one path");
  std::set<std::size_t> used;
  for (const Attachment& a : attachments) {
    if (a.position >= cycle_length) {
      throw FamilyError(K::BadParameter, "cycle position " + std::to_string(a.position) + " out of range");
    }
    if (a.length < 1) throw FamilyError(K::BadParameter, "path length must be at least 1");
    if (!used.insert(a.position).second) {
      throw FamilyError(K::DegreeOverflow, "two paths at cycle position " + std::to_string(a.position));
    }
  }
  for (std::size_t i = 0; i < attachments.size(); ++i) {
    for (std::size_t k = i + 1; k < attachments.size(); ++k) {
      std::size_t d = attachments[i].position > attachments[k].position
                          ? attachments[i].position - attachments[k].position
                          : attachments[k].position - attachments[i].position;
      if (d % 2 != 0) {
        throw FamilyError(K::Parity, "paths at positions " + std::to_string(attachments[i].position) + " and " +
                                         std::to_string(attachments[k].position) + " are an odd distance apart");
      }
    }
  }

  auto cycle_name = [&](std::size_t i) {
    return cycle_length <= 26 ? letter_name(i) : "c" + std::to_string(i);
  };
  GraphBuilder b;
  for (std::size_t i = 0; i < cycle_length; ++i) {
    b.add_edge(cycle_name(i), cycle_name((i + 1) % cycle_length), i % 2 == 0 ? 2 : 1);
  }
  for (std::size_t k = 0; k < attachments.size(); ++k) {
    const Attachment& a = attachments[k];
    NodeId prev = cycle_name(a.position);
    for (std::size_t j = 1; j <= a.length; ++j) {
      NodeId next = j == a.length ? std::to_string(k + 1) : "p" + std::to_string(k + 1) + "_" + std::to_string(j);
      b.add_edge(prev, next, j % 2 == 1 ? 1 : 2);
      prev = next;
    }
  }
  return b.build();
}

std::optional<Weights> assign_soliton_weights(const Topology& t) {
  for (NodeIndex n = 0; n < t.node_count(); ++n) {
    if (t.degree(n) == 0 || t.degree(n) > 3) return std::nullopt;
  }
  std::vector<bool> covered(t.node_count(), false);
  Weights w(t.edge_count(), 1);

  std::function<bool()> solve = [&]() -> bool {
    NodeIndex n = 0;
    while (n < t.node_count() && (covered[n] || t.is_exterior(n))) ++n;
    if (n == t.node_count()) return true;
    for (bool interior_pass : {true, false}) {
      for (const Incidence& inc : t.incident(n)) {
        if (t.is_exterior(inc.neighbor) == interior_pass || covered[inc.neighbor]) continue;
        covered[n] = covered[inc.neighbor] = true;
        w[inc.edge] = 2;
        if (solve()) return true;
        covered[n] = covered[inc.neighbor] = false;
        w[inc.edge] = 1;
      }
    }
    return false;
  };
  if (!solve()) return std::nullopt;
  return w;
}

WeightedGraph gen_tree(std::size_t nodes, std::uint64_t seed, std::size_t max_retries) {
  if (nodes < 2) throw FamilyError(FamilyError::Kind::BadParameter, "a tree needs at least 2 nodes");
  std::mt19937_64 rng(seed);
  for (std::size_t attempt = 0; attempt <= max_retries; ++attempt) {
    if (auto g = realize(random_tree(nodes, rng))) return *g;
  }
  throw FamilyError(FamilyError::Kind::RetriesExhausted,
                    "no weightable tree after " + std::to_string(max_retries + 1) + " draws");
}

WeightedGraph gen_random_soliton_graph(std::size_t max_edges, std::uint64_t seed, std::size_t max_retries) {
  if (max_edges < 1) throw FamilyError(FamilyError::Kind::BadParameter, "need at least one edge");
  std::mt19937_64 rng(seed);
  for (std::size_t attempt = 0; attempt <= max_retries; ++attempt) {
    std::size_t nodes = std::uniform_int_distribution<std::size_t>(2, max_edges + 1)(rng);
    Adjacency adj = random_tree(nodes, rng);
    std::size_t room = std::min<std::size_t>(3, max_edges - (nodes - 1));
    std::size_t extra = std::uniform_int_distribution<std::size_t>(0, room)(rng);
    for (std::size_t e = 0; e < extra; ++e) {
      std::size_t a = std::uniform_int_distribution<std::size_t>(0, nodes - 1)(rng);
      std::size_t c = std::uniform_int_distribution<std::size_t>(0, nodes - 1)(rng);
      if (a == c || adj[a].contains(c) || adj[a].size() >= 3 || adj[c].size() >= 3) continue;
      adj[a].insert(c);
      adj[c].insert(a);
    }
    bool has_leaf = std::any_of(adj.begin(), adj.end(), [](const auto& s) { return s.size() == 1; });
    if (!has_leaf) continue;
    if (auto g = realize(adj)) return *g;
  }
  throw FamilyError(FamilyError::Kind::RetriesExhausted, "no random soliton graph found");
}

WeightedGraph generate(const FamilySpec& spec) {
  switch (spec.kind) {
    case FamilySpec::Kind::Gg:
      return gen_gg(spec.g);
    case FamilySpec::Kind::Chestnut:
      return gen_chestnut(spec.cycle_length, spec.attachments);
    case FamilySpec::Kind::Tree:
      return gen_tree(spec.nodes, spec.seed);
  }
  throw FamilyError(FamilyError::Kind::BadParameter, "unknown family");
}

std::vector<FamilySpec> chestnut_candidates(std::size_t max_cycle, std::size_t max_paths,
                                            std::size_t max_path_length) {
  std::vector<FamilySpec> out;
  for (std::size_t len = 4; len <= max_cycle; len += 2) {
    // Positions share one parity; the first path sits at 0 or 1 so both
    // phases of the cycle weights relative to the paths are covered.
    std::vector<Attachment> current;
    std::function<void(std::size_t)> extend = [&](std::size_t from) {
      if (!current.empty()) {
        FamilySpec s;
        s.kind = FamilySpec::Kind::Chestnut;
        s.cycle_length = len;
        s.attachments = current;
        out.push_back(s);
      }
      if (current.size() == max_paths) return;
      for (std::size_t pos = from; pos < len; pos += current.empty() ? 1 : 2) {
        if (current.empty() && pos > 1) break;
        for (std::size_t l = 1; l <= max_path_length; ++l) {
          current.push_back({pos, l});
          extend(pos + 2);
          current.pop_back();
        }
      }
    };
    extend(0);
  }
  auto size = [](const FamilySpec& s) {
    std::size_t n = s.cycle_length;
    for (const Attachment& a : s.attachments) n += a.length;
    return n;
  };
  std::stable_sort(out.begin(), out.end(), [&](const FamilySpec& a, const FamilySpec& b) {
    if (size(a) != size(b)) return size(a) < size(b);
    if (a.cycle_length != b.cycle_length) return a.cycle_length < b.cycle_length;
    return a.attachments < b.attachments;
  });
  return out;
}

namespace {

std::optional<NonPerfectWitness> search_in(const WeightedGraph& g, const Bounds& bounds,
                                           const ExplorationLimits& limits, std::size_t& bursts_tried) {
  std::set<NodeId> ext = exterior_nodes(g);
  for (const Burst& b : all_bursts({ext.begin(), ext.end()}, bounds)) {
    ++bursts_tried;
    SolitonDynamics dynamics(g, b);
    ConfigurationGraph graph(dynamics, limits);
    std::vector<Trail> trails;
    for_each_perfect_trail(
        graph,
        [&](std::span<const ConfigurationGraph::Id> path) {
          trails.push_back(materialize(graph, dynamics, path, true));
          return trails.size() < 2;
        },
        limits);
    if (trails.size() >= 2) return NonPerfectWitness{g, b, std::nullopt, std::move(trails), 0, 0};
  }
  return std::nullopt;
}

}  // namespace

std::optional<NonPerfectWitness> search_non_perfect(const std::vector<WeightedGraph>& candidates,
                                                    const Bounds& bounds, const ExplorationLimits& limits) {
  std::size_t bursts = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (auto w = search_in(candidates[i], bounds, limits, bursts)) {
      w->graphs_tried = i + 1;
      w->bursts_tried = bursts;
      return w;
    }
  }
  return std::nullopt;
}

std::optional<NonPerfectWitness> search_non_perfect(std::size_t max_cycle, std::size_t max_paths,
                                                    const Bounds& bounds, std::size_t max_path_length,
                                                    const ExplorationLimits& limits) {
  std::vector<FamilySpec> specs = chestnut_candidates(max_cycle, max_paths, max_path_length);
  std::size_t bursts = 0;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (auto w = search_in(generate(specs[i]), bounds, limits, bursts)) {
      w->spec = specs[i];
      w->graphs_tried = i + 1;
      w->bursts_tried = bursts;
      return w;
    }
  }
  return std::nullopt;
}

std::optional<Burst> search_non_strong(const WeightedGraph& g, const Bounds& bounds,
                                       const ExplorationLimits& limits) {
  std::set<NodeId> ext = exterior_nodes(g);
  for (const Burst& b : all_bursts({ext.begin(), ext.end()}, bounds)) {
    auto kind = trail_multiplicity(g, b, limits).kind;
    if (kind == TrailMultiplicity::Kind::Finite || kind == TrailMultiplicity::Kind::Infinite) return b;
  }
  return std::nullopt;
}

}  // namespace soliton
