#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace soliton {

using NodeId = std::string;
using NodeIndex = std::uint32_t;
using EdgeIndex = std::uint32_t;

/// Edge weights indexed by EdgeIndex; every entry is 1 or 2.
using Weights = std::vector<std::uint8_t>;

enum class NodeRole { Exterior, Interior };

std::string_view to_string(NodeRole role);

/// True if `name` is a non-empty token of letters, digits and underscores.
bool is_valid_node_id(std::string_view name);

class GraphError : public std::runtime_error {
 public:
  enum class Kind { Syntax, SelfLoop, DuplicateEdge, BadWeight, BadNode, Io };

  GraphError(Kind kind, std::string message, std::size_t line = 0,
             std::size_t column = 0);

  Kind kind() const { return kind_; }
  /// 1-based source position; zero when the error is not tied to a file.
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
};

struct Incidence {
  NodeIndex neighbor;
  EdgeIndex edge;
};

/// Endpoints of an edge with `u < v`; node indices follow name order, so
/// edge indices follow lexicographic (min name, max name) order.
struct EdgeEnds {
  NodeIndex u;
  NodeIndex v;

  NodeIndex other(NodeIndex n) const { return n == u ? v : u; }
  friend bool operator==(const EdgeEnds&, const EdgeEnds&) = default;
};

/// The fixed (N, E) part of a weighted graph. Immutable once built and
/// shared between every weight assignment explored over it.
class Topology {
 public:
  Topology(std::vector<NodeId> sorted_nodes, std::vector<EdgeEnds> sorted_edges);

  std::size_t node_count() const { return names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const NodeId& name(NodeIndex n) const { return names_[n]; }
  const std::vector<NodeId>& names() const { return names_; }
  std::optional<NodeIndex> find(std::string_view name) const;

  const EdgeEnds& ends(EdgeIndex e) const { return edges_[e]; }
  const std::vector<EdgeEnds>& edges() const { return edges_; }
  std::optional<EdgeIndex> edge_between(NodeIndex a, NodeIndex b) const;

  /// Incident edges ordered by neighbor name.
  std::span<const Incidence> incident(NodeIndex n) const { return adjacency_[n]; }
  std::size_t degree(NodeIndex n) const { return adjacency_[n].size(); }
  bool is_exterior(NodeIndex n) const { return degree(n) == 1; }

  std::string edge_label(EdgeIndex e) const;

  friend bool operator==(const Topology& a, const Topology& b) {
    return a.names_ == b.names_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<NodeId> names_;
  std::vector<EdgeEnds> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
  std::unordered_map<std::string, NodeIndex> index_;
};

/// Canonical fingerprint of a weight function: one digit per edge in
/// canonical edge order. Only comparable between graphs over the same (N, E).
class StateKey {
 public:
  StateKey() = default;
  explicit StateKey(const Weights& weights);

  const std::string& signature() const { return signature_; }

  friend auto operator<=>(const StateKey&, const StateKey&) = default;

 private:
  std::string signature_;
};

class WeightedGraph {
 public:
  WeightedGraph(std::shared_ptr<const Topology> topology, Weights weights,
                std::map<NodeId, NodeRole> declared_roles = {});

  const Topology& topology() const { return *topology_; }
  const std::shared_ptr<const Topology>& shared_topology() const { return topology_; }
  const Weights& weights() const { return weights_; }
  int weight(EdgeIndex e) const { return weights_[e]; }
  /// Sum of incident edge weights.
  int node_weight(NodeIndex n) const;

  const std::map<NodeId, NodeRole>& declared_roles() const { return declared_roles_; }

  /// Same (N, E), different weights.
  WeightedGraph with_weights(Weights weights) const;

  StateKey key() const { return StateKey(weights_); }

  /// Same topology and pointwise-equal weights.
  friend bool operator==(const WeightedGraph& a, const WeightedGraph& b);

 private:
  std::shared_ptr<const Topology> topology_;
  Weights weights_;
  std::map<NodeId, NodeRole> declared_roles_;
};

/// Collects nodes and edges in any order and produces the canonical layout.
class GraphBuilder {
 public:
  GraphBuilder& add_node(const NodeId& id, std::optional<NodeRole> declared = {});
  GraphBuilder& add_edge(const NodeId& a, const NodeId& b, int weight);

  WeightedGraph build() const;

 private:
  std::set<NodeId> nodes_;
  std::map<std::pair<NodeId, NodeId>, int> edges_;
  std::map<NodeId, NodeRole> roles_;
};

struct Violation {
  std::string rule;
  std::string subject;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

WeightedGraph parse_graph(std::string_view text);
WeightedGraph load_graph(const std::string& path);

/// Graph-file text that parses back to the same graph.
std::string print_graph(const WeightedGraph& g);

ValidationReport validate(const WeightedGraph& g);

std::set<NodeId> exterior_nodes(const WeightedGraph& g);

inline StateKey state_key(const WeightedGraph& g) { return g.key(); }

std::string export_dot(const WeightedGraph& g);

/// Component label per node (labels are 0-based, assigned in node order).
std::vector<std::size_t> connected_components(const Topology& t);

}  // namespace soliton
