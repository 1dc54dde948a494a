#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "soliton/burst.hpp"
#include "soliton/graph.hpp"

namespace soliton {

/// Compact per-soliton position used during exploration.
class Place {
 public:
  static constexpr Place at(NodeIndex n) { return Place(static_cast<std::int32_t>(n)); }
  static constexpr Place waiting(unsigned steps) { return Place(-1 - static_cast<std::int32_t>(steps)); }
  static constexpr Place departed() { return Place(-1); }

  bool is_node() const { return raw_ >= 0; }
  bool is_departed() const { return raw_ == -1; }
  bool is_waiting() const { return raw_ < -1; }
  NodeIndex node() const { return static_cast<NodeIndex>(raw_); }
  unsigned countdown() const { return static_cast<unsigned>(-1 - raw_); }
  std::int32_t raw() const { return raw_; }

  friend auto operator<=>(const Place&, const Place&) = default;

 private:
  constexpr explicit Place(std::int32_t raw) : raw_(raw) {}
  std::int32_t raw_;
};

using Placement = std::vector<Place>;

struct Configuration {
  Weights weights;
  Placement positions;

  friend auto operator<=>(const Configuration&, const Configuration&) = default;
};

/// A configuration together with the previous step's positions. This is all a
/// trail's future depends on: the trail rules look back two steps, and the
/// weight an edge had two steps ago is 3 minus its current weight whenever a
/// soliton just crossed it (no two solitons cross one edge in the same step).
struct ExtendedConfiguration {
  Configuration current;
  std::optional<Placement> previous;  // empty only at the start of a trail

  friend auto operator<=>(const ExtendedConfiguration&, const ExtendedConfiguration&) = default;
};

struct ExtendedConfigurationHash {
  std::size_t operator()(const ExtendedConfiguration& ec) const;
};

PositionMap to_position_map(const Placement& p, const Topology& t);
bool is_final(const Placement& p);

class ResourceLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExplorationLimits {
  std::size_t max_configurations = 1'000'000;
  std::size_t max_search_steps = 50'000'000;

  /// Defaults, with max_configurations overridden by SOLITON_MAX_CONFIGS.
  static ExplorationLimits from_environment();
};

/// Operational semantics of one burst on one graph.
class SolitonDynamics {
 public:
  SolitonDynamics(const WeightedGraph& g, const Burst& b);

  const WeightedGraph& graph() const { return graph_; }
  const Topology& topology() const { return graph_.topology(); }
  const BoundBurst& burst() const { return burst_; }
  std::size_t solitons() const { return burst_.length(); }

  ExtendedConfiguration start() const;

  /// Cartesian product of the per-soliton options in canonical order. A
  /// soliton at its exit node is offered both departure and every neighbor;
  /// the trail rules decide which applies.
  std::vector<Placement> potential_successor_maps(const ExtendedConfiguration& ec) const;

  /// Every legal next step, weights already flipped. Empty for final
  /// configurations.
  std::vector<ExtendedConfiguration> trail_successors(const ExtendedConfiguration& ec) const;

  /// Position maps of trail_successors; the empty set once all solitons left.
  std::vector<Placement> successor_set(const ExtendedConfiguration& ec) const;

  bool successor_equivalent(const ExtendedConfiguration& a, const ExtendedConfiguration& b) const;

 private:
  std::vector<Place> raw_options(const ExtendedConfiguration& ec, std::size_t i) const;
  bool locally_admissible(const ExtendedConfiguration& ec, std::size_t i, Place next) const;
  bool jointly_admissible(const Placement& current, const Placement& next) const;

  WeightedGraph graph_;
  BoundBurst burst_;
};

/// The reachable extended-configuration graph of one burst, with each vertex's
/// successor-equivalence class and whether a final vertex is reachable from it.
class ConfigurationGraph {
 public:
  using Id = std::uint32_t;

  ConfigurationGraph(const SolitonDynamics& dynamics, const ExplorationLimits& limits = {});

  std::size_t size() const { return configs_.size(); }
  Id start() const { return 0; }
  const ExtendedConfiguration& config(Id v) const { return configs_[v]; }
  std::span<const Id> successors(Id v) const {
    return {succ_.data() + offsets_[v], succ_.data() + offsets_[v + 1]};
  }
  bool is_final(Id v) const { return final_[v]; }
  bool can_finish(Id v) const { return can_finish_[v]; }
  /// Vertices share a class iff their configurations are successor-equivalent.
  std::uint32_t class_of(Id v) const { return class_[v]; }
  std::size_t class_count() const { return class_count_; }
  /// Fewest steps from v to a final vertex (only meaningful if can_finish).
  std::size_t distance_to_final(Id v) const { return distance_[v]; }

  /// True if some trail (restricted to trails that can still complete when
  /// `total_only`) passes two successor-equivalent configurations.
  bool has_imperfect_trail(bool total_only) const;

 private:
  std::vector<ExtendedConfiguration> configs_;
  std::vector<std::size_t> offsets_;
  std::vector<Id> succ_;
  std::vector<bool> final_;
  std::vector<bool> can_finish_;
  std::vector<std::uint32_t> class_;
  std::vector<std::size_t> distance_;
  std::size_t class_count_ = 0;
};

struct Trail {
  std::shared_ptr<const Topology> topology;
  std::vector<Configuration> steps;
  bool total = false;
  bool perfect = false;
};

struct TrailMultiplicity {
  enum class Kind { Zero, One, Finite, Infinite };
  Kind kind = Kind::Zero;
  /// Number of total legal trails; saturates at UINT64_MAX; unused for Infinite.
  std::uint64_t count = 0;

  std::string to_string() const;
};

/// Total perfect legal trails in canonical order; stops once `cap` are found
/// (cap 0 means all).
std::vector<Trail> enumerate_perfect_trails(const WeightedGraph& g, const Burst& b, std::size_t cap,
                                            const ExplorationLimits& limits = {});

/// Visits the vertex sequence of each total perfect trail; return false from
/// the visitor to stop.
void for_each_perfect_trail(const ConfigurationGraph& graph,
                            const std::function<bool(std::span<const ConfigurationGraph::Id>)>& visit,
                            const ExplorationLimits& limits = {});

TrailMultiplicity trail_multiplicity(const ConfigurationGraph& graph);
TrailMultiplicity trail_multiplicity(const WeightedGraph& g, const Burst& b,
                                     const ExplorationLimits& limits = {});

/// End graphs of perfect total legal trails, sorted by StateKey. These are
/// the end graphs of all total legal trails.
std::vector<WeightedGraph> result(const WeightedGraph& g, const Burst& b,
                                  const ExplorationLimits& limits = {});

struct TrailListing {
  std::vector<Trail> trails;
  bool truncated = false;
};

/// Total legal trails, shortest first, at most `limit` of them.
TrailListing enumerate_total_trails(const WeightedGraph& g, const Burst& b, std::size_t limit,
                                    const ExplorationLimits& limits = {});

/// Everything the automaton needs to know about one (state, burst) pair.
struct BurstOutcome {
  std::vector<Weights> results;  // sorted, unique
  TrailMultiplicity multiplicity;
  std::uint64_t perfect_trails = 0;  // perfect total trails, counted up to 2
  bool imperfect_trail = false;
  bool imperfect_total_trail = false;
  std::size_t configurations = 0;
  /// Edges crossed by some soliton in some legal trail, partial ones included.
  std::vector<EdgeIndex> used_edges;
};

BurstOutcome analyze_burst(const WeightedGraph& g, const Burst& b, const ExplorationLimits& limits = {});

struct SolitonPath {
  std::size_t soliton = 0;
  std::vector<NodeIndex> nodes;  // empty if the soliton never entered
  bool entered() const { return !nodes.empty(); }
};

/// `soliton` is 0-based.
SolitonPath soliton_path(const Trail& t, std::size_t soliton);

std::set<EdgeIndex> used_edges(const Trail& t);

/// Edges crossed between step j-1 and step j.
std::vector<EdgeIndex> flipped_edges(const Trail& t, std::size_t j);

/// One line per step: "t=<j> pos=<tuple> flips=[<edges>]".
std::string dump_trail(const Trail& t);

Trail materialize(const ConfigurationGraph& graph, const SolitonDynamics& dynamics,
                  std::span<const ConfigurationGraph::Id> vertices, bool perfect);

}  // namespace soliton
