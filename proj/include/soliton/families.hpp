#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "soliton/burst.hpp"
#include "soliton/engine.hpp"
#include "soliton/graph.hpp"

namespace soliton {

class FamilyError : public std::runtime_error {
 public:
  enum class Kind { BadParameter, Parity, DegreeOverflow, NoWeightAssignment, RetriesExhausted };

  FamilyError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// A path hanging off the cycle: `length` edges from the cycle node at
/// `position` out to a fresh exterior node.
struct Attachment {
  std::size_t position = 0;
  std::size_t length = 1;

  friend auto operator<=>(const Attachment&, const Attachment&) = default;
};

struct FamilySpec {
  enum class Kind { Gg, Chestnut, Tree };

  Kind kind = Kind::Gg;
  std::size_t g = 1;
  std::size_t cycle_length = 4;
  std::vector<Attachment> attachments;
  std::size_t nodes = 2;
  std::uint64_t seed = 0;

  /// One-line human description, used in generated file headers.
  std::string describe() const;
};

/// Basic chain 1, n1 .. n{2g} plus the inner chain v1 .. v{2g-3} leading to 2.
/// Exterior nodes are "1" and "2".
WeightedGraph gen_gg(std::size_t g);

/// Even cycle a, b, c, ... with alternating weights, (a,b) doubled. Path k
/// runs from its cycle node through p<k>_1 .. to exterior node "<k+1>";
/// its first edge has weight 1 and weights alternate outward.
WeightedGraph gen_chestnut(std::size_t cycle_length, const std::vector<Attachment>& attachments);

/// Chooses the weight-2 edges so every interior node gets exactly one and
/// every exterior node at most one. Edges between two interior nodes are
/// tried first. Returns nullopt when no such choice exists.
std::optional<Weights> assign_soliton_weights(const Topology& t);

/// Random tree on `nodes` nodes with maximum degree 3, leaves named 1, 2, ...
/// and inner nodes a, b, .... Redraws trees that admit no weights.
WeightedGraph gen_tree(std::size_t nodes, std::uint64_t seed, std::size_t max_retries = 100);

/// Random connected soliton graph with at most `max_edges` edges; cycles
/// allowed. Leaves are exterior nodes 1, 2, ...; other nodes are a, b, ....
WeightedGraph gen_random_soliton_graph(std::size_t max_edges, std::uint64_t seed,
                                       std::size_t max_retries = 1000);

WeightedGraph generate(const FamilySpec& spec);

/// Chestnut parameter sets with cycle length <= max_cycle, 1 .. max_paths
/// paths each of length <= max_path_length. The first path sits at cycle
/// position 0. Ordered by node count, then cycle length, then attachments.
std::vector<FamilySpec> chestnut_candidates(std::size_t max_cycle, std::size_t max_paths,
                                            std::size_t max_path_length);

struct NonPerfectWitness {
  WeightedGraph graph;
  Burst burst;
  std::optional<FamilySpec> spec;  // set when the graph came from a family
  std::vector<Trail> trails;       // the first two perfect total trails
  std::size_t graphs_tried = 0;
  std::size_t bursts_tried = 0;
};

/// First (graph, burst), graphs before bursts, with at least two perfect
/// total legal trails.
std::optional<NonPerfectWitness> search_non_perfect(const std::vector<WeightedGraph>& candidates,
                                                    const Bounds& bounds,
                                                    const ExplorationLimits& limits = {});

/// The same over chestnut_candidates(max_cycle, max_paths, max_path_length).
std::optional<NonPerfectWitness> search_non_perfect(std::size_t max_cycle, std::size_t max_paths,
                                                    const Bounds& bounds, std::size_t max_path_length = 3,
                                                    const ExplorationLimits& limits = {});

/// First burst within `bounds` admitting more than one total legal trail on g.
std::optional<Burst> search_non_strong(const WeightedGraph& g, const Bounds& bounds,
                                       const ExplorationLimits& limits = {});

}  // namespace soliton
