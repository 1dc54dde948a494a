#pragma once

#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "soliton/automaton.hpp"
#include "soliton/burst.hpp"
#include "soliton/engine.hpp"
#include "soliton/graph.hpp"

namespace soliton {

bool is_tree(const WeightedGraph& g);

struct CycleDistance {
  NodeId a;
  NodeId b;
  std::size_t arc = 0;        // walking forward along the cycle
  std::size_t other_arc = 0;  // the complementary arc
  bool even = false;
};

struct BranchPoint {
  NodeId node;
  NodeId entry;
  std::size_t distance = 0;  // from the entry point
  bool even = false;
};

struct ChestnutEvidence {
  std::vector<NodeId> cycle;  // in walking order
  std::vector<NodeId> entry_points;
  std::vector<CycleDistance> parity;
  std::vector<BranchPoint> branch_points;
  std::vector<std::string> violations;
  /// Corroborating observations that do not affect the decision.
  std::vector<std::string> notes;
};

struct ChestnutCheck {
  bool is_chestnut = false;
  ChestnutEvidence evidence;
};

/// Structural recognition: one even cycle, entry points pairwise at even
/// cycle distance, hanging trees branching only at even distance from their
/// entry point.
ChestnutCheck is_chestnut(const WeightedGraph& g);

struct EdgeSweep {
  std::set<EdgeIndex> edges;
  Bounds bounds;
  std::size_t states = 0;
  std::size_t bursts = 0;
  /// False if the resource cap stopped the sweep; `edges` is then partial.
  bool complete = true;
  std::string note;
};

/// Union of edges used by legal trails from every state of States(g, B) where
/// B is every burst within `bounds`.
EdgeSweep used_edges_bounded(const WeightedGraph& g, const Bounds& bounds,
                             const ExplorationLimits& limits = {});

struct ImperviousPaths {
  std::vector<std::vector<NodeId>> paths;
  Bounds bounds;
  bool complete = true;
  std::string caveat;
};

/// Maximal paths made of edges no bounded sweep ever used. Pervious edges are
/// under-approximated, so these paths are only candidates for imperviousness.
ImperviousPaths impervious_paths_bounded(const WeightedGraph& g, const Bounds& bounds,
                                         const ExplorationLimits& limits = {});

enum class DeterminismKind { Deterministic, Strong, Perfect };

struct BoundedVerdict {
  Verdict verdict;
  Bounds bounds;
  std::size_t states = 0;
  std::size_t bursts = 0;
};

/// Checks the property on the automaton over every burst within `bounds`.
/// Exact for that burst universe; says nothing beyond it.
BoundedVerdict graph_determinism_bounded(const WeightedGraph& g, DeterminismKind kind,
                                         const Bounds& bounds, const ExplorationLimits& limits = {});

struct ClassifyReport {
  bool is_tree = false;
  bool is_chestnut = false;
  ChestnutEvidence chestnut_evidence;
  bool indecomposable_bounded = false;
  Bounds bounds;
  std::vector<std::pair<NodeId, NodeId>> unused_edges_bounded;
  std::vector<std::vector<NodeId>> impervious_paths;
  bool complete = true;
  std::string caveat;
};

ClassifyReport classify(const WeightedGraph& g, const Bounds& bounds,
                        const ExplorationLimits& limits = {});

nlohmann::json to_json(const ClassifyReport& r);
ClassifyReport classify_report_from_json(const nlohmann::json& j);

}  // namespace soliton
