#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "soliton/burst.hpp"
#include "soliton/engine.hpp"
#include "soliton/graph.hpp"

namespace soliton {

/// The B-soliton automaton of a graph. States are the weight assignments
/// reachable through Result, kept in StateKey order.
class SolitonAutomaton {
 public:
  SolitonAutomaton(const WeightedGraph& g, std::vector<Burst> alphabet,
                   const ExplorationLimits& limits = {});

  const WeightedGraph& base() const { return states_[initial_]; }
  const std::vector<WeightedGraph>& states() const { return states_; }
  const std::vector<Burst>& alphabet() const { return alphabet_; }
  std::size_t initial() const { return initial_; }

  std::optional<std::size_t> find_state(const StateKey& key) const;
  std::optional<std::size_t> find_burst(const Burst& b) const;

  /// Result(state, burst); may be empty.
  const std::vector<std::size_t>& result(std::size_t state, std::size_t burst) const {
    return results_[state][burst];
  }
  /// Result(state, burst), or {state} when Result is empty. Never empty.
  std::vector<std::size_t> transition(std::size_t state, std::size_t burst) const;
  const BurstOutcome& outcome(std::size_t state, std::size_t burst) const {
    return outcomes_[state][burst];
  }

 private:
  std::vector<WeightedGraph> states_;
  std::vector<Burst> alphabet_;
  std::size_t initial_ = 0;
  std::vector<std::vector<std::vector<std::size_t>>> results_;
  std::vector<std::vector<BurstOutcome>> outcomes_;
};

inline SolitonAutomaton build(const WeightedGraph& g, std::vector<Burst> alphabet,
                              const ExplorationLimits& limits = {}) {
  return SolitonAutomaton(g, std::move(alphabet), limits);
}

/// States(G, B): the least set containing G and closed under Result.
std::vector<WeightedGraph> states_fixpoint(const WeightedGraph& g, const std::vector<Burst>& alphabet,
                                           const ExplorationLimits& limits = {});

/// Image of {start} under the word `bursts`; throws std::invalid_argument for
/// bursts outside the alphabet or an unknown state.
std::set<StateKey> run_burst_sequence(const SolitonAutomaton& a, const StateKey& start,
                                      std::span<const Burst> bursts);
std::set<StateKey> run_burst_sequence(const SolitonAutomaton& a, const std::set<StateKey>& from,
                                      std::span<const Burst> bursts);

struct Witness {
  StateKey state;
  Burst burst;
  std::string kind;
  std::string evidence;

  friend bool operator==(const Witness&, const Witness&) = default;
};

struct Verdict {
  bool holds = true;
  std::vector<Witness> witnesses;
};

Verdict is_deterministic(const SolitonAutomaton& a);
Verdict is_strongly_deterministic(const SolitonAutomaton& a);
Verdict is_perfectly_deterministic(const SolitonAutomaton& a);
std::size_t degree_of_nondeterminism(const SolitonAutomaton& a);

/// Bursts for which some state admits a trail through two successor-equivalent
/// configurations. Diagnostic only; it does not feed any verdict.
Verdict imperfect_trails(const SolitonAutomaton& a);

struct DeterminismReport {
  bool deterministic = true;
  bool strongly_deterministic = true;
  bool perfectly_deterministic = true;
  std::size_t degree = 1;
  std::vector<Witness> witnesses;

  friend bool operator==(const DeterminismReport&, const DeterminismReport&) = default;
};

DeterminismReport analyze(const SolitonAutomaton& a);

nlohmann::json to_json(const DeterminismReport& r);
DeterminismReport determinism_report_from_json(const nlohmann::json& j);

/// States labelled by weight signature, edges by burst text.
std::string export_dot(const SolitonAutomaton& a);

}  // namespace soliton
