#pragma once

#include <compare>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "soliton/graph.hpp"

namespace soliton {

class BurstError : public std::runtime_error {
 public:
  enum class Kind { Syntax, MissingTerminator, BadGap, Empty, UnknownNode, InteriorNode, Io };

  BurstError(Kind kind, std::string message, std::size_t column = 0);

  Kind kind() const { return kind_; }
  /// 1-based column in the burst text, zero if not applicable.
  std::size_t column() const { return column_; }

 private:
  Kind kind_;
  std::size_t column_;
};

struct BurstPair {
  NodeId entry;
  NodeId exit;

  friend auto operator<=>(const BurstPair&, const BurstPair&) = default;
};

/// s_1 |k_1 s_2 ... s_m ! : m solitons, the i-th injected k_1+...+k_{i-1}
/// steps after the first.
class Burst {
 public:
  Burst(std::vector<BurstPair> pairs, std::vector<unsigned> gaps);

  const std::vector<BurstPair>& pairs() const { return pairs_; }
  const std::vector<unsigned>& gaps() const { return gaps_; }
  std::size_t length() const { return pairs_.size(); }

  /// Canonical ASCII form, e.g. "(1,1)|1(1,1)!".
  std::string to_string() const;

  friend auto operator<=>(const Burst&, const Burst&) = default;

 private:
  std::vector<BurstPair> pairs_;
  std::vector<unsigned> gaps_;
};

Burst parse_burst(std::string_view text);

inline std::size_t burst_length(const Burst& b) { return b.length(); }

/// One burst per line; '#' starts a comment.
std::vector<Burst> parse_burst_set(std::string_view text);
std::vector<Burst> load_burst_set(const std::string& path);

/// Where one soliton is: at a node, waiting `countdown` steps before entering,
/// or departed (value 0).
class Position {
 public:
  enum class Kind { Node, Countdown, Departed };

  static Position at(NodeId node) { return Position(Kind::Node, std::move(node), 0); }
  static Position waiting(unsigned steps) { return Position(Kind::Countdown, {}, steps); }
  static Position departed() { return Position(Kind::Departed, {}, 0); }

  Kind kind() const { return kind_; }
  bool is_node() const { return kind_ == Kind::Node; }
  const NodeId& node() const { return node_; }
  unsigned countdown() const { return countdown_; }

  /// Node name, "~c" for a countdown, "-" when departed.
  std::string to_string() const;

  friend bool operator==(const Position&, const Position&) = default;

 private:
  Position(Kind kind, NodeId node, unsigned countdown)
      : kind_(kind), node_(std::move(node)), countdown_(countdown) {}

  Kind kind_;
  NodeId node_;
  unsigned countdown_;
};

using PositionMap = std::vector<Position>;

PositionMap initial_position_map(const Burst& b);

bool is_final(const PositionMap& p);

std::string to_string(const PositionMap& p);

/// A burst whose entry and exit names resolved to exterior nodes of a graph.
struct BoundBurst {
  Burst burst;
  std::shared_ptr<const Topology> topology;
  std::vector<NodeIndex> entry;
  std::vector<NodeIndex> exit;

  std::size_t length() const { return entry.size(); }
};

BoundBurst bind_burst(const Burst& b, const WeightedGraph& g);

/// Limits for sweeping finite burst universes.
struct Bounds {
  std::size_t max_burst_length = 1;
  unsigned max_gap = 0;
};

/// Every burst over pairs of `exterior` with length <= m and gaps <= k,
/// ordered by length, then pairs, then gaps.
std::vector<Burst> all_bursts(const std::vector<NodeId>& exterior, const Bounds& bounds);

}  // namespace soliton
