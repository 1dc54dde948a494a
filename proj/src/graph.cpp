#include "soliton/graph.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <queue>
#include <sstream>

namespace soliton {

std::string_view to_string(NodeRole role) {
  return role == NodeRole::Exterior ? "exterior" : "interior";
}

bool is_valid_node_id(std::string_view name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_';
  });
}

GraphError::GraphError(Kind kind, std::string message, std::size_t line,
                       std::size_t column)
    : std::runtime_error(line == 0 ? message
                                   : "line " + std::to_string(line) + ", column " +
                                         std::to_string(column) + ": " + message),
      kind_(kind),
      line_(line),
      column_(column) {}

// --- Topology ---------------------------------------------------------------

Topology::Topology(std::vector<NodeId> sorted_nodes, std::vector<EdgeEnds> sorted_edges)
    : names_(std::move(sorted_nodes)),
      edges_(std::move(sorted_edges)),
      adjacency_(names_.size()) {
  for (NodeIndex n = 0; n < names_.size(); ++n) index_.emplace(names_[n], n);
  for (EdgeIndex e = 0; e < edges_.size(); ++e) {
    adjacency_[edges_[e].u].push_back({edges_[e].v, e});
    adjacency_[edges_[e].v].push_back({edges_[e].u, e});
  }
  for (auto& list : adjacency_) {
    std::sort(list.begin(), list.end(),
              [](const Incidence& a, const Incidence& b) { return a.neighbor < b.neighbor; });
  }
}

std::optional<NodeIndex> Topology::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeIndex> Topology::edge_between(NodeIndex a, NodeIndex b) const {
  for (const Incidence& inc : adjacency_[a]) {
    if (inc.neighbor == b) return inc.edge;
  }
  return std::nullopt;
}

std::string Topology::edge_label(EdgeIndex e) const {
  return names_[edges_[e].u] + "-" + names_[edges_[e].v];
}

// --- StateKey / WeightedGraph ----------------------------------------------

StateKey::StateKey(const Weights& weights) {
  signature_.reserve(weights.size());
  for (std::uint8_t w : weights) signature_.push_back(static_cast<char>('0' + w));
}

WeightedGraph::WeightedGraph(std::shared_ptr<const Topology> topology, Weights weights,
                             std::map<NodeId, NodeRole> declared_roles)
    : topology_(std::move(topology)),
      weights_(std::move(weights)),
      declared_roles_(std::move(declared_roles)) {
  if (weights_.size() != topology_->edge_count()) {
    throw std::invalid_argument("weight vector does not match edge count");
  }
  for (std::uint8_t w : weights_) {
    if (w != 1 && w != 2) throw GraphError(GraphError::Kind::BadWeight, "edge weight must be 1 or 2");
  }
}

int WeightedGraph::node_weight(NodeIndex n) const {
  int sum = 0;
  for (const Incidence& inc : topology_->incident(n)) sum += weights_[inc.edge];
  return sum;
}

WeightedGraph WeightedGraph::with_weights(Weights weights) const {
  return WeightedGraph(topology_, std::move(weights), declared_roles_);
}

bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
  return (a.topology_ == b.topology_ || *a.topology_ == *b.topology_) &&
         a.weights_ == b.weights_;
}

// --- GraphBuilder -----------------------------------------------------------

GraphBuilder& GraphBuilder::add_node(const NodeId& id, std::optional<NodeRole> declared) {
  if (!is_valid_node_id(id)) {
    throw GraphError(GraphError::Kind::BadNode, "invalid node id '" + id + "'");
  }
  nodes_.insert(id);
  if (declared) roles_[id] = *declared;
  return *this;
}

GraphBuilder& GraphBuilder::add_edge(const NodeId& a, const NodeId& b, int weight) {
  if (a == b) throw GraphError(GraphError::Kind::SelfLoop, "self-loop at node '" + a + "'");
  if (weight != 1 && weight != 2) {
    throw GraphError(GraphError::Kind::BadWeight,
                     "weight " + std::to_string(weight) + " outside {1,2}");
  }
  add_node(a);
  add_node(b);
  auto key = std::minmax(a, b);
  if (!edges_.emplace(std::pair{key.first, key.second}, weight).second) {
    throw GraphError(GraphError::Kind::DuplicateEdge,
                     "duplicate edge " + key.first + "-" + key.second);
  }
  return *this;
}

WeightedGraph GraphBuilder::build() const {
  std::vector<NodeId> names(nodes_.begin(), nodes_.end());
  std::unordered_map<std::string, NodeIndex> index;
  for (NodeIndex i = 0; i < names.size(); ++i) index.emplace(names[i], i);

  // std::map already iterates in (min name, max name) order.
  std::vector<EdgeEnds> ends;
  Weights weights;
  for (const auto& [pair, w] : edges_) {
    ends.push_back({index.at(pair.first), index.at(pair.second)});
    weights.push_back(static_cast<std::uint8_t>(w));
  }
  return WeightedGraph(std::make_shared<const Topology>(std::move(names), std::move(ends)),
                       std::move(weights), roles_);
}

// --- text format ------------------------------------------------------------

namespace {

struct Token {
  std::string_view text;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

}  // namespace

WeightedGraph parse_graph(std::string_view text) {
  GraphBuilder builder;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<Token> tokens = tokenize(line);
    if (tokens.empty()) continue;

    auto fail = [&](GraphError::Kind kind, const Token& at, const std::string& msg) -> GraphError {
      return GraphError(kind, msg, line_no, at.column);
    };
    auto check_id = [&](const Token& t) {
      if (!is_valid_node_id(t.text)) {
        throw fail(GraphError::Kind::Syntax, t, "invalid node id '" + std::string(t.text) + "'");
      }
    };

    const Token& head = tokens[0];
    if (head.text == "node") {
      if (tokens.size() < 2 || tokens.size() > 3) {
        throw fail(GraphError::Kind::Syntax, head, "expected 'node <id> [exterior|interior]'");
      }
      check_id(tokens[1]);
      std::optional<NodeRole> role;
      if (tokens.size() == 3) {
        if (tokens[2].text == "exterior") {
          role = NodeRole::Exterior;
        } else if (tokens[2].text == "interior") {
          role = NodeRole::Interior;
        } else {
          throw fail(GraphError::Kind::Syntax, tokens[2], "unknown role '" + std::string(tokens[2].text) + "'");
        }
      }
      builder.add_node(std::string(tokens[1].text), role);
    } else if (head.text == "edge") {
      if (tokens.size() != 4) {
        throw fail(GraphError::Kind::Syntax, head, "expected 'edge <id> <id> <1|2>'");
      }
      check_id(tokens[1]);
      check_id(tokens[2]);
      const Token& wt = tokens[3];
      if (wt.text.empty() || !std::all_of(wt.text.begin(), wt.text.end(),
                                          [](char c) { return c >= '0' && c <= '9'; })) {
        throw fail(GraphError::Kind::Syntax, wt, "weight must be a natural number");
      }
      if (wt.text != "1" && wt.text != "2") {
        throw fail(GraphError::Kind::BadWeight, wt,
                   "weight " + std::string(wt.text) + " outside {1,2}");
      }
      try {
        builder.add_edge(std::string(tokens[1].text), std::string(tokens[2].text),
                         wt.text[0] - '0');
      } catch (const GraphError& e) {
        throw GraphError(e.kind(), e.what(), line_no,
                         e.kind() == GraphError::Kind::SelfLoop ? tokens[2].column : head.column);
      }
    } else {
      throw fail(GraphError::Kind::Syntax, head, "unknown directive '" + std::string(head.text) + "'");
    }
  }
  return builder.build();
}

WeightedGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError(GraphError::Kind::Io, "cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

std::string print_graph(const WeightedGraph& g) {
  const Topology& t = g.topology();
  std::ostringstream out;
  std::vector<bool> covered(t.node_count(), false);
  for (const EdgeEnds& e : t.edges()) covered[e.u] = covered[e.v] = true;
  for (NodeIndex n = 0; n < t.node_count(); ++n) {
    auto role = g.declared_roles().find(t.name(n));
    if (!covered[n] || role != g.declared_roles().end()) {
      out << "node " << t.name(n);
      if (role != g.declared_roles().end()) out << ' ' << to_string(role->second);
      out << '\n';
    }
  }
  for (EdgeIndex e = 0; e < t.edge_count(); ++e) {
    out << "edge " << t.name(t.ends(e).u) << ' ' << t.name(t.ends(e).v) << ' '
        << g.weight(e) << '\n';
  }
  return out.str();
}

// --- validation -------------------------------------------------------------

std::vector<std::size_t> connected_components(const Topology& t) {
  constexpr auto unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> label(t.node_count(), unset);
  std::size_t next = 0;
  for (NodeIndex s = 0; s < t.node_count(); ++s) {
    if (label[s] != unset) continue;
    std::queue<NodeIndex> queue;
    queue.push(s);
    label[s] = next;
    while (!queue.empty()) {
      NodeIndex n = queue.front();
      queue.pop();
      for (const Incidence& inc : t.incident(n)) {
        if (label[inc.neighbor] == unset) {
          label[inc.neighbor] = next;
          queue.push(inc.neighbor);
        }
      }
    }
    ++next;
  }
  return label;
}

ValidationReport validate(const WeightedGraph& g) {
  const Topology& t = g.topology();
  ValidationReport report;
  auto add = [&](std::string rule, std::string subject, std::string message) {
    report.violations.push_back({std::move(rule), std::move(subject), std::move(message)});
  };

  if (t.node_count() == 0) add("nonempty", "-", "graph has no nodes");

  for (NodeIndex n = 0; n < t.node_count(); ++n) {
    const std::string& name = t.name(n);
    std::size_t d = t.degree(n);
    int w = g.node_weight(n);
    if (d < 1 || d > 3) {
      add("degree", name, "degree " + std::to_string(d) + " outside [1,3]");
      continue;
    }
    if (d == 1) {
      if (w != 1 && w != 2) add("exterior-weight", name, "exterior weight " + std::to_string(w) + " not in {1,2}");
    } else if (w != static_cast<int>(d) + 1) {
      add("interior-weight", name,
          "interior weight " + std::to_string(w) + " != degree+1 = " + std::to_string(d + 1));
    }
  }

  std::vector<std::size_t> comp = connected_components(t);
  std::size_t count = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<bool> has_exterior(count, false);
  std::vector<NodeIndex> representative(count, 0);
  for (NodeIndex n = t.node_count(); n-- > 0;) {
    representative[comp[n]] = n;
    if (t.is_exterior(n)) has_exterior[comp[n]] = true;
  }
  for (std::size_t c = 0; c < count; ++c) {
    if (!has_exterior[c]) {
      add("component-exterior", t.name(representative[c]),
          "component containing '" + t.name(representative[c]) + "' has no exterior node");
    }
  }

  for (const auto& [name, role] : g.declared_roles()) {
    auto n = t.find(name);
    if (!n) continue;
    NodeRole actual = t.is_exterior(*n) ? NodeRole::Exterior : NodeRole::Interior;
    if (actual != role) {
      add("declared-role", name,
          "declared " + std::string(to_string(role)) + " but degree makes it " +
              std::string(to_string(actual)));
    }
  }
  return report;
}

std::set<NodeId> exterior_nodes(const WeightedGraph& g) {
  const Topology& t = g.topology();
  std::set<NodeId> out;
  for (NodeIndex n = 0; n < t.node_count(); ++n) {
    if (t.is_exterior(n)) out.insert(t.name(n));
  }
  return out;
}

std::string export_dot(const WeightedGraph& g) {
  const Topology& t = g.topology();
  std::ostringstream out;
  out << "graph soliton {\n";
  for (NodeIndex n = 0; n < t.node_count(); ++n) {
    out << "  \"" << t.name(n) << "\"";
    if (t.is_exterior(n)) out << " [shape=box]";
    out << ";\n";
  }
  for (EdgeIndex e = 0; e < t.edge_count(); ++e) {
    out << "  \"" << t.name(t.ends(e).u) << "\" -- \"" << t.name(t.ends(e).v) << "\"";
    // Double bonds are drawn as two parallel lines.
    if (g.weight(e) == 2) out << " [color=\"black:invis:black\"]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace soliton
