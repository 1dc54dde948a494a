#include "soliton/automaton.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace soliton {

SolitonAutomaton::SolitonAutomaton(const WeightedGraph& g, std::vector<Burst> alphabet,
                                   const ExplorationLimits& limits)
    : alphabet_(std::move(alphabet)) {
  // Frontier fixpoint over weight assignments; Result^0 = {g}.
  std::map<Weights, std::size_t> discovered;
  std::vector<Weights> order;
  std::vector<std::vector<BurstOutcome>> outcomes;
  discovered.emplace(g.weights(), 0);
  order.push_back(g.weights());
  for (std::size_t s = 0; s < order.size(); ++s) {
    WeightedGraph state = g.with_weights(order[s]);
    std::vector<BurstOutcome> row;
    row.reserve(alphabet_.size());
    for (const Burst& b : alphabet_) {
      row.push_back(analyze_burst(state, b, limits));
      for (const Weights& w : row.back().results) {
        if (discovered.emplace(w, order.size()).second) order.push_back(w);
      }
    }
    outcomes.push_back(std::move(row));
  }

  // Renumber in StateKey order (the map is already sorted by weights).
  std::vector<std::size_t> rank(order.size());
  std::size_t next = 0;
  for (const auto& [w, id] : discovered) {
    rank[id] = next++;
    states_.push_back(g.with_weights(w));
  }
  initial_ = rank[0];
  results_.resize(order.size());
  outcomes_.resize(order.size());
  for (std::size_t id = 0; id < order.size(); ++id) {
    std::size_t r = rank[id];
    results_[r].resize(alphabet_.size());
    for (std::size_t b = 0; b < alphabet_.size(); ++b) {
      for (const Weights& w : outcomes[id][b].results) results_[r][b].push_back(rank[discovered.at(w)]);
      std::sort(results_[r][b].begin(), results_[r][b].end());
    }
    outcomes_[r] = std::move(outcomes[id]);
  }
}

std::optional<std::size_t> SolitonAutomaton::find_state(const StateKey& key) const {
  auto it = std::lower_bound(states_.begin(), states_.end(), key,
                             [](const WeightedGraph& s, const StateKey& k) { return s.key() < k; });
  if (it == states_.end() || it->key() != key) return std::nullopt;
  return static_cast<std::size_t>(it - states_.begin());
}

std::optional<std::size_t> SolitonAutomaton::find_burst(const Burst& b) const {
  auto it = std::find(alphabet_.begin(), alphabet_.end(), b);
  if (it == alphabet_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - alphabet_.begin());
}

std::vector<std::size_t> SolitonAutomaton::transition(std::size_t state, std::size_t burst) const {
  const auto& r = results_[state][burst];
  if (r.empty()) return {state};
  return r;
}

std::vector<WeightedGraph> states_fixpoint(const WeightedGraph& g, const std::vector<Burst>& alphabet,
                                           const ExplorationLimits& limits) {
  return SolitonAutomaton(g, alphabet, limits).states();
}

std::set<StateKey> run_burst_sequence(const SolitonAutomaton& a, const std::set<StateKey>& from,
                                      std::span<const Burst> bursts) {
  std::set<std::size_t> current;
  for (const StateKey& k : from) {
    auto s = a.find_state(k);
    if (!s) throw std::invalid_argument("state " + k.signature() + " is not in the automaton");
    current.insert(*s);
  }
  for (const Burst& b : bursts) {
    auto bi = a.find_burst(b);
    if (!bi) throw std::invalid_argument("burst " + b.to_string() + " is not in the alphabet");
    std::set<std::size_t> next;
    for (std::size_t s : current) {
      for (std::size_t t : a.transition(s, *bi)) next.insert(t);
    }
    current = std::move(next);
  }
  std::set<StateKey> out;
  for (std::size_t s : current) out.insert(a.states()[s].key());
  return out;
}

std::set<StateKey> run_burst_sequence(const SolitonAutomaton& a, const StateKey& start,
                                      std::span<const Burst> bursts) {
  return run_burst_sequence(a, std::set<StateKey>{start}, bursts);
}

namespace {

template <typename Check>
Verdict scan(const SolitonAutomaton& a, Check check) {
  Verdict v;
  for (std::size_t s = 0; s < a.states().size(); ++s) {
    for (std::size_t b = 0; b < a.alphabet().size(); ++b) {
      if (auto w = check(s, b)) {
        v.holds = false;
        v.witnesses.push_back({a.states()[s].key(), a.alphabet()[b], w->first, w->second});
        return v;
      }
    }
  }
  return v;
}

using Finding = std::optional<std::pair<std::string, std::string>>;

}  // namespace

Verdict is_deterministic(const SolitonAutomaton& a) {
  // An empty Result falls back to the self-loop, a single successor.
  return scan(a, [&](std::size_t s, std::size_t b) -> Finding {
    std::size_t n = a.transition(s, b).size();
    if (n == 1) return std::nullopt;
    return std::pair{std::string("nondeterministic"), "|Result|=" + std::to_string(n)};
  });
}

Verdict is_strongly_deterministic(const SolitonAutomaton& a) {
  return scan(a, [&](std::size_t s, std::size_t b) -> Finding {
    const TrailMultiplicity& m = a.outcome(s, b).multiplicity;
    if (m.kind == TrailMultiplicity::Kind::Zero || m.kind == TrailMultiplicity::Kind::One) return std::nullopt;
    return std::pair{std::string("multiple-total-trails"), "total trails: " + m.to_string()};
  });
}

Verdict is_perfectly_deterministic(const SolitonAutomaton& a) {
  return scan(a, [&](std::size_t s, std::size_t b) -> Finding {
    std::uint64_t n = a.outcome(s, b).perfect_trails;
    if (n <= 1) return std::nullopt;
    return std::pair{std::string("multiple-perfect-trails"), "perfect total trails: at least " + std::to_string(n)};
  });
}

std::size_t degree_of_nondeterminism(const SolitonAutomaton& a) {
  std::size_t degree = 1;
  for (std::size_t s = 0; s < a.states().size(); ++s) {
    for (std::size_t b = 0; b < a.alphabet().size(); ++b) {
      degree = std::max(degree, a.transition(s, b).size());
    }
  }
  return degree;
}

Verdict imperfect_trails(const SolitonAutomaton& a) {
  return scan(a, [&](std::size_t s, std::size_t b) -> Finding {
    const BurstOutcome& o = a.outcome(s, b);
    if (!o.imperfect_trail) return std::nullopt;
    return std::pair{std::string("imperfect-trail"),
                     o.imperfect_total_trail ? "imperfect total trail exists"
                                             : "imperfect partial trail exists (none total)"};
  });
}

DeterminismReport analyze(const SolitonAutomaton& a) {
  DeterminismReport r;
  Verdict det = is_deterministic(a);
  Verdict strong = is_strongly_deterministic(a);
  Verdict perfect = is_perfectly_deterministic(a);
  r.deterministic = det.holds;
  r.strongly_deterministic = strong.holds;
  r.perfectly_deterministic = perfect.holds;
  r.degree = degree_of_nondeterminism(a);
  for (const Verdict* v : {&det, &strong, &perfect}) {
    r.witnesses.insert(r.witnesses.end(), v->witnesses.begin(), v->witnesses.end());
  }
  return r;
}

nlohmann::json to_json(const DeterminismReport& r) {
  nlohmann::json witnesses = nlohmann::json::array();
  for (const Witness& w : r.witnesses) {
    witnesses.push_back({{"state", w.state.signature()},
                         {"burst", w.burst.to_string()},
                         {"kind", w.kind},
                         {"evidence", w.evidence}});
  }
  return {{"deterministic", r.deterministic},
          {"strongly_deterministic", r.strongly_deterministic},
          {"perfectly_deterministic", r.perfectly_deterministic},
          {"degree", r.degree},
          {"witnesses", witnesses}};
}

namespace {

Weights weights_from_signature(const std::string& sig) {
  Weights w;
  for (char c : sig) {
    if (c != '1' && c != '2') throw std::invalid_argument("bad state signature '" + sig + "'");
    w.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return w;
}

}  // namespace

DeterminismReport determinism_report_from_json(const nlohmann::json& j) {
  DeterminismReport r;
  r.deterministic = j.at("deterministic").get<bool>();
  r.strongly_deterministic = j.at("strongly_deterministic").get<bool>();
  r.perfectly_deterministic = j.at("perfectly_deterministic").get<bool>();
  r.degree = j.at("degree").get<std::size_t>();
  for (const auto& w : j.at("witnesses")) {
    r.witnesses.push_back({StateKey(weights_from_signature(w.at("state").get<std::string>())),
                           parse_burst(w.at("burst").get<std::string>()),
                           w.at("kind").get<std::string>(), w.at("evidence").get<std::string>()});
  }
  return r;
}

std::string export_dot(const SolitonAutomaton& a) {
  std::ostringstream out;
  out << "digraph automaton {\n  rankdir=LR;\n";
  for (std::size_t s = 0; s < a.states().size(); ++s) {
    out << "  s" << s << " [label=\"" << a.states()[s].key().signature() << "\"";
    if (s == a.initial()) out << ", peripheries=2";
    out << "];\n";
  }
  for (std::size_t s = 0; s < a.states().size(); ++s) {
    for (std::size_t b = 0; b < a.alphabet().size(); ++b) {
      for (std::size_t t : a.transition(s, b)) {
        out << "  s" << s << " -> s" << t << " [label=\"" << a.alphabet()[b].to_string() << "\"];\n";
      }
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace soliton
