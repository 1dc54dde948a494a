#include "soliton/burst.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace soliton {

BurstError::BurstError(Kind kind, std::string message, std::size_t column)
    : std::runtime_error(column == 0 ? message
                                     : "column " + std::to_string(column) + ": " + message),
      kind_(kind),
      column_(column) {}

Burst::Burst(std::vector<BurstPair> pairs, std::vector<unsigned> gaps)
    : pairs_(std::move(pairs)), gaps_(std::move(gaps)) {
  if (pairs_.empty()) throw BurstError(BurstError::Kind::Empty, "a burst needs at least one pair");
  if (gaps_.size() + 1 != pairs_.size()) {
    throw BurstError(BurstError::Kind::BadGap, "a burst of length m needs m-1 gaps");
  }
}

std::string Burst::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    if (i > 0) out += "|" + std::to_string(gaps_[i - 1]);
    out += "(" + pairs_[i].entry + "," + pairs_[i].exit + ")";
  }
  out += "!";
  return out;
}

namespace {

// Recursive descent over: burst := pair ("|" nat pair)* "!"
class BurstParser {
 public:
  explicit BurstParser(std::string_view text) : text_(text) {}

  Burst parse() {
    std::vector<BurstPair> pairs;
    std::vector<unsigned> gaps;
    pairs.push_back(pair());
    for (;;) {
      skip_space();
      if (at_end()) {
        throw BurstError(BurstError::Kind::MissingTerminator, "missing terminator '!'", column());
      }
      char c = text_[pos_];
      if (c == '!') {
        ++pos_;
        skip_space();
        if (!at_end()) error("unexpected text after '!'");
        return Burst(std::move(pairs), std::move(gaps));
      }
      if (c != '|') error(std::string("expected '|' or '!' but found '") + c + "'");
      ++pos_;
      gaps.push_back(natural());
      pairs.push_back(pair());
    }
  }

 private:
  BurstPair pair() {
    expect('(');
    NodeId entry = identifier();
    expect(',');
    NodeId exit = identifier();
    expect(')');
    return {std::move(entry), std::move(exit)};
  }

  unsigned natural() {
    skip_space();
    if (!at_end() && text_[pos_] == '-') {
      throw BurstError(BurstError::Kind::BadGap, "gap must be non-negative", column());
    }
    std::size_t start = pos_;
    unsigned long value = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + static_cast<unsigned>(text_[pos_] - '0');
      if (value > 1'000'000) throw BurstError(BurstError::Kind::BadGap, "gap too large", column());
      ++pos_;
    }
    if (pos_ == start) throw BurstError(BurstError::Kind::BadGap, "missing gap after '|'", column());
    return static_cast<unsigned>(value);
  }

  NodeId identifier() {
    skip_space();
    std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    if (pos_ == start) error("expected node id");
    return NodeId(text_.substr(start, pos_ - start));
  }

  void expect(char c) {
    skip_space();
    if (at_end()) {
      throw BurstError(BurstError::Kind::MissingTerminator,
                       std::string("unexpected end of burst, expected '") + c + "'", column());
    }
    if (text_[pos_] != c) {
      error(std::string("expected '") + c + "' but found '" + text_[pos_] + "'");
    }
    ++pos_;
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void error(const std::string& message) const {
    throw BurstError(BurstError::Kind::Syntax, message, column());
  }

  bool at_end() const { return pos_ >= text_.size(); }
  std::size_t column() const { return pos_ + 1; }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Burst parse_burst(std::string_view text) { return BurstParser(text).parse(); }

std::vector<Burst> parse_burst_set(std::string_view text) {
  std::vector<Burst> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (std::all_of(line.begin(), line.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); })) {
      continue;
    }
    try {
      Burst b = parse_burst(line);
      if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(std::move(b));
    } catch (const BurstError& e) {
      throw BurstError(e.kind(), "line " + std::to_string(line_no) + ", " + e.what());
    }
  }
  return out;
}

std::vector<Burst> load_burst_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BurstError(BurstError::Kind::Io, "cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_burst_set(buf.str());
}

std::string Position::to_string() const {
  switch (kind_) {
    case Kind::Node:
      return node_;
    case Kind::Countdown:
      return "~" + std::to_string(countdown_);
    case Kind::Departed:
      break;
  }
  return "-";
}

PositionMap initial_position_map(const Burst& b) {
  const auto& pairs = b.pairs();
  const auto& gaps = b.gaps();
  const std::size_t m = pairs.size();
  // r: length of the leading block of zero gaps.
  std::size_t r = 0;
  while (r < gaps.size() && gaps[r] == 0) ++r;

  PositionMap map;
  map.reserve(m);
  for (std::size_t i = 0; i <= r && i < m; ++i) map.push_back(Position::at(pairs[i].entry));
  unsigned wait = 0;
  for (std::size_t i = r + 1; i < m; ++i) {
    wait += gaps[i - 1];
    map.push_back(Position::waiting(wait));
  }
  return map;
}

bool is_final(const PositionMap& p) {
  return std::all_of(p.begin(), p.end(),
                     [](const Position& x) { return x.kind() == Position::Kind::Departed; });
}

std::string to_string(const PositionMap& p) {
  std::string out = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0) out += ",";
    out += p[i].to_string();
  }
  return out + ")";
}

BoundBurst bind_burst(const Burst& b, const WeightedGraph& g) {
  const Topology& t = g.topology();
  BoundBurst out{b, g.shared_topology(), {}, {}};
  auto resolve = [&](const NodeId& name, const char* what) {
    auto n = t.find(name);
    if (!n) throw BurstError(BurstError::Kind::UnknownNode, std::string(what) + " node '" + name + "' not in graph");
    if (!t.is_exterior(*n)) {
      throw BurstError(BurstError::Kind::InteriorNode,
                       std::string(what) + " node '" + name + "' is not exterior");
    }
    return *n;
  };
  for (const BurstPair& p : b.pairs()) {
    out.entry.push_back(resolve(p.entry, "entry"));
    out.exit.push_back(resolve(p.exit, "exit"));
  }
  return out;
}

std::vector<Burst> all_bursts(const std::vector<NodeId>& exterior, const Bounds& bounds) {
  std::vector<BurstPair> alphabet;
  for (const NodeId& a : exterior) {
    for (const NodeId& b : exterior) alphabet.push_back({a, b});
  }
  std::sort(alphabet.begin(), alphabet.end());

  std::vector<Burst> out;
  if (alphabet.empty()) return out;
  for (std::size_t m = 1; m <= bounds.max_burst_length; ++m) {
    std::vector<std::size_t> pick(m, 0);
    for (;;) {
      std::vector<BurstPair> pairs;
      for (std::size_t p : pick) pairs.push_back(alphabet[p]);
      std::vector<unsigned> gaps(m - 1, 0);
      for (;;) {
        out.emplace_back(pairs, gaps);
        std::size_t g = gaps.size();
        while (g > 0 && gaps[g - 1] == bounds.max_gap) gaps[--g] = 0;
        if (g == 0) break;
        ++gaps[g - 1];
      }
      std::size_t i = m;
      while (i > 0 && pick[i - 1] + 1 == alphabet.size()) pick[--i] = 0;
      if (i == 0) break;
      ++pick[i - 1];
    }
  }
  return out;
}

}  // namespace soliton
