#pragma once

// Reads the small DOT subset the exporters emit: quoted or bare node ids,
// `--` / `->` edge statements and bracketed attribute lists.

#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

struct DotEdge {
  std::string from;
  std::string to;
  std::map<std::string, std::string> attrs;
};

struct DotGraph {
  std::string kind;  // "graph" or "digraph"
  std::string name;
  std::map<std::string, std::map<std::string, std::string>> nodes;
  std::vector<DotEdge> edges;
};

inline std::map<std::string, std::string> dot_attrs(const std::string& body) {
  std::map<std::string, std::string> out;
  static const std::regex attr(R"re((\w+)\s*=\s*("([^"]*)"|[\w.]+))re");
  for (auto it = std::sregex_iterator(body.begin(), body.end(), attr); it != std::sregex_iterator(); ++it) {
    out[(*it)[1]] = (*it)[3].matched ? (*it)[3].str() : (*it)[2].str();
  }
  return out;
}

inline DotGraph read_dot(const std::string& text) {
  DotGraph g;
  static const std::regex header(R"re(^\s*(graph|digraph)\s+(\w+)\s*\{)re");
  static const std::regex edge(R"re(^\s*"?([\w]+)"?\s*(--|->)\s*"?([\w]+)"?\s*(\[(.*)\])?\s*;\s*$)re");
  static const std::regex node(R"re(^\s*"?([\w]+)"?\s*(\[(.*)\])?\s*;\s*$)re");
  std::istringstream in(text);
  std::string line;
  std::smatch m;
  while (std::getline(in, line)) {
    if (std::regex_search(line, m, header)) {
      g.kind = m[1];
      g.name = m[2];
    } else if (std::regex_match(line, m, edge)) {
      g.edges.push_back({m[1], m[3], dot_attrs(m[5])});
    } else if (std::regex_match(line, m, node)) {
      g.nodes[m[1]] = dot_attrs(m[3]);
    }
  }
  return g;
}

}  // namespace oracle
