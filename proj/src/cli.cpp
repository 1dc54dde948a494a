#include "soliton/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <optional>

#include "soliton/automaton.hpp"
#include "soliton/burst.hpp"
#include "soliton/classify.hpp"
#include "soliton/engine.hpp"
#include "soliton/families.hpp"
#include "soliton/graph.hpp"

namespace soliton {

namespace {

/// Raised for bad input that is not a verdict: unreadable files, graphs that
/// are not soliton graphs, bursts that do not bind.
struct InputError {
  std::string message;
};

WeightedGraph load_valid_graph(const std::string& path) {
  WeightedGraph g = [&] {
    try {
      return load_graph(path);
    } catch (const GraphError& e) {
      throw InputError{path + ": " + e.what()};
    }
  }();
  ValidationReport report = validate(g);
  if (!report.ok()) {
    const Violation& v = report.violations.front();
    throw InputError{path + ": not a soliton graph: " + v.rule + " " + v.subject + ": " + v.message};
  }
  return g;
}

std::vector<Burst> load_bound_bursts(const std::string& path, const WeightedGraph& g) {
  try {
    std::vector<Burst> bursts = load_burst_set(path);
    for (const Burst& b : bursts) bind_burst(b, g);
    return bursts;
  } catch (const BurstError& e) {
    throw InputError{path + ": " + e.what()};
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw InputError{"cannot write " + path};
  f << text;
}

std::string nodes_to_string(const SolitonPath& p, const Topology& t) {
  if (!p.entered()) return "(never entered)";
  std::string s;
  for (std::size_t i = 0; i < p.nodes.size(); ++i) s += (i ? " " : "") + t.name(p.nodes[i]);
  return s;
}

void print_trail(std::ostream& out, const Trail& t, std::size_t index, bool trace) {
  out << "trail " << index << (t.perfect ? " (perfect)" : "") << " end="
      << StateKey(t.steps.back().weights).signature() << '\n';
  std::size_t solitons = t.steps.front().positions.size();
  for (std::size_t i = 0; i < solitons; ++i) {
    out << "  soliton " << i + 1 << ": " << nodes_to_string(soliton_path(t, i), *t.topology) << '\n';
  }
  if (trace) {
    std::string dump = dump_trail(t);
    std::size_t start = 0;
    while (start < dump.size()) {
      std::size_t end = dump.find('\n', start);
      out << "    " << dump.substr(start, end - start) << '\n';
      start = end + 1;
    }
  }
}

nlohmann::json automaton_json(const SolitonAutomaton& a) {
  nlohmann::json states = nlohmann::json::array();
  for (const WeightedGraph& s : a.states()) states.push_back(s.key().signature());
  nlohmann::json alphabet = nlohmann::json::array();
  for (const Burst& b : a.alphabet()) alphabet.push_back(b.to_string());
  nlohmann::json transitions = nlohmann::json::array();
  for (std::size_t s = 0; s < a.states().size(); ++s) {
    for (std::size_t b = 0; b < a.alphabet().size(); ++b) {
      nlohmann::json to = nlohmann::json::array();
      for (std::size_t t : a.transition(s, b)) to.push_back(a.states()[t].key().signature());
      transitions.push_back({{"from", a.states()[s].key().signature()},
                             {"burst", a.alphabet()[b].to_string()},
                             {"to", to},
                             {"self_loop", a.result(s, b).empty()}});
    }
  }
  std::vector<std::string> edges;
  for (EdgeIndex e = 0; e < a.base().topology().edge_count(); ++e) edges.push_back(a.base().topology().edge_label(e));
  return {{"edges", edges},
          {"initial", a.states()[a.initial()].key().signature()},
          {"states", states},
          {"alphabet", alphabet},
          {"transitions", transitions}};
}

void print_witnesses(std::ostream& out, const std::vector<Witness>& ws) {
  for (const Witness& w : ws) {
    out << "witness: state=" << w.state.signature() << " burst=" << w.burst.to_string() << " kind=" << w.kind
        << " (" << w.evidence << ")\n";
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-soliton automata over soliton graphs", "soliton"};
  app.require_subcommand(1);

  std::string graph_path, burst_text, bursts_path, dot_path, check, family, path_spec_text;
  std::string output_path;
  bool perfect_only = false, trace = false, json = false;
  std::optional<std::size_t> limit;
  Bounds bounds;
  std::size_t g_param = 1, cycle = 4, nodes = 2;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> paths;

  auto* validate_cmd = app.add_subcommand("validate", "Check the soliton graph rules");
  validate_cmd->add_option("graph", graph_path, "Graph file")->required();

  auto* trails_cmd = app.add_subcommand("trails", "List total legal trails of one burst");
  trails_cmd->add_option("graph", graph_path, "Graph file")->required();
  trails_cmd->add_option("burst", burst_text, "Burst, e.g. \"(1,2)|1(2,1)!\"")->required();
  trails_cmd->add_flag("--perfect-only", perfect_only, "Only perfect trails (all of them)");
  trails_cmd->add_option("--limit", limit, "Stop after this many trails");
  trails_cmd->add_flag("--trace", trace, "Print every configuration step");

  auto* automaton_cmd = app.add_subcommand("automaton", "Build the automaton over a burst set");
  automaton_cmd->add_option("graph", graph_path, "Graph file")->required();
  automaton_cmd->add_option("bursts", bursts_path, "Burst file, one per line")->required();
  automaton_cmd->add_option("--dot", dot_path, "Write Graphviz output to FILE");
  automaton_cmd->add_flag("--json", json, "JSON output");

  auto* analyze_cmd = app.add_subcommand("analyze", "Determinism analyses of the automaton");
  analyze_cmd->add_option("graph", graph_path, "Graph file")->required();
  analyze_cmd->add_option("bursts", bursts_path, "Burst file, one per line")->required();
  analyze_cmd->add_option("--check", check, "Property to decide")
      ->required()
      ->check(CLI::IsMember({"det", "strong", "perfect", "degree"}));
  analyze_cmd->add_flag("--json", json, "JSON report");
  analyze_cmd->add_option("--dot", dot_path, "Write the automaton as Graphviz to FILE");

  auto* classify_cmd = app.add_subcommand("classify", "Structural classes and bounded edge usage");
  classify_cmd->add_option("graph", graph_path, "Graph file")->required();
  classify_cmd->add_option("--max-burst-length", bounds.max_burst_length, "Longest burst swept")
      ->check(CLI::PositiveNumber);
  classify_cmd->add_option("--max-gap", bounds.max_gap, "Largest gap swept");
  classify_cmd->add_option("--dot", dot_path, "Write the graph as Graphviz to FILE");
  classify_cmd->add_flag("--json", json, "JSON report");

  auto* gen_cmd = app.add_subcommand("gen", "Generate a graph file");
  gen_cmd->add_option("family", family, "gg, chestnut or tree")
      ->required()
      ->check(CLI::IsMember({"gg", "chestnut", "tree"}));
  gen_cmd->add_option("--g", g_param, "Parameter of the gg family")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--cycle", cycle, "Chestnut cycle length");
  gen_cmd->add_option("--path", paths, "Chestnut path POSITION:LENGTH (repeatable)");
  gen_cmd->add_option("--nodes", nodes, "Tree node count");
  gen_cmd->add_option("--seed", seed, "Random seed (required for tree)");
  gen_cmd->add_option("-o,--output", output_path, "Write to FILE instead of standard output");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  ExplorationLimits limits = ExplorationLimits::from_environment();

  try {
    if (validate_cmd->parsed()) {
      WeightedGraph g = [&]() -> WeightedGraph {
        try {
          return load_graph(graph_path);
        } catch (const GraphError& e) {
          if (e.kind() == GraphError::Kind::Io) throw InputError{e.what()};
          out << "violation: parse " << graph_path << ':' << e.line() << ':' << e.column() << ": " << e.what()
              << '\n';
          throw e;
        }
      }();
      ValidationReport report = validate(g);
      for (const Violation& v : report.violations) {
        out << "violation: " << v.rule << ' ' << v.subject << ": " << v.message << '\n';
      }
      if (report.ok()) out << "ok: " << g.topology().node_count() << " nodes, " << g.topology().edge_count()
                           << " edges\n";
      return report.ok() ? kExitOk : kExitFalse;
    }

    if (trails_cmd->parsed()) {
      WeightedGraph g = load_valid_graph(graph_path);
      Burst burst = [&] {
        try {
          Burst b = parse_burst(burst_text);
          bind_burst(b, g);
          return b;
        } catch (const BurstError& e) {
          throw InputError{e.what()};
        }
      }();
      std::vector<Trail> trails;
      bool truncated = false;
      if (perfect_only) {
        trails = enumerate_perfect_trails(g, burst, limit ? *limit + 1 : 0, limits);
        if (limit && trails.size() > *limit) {
          trails.resize(*limit);
          truncated = true;
        }
      } else {
        if (!limit) {
          err << "trails: --limit is required unless --perfect-only is given\n";
          return kExitUsage;
        }
        TrailListing listing = enumerate_total_trails(g, burst, *limit, limits);
        trails = std::move(listing.trails);
        truncated = listing.truncated;
      }
      for (std::size_t i = 0; i < trails.size(); ++i) print_trail(out, trails[i], i + 1, trace);
      if (trails.empty()) out << "no total legal trail\n";
      if (truncated) out << "truncated after " << trails.size() << " trails\n";
      return kExitOk;
    }

    if (automaton_cmd->parsed() || analyze_cmd->parsed()) {
      WeightedGraph g = load_valid_graph(graph_path);
      std::vector<Burst> bursts = load_bound_bursts(bursts_path, g);
      SolitonAutomaton a(g, bursts, limits);
      if (!dot_path.empty()) write_file(dot_path, export_dot(a));

      if (automaton_cmd->parsed()) {
        if (json) {
          out << automaton_json(a).dump(2) << '\n';
          return kExitOk;
        }
        out << "states: " << a.states().size() << "  initial: " << a.states()[a.initial()].key().signature()
            << '\n';
        for (std::size_t s = 0; s < a.states().size(); ++s) {
          for (std::size_t b = 0; b < a.alphabet().size(); ++b) {
            out << a.states()[s].key().signature() << " --" << a.alphabet()[b].to_string() << "--> {";
            std::vector<std::size_t> to = a.transition(s, b);
            for (std::size_t i = 0; i < to.size(); ++i) out << (i ? "," : "") << a.states()[to[i]].key().signature();
            out << '}' << (a.result(s, b).empty() ? " (no total trail)" : "") << '\n';
          }
        }
        return kExitOk;
      }

      DeterminismReport report = analyze(a);
      bool holds = true;
      std::vector<Witness> witnesses;
      if (check == "det" || check == "degree") {
        holds = report.deterministic;
        witnesses = is_deterministic(a).witnesses;
      } else if (check == "strong") {
        holds = report.strongly_deterministic;
        witnesses = is_strongly_deterministic(a).witnesses;
      } else {
        holds = report.perfectly_deterministic;
        witnesses = is_perfectly_deterministic(a).witnesses;
      }
      if (json) {
        out << to_json(report).dump(2) << '\n';
      } else if (check == "degree") {
        out << report.degree << '\n';
        print_witnesses(out, witnesses);
      } else {
        out << (holds ? "true" : "false") << '\n';
        print_witnesses(out, witnesses);
      }
      if (check == "degree") return kExitOk;
      return holds ? kExitOk : kExitFalse;
    }

    if (classify_cmd->parsed()) {
      WeightedGraph g = load_valid_graph(graph_path);
      if (!dot_path.empty()) write_file(dot_path, export_dot(g));
      ClassifyReport r = classify(g, bounds, limits);
      if (json) {
        out << to_json(r).dump(2) << '\n';
        return kExitOk;
      }
      out << "tree: " << (r.is_tree ? "yes" : "no") << '\n';
      out << "chestnut: " << (r.is_chestnut ? "yes" : "no") << '\n';
      for (const std::string& v : r.chestnut_evidence.violations) out << "  " << v << '\n';
      for (const std::string& n : r.chestnut_evidence.notes) out << "  note: " << n << '\n';
      out << "indecomposable (bounded): " << (r.indecomposable_bounded ? "yes" : "no") << '\n';
      for (const auto& p : r.impervious_paths) {
        out << "  unused path:";
        for (const NodeId& n : p) out << ' ' << n;
        out << '\n';
      }
      out << "caveat: " << r.caveat << '\n';
      return kExitOk;
    }

    if (gen_cmd->parsed()) {
      FamilySpec spec;
      if (family == "gg") {
        spec.kind = FamilySpec::Kind::Gg;
        spec.g = g_param;
      } else if (family == "chestnut") {
        spec.kind = FamilySpec::Kind::Chestnut;
        spec.cycle_length = cycle;
        if (paths.empty()) paths.push_back("0:1");
        for (const std::string& p : paths) {
          std::size_t colon = p.find(':');
          try {
            if (colon == std::string::npos) throw std::invalid_argument(p);
            spec.attachments.push_back({std::stoul(p.substr(0, colon)), std::stoul(p.substr(colon + 1))});
          } catch (const std::exception&) {
            err << "gen: --path expects POSITION:LENGTH, got '" << p << "'\n";
            return kExitUsage;
          }
        }
      } else {
        if (!seed) {
          err << "gen tree: --seed is required\n";
          return kExitUsage;
        }
        spec.kind = FamilySpec::Kind::Tree;
        spec.nodes = nodes;
        spec.seed = *seed;
      }
      std::string text;
      try {
        text = "# generated: " + spec.describe() + "\n" + print_graph(generate(spec));
      } catch (const FamilyError& e) {
        err << "gen: " << e.what() << '\n';
        return kExitFalse;
      }
      if (output_path.empty()) {
        out << text;
      } else {
        write_file(output_path, text);
      }
      return kExitOk;
    }
  } catch (const InputError& e) {
    err << "error: " << e.message << '\n';
    return kExitUsage;
  } catch (const GraphError&) {
    return kExitFalse;  // validate already reported the parse error
  } catch (const ResourceLimitExceeded& e) {
    err << "error: resource cap exceeded: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace soliton
