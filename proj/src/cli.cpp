#include "fso/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>

#include <CLI11.hpp>

#include "fso/comparison.hpp"
#include "fso/dot.hpp"
#include "fso/error.hpp"
#include "fso/report_io.hpp"
#include "fso/scenario_io.hpp"
#include "fso/simulation.hpp"
#include "fso/sonspace.hpp"

namespace fso::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::vector<std::string> scenarios;
  std::optional<std::uint64_t> seed;
  std::optional<int> horizon;
  std::string out_dir;
  bool dump_scores = false;
  bool memoryless = false;
  int jobs = 1;
  int max_depth = 16;

  std::string protocol;
  bool son_space_graph = false;
  std::string dot_file;

  std::string scenario_b;
  std::string node_a;
  std::string node_b;
  int depth = 0;
};

fs::path output_dir(const Options& o) {
  if (!o.out_dir.empty()) return o.out_dir;
  if (const char* env = std::getenv("FSO_SIM_OUT"); env && *env) return env;
  return "out";
}

// Loads, applies overrides and validates. Throws Error on any violation.
Scenario prepare(const std::string& path, const Options& o) {
  Scenario s = load_scenario(path);
  if (o.seed) s.seed = *o.seed;
  if (o.horizon) s.horizon = *o.horizon;
  if (o.memoryless) s.knowledge.enabled = false;
  if (static_cast<int>(s.hierarchy.levels.size()) > o.max_depth) {
    throw Error(ErrorKind::Validation, "hierarchy: " + std::to_string(s.hierarchy.levels.size()) +
                                           " levels exceed the limit of " + std::to_string(o.max_depth) +
                                           " (see --max-depth)");
  }
  for (const auto& v : validate_scenario(s)) {
    if (v.severity == Violation::Severity::Error) {
      throw Error(ErrorKind::Validation, v.subject + ": " + v.message + " [" + v.rule + "]");
    }
  }
  return s;
}

const Protocol& pick_protocol(const Scenario& s, const std::string& id) {
  if (s.protocols.empty()) throw Error(ErrorKind::UnknownProtocol, "scenario defines no protocols");
  if (id.empty()) return s.protocols.front();
  for (const auto& p : s.protocols) {
    if (p.id == id) return p;
  }
  throw Error(ErrorKind::UnknownProtocol, "unknown protocol '" + id + "'");
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  int worst = kExitOk;
  for (const auto& path : o.scenarios) {
    try {
      Scenario s = load_scenario(path);
      if (static_cast<int>(s.hierarchy.levels.size()) > o.max_depth) {
        err << path << ": hierarchy: too many levels (limit " << o.max_depth << ")\n";
        worst = kExitInvalid;
        continue;
      }
      const auto violations = validate_scenario(s);
      bool bad = false;
      for (const auto& v : violations) {
        if (v.severity == Violation::Severity::Error) {
          err << path << ": " << v.subject << ": " << v.message << " [" << v.rule << "]\n";
          bad = true;
          break;
        }
      }
      for (const auto& v : violations) {
        if (v.severity == Violation::Severity::Warning) {
          err << path << ": warning: " << v.subject << ": " << v.message << '\n';
        }
      }
      if (bad) {
        worst = kExitInvalid;
      } else {
        out << path << ": ok\n";
      }
    } catch (const Error& e) {
      err << path << ": " << e.what() << '\n';
      worst = kExitInvalid;
    }
  }
  return worst;
}

int cmd_run(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<Scenario> scenarios;
  for (const auto& path : o.scenarios) {
    try {
      scenarios.push_back(prepare(path, o));
    } catch (const Error& e) {
      err << path << ": " << e.what() << '\n';
      return kExitInvalid;
    }
  }

  const fs::path base = output_dir(o);
  std::vector<MetricsReport> reports(scenarios.size());
  std::vector<std::string> failures(scenarios.size());

  // Runs are independent; each owns its state.
#pragma omp parallel for schedule(dynamic) num_threads(o.jobs > 0 ? o.jobs : 1)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(scenarios.size()); ++i) {
    try {
      reports[i] = run(scenarios[i]);
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  }

  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    if (!failures[i].empty()) {
      err << o.scenarios[i] << ": " << failures[i] << '\n';
      return kExitInvalid;
    }
    const fs::path dir = scenarios.size() == 1 ? base : base / fs::path(o.scenarios[i]).stem();
    const auto files = write_outputs(reports[i], dir, o.dump_scores);
    const auto& r = reports[i];
    int sons = 0, escalated = 0, pending = 0;
    for (const auto& e : r.son_events) {
      sons += e.outcome == "complete" || e.outcome == "resolved";
      escalated += e.outcome == "resolved";
      pending += e.outcome == "pending";
    }
    out << r.scenario << ": " << r.horizon << " ticks, seed " << r.seed << '\n'
        << "  SONs formed: " << sons << " (" << escalated << " via escalation), pending retries: " << pending
        << '\n'
        << "  energy: " << (r.energy.empty() ? r.initial_budget : r.energy.back().remaining) << " of "
        << r.initial_budget << " remaining\n"
        << "  permanentifications: " << r.permanentifications.size() << '\n'
        << "  knowledge: " << (r.knowledge_enabled ? "enabled" : "memoryless") << '\n';
    for (const auto& f : files) out << "  wrote " << f.string() << '\n';
  }
  return kExitOk;
}

int cmd_son_space(const Options& o, std::ostream& out, std::ostream& err) {
  Scenario s;
  try {
    s = prepare(o.scenarios.front(), o);
  } catch (const Error& e) {
    err << o.scenarios.front() << ": " << e.what() << '\n';
    return kExitInvalid;
  }
  const Hierarchy h = Hierarchy::build(s.hierarchy);
  const Protocol* p;
  try {
    p = &pick_protocol(s, o.protocol);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitInvalid;
  }
  const auto m = capability_matrix(h);
  std::vector<SpaceAssignment> space;
  std::uint64_t n;
  try {
    space = enumerate(m, *p);
    n = count(m, *p);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitInvalid;
  }

  const fs::path dir = output_dir(o);
  fs::create_directories(dir);
  const fs::path csv = dir / "son_space.csv";
  {
    std::ofstream f(csv, std::ios::binary);
    write_son_space_csv(f, m, p->required_roles, space);
  }
  out << "protocol " << p->id << ": " << n << " SONs\n";
  out << "count " << n << '\n';
  out << "wrote " << csv.string() << '\n';
  if (o.son_space_graph) {
    const fs::path dot = dir / "son_space.dot";
    std::ofstream f(dot, std::ios::binary);
    f << son_space_dot(m, space);
    out << "wrote " << dot.string() << '\n';
  }
  return kExitOk;
}

int cmd_export_dot(const Options& o, std::ostream& out, std::ostream& err) {
  Scenario s;
  try {
    s = prepare(o.scenarios.front(), o);
  } catch (const Error& e) {
    err << o.scenarios.front() << ": " << e.what() << '\n';
    return kExitInvalid;
  }
  const Hierarchy h = Hierarchy::build(s.hierarchy);
  std::string text;
  if (o.son_space_graph) {
    try {
      const auto& p = pick_protocol(s, o.protocol);
      const auto m = capability_matrix(h);
      text = son_space_dot(m, enumerate(m, p));
    } catch (const Error& e) {
      err << e.what() << '\n';
      return kExitInvalid;
    }
  } else {
    text = hierarchy_dot(h);
  }
  if (o.dot_file.empty()) {
    out << text;
  } else {
    std::ofstream f(o.dot_file, std::ios::binary);
    f << text;
    out << "wrote " << o.dot_file << '\n';
  }
  return kExitOk;
}

int cmd_compare(const Options& o, std::ostream& out, std::ostream& err) {
  try {
    const Scenario sa = prepare(o.scenarios.front(), o);
    const Scenario sb = o.scenario_b.empty() ? sa : prepare(o.scenario_b, o);
    const Hierarchy ha = Hierarchy::build(sa.hierarchy);
    const Hierarchy hb = Hierarchy::build(sb.hierarchy);
    if (!ha.contains(o.node_a) || !hb.contains(o.node_b)) {
      err << "unknown node '" << (ha.contains(o.node_a) ? o.node_b : o.node_a) << "'\n";
      return kExitInvalid;
    }
    out << to_json(compare_systems(ha, o.node_a, hb, o.node_b, o.depth)).dump(2) << '\n';
    return kExitOk;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fractal social organization simulator", "fso-sim"};
  app.require_subcommand(1, 1);
  Options o;

  auto* run_cmd = app.add_subcommand("run", "Run scenarios and write CSV/JSON metrics");
  run_cmd->add_option("-s,--scenario,scenarios", o.scenarios, "Scenario file(s)")->required();
  run_cmd->add_option("--seed", o.seed, "Override the scenario seed");
  run_cmd->add_option("--horizon", o.horizon, "Override the number of ticks")->check(CLI::PositiveNumber);
  run_cmd->add_option("-o,--out", o.out_dir, "Output directory (default $FSO_SIM_OUT or ./out)");
  run_cmd->add_flag("--dump-scores", o.dump_scores, "Write scores.csv");
  run_cmd->add_flag("--memoryless", o.memoryless, "Disable enrollment scores and permanentification");
  run_cmd->add_option("-j,--jobs", o.jobs, "Scenarios to run concurrently")->check(CLI::PositiveNumber);
  run_cmd->add_option("--max-depth", o.max_depth, "Reject hierarchies with more levels");

  auto* validate_cmd = app.add_subcommand("validate", "Check scenario files without running them");
  validate_cmd->add_option("-s,--scenario,scenarios", o.scenarios, "Scenario file(s)")->required();
  validate_cmd->add_option("--max-depth", o.max_depth, "Reject hierarchies with more levels");

  auto* space_cmd = app.add_subcommand("son-space", "Enumerate and count the SONs of a protocol");
  space_cmd->add_option("-s,--scenario,scenario", o.scenarios, "Scenario file")->required()->expected(1);
  space_cmd->add_option("-p,--protocol", o.protocol, "Protocol id (default: first)");
  space_cmd->add_option("-o,--out", o.out_dir, "Output directory (default $FSO_SIM_OUT or ./out)");
  space_cmd->add_flag("--dot", o.son_space_graph, "Also write son_space.dot");
  space_cmd->add_option("--max-depth", o.max_depth, "Reject hierarchies with more levels");

  auto* dot_cmd = app.add_subcommand("export-dot", "Print the containment forest or SON space as DOT");
  dot_cmd->add_option("-s,--scenario,scenario", o.scenarios, "Scenario file")->required()->expected(1);
  dot_cmd->add_flag("--son-space", o.son_space_graph, "Export the SON-space graph instead");
  dot_cmd->add_option("-p,--protocol", o.protocol, "Protocol id for --son-space (default: first)");
  dot_cmd->add_option("-o,--output", o.dot_file, "Write to file instead of stdout");
  dot_cmd->add_option("--max-depth", o.max_depth, "Reject hierarchies with more levels");

  auto* cmp_cmd = app.add_subcommand("compare", "Compare two systems feature by feature (JSON)");
  cmp_cmd->add_option("-s,--scenario", o.scenarios, "Scenario holding system A")->required()->expected(1);
  cmp_cmd->add_option("--scenario-b", o.scenario_b, "Scenario holding system B (default: same)");
  cmp_cmd->add_option("-a", o.node_a, "Node id of system A")->required();
  cmp_cmd->add_option("-b", o.node_b, "Node id of system B")->required();
  cmp_cmd->add_option("-d,--depth", o.depth, "Levels of detail to compare")->check(CLI::NonNegativeNumber);
  cmp_cmd->add_option("--max-depth", o.max_depth, "Reject hierarchies with more levels");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*run_cmd) return cmd_run(o, out, err);
    if (*validate_cmd) return cmd_validate(o, out, err);
    if (*space_cmd) return cmd_son_space(o, out, err);
    if (*dot_cmd) return cmd_export_dot(o, out, err);
    if (*cmp_cmd) return cmd_compare(o, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace fso::cli
