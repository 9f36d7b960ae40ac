#include "fso/report_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace fso {

using nlohmann::json;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string to_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string levels_field(const std::set<int>& levels) {
  std::string out;
  for (int l : levels) {
    if (!out.empty()) out += ';';
    out += std::to_string(l);
  }
  return out;
}

void write_events_csv(std::ostream& out, const MetricsReport& r) {
  out << "tick,protocol,signature,levels_spanned,outcome\n";
  for (const auto& e : r.son_events) {
    out << e.tick << ',' << csv_field(e.protocol) << ',' << csv_field(e.signature) << ','
        << levels_field(e.levels_spanned) << ',' << e.outcome << '\n';
  }
}

void write_allocator_csv(std::ostream& out, const MetricsReport& r) {
  out << "tick,level,situation,required,fired,undershoot,overshoot,dtof,decision,capacity\n";
  for (const auto& a : r.allocator) {
    out << a.tick << ',' << a.level << ',' << csv_field(a.situation) << ',' << a.required << ',' << a.fired
        << ',' << a.undershoot << ',' << a.overshoot << ',' << to_string(a.dtof) << ','
        << to_string(a.decision) << ',' << a.capacity << '\n';
  }
}

void write_energy_csv(std::ostream& out, const MetricsReport& r) {
  out << "tick,spent,ledger_total,remaining\n";
  for (const auto& e : r.energy) {
    out << e.tick << ',' << e.spent << ',' << e.ledger_total << ',' << e.remaining << '\n';
  }
}

void write_scores_csv(std::ostream& out, const ScoreLedger& scores) {
  out << "node,role,score\n";
  char buf[64];
  for (const auto& [key, v] : scores.entries()) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << csv_field(key.first) << ',' << csv_field(key.second) << ',' << buf << '\n';
  }
}

json report_to_json(const MetricsReport& r) {
  json latencies = json::array();
  for (const auto& l : r.latencies) {
    latencies.push_back({{"set_at", l.set_at},
                         {"level", l.level},
                         {"situation", l.situation},
                         {"latency", l.latency ? json(*l.latency) : json(nullptr)}});
  }
  json escalations = json::object();
  for (const auto& [lvl, n] : r.escalations_per_level) escalations[std::to_string(lvl)] = n;
  json notifications = json::array();
  for (const auto& n : r.notifications) {
    notifications.push_back({{"tick", n.tick},
                             {"origin", n.origin},
                             {"origin_level", n.origin_level},
                             {"canon", n.canon},
                             {"canon_level", n.canon_level},
                             {"cause", n.cause}});
  }
  json catastrophes = json::array();
  for (const auto& c : r.catastrophes) {
    json affected = json::object();
    for (const auto& [id, hop] : c.affected) affected[id] = hop;
    catastrophes.push_back({{"tick", c.tick},
                            {"epicenter", c.epicenter},
                            {"figures", c.figures},
                            {"magnitude", c.magnitude},
                            {"affected", affected},
                            {"failed", c.failed},
                            {"perceivers", c.perceivers}});
  }
  json behaviors = json::array();
  for (const auto& b : r.behaviors) {
    behaviors.push_back({{"tick", b.tick},
                         {"node", b.node},
                         {"behavior", b.behavior ? json(to_string(*b.behavior)) : json("Abstain")},
                         {"cost", b.cost}});
  }
  json perms = json::array();
  for (const auto& p : r.permanentifications) {
    perms.push_back({{"tick", p.tick}, {"signature", p.signature}, {"node", p.node}, {"level", p.level}});
  }
  const auto& last = r.energy.empty() ? EnergyRow{} : r.energy.back();
  return {{"scenario", r.scenario},
          {"seed", r.seed},
          {"horizon", r.horizon},
          {"knowledge_enabled", r.knowledge_enabled},
          {"energy",
           {{"initial", r.initial_budget}, {"spent", last.ledger_total}, {"remaining", r.energy.empty() ? r.initial_budget : last.remaining}}},
          {"reaction_latencies", latencies},
          {"escalations_per_level", escalations},
          {"notifications", notifications},
          {"catastrophes", catastrophes},
          {"behaviors", behaviors},
          {"permanentifications", perms}};
}

namespace {

template <typename Fn>
std::filesystem::path write_file(const std::filesystem::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  fn(out);
  return path;
}

}  // namespace

std::vector<std::filesystem::path> write_outputs(const MetricsReport& r, const std::filesystem::path& dir,
                                                 bool dump_scores) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  written.push_back(write_file(dir / "events.csv", [&](std::ostream& o) { write_events_csv(o, r); }));
  written.push_back(write_file(dir / "allocator.csv", [&](std::ostream& o) { write_allocator_csv(o, r); }));
  written.push_back(write_file(dir / "energy.csv", [&](std::ostream& o) { write_energy_csv(o, r); }));
  written.push_back(
      write_file(dir / "report.json", [&](std::ostream& o) { o << report_to_json(r).dump(2) << '\n'; }));
  if (dump_scores && r.knowledge_enabled) {
    written.push_back(write_file(dir / "scores.csv", [&](std::ostream& o) { write_scores_csv(o, r.scores); }));
  }
  return written;
}

void write_son_space_csv(std::ostream& out, const CapabilityMatrix& m, const RoleMultiset& roles,
                         const std::vector<SpaceAssignment>& space) {
  std::vector<std::pair<std::size_t, int>> order;  // matrix role index, multiplicity
  for (const auto& [role, k] : roles) order.emplace_back(m.role_index(role), k);
  std::sort(order.begin(), order.end());
  bool first = true;
  for (const auto& [role, k] : order) {
    for (int i = 0; i < k; ++i) {
      out << (first ? "" : ",") << csv_field(m.roles[role]);
      first = false;
    }
  }
  out << '\n';
  for (const auto& a : space) {
    first = true;
    for (const auto& [role, nodes] : a.blocks) {
      for (auto n : nodes) {
        out << (first ? "" : ",") << csv_field(m.nodes[n]);
        first = false;
      }
    }
    out << '\n';
  }
}

}  // namespace fso
