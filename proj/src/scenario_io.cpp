#include "fso/scenario_io.hpp"

#include <fstream>

#include "fso/error.hpp"

namespace fso {

using nlohmann::json;

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  return it->get<T>();
}

const json& require(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorKind::Validation, where + ": missing field '" + key + "'");
  return *it;
}

std::set<std::string> string_set(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return {};
  return it->get<std::set<std::string>>();
}

std::optional<Gestalt> optional_class(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return parse_gestalt(it->get<std::string>());
}

NodeState parse_state(const std::string& s) {
  if (s == "Idle") return NodeState::Idle;
  if (s == "Enrolled") return NodeState::Enrolled;
  if (s == "Failed") return NodeState::Failed;
  throw Error(ErrorKind::Validation, "unknown node state '" + s + "'");
}

json costs_to_json(const std::map<Behavior, std::int64_t>& costs) {
  json out = json::object();
  for (const auto& [b, c] : costs) out[to_string(b)] = c;
  return out;
}

std::map<Behavior, std::int64_t> costs_from_json(const json& j) {
  std::map<Behavior, std::int64_t> out;
  for (const auto& [k, v] : j.items()) out[parse_behavior(k)] = v.get<std::int64_t>();
  return out;
}

json roles_to_json(const RoleMultiset& roles) {
  json out = json::object();
  for (const auto& [r, k] : roles) out[r] = k;
  return out;
}

// Accepts {"role": multiplicity} or ["role", "role", ...].
RoleMultiset roles_from_json(const json& j) {
  RoleMultiset out;
  if (j.is_array()) {
    for (const auto& r : j) ++out[r.get<std::string>()];
  } else {
    for (const auto& [k, v] : j.items()) out[k] = v.get<int>();
  }
  return out;
}

json situation_to_json(const Situation& s) {
  return {{"id", s.id},
          {"required", s.required},
          {"stable", s.stable},
          {"critical", s.critical},
          {"relevant_figures", s.relevant_figures},
          {"protocols", s.protocols}};
}

Situation situation_from_json(const json& j) {
  Situation s;
  s.id = require(j, "id", "situation").get<std::string>();
  s.required = get_or(j, "required", 0);
  s.stable = get_or(j, "stable", true);
  s.critical = get_or(j, "critical", false);
  s.relevant_figures = string_set(j, "relevant_figures");
  s.protocols = get_or(j, "protocols", std::vector<std::string>{});
  return s;
}

}  // namespace

json features_to_json(const SystemicFeatures& f) {
  auto cls = [](const std::optional<Gestalt>& g) -> json {
    return g ? json(to_string(*g)) : json(nullptr);
  };
  return {{"perception", f.perception.figures()},
          {"analytics", cls(f.analytics)},
          {"planning", cls(f.planning)},
          {"execution", cls(f.execution)},
          {"knowledge", cls(f.knowledge)}};
}

SystemicFeatures features_from_json(const json& j, const ContextUniverse& universe) {
  SystemicFeatures f;
  f.perception = PerceptionSet(universe, string_set(j, "perception"));
  f.analytics = optional_class(j, "analytics");
  f.planning = optional_class(j, "planning");
  f.execution = optional_class(j, "execution");
  f.knowledge = optional_class(j, "knowledge");
  return f;
}

json hierarchy_to_json(const HierarchySpec& spec) {
  json nodes = json::array();
  for (const auto& n : spec.nodes) {
    json jn = {{"id", n.id},
               {"capabilities", n.capabilities},
               {"features", features_to_json(n.features)},
               {"depends_on", n.depends_on},
               {"state", to_string(n.state)}};
    if (!n.energy_cost_profile.empty()) jn["energy_cost_profile"] = costs_to_json(n.energy_cost_profile);
    if (n.composite) jn["composite"] = true;
    nodes.push_back(std::move(jn));
  }
  json levels = json::array();
  for (std::size_t i = 0; i < spec.levels.size(); ++i) {
    const auto& lv = spec.levels[i];
    levels.push_back({{"index", i},
                      {"members", lv.members},
                      {"canon", lv.canon ? json(*lv.canon) : json(nullptr)}});
  }
  return {{"nodes", nodes}, {"levels", levels}};
}

HierarchySpec hierarchy_from_json(const json& j, const ContextUniverse& universe) {
  HierarchySpec spec;
  for (const auto& jn : require(j, "nodes", "hierarchy")) {
    Node n;
    n.id = require(jn, "id", "node").get<std::string>();
    n.capabilities = string_set(jn, "capabilities");
    if (auto it = jn.find("features"); it != jn.end()) {
      n.features = features_from_json(*it, universe);
    } else {
      n.features.perception = PerceptionSet(universe, {});
    }
    if (auto it = jn.find("energy_cost_profile"); it != jn.end()) n.energy_cost_profile = costs_from_json(*it);
    n.depends_on = string_set(jn, "depends_on");
    n.state = parse_state(get_or<std::string>(jn, "state", "Idle"));
    n.composite = get_or(jn, "composite", false);
    spec.nodes.push_back(std::move(n));
  }
  const auto& levels = require(j, "levels", "hierarchy");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto& jl = levels[i];
    if (auto it = jl.find("index"); it != jl.end() && it->get<std::size_t>() != i) {
      throw Error(ErrorKind::Validation, "level " + std::to_string(i) + ": index field out of order");
    }
    LevelSpec lv;
    lv.members = get_or(jl, "members", std::vector<NodeId>{});
    if (auto it = jl.find("canon"); it != jl.end() && !it->is_null()) lv.canon = it->get<std::string>();
    spec.levels.push_back(std::move(lv));
  }
  return spec;
}

json scenario_to_json(const Scenario& s) {
  json protocols = json::array();
  for (const auto& p : s.protocols) {
    protocols.push_back({{"id", p.id},
                         {"required_roles", roles_to_json(p.required_roles)},
                         {"priority", p.priority},
                         {"execution_cost", p.execution_cost},
                         {"duration", p.duration}});
  }
  json situations = json::array();
  std::set<std::string> listed;
  for (const auto& sit : s.situations) {
    situations.push_back(situation_to_json(sit));
    listed.insert(sit.id);
  }
  json events = json::array();
  for (const auto& ev : s.events) {
    json je = {{"at_tick", ev.at_tick}};
    if (const auto* cc = std::get_if<ContextChange>(&ev.kind)) {
      je["kind"] = "ContextChange";
      je["figure"] = cc->figure;
      je["level"] = cc->level;
    } else if (const auto* ss = std::get_if<SituationSet>(&ev.kind)) {
      je["kind"] = "SituationSet";
      je["level"] = ss->level;
      je["situation"] = ss->situation.id;
      if (listed.insert(ss->situation.id).second) situations.push_back(situation_to_json(ss->situation));
    } else if (const auto* c = std::get_if<Catastrophe>(&ev.kind)) {
      je["kind"] = "Catastrophe";
      je["epicenter"] = c->epicenter;
      je["figures"] = c->figures;
      je["magnitude"] = c->magnitude;
    }
    events.push_back(std::move(je));
  }
  json thresholds = {{"floors", s.allocator.thresholds.floors}};
  if (s.allocator.thresholds.default_floor) thresholds["default"] = *s.allocator.thresholds.default_floor;
  json costs = json::object();
  for (Behavior b : kAllBehaviors) costs[to_string(b)] = s.behavior_costs[static_cast<int>(b)];

  return {{"name", s.name},
          {"seed", s.seed},
          {"horizon", s.horizon},
          {"universe", {{"name", s.universe.name()}, {"figures", s.universe.figures()}}},
          {"hierarchy", hierarchy_to_json(s.hierarchy)},
          {"protocols", protocols},
          {"situations", situations},
          {"events", events},
          {"budget", {{"initial", s.budget}}},
          {"allocator",
           {{"step_size", s.allocator.step_size}, {"window", s.allocator.window}, {"thresholds", thresholds}}},
          {"knowledge",
           {{"alpha", s.knowledge.alpha},
            {"beta", s.knowledge.beta},
            {"default_score", s.knowledge.default_score},
            {"recurrence_threshold", s.knowledge.recurrence_threshold},
            {"enabled", s.knowledge.enabled}}},
          {"behavior_costs", costs},
          {"repair_delay", s.repair_delay}};
}

Scenario scenario_from_json(const json& j) {
  try {
    Scenario s;
    s.name = get_or<std::string>(j, "name", "scenario");
    s.seed = get_or<std::uint64_t>(j, "seed", 0);
    s.horizon = get_or(j, "horizon", 1);

    const auto& ju = require(j, "universe", "scenario");
    if (ju.is_array()) {
      s.universe = ContextUniverse("default", ju.get<std::set<std::string>>());
    } else {
      s.universe = ContextUniverse(get_or<std::string>(ju, "name", "default"), string_set(ju, "figures"));
    }
    s.hierarchy = hierarchy_from_json(require(j, "hierarchy", "scenario"), s.universe);

    for (const auto& jp : get_or(j, "protocols", json::array())) {
      Protocol p;
      p.id = require(jp, "id", "protocol").get<std::string>();
      p.required_roles = roles_from_json(require(jp, "required_roles", "protocol '" + p.id + "'"));
      p.priority = get_or(jp, "priority", 0);
      p.execution_cost = get_or<std::int64_t>(jp, "execution_cost", 0);
      p.duration = get_or(jp, "duration", 1);
      s.protocols.push_back(std::move(p));
    }
    std::map<std::string, Situation> by_id;
    for (const auto& js : get_or(j, "situations", json::array())) {
      auto sit = situation_from_json(js);
      by_id.emplace(sit.id, sit);
      s.situations.push_back(std::move(sit));
    }
    const auto events = get_or(j, "events", json::array());
    for (std::size_t i = 0; i < events.size(); ++i) {
      const auto& je = events[i];
      const std::string where = "event " + std::to_string(i);
      Event ev;
      ev.at_tick = require(je, "at_tick", where).get<int>();
      const auto kind = require(je, "kind", where).get<std::string>();
      if (kind == "ContextChange") {
        ev.kind = ContextChange{require(je, "figure", where).get<std::string>(), get_or(je, "level", 0)};
      } else if (kind == "SituationSet") {
        const auto& js = require(je, "situation", where);
        Situation sit;
        if (js.is_string()) {
          auto it = by_id.find(js.get<std::string>());
          if (it == by_id.end()) {
            throw Error(ErrorKind::Validation, where + ": unknown situation '" + js.get<std::string>() + "'");
          }
          sit = it->second;
        } else {
          sit = situation_from_json(js);
        }
        ev.kind = SituationSet{get_or(je, "level", 1), std::move(sit)};
      } else if (kind == "Catastrophe") {
        ev.kind = Catastrophe{require(je, "epicenter", where).get<std::string>(), string_set(je, "figures"),
                              get_or(je, "magnitude", 1)};
      } else {
        throw Error(ErrorKind::Validation, where + ": unknown event kind '" + kind + "'");
      }
      s.events.push_back(std::move(ev));
    }

    if (auto it = j.find("budget"); it != j.end()) {
      s.budget = it->is_object() ? get_or<std::int64_t>(*it, "initial", 0) : it->get<std::int64_t>();
    }
    if (auto it = j.find("allocator"); it != j.end()) {
      s.allocator.step_size = get_or(*it, "step_size", 1);
      s.allocator.window = get_or(*it, "window", 5);
      if (auto th = it->find("thresholds"); th != it->end()) {
        s.allocator.thresholds.floors = get_or(*th, "floors", std::map<std::string, int>{});
        if (auto d = th->find("default"); d != th->end() && !d->is_null()) {
          s.allocator.thresholds.default_floor = d->get<int>();
        }
      }
    }
    if (auto it = j.find("knowledge"); it != j.end()) {
      auto& k = s.knowledge;
      k.alpha = get_or(*it, "alpha", k.alpha);
      k.beta = get_or(*it, "beta", k.beta);
      k.default_score = get_or(*it, "default_score", k.default_score);
      k.recurrence_threshold = get_or(*it, "recurrence_threshold", k.recurrence_threshold);
      k.enabled = get_or(*it, "enabled", k.enabled);
    }
    if (auto it = j.find("behavior_costs"); it != j.end()) {
      for (const auto& [b, c] : costs_from_json(*it)) s.behavior_costs[static_cast<int>(b)] = c;
    }
    s.repair_delay = get_or(j, "repair_delay", 10);
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Validation, std::string("malformed scenario: ") + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Validation, "cannot open scenario '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Validation, path.string() + ": " + e.what());
  }
  return scenario_from_json(j);
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << scenario_to_json(s).dump(2) << '\n';
}

}  // namespace fso
