#include "fso/hierarchy.hpp"

#include <algorithm>
#include <functional>

#include "fso/error.hpp"

namespace fso {

const char* to_string(NodeState s) {
  switch (s) {
    case NodeState::Idle: return "Idle";
    case NodeState::Enrolled: return "Enrolled";
    case NodeState::Failed: return "Failed";
  }
  return "?";
}

namespace {

std::string level_name(std::size_t i) { return "level " + std::to_string(i); }

void add(std::vector<Violation>& out, std::string subject, std::string rule, std::string message,
         Violation::Severity sev = Violation::Severity::Error) {
  out.push_back({sev, std::move(subject), std::move(rule), std::move(message)});
}

// Reports one warning per strongly connected cycle entry point found by DFS.
void find_dependency_cycles(const HierarchySpec& spec, std::vector<Violation>& warnings) {
  std::map<NodeId, const Node*> by_id;
  for (const auto& n : spec.nodes) by_id.emplace(n.id, &n);

  enum class Mark { White, Grey, Black };
  std::map<NodeId, Mark> mark;
  for (const auto& [id, _] : by_id) mark[id] = Mark::White;

  std::function<void(const NodeId&)> visit = [&](const NodeId& id) {
    mark[id] = Mark::Grey;
    for (const auto& dep : by_id.at(id)->depends_on) {
      auto it = mark.find(dep);
      if (it == mark.end()) continue;  // dangling, reported elsewhere
      if (it->second == Mark::Grey) {
        add(warnings, id, "dependency-cycle",
            "depends_on cycle through '" + id + "' -> '" + dep + "'", Violation::Severity::Warning);
      } else if (it->second == Mark::White) {
        visit(dep);
      }
    }
    mark[id] = Mark::Black;
  };
  for (const auto& [id, _] : by_id) {
    if (mark[id] == Mark::White) visit(id);
  }
}

}  // namespace

std::vector<Violation> validate(const HierarchySpec& spec) {
  std::vector<Violation> errors;
  std::vector<Violation> warnings;

  if (spec.levels.empty()) {
    add(errors, "hierarchy", "non-empty", "hierarchy has no levels");
    return errors;
  }

  std::map<NodeId, const Node*> by_id;
  std::optional<std::string> universe;
  for (const auto& n : spec.nodes) {
    if (n.id.empty()) {
      add(errors, "<empty>", "node-id", "node with empty id");
      continue;
    }
    if (!by_id.emplace(n.id, &n).second) {
      add(errors, n.id, "unique-id", "duplicate node id '" + n.id + "'");
    }
    if (!universe) {
      universe = n.features.perception.universe();
    } else if (*universe != n.features.perception.universe()) {
      add(errors, n.id, "universe", "node '" + n.id + "' perceives a different context universe");
    }
  }

  // Home level = first level listing the node.
  std::map<NodeId, std::size_t> home;
  for (std::size_t i = 0; i < spec.levels.size(); ++i) {
    std::set<NodeId> seen;
    for (const auto& m : spec.levels[i].members) {
      if (!by_id.count(m)) {
        add(errors, m, "known-member", level_name(i) + " lists undeclared node '" + m + "'");
        continue;
      }
      if (!seen.insert(m).second) {
        add(errors, m, "single-membership", "node '" + m + "' listed twice in " + level_name(i));
        continue;
      }
      auto [it, fresh] = home.emplace(m, i);
      if (fresh) continue;
      // Second level: allowed only for the canon of the level just below.
      const std::size_t first = it->second;
      const bool dual = i == first + 1 && spec.levels[first].canon == m;
      if (!dual) {
        add(errors, m, "single-membership",
            "node '" + m + "' belongs to both " + level_name(first) + " and " + level_name(i));
      }
    }
  }

  for (const auto& n : spec.nodes) {
    if (!n.id.empty() && !home.count(n.id)) {
      add(errors, n.id, "membership", "node '" + n.id + "' belongs to no level");
    }
  }

  for (std::size_t i = 0; i < spec.levels.size(); ++i) {
    const auto& lv = spec.levels[i];
    const auto& members = lv.members;
    auto listed = [&](std::size_t level, const NodeId& id) {
      const auto& ms = spec.levels[level].members;
      return std::find(ms.begin(), ms.end(), id) != ms.end();
    };
    if (i == 0) {
      if (lv.canon) {
        add(errors, *lv.canon, "leaf-level", "level 0 holds atomic leaves and cannot have a canon");
      }
      continue;
    }
    if (members.empty()) add(errors, level_name(i), "non-empty", level_name(i) + " has no members");
    if (!lv.canon) {
      add(errors, level_name(i), "canon", level_name(i) + " has no canon");
      continue;
    }
    const NodeId& canon = *lv.canon;
    if (!listed(i, canon)) {
      add(errors, canon, "canon-member", "canon '" + canon + "' is not a member of " + level_name(i));
    }
    if (i + 1 < spec.levels.size() && !listed(i + 1, canon)) {
      add(errors, canon, "canon-in-parent",
          "canon '" + canon + "' of " + level_name(i) + " is missing from " + level_name(i + 1));
    }
  }

  for (const auto& n : spec.nodes) {
    for (const auto& dep : n.depends_on) {
      if (!by_id.count(dep)) {
        add(errors, n.id, "dangling-dependency", "node '" + n.id + "' depends on unknown '" + dep + "'");
      }
    }
  }

  find_dependency_cycles(spec, warnings);
  errors.insert(errors.end(), warnings.begin(), warnings.end());
  return errors;
}

std::vector<Violation> validate(const Hierarchy& h) { return validate(h.spec()); }

Hierarchy Hierarchy::build(HierarchySpec spec) {
  for (const auto& v : validate(spec)) {
    if (v.severity == Violation::Severity::Error) {
      throw Error(ErrorKind::Validation, v.subject + ": " + v.message + " [" + v.rule + "]");
    }
  }

  Hierarchy h;
  h.spec_ = std::move(spec);
  const auto& s = h.spec_;
  for (std::size_t i = 0; i < s.nodes.size(); ++i) h.index_.emplace(s.nodes[i].id, i);

  for (std::size_t i = 0; i < s.levels.size(); ++i) {
    h.levels_.push_back({static_cast<int>(i), s.levels[i].members, s.levels[i].canon});
    for (const auto& m : s.levels[i].members) h.home_.emplace(m, static_cast<int>(i));
  }

  auto canon_of = [&](int level) -> std::optional<NodeId> {
    if (level < 0 || level > h.top()) return std::nullopt;
    return h.levels_[level].canon;
  };
  for (const auto& [id, lvl] : h.home_) {
    auto own = canon_of(lvl);
    std::optional<NodeId> p;
    if (own && *own != id) {
      p = own;
    } else {
      p = canon_of(lvl + 1);
    }
    if (p) {
      h.parent_.emplace(id, *p);
      h.children_[*p].push_back(id);
    }
  }
  for (auto& [_, kids] : h.children_) std::sort(kids.begin(), kids.end());

  for (const auto& n : s.nodes) {
    for (const auto& dep : n.depends_on) h.dependents_[dep].push_back(n.id);
  }
  for (auto& [_, deps] : h.dependents_) std::sort(deps.begin(), deps.end());
  return h;
}

const Level& Hierarchy::level(int index) const {
  if (index < 0 || index > top()) {
    throw Error(ErrorKind::UnknownLevel, "no level " + std::to_string(index));
  }
  return levels_[index];
}

const Node& Hierarchy::node(const NodeId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error(ErrorKind::Validation, "unknown node '" + id + "'");
  return spec_.nodes[it->second];
}

int Hierarchy::home_level(const NodeId& id) const {
  auto it = home_.find(id);
  if (it == home_.end()) throw Error(ErrorKind::Validation, "unknown node '" + id + "'");
  return it->second;
}

bool Hierarchy::is_canon(const NodeId& id) const {
  const int lvl = home_level(id);
  return levels_[lvl].canon == id;
}

std::optional<NodeId> Hierarchy::parent(const NodeId& id) const {
  auto it = parent_.find(id);
  if (it == parent_.end()) return std::nullopt;
  return it->second;
}

std::vector<NodeId> Hierarchy::children(const NodeId& id) const {
  auto it = children_.find(id);
  return it == children_.end() ? std::vector<NodeId>{} : it->second;
}

const std::vector<NodeId>& Hierarchy::dependents(const NodeId& id) const {
  static const std::vector<NodeId> none;
  auto it = dependents_.find(id);
  return it == dependents_.end() ? none : it->second;
}

std::vector<NodeId> Hierarchy::node_ids() const {
  std::vector<NodeId> ids;
  ids.reserve(index_.size());
  for (const auto& [id, _] : index_) ids.push_back(id);
  return ids;
}

std::vector<Level> systemic_levels(const Hierarchy& h) { return h.levels(); }

namespace {

PerceptionSet level_union(const Hierarchy& h, int level_index);

PerceptionSet represented(const Hierarchy& h, const NodeId& id, int as_member_of) {
  const int home = h.home_level(id);
  // A lower-level canon listed here stands for its whole level.
  if (home < as_member_of && h.level(home).canon == id) return level_union(h, home);
  return h.node(id).features.perception;
}

PerceptionSet level_union(const Hierarchy& h, int level_index) {
  const auto& lv = h.level(level_index);
  PerceptionSet acc = h.node(*lv.canon).features.perception;
  for (const auto& m : lv.members) acc = acc.united(represented(h, m, level_index));
  return acc;
}

}  // namespace

Node punctualize(const Hierarchy& h, int level_index) {
  const auto& lv = h.level(level_index);
  if (level_index == 0 || !lv.canon) {
    throw Error(ErrorKind::NoCanon, "level " + std::to_string(level_index) + " has no canon");
  }
  Node canon = h.node(*lv.canon);
  canon.features.perception = level_union(h, level_index);
  return canon;
}

PerceptionSet aggregated_perception(const Hierarchy& h, const NodeId& id) {
  const int home = h.home_level(id);
  if (home > 0 && h.level(home).canon == id) return level_union(h, home);
  return h.node(id).features.perception;
}

}  // namespace fso
