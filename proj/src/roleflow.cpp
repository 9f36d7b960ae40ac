#include "fso/roleflow.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>

#include "fso/error.hpp"

namespace fso {

Roster::Roster(const Hierarchy& h) { sync(h); }

NodeState Roster::state(const NodeId& id) const {
  auto it = states_.find(id);
  if (it == states_.end()) throw Error(ErrorKind::Validation, "unknown node '" + id + "'");
  return it->second;
}

void Roster::set(const NodeId& id, NodeState s) {
  auto it = states_.find(id);
  if (it == states_.end()) throw Error(ErrorKind::Validation, "unknown node '" + id + "'");
  it->second = s;
}

void Roster::sync(const Hierarchy& h) {
  for (const auto& n : h.spec().nodes) states_.emplace(n.id, n.state);
}

MatchResult match_roles(const RoleMultiset& needed, const std::vector<NodeId>& pool, int level,
                        const Hierarchy& h, const ScoreLedger& scores) {
  struct Slot {
    Role role;
    std::vector<NodeId> candidates;
  };
  std::vector<Slot> slots;
  for (const auto& [role, k] : needed) {
    std::vector<NodeId> capable;
    for (const auto& id : pool) {
      if (h.node(id).capabilities.count(role)) capable.push_back(id);
    }
    auto ranked = rank(scores, role, std::move(capable));
    for (int i = 0; i < k; ++i) slots.push_back({role, ranked});
  }

  // Capacity unit a slot occupies: the node, or (node, role) for composites.
  auto unit = [&](const NodeId& id, const Role& role) {
    return h.node(id).composite ? id + '\x1f' + role : id;
  };
  std::map<std::string, std::size_t> owner;  // unit -> slot
  std::vector<std::optional<NodeId>> pick(slots.size());

  std::function<bool(std::size_t, std::set<std::string>&)> augment =
      [&](std::size_t s, std::set<std::string>& seen) {
        for (const auto& cand : slots[s].candidates) {
          const auto u = unit(cand, slots[s].role);
          if (!seen.insert(u).second) continue;
          auto it = owner.find(u);
          if (it == owner.end() || augment(it->second, seen)) {
            owner[u] = s;
            pick[s] = cand;
            return true;
          }
        }
        return false;
      };

  MatchResult out;
  for (std::size_t s = 0; s < slots.size(); ++s) {
    std::set<std::string> seen;
    augment(s, seen);
  }
  for (std::size_t s = 0; s < slots.size(); ++s) {
    if (pick[s]) {
      out.filled.push_back({slots[s].role, *pick[s], level});
    } else {
      ++out.missing[slots[s].role];
    }
  }
  return out;
}

namespace {

std::vector<NodeId> idle_members(const Hierarchy& h, int level, const Roster& roster) {
  std::vector<NodeId> out;
  for (const auto& m : h.level(level).members) {
    if (roster.idle(m)) out.push_back(m);
  }
  return out;
}

void reserve(const std::vector<Placement>& ps, Roster& roster) {
  for (const auto& p : ps) roster.set(p.node, NodeState::Enrolled);
}

}  // namespace

EnrollmentResult enroll(const Protocol& p, int level_index, const Hierarchy& h,
                        const ScoreLedger& scores, Roster& roster) {
  if (level_index < 0 || level_index > h.top()) {
    throw Error(ErrorKind::UnknownLevel,
                "protocol '" + p.id + "' enrolled at unknown level " + std::to_string(level_index));
  }
  auto m = match_roles(p.required_roles, idle_members(h, level_index, roster), level_index, h, scores);
  reserve(m.filled, roster);
  if (m.missing.empty()) return Complete{std::move(m.filled)};
  return RoleException{p.id, level_index, std::move(m.missing), std::move(m.filled)};
}

void release(const RoleException& e, Roster& roster) {
  for (const auto& pl : e.partial) {
    if (roster.state(pl.node) == NodeState::Enrolled) roster.set(pl.node, NodeState::Idle);
  }
}

SON form_son(const std::string& id, const Protocol& p, const std::vector<Placement>& placements,
             int origin_level, int tick) {
  SON son;
  son.id = id;
  son.protocol_id = p.id;
  son.formed_at = tick;
  son.levels_spanned.insert(origin_level);
  for (const auto& pl : placements) {
    son.assignment.emplace_back(pl.role, pl.node);
    son.levels_spanned.insert(pl.level);
  }
  canonicalize(son.assignment);
  son.signature = son_signature(p.id, son.assignment);
  return son;
}

EscalationResult escalate(const RoleException& e, const Protocol& p, const Hierarchy& h,
                          const ScoreLedger& scores, Roster& roster, int tick,
                          const std::string& son_id) {
  RoleException cur = e;
  for (int level = e.origin_level + 1; level <= h.top() && !cur.missing.empty(); ++level) {
    auto m = match_roles(cur.missing, idle_members(h, level, roster), level, h, scores);
    reserve(m.filled, roster);
    cur.partial.insert(cur.partial.end(), m.filled.begin(), m.filled.end());
    cur.missing = std::move(m.missing);
  }
  if (cur.missing.empty()) return form_son(son_id, p, cur.partial, e.origin_level, tick);

  release(cur, roster);
  cur.partial.clear();
  return cur;
}

ExecutionOutcome execute(const SON& son, const Protocol& p, EnergyBudget& budget, int ticks,
                         int first_tick) {
  int last = first_tick - 1;
  for (int t = first_tick; t < first_tick + ticks; ++t) {
    std::vector<LedgerEntry> debit;
    debit.reserve(son.assignment.size());
    for (const auto& [role, node] : son.assignment) {
      debit.push_back({t, node, p.execution_cost, "son " + son.id + " " + role});
    }
    if (!budget.try_debit(debit)) return {ExecutionOutcome::Kind::Starved, t};
    last = t;
  }
  return {ExecutionOutcome::Kind::Success, last};
}

std::string RoleFlowEngine::next_son_id() {
  char buf[32];
  std::snprintf(buf, sizeof buf, "son-%06d", next_id_++);
  return buf;
}

const SON& RoleFlowEngine::activate(SON son) {
  for (const auto& [_, node] : son.assignment) {
    if (roster_.state(node) != NodeState::Failed) roster_.set(node, NodeState::Enrolled);
  }
  auto id = son.id;
  return active_.insert_or_assign(id, std::move(son)).first->second;
}

bool RoleFlowEngine::dissolve(const std::string& son_id, int tick, const ExecutionOutcome& outcome) {
  auto it = active_.find(son_id);
  if (it == active_.end()) return false;
  for (const auto& [_, node] : it->second.assignment) {
    if (roster_.state(node) == NodeState::Enrolled) roster_.set(node, NodeState::Idle);
  }
  const int lifetime = tick - it->second.formed_at;
  history_.push_back({std::move(it->second), tick, outcome, lifetime});
  active_.erase(it);
  return true;
}

}  // namespace fso
