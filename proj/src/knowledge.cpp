#include "fso/knowledge.hpp"

#include <algorithm>
#include <stdexcept>

namespace fso {

ScoreLedger::ScoreLedger(double default_score) : default_score_(default_score) {
  if (!(default_score >= 0.0 && default_score <= 1.0)) {
    throw std::invalid_argument("default score outside [0,1]");
  }
}

double ScoreLedger::score(const NodeId& node, const Role& role) const {
  auto it = scores_.find({node, role});
  return it == scores_.end() ? default_score_ : it->second;
}

void ScoreLedger::set(const NodeId& node, const Role& role, double value) {
  scores_[{node, role}] = std::clamp(value, 0.0, 1.0);
}

ScoreLedger record_outcome(ScoreLedger ledger, const SON& son, const ExecutionOutcome& outcome,
                           double alpha, double beta) {
  for (const auto& [role, node] : son.assignment) {
    const double s = ledger.score(node, role);
    ledger.set(node, role, outcome.ok() ? s + alpha * (1.0 - s) : beta * s);
  }
  return ledger;
}

std::vector<NodeId> rank(const ScoreLedger& ledger, const Role& role, std::vector<NodeId> candidates) {
  std::stable_sort(candidates.begin(), candidates.end(), [&](const NodeId& a, const NodeId& b) {
    const double sa = ledger.score(a, role);
    const double sb = ledger.score(b, role);
    if (sa != sb) return sa > sb;
    return a < b;
  });
  return candidates;
}

RecurrenceTracker::RecurrenceTracker(int threshold) : threshold_(threshold) {
  if (threshold < 2) throw std::invalid_argument("recurrence threshold must be >= 2");
}

int RecurrenceTracker::count(const std::string& signature) const {
  auto it = counts_.find(signature);
  return it == counts_.end() ? 0 : it->second;
}

std::pair<RecurrenceTracker, bool> observe_son(RecurrenceTracker tracker, const SON& son) {
  const int c = ++tracker.counts_[son.signature];
  const bool recurred = c >= tracker.threshold_;
  return {std::move(tracker), recurred};
}

NodeId permanent_node_id(const std::string& signature) { return "perm(" + signature + ")"; }

Hierarchy permanentify(const Hierarchy& h, const SON& son) {
  const NodeId id = permanent_node_id(son.signature);
  if (h.contains(id) || son.assignment.empty()) return h;

  Node perm;
  perm.id = id;
  perm.composite = true;
  bool first = true;
  auto raise = [](std::optional<Gestalt>& acc, const std::optional<Gestalt>& v) {
    if (v && (!acc || *v > *acc)) acc = v;
  };
  for (const auto& [role, member] : son.assignment) {
    perm.capabilities.insert(role);
    perm.depends_on.insert(member);
    const auto& f = h.node(member).features;
    if (first) {
      perm.features.perception = f.perception;
      first = false;
    } else {
      perm.features.perception = perm.features.perception.united(f.perception);
    }
    raise(perm.features.analytics, f.analytics);
    raise(perm.features.planning, f.planning);
    raise(perm.features.execution, f.execution);
    raise(perm.features.knowledge, f.knowledge);
  }

  HierarchySpec spec = h.spec();
  const int lowest = son.levels_spanned.empty() ? 0 : *son.levels_spanned.begin();
  spec.levels.at(lowest).members.push_back(id);
  spec.nodes.push_back(std::move(perm));
  return Hierarchy::build(std::move(spec));
}

}  // namespace fso
