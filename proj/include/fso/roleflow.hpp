#pragma once

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "fso/energy.hpp"
#include "fso/hierarchy.hpp"
#include "fso/knowledge.hpp"
#include "fso/son.hpp"

namespace fso {

/// Runtime state of every node of a run. Hierarchy values stay immutable;
/// enrollment and failures are tracked here.
class Roster {
 public:
  explicit Roster(const Hierarchy& h);

  NodeState state(const NodeId& id) const;
  void set(const NodeId& id, NodeState s);
  bool idle(const NodeId& id) const { return state(id) == NodeState::Idle; }
  /// Registers nodes added since construction (permanent nodes) as Idle.
  void sync(const Hierarchy& h);
  const std::map<NodeId, NodeState>& states() const noexcept { return states_; }

 private:
  std::map<NodeId, NodeState> states_;
};

struct Placement {
  Role role;
  NodeId node;
  int level = 0;
};

/// Raised when a level cannot fill every role instance of a protocol.
/// `partial` holds the instances that were filled and are reserved.
struct RoleException {
  std::string protocol_id;
  int origin_level = 0;
  RoleMultiset missing;
  std::vector<Placement> partial;
};

struct Complete {
  std::vector<Placement> placements;
};

using EnrollmentResult = std::variant<Complete, RoleException>;
/// A formed SON, or the exception left over once the top level is exhausted.
using EscalationResult = std::variant<SON, RoleException>;

struct MatchResult {
  std::vector<Placement> filled;
  RoleMultiset missing;
};

/// Fills as many role instances as possible from `pool` (nodes of `level`),
/// one instance per regular node, one instance per role for composite nodes.
/// Instances are served in role order; each tries its candidates by rank and
/// may displace an earlier pick along an augmenting path, so the result is a
/// maximum matching that equals plain greedy whenever greedy succeeds.
MatchResult match_roles(const RoleMultiset& needed, const std::vector<NodeId>& pool, int level,
                        const Hierarchy& h, const ScoreLedger& scores);

/// Tries to launch `p` from the Idle nodes of `level_index`. Chosen nodes are
/// marked Enrolled; on exception the partial picks stay reserved until
/// escalate() completes or rolls them back.
EnrollmentResult enroll(const Protocol& p, int level_index, const Hierarchy& h,
                        const ScoreLedger& scores, Roster& roster);

/// Searches the levels above the exception's origin, in ascending order, for
/// the missing roles. The origin is never searched again.
EscalationResult escalate(const RoleException& e, const Protocol& p, const Hierarchy& h,
                          const ScoreLedger& scores, Roster& roster, int tick,
                          const std::string& son_id);

/// Returns reserved nodes of an abandoned exception to Idle.
void release(const RoleException& e, Roster& roster);

SON form_son(const std::string& id, const Protocol& p, const std::vector<Placement>& placements,
             int origin_level, int tick);

/// Debits execution_cost x |assignment| per tick, ticks numbered from
/// `first_tick`. Stops at the first unfundable tick without debiting it.
ExecutionOutcome execute(const SON& son, const Protocol& p, EnergyBudget& budget, int ticks,
                         int first_tick = 1);

/// Owns active SONs and their history for one run.
class RoleFlowEngine {
 public:
  struct Record {
    SON son;
    int dissolved_at = 0;
    ExecutionOutcome outcome;
    int lifetime = 0;
  };

  explicit RoleFlowEngine(const Hierarchy& h) : roster_(h) {}

  Roster& roster() noexcept { return roster_; }
  const Roster& roster() const noexcept { return roster_; }

  std::string next_son_id();
  const SON& activate(SON son);
  /// Returns nodes to Idle (Failed nodes stay Failed) and archives the SON.
  /// Dissolving an unknown or already dissolved SON does nothing.
  bool dissolve(const std::string& son_id, int tick, const ExecutionOutcome& outcome);

  const std::map<std::string, SON>& active() const noexcept { return active_; }
  const std::vector<Record>& history() const noexcept { return history_; }

 private:
  Roster roster_;
  std::map<std::string, SON> active_;
  std::vector<Record> history_;
  int next_id_ = 0;
};

}  // namespace fso
