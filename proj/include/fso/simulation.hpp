#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "fso/allocation.hpp"
#include "fso/energy.hpp"
#include "fso/hierarchy.hpp"
#include "fso/knowledge.hpp"
#include "fso/son.hpp"

namespace fso {

struct ContextChange {
  ContextFigure figure;
  int level = 0;
};

struct SituationSet {
  int level = 1;
  Situation situation;
};

struct Catastrophe {
  NodeId epicenter;
  std::set<ContextFigure> figures;
  int magnitude = 1;
};

struct Event {
  int at_tick = 0;
  std::variant<ContextChange, SituationSet, Catastrophe> kind;
};

/// Cost per behavior class, indexed by Behavior; strictly increasing.
using BehaviorCosts = std::array<std::int64_t, 4>;
inline constexpr BehaviorCosts kDefaultBehaviorCosts = {1, 2, 4, 8};

struct AllocatorConfig {
  int step_size = 1;
  int window = 5;
  ThresholdPolicy thresholds;
};

struct Scenario {
  std::string name = "scenario";
  ContextUniverse universe{"default", {}};
  HierarchySpec hierarchy;
  std::vector<Protocol> protocols;
  std::vector<Situation> situations;
  std::vector<Event> events;
  std::int64_t budget = 0;
  AllocatorConfig allocator;
  KnowledgeConfig knowledge;
  BehaviorCosts behavior_costs = kDefaultBehaviorCosts;
  int repair_delay = 10;
  std::uint64_t seed = 0;
  int horizon = 1;
};

/// Everything wrong with a scenario; errors before warnings.
std::vector<Violation> validate_scenario(const Scenario& s);

// --- metrics -------------------------------------------------------------

struct AllocatorRow {
  int tick = 0;
  int level = 0;
  std::string situation;
  int required = 0;
  int fired = 0;
  int undershoot = 0;
  int overshoot = 0;
  Rational dtof{0};
  AllocationDecision decision;
  int capacity = 0;
};

/// Outcomes: complete (formed locally), resolved (formed by escalation),
/// pending, success, starved, failed, permanentified.
struct SonEventRow {
  int tick = 0;
  std::string protocol;
  std::string signature;
  std::set<int> levels_spanned;
  std::string outcome;
};

struct EnergyRow {
  int tick = 0;
  std::int64_t spent = 0;         // this tick
  std::int64_t ledger_total = 0;  // sum of all ledger entries so far
  std::int64_t remaining = 0;
};

struct Notification {
  NodeId origin;
  std::string cause;
};

struct Delivery {
  NodeId canon;
  int level = 0;
};

struct NotificationRecord {
  int tick = 0;
  NodeId origin;
  int origin_level = 0;
  NodeId canon;
  int canon_level = 0;
  std::string cause;
};

struct CatastropheRecord {
  int tick = 0;
  NodeId epicenter;
  std::set<ContextFigure> figures;
  int magnitude = 0;
  std::map<NodeId, int> affected;  // node -> hop distance
  std::set<NodeId> failed;
  std::set<NodeId> perceivers;
};

struct BehaviorRecord {
  int tick = 0;
  NodeId node;
  std::optional<Behavior> behavior;  // nullopt = abstained
  std::int64_t cost = 0;
};

struct LatencyRecord {
  int set_at = 0;
  int level = 0;
  std::string situation;
  std::optional<int> latency;  // ticks until the first SON serving it
};

struct PermanentRecord {
  int tick = 0;
  std::string signature;
  NodeId node;
  int level = 0;
};

struct MetricsReport {
  std::string scenario;
  std::uint64_t seed = 0;
  int horizon = 0;
  bool knowledge_enabled = true;
  std::vector<AllocatorRow> allocator;
  std::vector<SonEventRow> son_events;
  std::vector<EnergyRow> energy;
  std::vector<LedgerEntry> ledger;
  std::int64_t initial_budget = 0;
  std::vector<NotificationRecord> notifications;
  std::vector<CatastropheRecord> catastrophes;
  std::vector<BehaviorRecord> behaviors;
  std::vector<LatencyRecord> latencies;
  std::map<int, int> escalations_per_level;  // keyed by origin level
  std::vector<PermanentRecord> permanentifications;
  ScoreLedger scores;
};

// --- kernel operations -------------------------------------------------

struct RippleResult {
  std::map<NodeId, int> hops;  // affected node -> distance from epicenter
  std::set<NodeId> perceivers;
};

/// Breadth-first over reverse depends_on edges (dependents of affected
/// nodes), at most `magnitude` hops, each node visited once. Perceivers are
/// the affected nodes whose own perception meets `figures`.
RippleResult ripple(const Hierarchy& h, const NodeId& epicenter, const std::set<ContextFigure>& figures,
                    int magnitude);

/// Canons that receive a notification from `n.origin`: the canon of the
/// origin's level, then each ancestor canon, in ascending level order.
std::vector<Delivery> publish(const Hierarchy& h, const Notification& n);

/// Most complex affordable behavior not above the node's class ceiling.
std::optional<Behavior> choose_behavior(const BehaviorCosts& costs, Behavior node_class,
                                        std::int64_t remaining);

/// Scenario defaults overridden by the node's own cost profile.
BehaviorCosts node_costs(const Node& node, const BehaviorCosts& defaults);

/// Levels that run an allocator: every level with a canon, or level 0 when
/// the hierarchy has a single level.
std::vector<int> governing_levels(const Hierarchy& h);

/// Executes ticks [0, horizon). Throws Error(Validation) naming the first
/// offending entity if the scenario does not validate.
MetricsReport run(const Scenario& scenario);

}  // namespace fso
