#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fso/classification.hpp"

namespace fso {

using NodeId = std::string;
using Role = std::string;

enum class NodeState { Idle, Enrolled, Failed };
const char* to_string(NodeState s);

struct Node {
  NodeId id;
  std::set<Role> capabilities;
  SystemicFeatures features;
  // Per-node override of the scenario's behavior cost schedule.
  std::map<Behavior, std::int64_t> energy_cost_profile;
  std::set<NodeId> depends_on;
  NodeState state = NodeState::Idle;
  // Permanent node standing for a recurring SON. It may hold one instance of
  // each distinct role it is capable of, never two instances of one role.
  bool composite = false;

  friend bool operator==(const Node&, const Node&) = default;
};

struct LevelSpec {
  std::vector<NodeId> members;
  std::optional<NodeId> canon;

  friend bool operator==(const LevelSpec&, const LevelSpec&) = default;
};

/// Declarative input to Hierarchy::build. Level i is levels[i].
struct HierarchySpec {
  std::vector<Node> nodes;
  std::vector<LevelSpec> levels;

  friend bool operator==(const HierarchySpec&, const HierarchySpec&) = default;
};

struct Level {
  int index = 0;
  std::vector<NodeId> members;
  std::optional<NodeId> canon;
};

struct Violation {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string subject;  // offending node id, or "level <i>"
  std::string rule;
  std::string message;
};

/// All rule violations of a spec, errors first in discovery order, then
/// warnings. An empty result (or warnings only) means the spec builds.
std::vector<Violation> validate(const HierarchySpec& spec);

/// Nested compositional hierarchy. Immutable once built.
///
/// Level 0 holds atomic leaves and has no canon. Every level i >= 1 has a
/// canon that is one of its own members and, when level i+1 exists, is also
/// listed among the members of level i+1. That second membership is the only
/// way a node may appear in two levels; the node's home level is the lower.
///
/// Containment: a node's parent is the canon of its home level, or (for
/// level-0 leaves and for canons themselves) the canon of the next level up.
/// Nodes without a parent sit at the top level.
class Hierarchy {
 public:
  /// Throws Error(Validation) naming the first offending node or level.
  static Hierarchy build(HierarchySpec spec);

  const HierarchySpec& spec() const noexcept { return spec_; }
  const std::vector<Level>& levels() const noexcept { return levels_; }
  int top() const noexcept { return static_cast<int>(levels_.size()) - 1; }
  const Level& level(int index) const;

  bool contains(const NodeId& id) const { return index_.count(id) != 0; }
  const Node& node(const NodeId& id) const;
  int home_level(const NodeId& id) const;
  bool is_canon(const NodeId& id) const;

  std::optional<NodeId> parent(const NodeId& id) const;
  /// Containment children, sorted by id.
  std::vector<NodeId> children(const NodeId& id) const;
  /// Nodes whose depends_on lists `id`, sorted by id.
  const std::vector<NodeId>& dependents(const NodeId& id) const;
  /// Every node id in ascending order.
  std::vector<NodeId> node_ids() const;
  const std::map<NodeId, NodeId>& edges() const noexcept { return parent_; }

 private:
  Hierarchy() = default;

  HierarchySpec spec_;
  std::vector<Level> levels_;
  std::map<NodeId, std::size_t> index_;
  std::map<NodeId, int> home_;
  std::map<NodeId, NodeId> parent_;
  std::map<NodeId, std::vector<NodeId>> children_;
  std::map<NodeId, std::vector<NodeId>> dependents_;
};

std::vector<Violation> validate(const Hierarchy& h);

/// Levels in ascending index order.
std::vector<Level> systemic_levels(const Hierarchy& h);

/// The canon of `level_index`, with perception replaced by the aggregated
/// perception of the level: the union over members, where a member that is
/// itself the canon of a lower level contributes that level's aggregate.
/// Throws NoCanon for level 0 and for canonless levels.
Node punctualize(const Hierarchy& h, int level_index);

/// Perception a node stands for: its own, or the level aggregate if it is a canon.
PerceptionSet aggregated_perception(const Hierarchy& h, const NodeId& id);

}  // namespace fso
