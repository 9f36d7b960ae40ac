#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fso/hierarchy.hpp"

namespace fso {

/// Role -> multiplicity. Multiplicities are >= 1.
using RoleMultiset = std::map<Role, int>;

int total_instances(const RoleMultiset& roles);

struct Protocol {
  std::string id;
  RoleMultiset required_roles;
  int priority = 0;  // larger runs first
  std::int64_t execution_cost = 0;  // per enrolled node per tick
  int duration = 1;  // ticks a formed SON executes before dissolving
};

/// One (role, node) pair per filled role instance, kept sorted so that two
/// assignments of the same nodes to the same roles compare equal.
using Assignment = std::vector<std::pair<Role, NodeId>>;

void canonicalize(Assignment& a);
RoleMultiset roles_of(const Assignment& a);

/// "protocol:role@node;role@node" over the canonical assignment.
std::string son_signature(const std::string& protocol_id, const Assignment& assignment);

struct SON {
  std::string id;
  std::string protocol_id;
  Assignment assignment;
  std::set<int> levels_spanned;
  int formed_at = 0;
  std::string signature;
};

struct ExecutionOutcome {
  enum class Kind { Success, Starved, Failed };
  Kind kind = Kind::Success;
  int tick = 0;  // tick of starvation / failure; last funded tick on success

  bool ok() const noexcept { return kind == Kind::Success; }
};

const char* to_string(ExecutionOutcome::Kind k);

}  // namespace fso
