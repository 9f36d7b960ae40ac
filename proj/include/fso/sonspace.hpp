#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fso/hierarchy.hpp"
#include "fso/son.hpp"

namespace fso {

/// Which node can play which role. Row-major: can_play[node * roles + role].
struct CapabilityMatrix {
  std::vector<NodeId> nodes;
  std::vector<Role> roles;
  std::vector<std::uint8_t> can_play;

  CapabilityMatrix() = default;
  CapabilityMatrix(std::vector<NodeId> nodes, std::vector<Role> roles);

  bool at(std::size_t node, std::size_t role) const { return can_play[node * roles.size() + role] != 0; }
  void set(std::size_t node, std::size_t role, bool v = true) {
    can_play[node * roles.size() + role] = v ? 1 : 0;
  }
  std::size_t role_index(const Role& r) const;  // throws UnknownRole
};

/// Nodes sorted by id; roles are the sorted union of capabilities.
CapabilityMatrix capability_matrix(const Hierarchy& h);

/// One entry per required role (in matrix role order): the sorted node
/// indices filling that role's instances.
struct SpaceAssignment {
  std::vector<std::pair<std::size_t, std::vector<std::size_t>>> blocks;

  friend bool operator==(const SpaceAssignment&, const SpaceAssignment&) = default;
  friend auto operator<=>(const SpaceAssignment&, const SpaceAssignment&) = default;
};

Assignment to_assignment(const CapabilityMatrix& m, const SpaceAssignment& a);

// Reference implementations: single-threaded backtracking.
std::vector<SpaceAssignment> enumerate_serial(const CapabilityMatrix& m, const RoleMultiset& roles);
std::uint64_t count_serial(const CapabilityMatrix& m, const RoleMultiset& roles);

// OpenMP versions. Work is split over the first role block's choices; output
// order is the same canonical order as the serial reference.
std::vector<SpaceAssignment> enumerate(const CapabilityMatrix& m, const RoleMultiset& roles);
std::uint64_t count(const CapabilityMatrix& m, const RoleMultiset& roles);

inline std::vector<SpaceAssignment> enumerate(const CapabilityMatrix& m, const Protocol& p) {
  return enumerate(m, p.required_roles);
}
inline std::uint64_t count(const CapabilityMatrix& m, const Protocol& p) {
  return count(m, p.required_roles);
}

/// Edges of the SON-space graph: pairs (i < j) of assignments that differ in
/// exactly one role instance's node.
std::vector<std::pair<std::size_t, std::size_t>> son_space_edges(
    const std::vector<SpaceAssignment>& space);

}  // namespace fso
