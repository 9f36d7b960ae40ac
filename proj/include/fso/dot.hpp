#pragma once

#include <string>
#include <vector>

#include "fso/hierarchy.hpp"
#include "fso/sonspace.hpp"

namespace fso {

/// Containment forest: one vertex per node (sorted by id), one edge
/// child -> parent per containment edge (sorted by child id).
std::string hierarchy_dot(const Hierarchy& h);

/// SON space: vertices a0..an-1 in canonical order, an undirected edge for
/// every pair differing in exactly one role instance's node.
std::string son_space_dot(const CapabilityMatrix& m, const std::vector<SpaceAssignment>& space);

}  // namespace fso
