#pragma once

#include <array>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fso/classification.hpp"
#include "fso/hierarchy.hpp"

namespace fso {

/// Feature-by-feature comparison of two systems, recursing into their
/// containment children. Relations are ordered M, A, P, E, K.
struct ComparisonReport {
  NodeId a;
  NodeId b;
  std::array<OrderRelation, 5> relations{};
  std::vector<ComparisonReport> children;
};

inline constexpr std::array<const char*, 5> kFeatureNames = {"M", "A", "P", "E", "K"};

/// Perception is compared with perception_order (a canon stands for its
/// whole level's aggregate), the ranked features with feature_order.
/// Children are paired in id order; the tree stops at the shorter child
/// list, at leaves, and at `depth`.
ComparisonReport compare_systems(const Hierarchy& ha, const NodeId& a, const Hierarchy& hb,
                                 const NodeId& b, int depth);

nlohmann::json to_json(const ComparisonReport& r);

}  // namespace fso
