#include "fso/comparison.hpp"

#include <algorithm>

namespace fso {

ComparisonReport compare_systems(const Hierarchy& ha, const NodeId& a, const Hierarchy& hb,
                                 const NodeId& b, int depth) {
  ComparisonReport r;
  r.a = a;
  r.b = b;
  const auto& fa = ha.node(a).features;
  const auto& fb = hb.node(b).features;
  r.relations = {
      perception_order(aggregated_perception(ha, a), aggregated_perception(hb, b)),
      feature_order(fa.analytics, fb.analytics),
      feature_order(fa.planning, fb.planning),
      feature_order(fa.execution, fb.execution),
      feature_order(fa.knowledge, fb.knowledge),
  };
  if (depth <= 0) return r;

  const auto ca = ha.children(a);
  const auto cb = hb.children(b);
  const std::size_t n = std::min(ca.size(), cb.size());
  for (std::size_t i = 0; i < n; ++i) {
    r.children.push_back(compare_systems(ha, ca[i], hb, cb[i], depth - 1));
  }
  return r;
}

nlohmann::json to_json(const ComparisonReport& r) {
  nlohmann::json rel = nlohmann::json::object();
  for (std::size_t i = 0; i < r.relations.size(); ++i) rel[kFeatureNames[i]] = to_string(r.relations[i]);
  nlohmann::json kids = nlohmann::json::array();
  for (const auto& c : r.children) kids.push_back(to_json(c));
  return {{"a", r.a}, {"b", r.b}, {"relations", rel}, {"children", kids}};
}

}  // namespace fso
