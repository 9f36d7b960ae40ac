#include "fso/son.hpp"

#include <algorithm>

namespace fso {

int total_instances(const RoleMultiset& roles) {
  int n = 0;
  for (const auto& [_, k] : roles) n += k;
  return n;
}

void canonicalize(Assignment& a) { std::sort(a.begin(), a.end()); }

RoleMultiset roles_of(const Assignment& a) {
  RoleMultiset out;
  for (const auto& [role, _] : a) ++out[role];
  return out;
}

std::string son_signature(const std::string& protocol_id, const Assignment& assignment) {
  Assignment sorted = assignment;
  canonicalize(sorted);
  std::string sig = protocol_id + ":";
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i) sig += ';';
    sig += sorted[i].first + "@" + sorted[i].second;
  }
  return sig;
}

const char* to_string(ExecutionOutcome::Kind k) {
  switch (k) {
    case ExecutionOutcome::Kind::Success: return "success";
    case ExecutionOutcome::Kind::Starved: return "starved";
    case ExecutionOutcome::Kind::Failed: return "failed";
  }
  return "?";
}

}  // namespace fso
