#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "fso/classification.hpp"

namespace fso {

using Rational = boost::rational<std::int64_t>;

/// A recognized context state and the amount of nodes it calls for.
struct Situation {
  std::string id;
  int required = 0;
  bool stable = true;
  bool critical = false;  // no decay below `required`
  std::set<ContextFigure> relevant_figures;
  std::vector<std::string> protocols;  // reaction protocols the situation fires
};

struct Zone {
  enum class Kind { Unsafe, Overabundant, Optimal };
  Kind kind = Kind::Optimal;
  int amount = 0;  // undershoot when Unsafe, overshoot when Overabundant

  friend bool operator==(const Zone&, const Zone&) = default;
};

struct AllocationDecision {
  enum class Kind { NoChange, Enroll, Free, Reselect };
  Kind kind = Kind::NoChange;
  int count = 0;  // >= 1 for Enroll and Free

  static AllocationDecision no_change() { return {}; }
  static AllocationDecision enroll(int k) { return {Kind::Enroll, k}; }
  static AllocationDecision free(int k) { return {Kind::Free, k}; }
  static AllocationDecision reselect() { return {Kind::Reselect, 0}; }

  friend bool operator==(const AllocationDecision&, const AllocationDecision&) = default;
};

std::string to_string(const AllocationDecision& d);

/// Allocator state of one governing level.
struct AllocationState {
  int capacity = 0;    // N: nodes available at the level
  int fired = 0;       // currently activated nodes
  int undershoot = 0;  // max(0, required - fired)
  int overshoot = 0;   // max(0, fired - required)
  int window = 5;      // consecutive overabundant assessments needed to free
  int step_size = 1;
  int overabundant_streak = 0;
  std::deque<Rational> dtof_history;  // last `window` values
  std::optional<std::string> last_situation;
  int last_required = 0;
};

/// What the allocator can see of the nodes beyond the raw counts.
struct SelectionView {
  int unavailable = 0;  // failed nodes that cannot be activated
  std::optional<double> best_idle_score;
  std::optional<double> worst_active_score;
};

/// undershoot / capacity, exactly. Throws UndefinedCapacity when capacity is 0.
Rational dtof(const AllocationState& state);

Zone assess(int fired, const Situation& situation, int capacity);

/// Assesses the allocation against `situation` and picks the next move.
/// Updates the streak, undershoot/overshoot and DTOF history of `state`;
/// the caller applies the decision and writes back the new `fired`.
AllocationDecision step(AllocationState& state, const Situation& situation, int min_threshold,
                        const SelectionView& view = {});

/// Floors per situation id, fixed ahead of the run.
struct ThresholdPolicy {
  std::map<std::string, int> floors;
  std::optional<int> default_floor;
};

/// Configured floor clamped to [0, required]; `required` for critical
/// situations. Throws Configuration if the policy has no entry.
int min_threshold(const Situation& situation, const ThresholdPolicy& policy);

}  // namespace fso
