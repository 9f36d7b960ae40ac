#include "fso/allocation.hpp"

#include <algorithm>

#include "fso/error.hpp"

namespace fso {

std::string to_string(const AllocationDecision& d) {
  switch (d.kind) {
    case AllocationDecision::Kind::NoChange: return "NoChange";
    case AllocationDecision::Kind::Reselect: return "Reselect";
    case AllocationDecision::Kind::Enroll: return "Enroll(" + std::to_string(d.count) + ")";
    case AllocationDecision::Kind::Free: return "Free(" + std::to_string(d.count) + ")";
  }
  return "?";
}

Rational dtof(const AllocationState& state) {
  if (state.capacity <= 0) throw Error(ErrorKind::UndefinedCapacity, "DTOF of a level with no capacity");
  return Rational(state.undershoot, state.capacity);
}

Zone assess(int fired, const Situation& situation, int capacity) {
  (void)capacity;
  if (fired < situation.required) return {Zone::Kind::Unsafe, situation.required - fired};
  if (fired > situation.required) return {Zone::Kind::Overabundant, fired - situation.required};
  return {};
}

AllocationDecision step(AllocationState& state, const Situation& situation, int min_threshold,
                        const SelectionView& view) {
  const bool changed = state.last_situation &&
                       (*state.last_situation != situation.id || state.last_required != situation.required);
  const bool raised = changed && situation.required > state.last_required;
  if (changed) state.overabundant_streak = 0;
  state.last_situation = situation.id;
  state.last_required = situation.required;

  const Zone zone = assess(state.fired, situation, state.capacity);
  state.undershoot = zone.kind == Zone::Kind::Unsafe ? zone.amount : 0;
  state.overshoot = zone.kind == Zone::Kind::Overabundant ? zone.amount : 0;
  if (state.capacity > 0) {
    state.dtof_history.push_back(dtof(state));
    while (static_cast<int>(state.dtof_history.size()) > std::max(state.window, 1)) {
      state.dtof_history.pop_front();
    }
  }

  switch (zone.kind) {
    case Zone::Kind::Optimal:
      state.overabundant_streak = 0;
      return AllocationDecision::no_change();

    case Zone::Kind::Unsafe: {
      state.overabundant_streak = 0;
      if (state.fired > 0 && view.best_idle_score && view.worst_active_score &&
          *view.best_idle_score > *view.worst_active_score) {
        return AllocationDecision::reselect();
      }
      const int idle = state.capacity - state.fired - view.unavailable;
      const int k = std::min({state.step_size, zone.amount, idle});
      return k >= 1 ? AllocationDecision::enroll(k) : AllocationDecision::no_change();
    }

    case Zone::Kind::Overabundant: {
      ++state.overabundant_streak;
      // A raised requirement never frees on the tick it arrives.
      if (raised || !situation.stable || state.overabundant_streak < state.window) {
        return AllocationDecision::no_change();
      }
      const int k = std::min({state.step_size, zone.amount, state.fired - min_threshold});
      if (k < 1) return AllocationDecision::no_change();
      state.overabundant_streak = 0;
      return AllocationDecision::free(k);
    }
  }
  return AllocationDecision::no_change();
}

int min_threshold(const Situation& situation, const ThresholdPolicy& policy) {
  if (situation.critical) return situation.required;
  int floor;
  if (auto it = policy.floors.find(situation.id); it != policy.floors.end()) {
    floor = it->second;
  } else if (policy.default_floor) {
    floor = *policy.default_floor;
  } else {
    throw Error(ErrorKind::Configuration, "no minimum threshold for situation '" + situation.id + "'");
  }
  return std::clamp(floor, 0, situation.required);
}

}  // namespace fso
