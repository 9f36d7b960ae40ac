#include "fso/classification.hpp"

#include <algorithm>
#include <iterator>

#include "fso/error.hpp"

namespace fso {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UniverseMismatch: return "universe-mismatch";
    case ErrorKind::UndefinedCapacity: return "undefined-capacity";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::NoCanon: return "no-canon";
    case ErrorKind::UnknownProtocol: return "unknown-protocol";
    case ErrorKind::UnknownLevel: return "unknown-level";
    case ErrorKind::UnknownRole: return "unknown-role";
    case ErrorKind::Configuration: return "configuration";
  }
  return "?";
}

ContextUniverse::ContextUniverse(std::string name, std::set<ContextFigure> figures)
    : name_(std::move(name)), figures_(std::move(figures)) {
  for (const auto& f : figures_) {
    if (f.empty()) throw Error(ErrorKind::Validation, "universe '" + name_ + "': empty figure id");
  }
}

PerceptionSet::PerceptionSet(const ContextUniverse& universe, std::set<ContextFigure> figures)
    : universe_(universe.name()), figures_(std::move(figures)) {
  for (const auto& f : figures_) {
    if (!universe.contains(f)) {
      throw Error(ErrorKind::Validation,
                  "figure '" + f + "' is not part of universe '" + universe.name() + "'");
    }
  }
}

PerceptionSet PerceptionSet::everything(const ContextUniverse& universe) {
  return PerceptionSet(universe.name(), universe.figures());
}

bool PerceptionSet::intersects(const std::set<ContextFigure>& other) const {
  auto a = figures_.begin();
  auto b = other.begin();
  while (a != figures_.end() && b != other.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      return true;
    }
  }
  return false;
}

PerceptionSet PerceptionSet::united(const PerceptionSet& other) const {
  if (universe_ != other.universe_) {
    throw Error(ErrorKind::UniverseMismatch,
                "cannot unite perception of '" + universe_ + "' with '" + other.universe_ + "'");
  }
  std::set<ContextFigure> all = figures_;
  all.insert(other.figures_.begin(), other.figures_.end());
  return PerceptionSet(universe_, std::move(all));
}

namespace {

constexpr const char* kGestaltNames[] = {"Object", "Thermostat", "Servomechanism", "Cell",
                                         "Plant",  "Animal",     "HumanBeing"};
constexpr const char* kBehaviorNames[] = {"Random", "PurposefulNonTeleological",
                                          "TeleologicalNonExtrapolatory", "Extrapolatory"};

int rank(Gestalt g) { return static_cast<int>(g); }

// One row per presence mask, one column per minimum present rank.
Gestalt table_entry(unsigned mask, int min_rank) {
  const bool perception = mask & kPerception;
  const bool analytics = mask & kAnalytics;
  const bool planning = mask & kPlanning;
  const bool execution = mask & kExecution;
  const bool knowledge = mask & kKnowledge;

  // Perception-free or unable to act on the environment: passive.
  if (!perception || !execution) return Gestalt::Object;
  if (!planning && !knowledge) return Gestalt::Thermostat;
  if (!knowledge) return Gestalt::Servomechanism;

  const bool all = analytics && planning;
  if (all && min_rank == rank(Gestalt::HumanBeing)) return Gestalt::HumanBeing;
  if (all && min_rank >= rank(Gestalt::Animal)) return Gestalt::Animal;
  if (planning) return Gestalt::Plant;
  return Gestalt::Cell;
}

ClassificationTable build_table() {
  ClassificationTable t{};
  for (unsigned mask = 0; mask < 32; ++mask) {
    for (int col = 0; col < 8; ++col) t[mask][col] = table_entry(mask, col);
  }
  return t;
}

}  // namespace

const char* to_string(Gestalt g) { return kGestaltNames[rank(g)]; }
const char* to_string(Behavior b) { return kBehaviorNames[static_cast<int>(b)]; }

Gestalt parse_gestalt(const std::string& s) {
  for (Gestalt g : kAllGestalts) {
    if (s == to_string(g)) return g;
  }
  throw Error(ErrorKind::Validation, "unknown systemic class '" + s + "'");
}

Behavior parse_behavior(const std::string& s) {
  for (Behavior b : kAllBehaviors) {
    if (s == to_string(b)) return b;
  }
  throw Error(ErrorKind::Validation, "unknown behavior class '" + s + "'");
}

const char* to_string(OrderRelation r) {
  switch (r) {
    case OrderRelation::Less: return "Less";
    case OrderRelation::Greater: return "Greater";
    case OrderRelation::Equal: return "Equal";
    case OrderRelation::Incomparable: return "Incomparable";
  }
  return "?";
}

Behavior behavior_of(Gestalt g) {
  switch (g) {
    case Gestalt::Object: return Behavior::Random;
    case Gestalt::Thermostat: return Behavior::PurposefulNonTeleological;
    case Gestalt::Servomechanism:
    case Gestalt::Cell:
    case Gestalt::Plant: return Behavior::TeleologicalNonExtrapolatory;
    case Gestalt::Animal:
    case Gestalt::HumanBeing: return Behavior::Extrapolatory;
  }
  return Behavior::Random;
}

OrderRelation perception_order(const PerceptionSet& a, const PerceptionSet& b) {
  if (a.universe() != b.universe()) {
    throw Error(ErrorKind::UniverseMismatch,
                "perception sets from universes '" + a.universe() + "' and '" + b.universe() + "'");
  }
  const auto& fa = a.figures();
  const auto& fb = b.figures();
  const bool a_in_b = std::includes(fb.begin(), fb.end(), fa.begin(), fa.end());
  const bool b_in_a = std::includes(fa.begin(), fa.end(), fb.begin(), fb.end());
  if (a_in_b && b_in_a) return OrderRelation::Equal;
  if (a_in_b) return OrderRelation::Less;
  if (b_in_a) return OrderRelation::Greater;
  return OrderRelation::Incomparable;
}

FitReport environmental_fit(const PerceptionSet& system, const PerceptionSet& environment) {
  if (system.universe() != environment.universe()) {
    throw Error(ErrorKind::UniverseMismatch, "system and environment use different universes");
  }
  const auto& s = system.figures();
  const auto& e = environment.figures();
  FitReport r;
  std::set_difference(e.begin(), e.end(), s.begin(), s.end(),
                      std::inserter(r.blind_spots, r.blind_spots.end()));
  std::set_difference(s.begin(), s.end(), e.begin(), e.end(),
                      std::inserter(r.wasted, r.wasted.end()));
  std::set_intersection(s.begin(), s.end(), e.begin(), e.end(),
                        std::inserter(r.overlap, r.overlap.end()));
  return r;
}

unsigned presence_mask(const SystemicFeatures& f) {
  unsigned m = 0;
  if (!f.perception.empty()) m |= kPerception;
  if (f.analytics) m |= kAnalytics;
  if (f.planning) m |= kPlanning;
  if (f.execution) m |= kExecution;
  if (f.knowledge) m |= kKnowledge;
  return m;
}

std::optional<Gestalt> min_present_rank(const SystemicFeatures& f) {
  std::optional<Gestalt> lo;
  for (const auto* feat : {&f.analytics, &f.planning, &f.execution, &f.knowledge}) {
    if (*feat && (!lo || rank(**feat) < rank(*lo))) lo = *feat;
  }
  return lo;
}

const ClassificationTable& classification_table() {
  static const ClassificationTable table = build_table();
  return table;
}

SystemicClass classify(const SystemicFeatures& features) {
  const auto lo = min_present_rank(features);
  const int col = lo ? rank(*lo) : 7;
  const Gestalt g = classification_table()[presence_mask(features)][col];
  return {g, behavior_of(g)};
}

OrderRelation feature_order(const std::optional<Gestalt>& a, const std::optional<Gestalt>& b) {
  const int ra = a ? rank(*a) : -1;
  const int rb = b ? rank(*b) : -1;
  if (ra < rb) return OrderRelation::Less;
  if (ra > rb) return OrderRelation::Greater;
  return OrderRelation::Equal;
}

}  // namespace fso
