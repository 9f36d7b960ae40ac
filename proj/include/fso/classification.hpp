#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>

namespace fso {

using ContextFigure = std::string;

/// The finite set of context figures a family of systems may perceive.
/// A universe used as a perception set plays the role of the all-seeing
/// reference system: every perception set of the universe is below it.
class ContextUniverse {
 public:
  ContextUniverse(std::string name, std::set<ContextFigure> figures);

  const std::string& name() const noexcept { return name_; }
  const std::set<ContextFigure>& figures() const noexcept { return figures_; }
  bool contains(const ContextFigure& f) const { return figures_.count(f) != 0; }

 private:
  std::string name_;
  std::set<ContextFigure> figures_;
};

/// A system's perception: the context figures it is able to sense.
/// Always tied to the universe it was drawn from (by name).
class PerceptionSet {
 public:
  PerceptionSet() = default;
  /// Throws Validation if a figure is not part of the universe.
  PerceptionSet(const ContextUniverse& universe, std::set<ContextFigure> figures);

  static PerceptionSet everything(const ContextUniverse& universe);

  const std::string& universe() const noexcept { return universe_; }
  const std::set<ContextFigure>& figures() const noexcept { return figures_; }
  bool empty() const noexcept { return figures_.empty(); }
  bool intersects(const std::set<ContextFigure>& other) const;

  /// Union within the same universe; throws UniverseMismatch otherwise.
  PerceptionSet united(const PerceptionSet& other) const;

  friend bool operator==(const PerceptionSet&, const PerceptionSet&) = default;

 private:
  PerceptionSet(std::string universe, std::set<ContextFigure> figures)
      : universe_(std::move(universe)), figures_(std::move(figures)) {}

  std::string universe_;
  std::set<ContextFigure> figures_;
};

/// Structural ("gestalt") classes, in increasing order of complexity.
enum class Gestalt { Object, Thermostat, Servomechanism, Cell, Plant, Animal, HumanBeing };

/// Behavioral classes, in increasing order of complexity.
enum class Behavior { Random, PurposefulNonTeleological, TeleologicalNonExtrapolatory, Extrapolatory };

inline constexpr std::array<Gestalt, 7> kAllGestalts = {
    Gestalt::Object, Gestalt::Thermostat, Gestalt::Servomechanism, Gestalt::Cell,
    Gestalt::Plant,  Gestalt::Animal,     Gestalt::HumanBeing};
inline constexpr std::array<Behavior, 4> kAllBehaviors = {
    Behavior::Random, Behavior::PurposefulNonTeleological,
    Behavior::TeleologicalNonExtrapolatory, Behavior::Extrapolatory};

const char* to_string(Gestalt g);
const char* to_string(Behavior b);
Gestalt parse_gestalt(const std::string& s);
Behavior parse_behavior(const std::string& s);

struct SystemicClass {
  Gestalt gestalt = Gestalt::Object;
  Behavior behavior = Behavior::Random;

  friend bool operator==(const SystemicClass&, const SystemicClass&) = default;
};

/// Behavior ceiling of a gestalt class (Thermostats are purposeful but
/// non-teleological, servomechanisms teleological, and so on).
Behavior behavior_of(Gestalt g);

/// Perception plus analysis / planning / execution / knowledge. An absent
/// feature (nullopt) ranks below every present one.
struct SystemicFeatures {
  PerceptionSet perception;
  std::optional<Gestalt> analytics;
  std::optional<Gestalt> planning;
  std::optional<Gestalt> execution;
  std::optional<Gestalt> knowledge;

  friend bool operator==(const SystemicFeatures&, const SystemicFeatures&) = default;
};

enum class OrderRelation { Less, Greater, Equal, Incomparable };
const char* to_string(OrderRelation r);

struct FitReport {
  std::set<ContextFigure> blind_spots;
  std::set<ContextFigure> wasted;
  std::set<ContextFigure> overlap;
};

/// Subset order on perception. Throws UniverseMismatch across universes.
OrderRelation perception_order(const PerceptionSet& a, const PerceptionSet& b);

/// What the environment exhibits that the system misses, and vice versa.
FitReport environmental_fit(const PerceptionSet& system, const PerceptionSet& environment);

/// Bit layout of the presence mask used by the classification table.
enum FeatureBit : unsigned {
  kPerception = 1u,
  kAnalytics = 2u,
  kPlanning = 4u,
  kExecution = 8u,
  kKnowledge = 16u,
};

unsigned presence_mask(const SystemicFeatures& f);

/// Lowest gestalt rank among present A/P/E/K features; nullopt if none.
std::optional<Gestalt> min_present_rank(const SystemicFeatures& f);

/// Row/column of the classification table: 32 presence masks by 8 rank
/// columns (7 gestalt ranks, then "no ranked feature present").
using ClassificationTable = std::array<std::array<Gestalt, 8>, 32>;
const ClassificationTable& classification_table();

/// Table lookup on (presence mask, minimum present rank).
/// The full table is printed in docs/classification.md.
SystemicClass classify(const SystemicFeatures& features);

/// Per-feature relation for ranked features; absent < any present class.
OrderRelation feature_order(const std::optional<Gestalt>& a, const std::optional<Gestalt>& b);

}  // namespace fso
