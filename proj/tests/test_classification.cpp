#include <doctest.h>

#include <random>

#include "fso/classification.hpp"
#include "fso/comparison.hpp"
#include "fso/error.hpp"
#include "test_util.hpp"

using namespace fso;
using fso::testing::perceive;
using fso::testing::universe;

namespace {

SystemicFeatures thermostat() {
  SystemicFeatures f;
  f.perception = perceive({"t"});
  f.analytics = Gestalt::Thermostat;
  f.execution = Gestalt::Thermostat;
  return f;
}

SystemicFeatures human() {
  SystemicFeatures f;
  f.perception = perceive({"t", "h"});
  f.analytics = f.planning = f.execution = f.knowledge = Gestalt::HumanBeing;
  return f;
}

}  // namespace

TEST_CASE("perception order examples") {
  CHECK(perception_order(perceive({"t"}), perceive({"t", "h"})) == OrderRelation::Less);
  CHECK(perception_order(perceive({"t", "h"}), perceive({"t"})) == OrderRelation::Greater);
  CHECK(perception_order(perceive({"t"}), perceive({"t"})) == OrderRelation::Equal);
  CHECK(perception_order(perceive({"x"}), perceive({"y"})) == OrderRelation::Incomparable);
  CHECK(perception_order(perceive({}), perceive({})) == OrderRelation::Equal);
}

TEST_CASE("every perception set is below the universe") {
  const auto all = PerceptionSet::everything(universe());
  CHECK(perception_order(perceive({"a", "x"}), all) == OrderRelation::Less);
  CHECK(perception_order(all, all) == OrderRelation::Equal);
}

TEST_CASE("perception across universes is rejected") {
  ContextUniverse other("other", {"t"});
  PerceptionSet foreign(other, {"t"});
  CHECK_THROWS_AS(perception_order(perceive({"t"}), foreign), Error);
  try {
    perception_order(perceive({"t"}), foreign);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UniverseMismatch);
  }
  CHECK_THROWS_AS(environmental_fit(perceive({"t"}), foreign), Error);
}

TEST_CASE("perception outside its universe is rejected") {
  CHECK_THROWS_AS(PerceptionSet(universe(), {"nope"}), Error);
  CHECK_THROWS_AS(ContextUniverse("u", {""}), Error);
}

TEST_CASE("environmental fit") {
  ContextUniverse u("env", {"temp", "accel", "humid"});
  auto fit = environmental_fit(PerceptionSet(u, {"temp", "accel"}), PerceptionSet(u, {"temp", "humid"}));
  CHECK(fit.blind_spots == std::set<ContextFigure>{"humid"});
  CHECK(fit.wasted == std::set<ContextFigure>{"accel"});
  CHECK(fit.overlap == std::set<ContextFigure>{"temp"});

  auto same = environmental_fit(PerceptionSet(u, {"temp"}), PerceptionSet(u, {"temp"}));
  CHECK(same.blind_spots.empty());
  CHECK(same.wasted.empty());

  auto super = environmental_fit(PerceptionSet(u, {"temp", "accel", "humid"}), PerceptionSet(u, {"temp"}));
  CHECK(super.blind_spots.empty());
  CHECK(super.wasted == std::set<ContextFigure>{"accel", "humid"});
}

TEST_CASE("environmental fit partitions both sets") {
  std::mt19937 rng(11);
  const std::vector<std::string> figs = {"a", "b", "c", "h", "t", "x", "y"};
  for (int i = 0; i < 500; ++i) {
    std::set<std::string> s, e;
    for (const auto& f : figs) {
      if (rng() & 1) s.insert(f);
      if (rng() & 1) e.insert(f);
    }
    auto fit = environmental_fit(PerceptionSet(universe(), s), PerceptionSet(universe(), e));
    std::set<std::string> env_back = fit.blind_spots, sys_back = fit.wasted;
    env_back.insert(fit.overlap.begin(), fit.overlap.end());
    sys_back.insert(fit.overlap.begin(), fit.overlap.end());
    CHECK(env_back == e);
    CHECK(sys_back == s);
    for (const auto& f : fit.blind_spots) CHECK_FALSE(fit.wasted.count(f));
    for (const auto& f : fit.overlap) CHECK_FALSE(fit.blind_spots.count(f) + fit.wasted.count(f));
  }
}

TEST_CASE("classify anchors") {
  CHECK(classify(thermostat()) == SystemicClass{Gestalt::Thermostat, Behavior::PurposefulNonTeleological});
  CHECK(classify(human()) == SystemicClass{Gestalt::HumanBeing, Behavior::Extrapolatory});
  SystemicFeatures nothing;
  nothing.perception = perceive({});
  CHECK(classify(nothing) == SystemicClass{Gestalt::Object, Behavior::Random});
}

TEST_CASE("classify intermediate classes") {
  SystemicFeatures f;
  f.perception = perceive({"t"});
  f.execution = Gestalt::Servomechanism;
  f.planning = Gestalt::Servomechanism;
  CHECK(classify(f).gestalt == Gestalt::Servomechanism);
  CHECK(classify(f).behavior == Behavior::TeleologicalNonExtrapolatory);

  f = {};
  f.perception = perceive({"t"});
  f.execution = Gestalt::Cell;
  f.knowledge = Gestalt::Cell;
  CHECK(classify(f).gestalt == Gestalt::Cell);

  f.planning = Gestalt::Plant;
  CHECK(classify(f).gestalt == Gestalt::Plant);

  f.analytics = Gestalt::Animal;
  f.planning = f.execution = f.knowledge = Gestalt::Animal;
  CHECK(classify(f).gestalt == Gestalt::Animal);
  CHECK(classify(f).behavior == Behavior::Extrapolatory);

  // Rich features but no way to act on the world.
  f.execution.reset();
  CHECK(classify(f).gestalt == Gestalt::Object);
}

TEST_CASE("behavior ceilings") {
  CHECK(behavior_of(Gestalt::Object) == Behavior::Random);
  CHECK(behavior_of(Gestalt::Thermostat) == Behavior::PurposefulNonTeleological);
  CHECK(behavior_of(Gestalt::Servomechanism) == Behavior::TeleologicalNonExtrapolatory);
  CHECK(behavior_of(Gestalt::Cell) == Behavior::TeleologicalNonExtrapolatory);
  CHECK(behavior_of(Gestalt::Plant) == Behavior::TeleologicalNonExtrapolatory);
  CHECK(behavior_of(Gestalt::Animal) == Behavior::Extrapolatory);
  CHECK(behavior_of(Gestalt::HumanBeing) == Behavior::Extrapolatory);
}

TEST_CASE("classification table is total and monotone in presence") {
  const auto& table = classification_table();
  // Adding a feature at the same minimum rank never lowers the class.
  for (unsigned mask = 0; mask < 32; ++mask) {
    for (int col = 0; col < 8; ++col) {
      for (unsigned bit = 1; bit < 32; bit <<= 1) {
        if (mask & bit) continue;
        CHECK(static_cast<int>(table[mask | bit][col]) >= static_cast<int>(table[mask][col]));
      }
    }
  }
  // No perception, no class above Object.
  for (unsigned mask = 0; mask < 32; mask += 2) {
    for (int col = 0; col < 8; ++col) CHECK(table[mask][col] == Gestalt::Object);
  }
}

TEST_CASE("feature order treats absence as the lowest rank") {
  CHECK(feature_order(std::nullopt, Gestalt::Object) == OrderRelation::Less);
  CHECK(feature_order(Gestalt::Object, std::nullopt) == OrderRelation::Greater);
  CHECK(feature_order(std::nullopt, std::nullopt) == OrderRelation::Equal);
  CHECK(feature_order(Gestalt::Cell, Gestalt::Plant) == OrderRelation::Less);
}

TEST_CASE("names round-trip") {
  for (auto g : kAllGestalts) CHECK(parse_gestalt(to_string(g)) == g);
  for (auto b : kAllBehaviors) CHECK(parse_behavior(to_string(b)) == b);
  CHECK_THROWS_AS(parse_gestalt("Robot"), Error);
}

TEST_CASE("presence mask and minimum rank") {
  auto f = thermostat();
  CHECK(presence_mask(f) == (kPerception | kAnalytics | kExecution));
  CHECK(min_present_rank(f) == Gestalt::Thermostat);
  SystemicFeatures none;
  none.perception = perceive({});
  CHECK(presence_mask(none) == 0u);
  CHECK_FALSE(min_present_rank(none).has_value());
}

namespace {

Hierarchy single(const std::string& id, const SystemicFeatures& f) {
  HierarchySpec spec;
  Node n;
  n.id = id;
  n.features = f;
  spec.nodes = {n};
  spec.levels = {{{id}, std::nullopt}};
  return Hierarchy::build(spec);
}

Hierarchy two_level() {
  HierarchySpec spec;
  for (const auto& [id, fig] : std::vector<std::pair<std::string, std::string>>{
           {"k", "a"}, {"l1", "b"}, {"l2", "c"}, {"c1", "t"}}) {
    Node n;
    n.id = id;
    n.features = thermostat();
    n.features.perception = PerceptionSet(universe(), {fig});
    spec.nodes.push_back(n);
  }
  spec.levels = {{{"l1", "l2"}, std::nullopt}, {{"c1", "k"}, "c1"}};
  return Hierarchy::build(spec);
}

}  // namespace

TEST_CASE("compare systems at depth 0 compares only the roots") {
  auto h = two_level();
  auto r = compare_systems(h, "c1", h, "c1", 0);
  CHECK(r.children.empty());
  for (auto rel : r.relations) CHECK(rel == OrderRelation::Equal);
}

TEST_CASE("compare systems is reflexive at any depth") {
  auto h = two_level();
  for (int depth = 0; depth < 4; ++depth) {
    auto r = compare_systems(h, "c1", h, "c1", depth);
    std::function<void(const ComparisonReport&)> all_equal = [&](const ComparisonReport& c) {
      for (auto rel : c.relations) CHECK(rel == OrderRelation::Equal);
      for (const auto& k : c.children) all_equal(k);
    };
    all_equal(r);
    if (depth > 0) CHECK(r.children.size() == 3);
  }
}

TEST_CASE("thermostat is below a human being on every feature") {
  auto ht = single("thermo", thermostat());
  auto hh = single("person", human());
  auto r = compare_systems(ht, "thermo", hh, "person", 0);
  for (auto rel : r.relations) CHECK(rel == OrderRelation::Less);
  auto j = to_json(r);
  CHECK(j["relations"]["M"] == "Less");
  CHECK(j["relations"]["K"] == "Less");
}
