#include <doctest.h>

#include <sstream>

#include "fso/error.hpp"
#include "fso/report_io.hpp"
#include "fso/scenario_io.hpp"
#include "fso/simulation.hpp"
#include "test_util.hpp"

using namespace fso;
using fso::testing::make_node;

namespace {

Scenario load(const std::string& name) { return load_scenario(std::string(FSO_SCENARIO_DIR) + "/" + name); }

std::string csvs(const MetricsReport& r) {
  std::ostringstream out;
  write_events_csv(out, r);
  write_allocator_csv(out, r);
  write_energy_csv(out, r);
  return out.str();
}

Hierarchy chain() {
  HierarchySpec s;
  s.nodes = {make_node("a", {}, {"t"}), make_node("b", {}, {"h"}, {"a"}), make_node("c", {}, {"t"}, {"b"}),
             make_node("d")};
  s.levels = {{{"a", "b", "c", "d"}, std::nullopt}};
  return Hierarchy::build(s);
}

Scenario flat_scenario(int horizon) {
  Scenario s;
  s.universe = fso::testing::universe();
  s.hierarchy.nodes = {make_node("n1"), make_node("n2")};
  s.hierarchy.levels = {{{"n1", "n2"}, std::nullopt}};
  s.horizon = horizon;
  return s;
}

}  // namespace

TEST_CASE("ripple") {
  auto h = chain();
  CHECK(ripple(h, "a", {"t"}, 0).hops == std::map<NodeId, int>{{"a", 0}});
  CHECK(ripple(h, "d", {"t"}, 5).hops == std::map<NodeId, int>{{"d", 0}});
  auto r = ripple(h, "a", {"t"}, 2);
  CHECK(r.hops == std::map<NodeId, int>{{"a", 0}, {"b", 1}, {"c", 2}});
  CHECK(r.perceivers == std::set<NodeId>{"a", "c"});
  CHECK(ripple(h, "a", {"t"}, 1).hops.size() == 2);
}

TEST_CASE("publish climbs the canon chain") {
  HierarchySpec s;
  s.nodes = {make_node("s1"), make_node("room"), make_node("room2"), make_node("house"), make_node("bldg")};
  s.levels = {{{"s1"}, std::nullopt}, {{"room", "room2"}, "room"}, {{"room", "house"}, "house"},
              {{"house", "bldg"}, "bldg"}};
  auto h = Hierarchy::build(s);
  auto d = publish(h, {"s1", "x"});
  REQUIRE(d.size() == 3);
  CHECK(d[0].canon == "room");
  CHECK(d[0].level == 1);
  CHECK(d[1].canon == "house");
  CHECK(d[2].canon == "bldg");
  CHECK(publish(h, {"bldg", "x"}).empty());
  CHECK(publish(h, {"room2", "x"}).size() == 3);
}

TEST_CASE("notifications are delivered in level then origin order") {
  Scenario s;
  s.universe = fso::testing::universe();
  s.hierarchy.nodes = {make_node("s2", {}, {"t"}), make_node("s1", {}, {"t"}), make_node("hub", {}, {"t"}),
                       make_node("r2", {}, {"t"})};
  s.hierarchy.levels = {{{"s2", "s1"}, std::nullopt}, {{"hub", "r2"}, "hub"}};
  s.events = {{0, ContextChange{"t", 1}}, {0, ContextChange{"t", 0}}};
  s.budget = 100;
  auto r = run(s);
  std::vector<NodeId> origins;
  for (const auto& n : r.notifications) origins.push_back(n.origin);
  CHECK(origins == std::vector<NodeId>{"s1", "s2", "r2"});
  for (const auto& n : r.notifications) CHECK(n.canon == "hub");
}

TEST_CASE("choose behavior") {
  const BehaviorCosts costs = {1, 2, 4, 8};
  CHECK(choose_behavior(costs, Behavior::Extrapolatory, 5) == Behavior::TeleologicalNonExtrapolatory);
  CHECK_FALSE(choose_behavior(costs, Behavior::Extrapolatory, 0).has_value());
  CHECK(choose_behavior(costs, Behavior::PurposefulNonTeleological, 1000) == Behavior::PurposefulNonTeleological);
  CHECK(choose_behavior(costs, Behavior::Random, 1) == Behavior::Random);
}

TEST_CASE("node cost profile overrides defaults") {
  Node n = make_node("n");
  n.energy_cost_profile[Behavior::Extrapolatory] = 20;
  auto c = node_costs(n, kDefaultBehaviorCosts);
  CHECK(c == BehaviorCosts{1, 2, 4, 20});
}

TEST_CASE("empty timeline produces idle allocator rows") {
  auto r = run(flat_scenario(10));
  REQUIRE(r.allocator.size() == 10);
  for (int t = 0; t < 10; ++t) {
    CHECK(r.allocator[t].tick == t);
    CHECK(r.allocator[t].decision == AllocationDecision::no_change());
  }
  CHECK(r.son_events.empty());
  CHECK(r.energy.size() == 10);
}

TEST_CASE("governing levels") {
  CHECK(governing_levels(chain()) == std::vector<int>{0});
  auto h = Hierarchy::build(load("ls.json").hierarchy);
  CHECK(governing_levels(h) == std::vector<int>{1, 2, 3});
}

TEST_CASE("allocator converges after a single situation") {
  auto s = flat_scenario(20);
  for (int i = 3; i <= 8; ++i) {
    s.hierarchy.nodes.push_back(make_node("n" + std::to_string(i)));
    s.hierarchy.levels[0].members.push_back("n" + std::to_string(i));
  }
  Situation sit;
  sit.id = "busy";
  sit.required = 5;
  s.allocator.step_size = 2;
  s.allocator.thresholds.default_floor = 0;
  s.events = {{2, SituationSet{0, sit}}};
  auto r = run(s);
  // Enroll(2), Enroll(2), Enroll(1): fired reaches 5 after ceil(5/2) ticks.
  CHECK(r.allocator[2].decision == AllocationDecision::enroll(2));
  CHECK(r.allocator[4].decision == AllocationDecision::enroll(1));
  CHECK(r.allocator[5].fired == 5);
  CHECK(r.allocator[5].decision == AllocationDecision::no_change());
  CHECK(r.allocator[2].dtof == Rational(5, 8));
}

TEST_CASE("runs are deterministic") {
  for (const char* name : {"ls.json", "permanent.json", "escalation.json"}) {
    const auto s = load(name);
    CHECK(csvs(run(s)) == csvs(run(s)));
    CHECK(report_to_json(run(s)) == report_to_json(run(s)));
  }
}

TEST_CASE("energy is conserved every tick") {
  const auto r = run(load("ls.json"));
  std::int64_t total = 0;
  for (const auto& row : r.energy) {
    total += row.spent;
    CHECK(row.ledger_total == total);
    CHECK(row.remaining == r.initial_budget - total);
    CHECK(row.remaining >= 0);
  }
}

TEST_CASE("behaviors fall back as the budget runs dry") {
  auto s = load("ls.json");
  s.budget = 3;
  const auto r = run(s);
  bool abstained = false;
  for (const auto& b : r.behaviors) abstained |= !b.behavior.has_value();
  CHECK(abstained);
  CHECK(r.energy.back().remaining >= 0);
}

TEST_CASE("catastrophes fail nodes until repaired") {
  auto s = load("ls.json");
  const auto r = run(s);
  REQUIRE(r.catastrophes.size() == 1);
  const auto& c = r.catastrophes[0];
  CHECK(c.tick == 5);
  CHECK(c.affected.at("s1") == 0);
  CHECK(c.affected.at("room2") == 1);
  CHECK(c.affected.at("house1") == 2);
  CHECK(c.affected.at("building") == 3);
  CHECK(c.perceivers == std::set<NodeId>{"building", "room2", "s1"});
  // The epicenter always fails: its draw is compared against 1.
  CHECK(c.failed.count("s1"));
}

TEST_CASE("escalation fixtures") {
  auto r = run(load("escalation.json"));
  REQUIRE_FALSE(r.son_events.empty());
  CHECK(r.son_events[0].outcome == "resolved");
  CHECK(r.son_events[0].levels_spanned == std::set<int>{1, 2, 3});
  CHECK(r.escalations_per_level.at(1) == 1);

  auto pending = run(load("escalation_pending.json"));
  REQUIRE(pending.son_events.size() == 3);
  for (const auto& e : pending.son_events) CHECK(e.outcome == "pending");
  CHECK_FALSE(pending.latencies.at(0).latency.has_value());
}

TEST_CASE("recurring escalated SONs are permanentified") {
  const auto r = run(load("permanent.json"));
  REQUIRE(r.permanentifications.size() == 1);
  const int at = r.permanentifications[0].tick;
  for (const auto& e : r.son_events) {
    if (e.tick > at) CHECK(e.outcome != "resolved");
    if (e.tick > at) CHECK(e.outcome != "pending");
  }
  CHECK(r.latencies.size() == 10);
  for (const auto& l : r.latencies) CHECK(l.latency == 0);
}

TEST_CASE("memoryless runs keep no scores") {
  auto s = load("permanent.json");
  s.knowledge.enabled = false;
  const auto r = run(s);
  CHECK(r.permanentifications.empty());
  CHECK(r.scores.entries().empty());
  std::ostringstream out;
  CHECK(write_outputs(r, std::filesystem::temp_directory_path() / "fso_memoryless", true).size() == 4);
}

TEST_CASE("invalid scenarios are rejected before running") {
  auto s = flat_scenario(5);
  Situation sit;
  sit.id = "x";
  sit.protocols = {"ghost"};
  s.allocator.thresholds.default_floor = 0;
  s.events = {{0, SituationSet{0, sit}}};
  CHECK_THROWS_AS(run(s), Error);
  CHECK_FALSE(validate_scenario(s).empty());

  s = flat_scenario(5);
  s.events = {{0, Catastrophe{"nobody", {}, 1}}};
  auto vs = validate_scenario(s);
  REQUIRE_FALSE(vs.empty());
  CHECK(vs[0].subject == "nobody");

  s = flat_scenario(0);
  CHECK_THROWS_AS(run(s), Error);

  s = flat_scenario(5);
  s.events = {{3, ContextChange{"t", 0}}, {1, ContextChange{"t", 0}}};
  CHECK_FALSE(validate_scenario(s).empty());

  s = flat_scenario(5);
  sit.protocols.clear();
  sit.required = 1;
  s.events = {{0, SituationSet{0, sit}}};
  CHECK_FALSE(validate_scenario(s).empty());  // no threshold configured
}

TEST_CASE("scenario JSON round trip") {
  for (const char* name : {"ls.json", "permanent.json", "escalation.json", "fig3.json"}) {
    const auto s = load(name);
    const auto j = scenario_to_json(s);
    const auto back = scenario_from_json(j);
    CHECK(scenario_to_json(back) == j);
    CHECK(csvs(run(back)) == csvs(run(s)));
  }
}

TEST_CASE("malformed scenario files") {
  CHECK_THROWS_AS(scenario_from_json(nlohmann::json::parse(R"({"hierarchy": {}})")), Error);
  CHECK_THROWS_AS(scenario_from_json(nlohmann::json::parse(R"({"universe": ["t"], "hierarchy": {"nodes": 3}})")),
                  Error);
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), Error);
}
