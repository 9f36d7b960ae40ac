#include <doctest.h>

#include <random>

#include "fso/knowledge.hpp"
#include "fso/roleflow.hpp"
#include "test_util.hpp"

using namespace fso;
using fso::testing::make_node;

namespace {

SON son_of(const std::string& protocol, Assignment a, std::set<int> levels = {0}) {
  SON s;
  s.id = "s";
  s.protocol_id = protocol;
  canonicalize(a);
  s.assignment = a;
  s.levels_spanned = std::move(levels);
  s.signature = son_signature(protocol, s.assignment);
  return s;
}

const ExecutionOutcome kSuccess{ExecutionOutcome::Kind::Success, 1};
const ExecutionOutcome kStarved{ExecutionOutcome::Kind::Starved, 1};
const ExecutionOutcome kFailed{ExecutionOutcome::Kind::Failed, 1};

HierarchySpec two_levels() {
  HierarchySpec s;
  s.nodes = {make_node("leaf"), make_node("hub", {"a"}, {"x"}), make_node("w", {"a"}),
             make_node("top", {"b"}, {"y"})};
  s.levels = {{{"leaf"}, std::nullopt}, {{"hub", "w"}, "hub"}, {{"hub", "top"}, "top"}};
  return s;
}

}  // namespace

TEST_CASE("reward and penalty") {
  const auto son = son_of("p", {{"r", "n"}});
  CHECK(record_outcome(ScoreLedger(0.5), son, kSuccess).score("n", "r") == doctest::Approx(0.55));
  CHECK(record_outcome(ScoreLedger(0.5), son, kStarved).score("n", "r") == doctest::Approx(0.25));
  CHECK(record_outcome(ScoreLedger(0.5), son, kFailed).score("n", "r") == doctest::Approx(0.25));
  ScoreLedger full(0.5);
  full.set("n", "r", 1.0);
  CHECK(record_outcome(full, son, kSuccess).score("n", "r") == 1.0);
}

TEST_CASE("unseen pairs read as the default") {
  ScoreLedger l(0.3);
  CHECK(l.score("any", "role") == 0.3);
  CHECK(l.entries().empty());
}

TEST_CASE("scores stay in [0,1] under any outcome sequence") {
  std::mt19937 rng(4);
  const auto son = son_of("p", {{"r", "n"}, {"s", "m"}});
  ScoreLedger l(0.5);
  for (int i = 0; i < 2000; ++i) {
    const double alpha = (rng() % 101) / 100.0;
    const double beta = (rng() % 101) / 100.0;
    l = record_outcome(std::move(l), son, rng() & 1 ? kSuccess : kStarved, alpha, beta);
    for (const auto& [k, v] : l.entries()) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("updates on disjoint pairs commute") {
  const auto a = son_of("p", {{"r", "n1"}});
  const auto b = son_of("q", {{"s", "n2"}});
  auto x = record_outcome(record_outcome(ScoreLedger(0.5), a, kSuccess), b, kStarved);
  auto y = record_outcome(record_outcome(ScoreLedger(0.5), b, kStarved), a, kSuccess);
  CHECK(x.entries() == y.entries());
}

TEST_CASE("rank") {
  ScoreLedger l(0.5);
  l.set("n1", "r", 0.9);
  l.set("n2", "r", 0.2);
  CHECK(rank(l, "r", {"n2", "n1"}) == std::vector<NodeId>{"n1", "n2"});
  CHECK(rank(ScoreLedger(0.5), "r", {"n3", "n1", "n2"}) == std::vector<NodeId>{"n1", "n2", "n3"});
  CHECK(rank(l, "r", {}).empty());
}

TEST_CASE("recurrence") {
  RecurrenceTracker t(3);
  const auto son = son_of("p", {{"r", "n1"}});
  bool hit = false;
  std::tie(t, hit) = observe_son(std::move(t), son);
  CHECK_FALSE(hit);
  std::tie(t, hit) = observe_son(std::move(t), son);
  CHECK_FALSE(hit);
  std::tie(t, hit) = observe_son(std::move(t), son);
  CHECK(hit);
  CHECK(t.count(son.signature) == 3);

  const auto other = son_of("p", {{"r", "n2"}});
  CHECK(other.signature != son.signature);
  std::tie(t, hit) = observe_son(std::move(t), other);
  CHECK_FALSE(hit);
  CHECK(t.count(other.signature) == 1);
}

TEST_CASE("permanentify adds a composite node at the lowest spanned level") {
  auto h = Hierarchy::build(two_levels());
  const auto son = son_of("p", {{"a", "hub"}, {"b", "top"}}, {1, 2});
  auto h2 = permanentify(h, son);
  const auto id = permanent_node_id(son.signature);
  REQUIRE(h2.contains(id));
  CHECK(h2.home_level(id) == 1);
  CHECK(h2.node(id).capabilities == std::set<Role>{"a", "b"});
  CHECK(h2.node(id).composite);
  CHECK(h2.node(id).depends_on == std::set<NodeId>{"hub", "top"});
  CHECK(h2.node(id).features.perception.figures() == std::set<ContextFigure>{"x", "y"});
  CHECK(h2.parent(id) == "hub");

  auto h3 = permanentify(h2, son);
  CHECK(h3.spec() == h2.spec());
}

TEST_CASE("after permanentification the protocol enrolls without escalation") {
  auto h = Hierarchy::build(two_levels());
  Protocol p;
  p.id = "p";
  p.required_roles = {{"a", 1}, {"b", 1}};
  {
    Roster roster(h);
    CHECK(std::holds_alternative<RoleException>(enroll(p, 1, h, ScoreLedger{}, roster)));
  }
  const auto son = son_of("p", {{"a", "hub"}, {"b", "top"}}, {1, 2});
  auto h2 = permanentify(h, son);
  Roster roster(h2);
  auto r = enroll(p, 1, h2, ScoreLedger{}, roster);
  REQUIRE(std::holds_alternative<Complete>(r));
}

TEST_CASE("a permanent node fills one instance per role") {
  auto h = Hierarchy::build(two_levels());
  const auto son = son_of("p", {{"a", "hub"}, {"b", "top"}}, {1, 2});
  auto h2 = permanentify(h, son);
  Protocol twice;
  twice.id = "q";
  twice.required_roles = {{"a", 2}, {"b", 1}};
  Roster roster(h2);
  roster.set("w", NodeState::Failed);
  auto r = enroll(twice, 1, h2, ScoreLedger{}, roster);
  // hub and the permanent node cover both a instances, the permanent node b.
  REQUIRE(std::holds_alternative<Complete>(r));
  std::multiset<NodeId> used;
  for (const auto& pl : std::get<Complete>(r).placements) used.insert(pl.node);
  CHECK(used.count(permanent_node_id(son.signature)) == 2);

  roster = Roster(h2);
  roster.set("w", NodeState::Failed);
  roster.set("hub", NodeState::Failed);
  auto short_of_a = enroll(twice, 1, h2, ScoreLedger{}, roster);
  REQUIRE(std::holds_alternative<RoleException>(short_of_a));
  CHECK(std::get<RoleException>(short_of_a).missing == RoleMultiset{{"a", 1}});
}
