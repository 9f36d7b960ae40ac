#pragma once

// Random scenario generator for acceptance runs. Every generated scenario
// validates; shapes vary in depth, capabilities, dependencies and timeline.

#include <algorithm>
#include <random>
#include <string>

#include "fso/simulation.hpp"

namespace fso::testing {

inline Scenario random_scenario(std::uint64_t seed) {
  std::mt19937_64 rng(seed * 7919 + 17);
  auto pick = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); };
  auto coin = [&](double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; };

  Scenario s;
  s.name = "corpus-" + std::to_string(seed);
  s.seed = seed;
  s.horizon = 30;
  std::set<ContextFigure> figures;
  for (int i = 0; i < 10; ++i) figures.insert("f" + std::to_string(i));
  s.universe = ContextUniverse("corpus", figures);
  const std::vector<ContextFigure> figs(figures.begin(), figures.end());
  const std::vector<Role> roles = {"r0", "r1", "r2", "r3", "r4"};

  auto random_figures = [&](double p, bool nonempty) {
    std::set<ContextFigure> out;
    for (const auto& f : figs) {
      if (coin(p)) out.insert(f);
    }
    if (nonempty && out.empty()) out.insert(figs[rng() % figs.size()]);
    return out;
  };
  auto random_class = [&]() -> std::optional<Gestalt> {
    if (coin(0.3)) return std::nullopt;
    return static_cast<Gestalt>(rng() % 7);
  };

  const int levels = pick(2, 4);
  std::vector<std::vector<NodeId>> fresh(levels);
  for (int l = 0; l < levels; ++l) {
    const int n = l == 0 ? pick(3, 6) : pick(2, 4);
    for (int j = 0; j < n; ++j) {
      Node node;
      node.id = "L" + std::to_string(l) + "n" + std::to_string(j);
      for (const auto& r : roles) {
        if (coin(l == 0 ? 0.2 : 0.4)) node.capabilities.insert(r);
      }
      node.features.perception = PerceptionSet(s.universe, random_figures(0.25, l == 0));
      node.features.analytics = random_class();
      node.features.planning = random_class();
      node.features.execution = random_class();
      node.features.knowledge = random_class();
      if (l > 0) {
        const int deps = pick(1, 2);
        for (int d = 0; d < deps; ++d) {
          const int dl = pick(0, l - 1);
          node.depends_on.insert(fresh[dl][rng() % fresh[dl].size()]);
        }
      }
      fresh[l].push_back(node.id);
      s.hierarchy.nodes.push_back(std::move(node));
    }
  }
  for (int l = 0; l < levels; ++l) {
    LevelSpec lv;
    if (l >= 2) lv.members.push_back(fresh[l - 1].front());
    lv.members.insert(lv.members.end(), fresh[l].begin(), fresh[l].end());
    if (l >= 1) lv.canon = fresh[l].front();
    s.hierarchy.levels.push_back(std::move(lv));
  }

  const int protocols = pick(2, 3);
  for (int i = 0; i < protocols; ++i) {
    Protocol p;
    p.id = "p" + std::to_string(i);
    const int total = pick(1, 3);
    for (int k = 0; k < total; ++k) ++p.required_roles[roles[rng() % roles.size()]];
    p.priority = pick(0, 3);
    p.execution_cost = pick(0, 2);
    p.duration = pick(1, 3);
    s.protocols.push_back(std::move(p));
  }

  std::vector<int> gov;
  for (int l = 1; l < levels; ++l) gov.push_back(l);
  std::size_t smallest = SIZE_MAX;
  for (int l : gov) smallest = std::min(smallest, s.hierarchy.levels[l].members.size());

  for (int i = 0; i < 3; ++i) {
    Situation sit;
    sit.id = "sit" + std::to_string(i);
    sit.required = pick(0, static_cast<int>(smallest));
    sit.stable = coin(0.7);
    sit.critical = coin(0.2);
    for (const auto& p : s.protocols) {
      if (coin(0.5)) sit.protocols.push_back(p.id);
    }
    s.situations.push_back(std::move(sit));
  }
  s.allocator.step_size = pick(1, 2);
  s.allocator.window = pick(1, 4);
  s.allocator.thresholds.default_floor = pick(0, 2);

  const int events = pick(6, 12);
  std::vector<int> ticks;
  for (int i = 0; i < events; ++i) ticks.push_back(pick(0, s.horizon - 1));
  std::sort(ticks.begin(), ticks.end());
  for (int t : ticks) {
    const int kind = static_cast<int>(rng() % 3);
    if (kind == 0) {
      s.events.push_back({t, SituationSet{gov[rng() % gov.size()], s.situations[rng() % s.situations.size()]}});
    } else if (kind == 1) {
      s.events.push_back({t, ContextChange{figs[rng() % figs.size()], pick(0, levels - 1)}});
    } else {
      const auto& leaves = fresh[0];
      const NodeId epicenter = coin(0.7) ? leaves[rng() % leaves.size()] : s.hierarchy.nodes[rng() % s.hierarchy.nodes.size()].id;
      auto hit = random_figures(0.2, true);
      // Often aim at something the epicenter can perceive.
      for (const auto& n : s.hierarchy.nodes) {
        if (n.id == epicenter && coin(0.7) && !n.features.perception.empty()) {
          hit.insert(*n.features.perception.figures().begin());
        }
      }
      s.events.push_back({t, Catastrophe{epicenter, hit, pick(1, 3)}});
    }
  }
  s.budget = pick(40, 400);
  s.knowledge.enabled = coin(0.8);
  s.knowledge.recurrence_threshold = pick(2, 3);
  s.repair_delay = pick(1, 6);
  return s;
}

}  // namespace fso::testing
