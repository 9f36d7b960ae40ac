#include "fso/simulation.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <stdexcept>

#include "fso/error.hpp"
#include "fso/roleflow.hpp"

namespace fso {

// --- kernel operations -------------------------------------------------

RippleResult ripple(const Hierarchy& h, const NodeId& epicenter, const std::set<ContextFigure>& figures,
                    int magnitude) {
  RippleResult r;
  std::deque<NodeId> frontier{epicenter};
  r.hops.emplace(epicenter, 0);
  while (!frontier.empty()) {
    const NodeId cur = frontier.front();
    frontier.pop_front();
    const int d = r.hops.at(cur);
    if (d >= magnitude) continue;
    for (const auto& dep : h.dependents(cur)) {
      if (r.hops.emplace(dep, d + 1).second) frontier.push_back(dep);
    }
  }
  for (const auto& [id, _] : r.hops) {
    if (h.node(id).features.perception.intersects(figures)) r.perceivers.insert(id);
  }
  return r;
}

std::vector<Delivery> publish(const Hierarchy& h, const Notification& n) {
  std::vector<Delivery> out;
  for (auto p = h.parent(n.origin); p; p = h.parent(*p)) out.push_back({*p, h.home_level(*p)});
  return out;
}

std::optional<Behavior> choose_behavior(const BehaviorCosts& costs, Behavior node_class,
                                        std::int64_t remaining) {
  for (int b = static_cast<int>(node_class); b >= 0; --b) {
    if (costs[b] <= remaining) return static_cast<Behavior>(b);
  }
  return std::nullopt;
}

BehaviorCosts node_costs(const Node& node, const BehaviorCosts& defaults) {
  BehaviorCosts c = defaults;
  for (const auto& [b, cost] : node.energy_cost_profile) c[static_cast<int>(b)] = cost;
  return c;
}

std::vector<int> governing_levels(const Hierarchy& h) {
  std::vector<int> out;
  for (const auto& lv : h.levels()) {
    if (lv.canon) out.push_back(lv.index);
  }
  if (out.empty()) out.push_back(0);
  return out;
}

// --- validation --------------------------------------------------------

namespace {

void err(std::vector<Violation>& out, std::string subject, std::string rule, std::string msg) {
  out.push_back({Violation::Severity::Error, std::move(subject), std::move(rule), std::move(msg)});
}

bool increasing(const BehaviorCosts& c) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] < 0 || (i > 0 && c[i] <= c[i - 1])) return false;
  }
  return true;
}

}  // namespace

std::vector<Violation> validate_scenario(const Scenario& s) {
  std::vector<Violation> out;
  std::vector<Violation> warnings;
  for (auto& v : validate(s.hierarchy)) {
    (v.severity == Violation::Severity::Error ? out : warnings).push_back(std::move(v));
  }
  if (!out.empty()) {
    out.insert(out.end(), warnings.begin(), warnings.end());
    return out;
  }
  const Hierarchy h = Hierarchy::build(s.hierarchy);
  const auto gov = governing_levels(h);

  if (s.horizon < 1) err(out, "scenario", "horizon", "horizon must be >= 1");
  if (s.budget < 0) err(out, "scenario", "budget", "initial budget must be >= 0");
  if (s.repair_delay < 0) err(out, "scenario", "repair_delay", "repair delay must be >= 0");
  if (s.allocator.step_size < 1) err(out, "allocator", "step_size", "step size must be >= 1");
  if (s.allocator.window < 1) err(out, "allocator", "window", "window must be >= 1");
  const auto& k = s.knowledge;
  if (!(k.alpha >= 0 && k.alpha <= 1)) err(out, "knowledge", "alpha", "alpha outside [0,1]");
  if (!(k.beta >= 0 && k.beta <= 1)) err(out, "knowledge", "beta", "beta outside [0,1]");
  if (!(k.default_score >= 0 && k.default_score <= 1)) {
    err(out, "knowledge", "default_score", "default score outside [0,1]");
  }
  if (k.recurrence_threshold < 2) err(out, "knowledge", "recurrence_threshold", "threshold must be >= 2");
  if (!increasing(s.behavior_costs)) {
    err(out, "behavior_costs", "increasing", "behavior costs must be non-negative and strictly increasing");
  }

  for (const auto& n : s.hierarchy.nodes) {
    if (n.features.perception.universe() != s.universe.name()) {
      err(out, n.id, "universe", "node '" + n.id + "' perception is not drawn from the scenario universe");
    }
    if (!increasing(node_costs(n, s.behavior_costs))) {
      err(out, n.id, "energy_cost_profile", "node '" + n.id + "' behavior costs are not strictly increasing");
    }
  }

  std::set<std::string> protocol_ids;
  for (const auto& p : s.protocols) {
    if (p.id.empty() || !protocol_ids.insert(p.id).second) {
      err(out, p.id, "protocol-id", "protocol id '" + p.id + "' empty or duplicated");
    }
    for (const auto& [role, mult] : p.required_roles) {
      if (mult < 1) err(out, p.id, "multiplicity", "role '" + role + "' has multiplicity < 1");
    }
    if (p.execution_cost < 0) err(out, p.id, "execution_cost", "negative execution cost");
    if (p.duration < 1) err(out, p.id, "duration", "duration must be >= 1");
  }

  std::set<std::string> situation_ids;
  for (const auto& sit : s.situations) {
    if (sit.id.empty() || !situation_ids.insert(sit.id).second) {
      err(out, sit.id, "situation-id", "situation id '" + sit.id + "' empty or duplicated");
    }
    if (sit.required < 0) err(out, sit.id, "required", "required must be >= 0");
    for (const auto& f : sit.relevant_figures) {
      if (!s.universe.contains(f)) err(out, sit.id, "universe", "unknown figure '" + f + "'");
    }
    for (const auto& p : sit.protocols) {
      if (!protocol_ids.count(p)) err(out, sit.id, "protocol", "unknown protocol '" + p + "'");
    }
    if (!sit.critical) {
      try {
        (void)min_threshold(sit, s.allocator.thresholds);
      } catch (const Error& e) {
        err(out, sit.id, "threshold", e.what());
      }
    }
  }

  int last_tick = 0;
  for (std::size_t i = 0; i < s.events.size(); ++i) {
    const auto& ev = s.events[i];
    const std::string subject = "event " + std::to_string(i);
    if (ev.at_tick < 0) err(out, subject, "at_tick", "negative tick");
    if (ev.at_tick < last_tick) err(out, subject, "sorted", "timeline is not sorted by tick");
    last_tick = std::max(last_tick, ev.at_tick);

    if (const auto* cc = std::get_if<ContextChange>(&ev.kind)) {
      if (!s.universe.contains(cc->figure)) err(out, subject, "universe", "unknown figure '" + cc->figure + "'");
      if (cc->level < 0 || cc->level > h.top()) err(out, subject, "level", "unknown level");
    } else if (const auto* ss = std::get_if<SituationSet>(&ev.kind)) {
      if (std::find(gov.begin(), gov.end(), ss->level) == gov.end()) {
        err(out, subject, "level", "situation set on non-governing level " + std::to_string(ss->level));
      } else if (ss->situation.required > static_cast<int>(h.level(ss->level).members.size())) {
        err(out, subject, "required", "situation '" + ss->situation.id + "' requires more nodes than level " +
                                          std::to_string(ss->level) + " holds");
      }
      for (const auto& p : ss->situation.protocols) {
        if (!protocol_ids.count(p)) err(out, subject, "protocol", "unknown protocol '" + p + "'");
      }
      if (!ss->situation.critical) {
        try {
          (void)min_threshold(ss->situation, s.allocator.thresholds);
        } catch (const Error& e) {
          err(out, subject, "threshold", e.what());
        }
      }
    } else if (const auto* c = std::get_if<Catastrophe>(&ev.kind)) {
      if (!h.contains(c->epicenter)) {
        err(out, c->epicenter, "epicenter", "catastrophe epicenter '" + c->epicenter + "' is not a node");
      }
      if (c->magnitude < 1) err(out, subject, "magnitude", "magnitude must be >= 1");
      for (const auto& f : c->figures) {
        if (!s.universe.contains(f)) err(out, subject, "universe", "unknown figure '" + f + "'");
      }
    }
  }

  out.insert(out.end(), warnings.begin(), warnings.end());
  return out;
}

// --- run -----------------------------------------------------------------

namespace {

struct Demand {
  int level = 0;
  std::string protocol;
  std::size_t latency_index = 0;
};

struct LevelAllocator {
  AllocationState state;
  Situation situation;  // current
  std::set<NodeId> active;
};

class Run {
 public:
  explicit Run(const Scenario& s)
      : s_(s),
        h_(Hierarchy::build(s.hierarchy)),
        engine_(h_),
        budget_(s.budget),
        scores_(s.knowledge.default_score),
        tracker_(s.knowledge.recurrence_threshold),
        rng_(s.seed) {
    for (const auto& p : s.protocols) protocols_.emplace(p.id, p);
    for (int lvl : governing_levels(h_)) {
      LevelAllocator a;
      a.state.window = s.allocator.window;
      a.state.step_size = s.allocator.step_size;
      a.situation.id = "idle";
      allocators_.emplace(lvl, std::move(a));
    }
    report_.scenario = s.name;
    report_.seed = s.seed;
    report_.horizon = s.horizon;
    report_.knowledge_enabled = s.knowledge.enabled;
    report_.initial_budget = s.budget;
    report_.scores = ScoreLedger(s.knowledge.default_score);
  }

  MetricsReport execute() {
    std::size_t next_event = 0;
    for (int t = 0; t < s_.horizon; ++t) {
      const std::int64_t spent_before = budget_.spent();
      repair(t);

      std::vector<Notification> notes;
      std::vector<const Catastrophe*> pending_ripples;
      std::set<NodeId> responders;
      while (next_event < s_.events.size() && s_.events[next_event].at_tick == t) {
        apply_event(s_.events[next_event].kind, t, notes, responders, pending_ripples);
        ++next_event;
      }
      for (const auto* c : pending_ripples) propagate(*c, t, notes, responders);
      deliver(notes, t);
      respond(responders, t);

      for (auto& [lvl, alloc] : allocators_) {
        allocate(lvl, alloc, t);
        serve_demands(lvl, t);
      }
      auto dissolved = execute_sons(t);
      learn(dissolved, t);

      const std::int64_t total = budget_.spent();
      if (!budget_.conserved()) throw std::logic_error("energy ledger out of balance");
      report_.energy.push_back({t, total - spent_before, total, budget_.remaining()});
    }
    report_.ledger = budget_.ledger();
    if (s_.knowledge.enabled) report_.scores = scores_;
    return std::move(report_);
  }

 private:
  // Ranking view: memoryless runs see an empty ledger (ties -> id order).
  const ScoreLedger& ranking() const { return s_.knowledge.enabled ? scores_ : blank_; }

  double allocation_score(const NodeId& id) const {
    const auto& caps = h_.node(id).capabilities;
    double best = ranking().default_score();
    bool any = false;
    for (const auto& r : caps) {
      const double v = ranking().score(id, r);
      best = any ? std::max(best, v) : v;
      any = true;
    }
    return best;
  }

  void fail(const NodeId& id, int t) {
    engine_.roster().set(id, NodeState::Failed);
    failed_until_[id] = t + s_.repair_delay;
    for (auto& [_, a] : allocators_) a.active.erase(id);
  }

  void repair(int t) {
    for (auto it = failed_until_.begin(); it != failed_until_.end();) {
      if (it->second <= t) {
        if (engine_.roster().state(it->first) == NodeState::Failed) {
          engine_.roster().set(it->first, NodeState::Idle);
        }
        it = failed_until_.erase(it);
      } else {
        ++it;
      }
    }
  }

  void apply_event(const std::variant<ContextChange, SituationSet, Catastrophe>& kind, int t,
                   std::vector<Notification>& notes, std::set<NodeId>& responders,
                   std::vector<const Catastrophe*>& ripples) {
    if (const auto* cc = std::get_if<ContextChange>(&kind)) {
      for (const auto& m : h_.level(cc->level).members) {
        if (h_.home_level(m) != cc->level) continue;
        if (h_.node(m).features.perception.figures().count(cc->figure)) {
          notes.push_back({m, "context:" + cc->figure});
          if (engine_.roster().state(m) != NodeState::Failed) responders.insert(m);
        }
      }
    } else if (const auto* ss = std::get_if<SituationSet>(&kind)) {
      auto& alloc = allocators_.at(ss->level);
      alloc.situation = ss->situation;
      std::erase_if(demands_, [&](const Demand& d) { return d.level == ss->level; });
      report_.latencies.push_back({t, ss->level, ss->situation.id, std::nullopt});
      const std::size_t li = report_.latencies.size() - 1;
      for (const auto& p : ss->situation.protocols) demands_.push_back({ss->level, p, li});
    } else if (const auto* c = std::get_if<Catastrophe>(&kind)) {
      ripples.push_back(c);
    }
  }

  void propagate(const Catastrophe& c, int t, std::vector<Notification>& notes,
                 std::set<NodeId>& responders) {
    auto r = ripple(h_, c.epicenter, c.figures, c.magnitude);
    CatastropheRecord rec{t, c.epicenter, c.figures, c.magnitude, r.hops, {}, r.perceivers};
    // One draw per affected node, in node id order.
    for (const auto& [id, hop] : r.hops) {
      const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
      const double p = 1.0 / (hop + 1);
      if (u < p) {
        fail(id, t);
        rec.failed.insert(id);
      }
    }
    for (const auto& id : r.perceivers) {
      notes.push_back({id, "catastrophe:" + c.epicenter});
      if (!rec.failed.count(id)) responders.insert(id);
    }
    report_.catastrophes.push_back(std::move(rec));
  }

  void deliver(std::vector<Notification>& notes, int t) {
    std::stable_sort(notes.begin(), notes.end(), [&](const Notification& a, const Notification& b) {
      const int la = h_.home_level(a.origin);
      const int lb = h_.home_level(b.origin);
      if (la != lb) return la < lb;
      return a.origin < b.origin;
    });
    for (const auto& n : notes) {
      for (const auto& d : publish(h_, n)) {
        report_.notifications.push_back({t, n.origin, h_.home_level(n.origin), d.canon, d.level, n.cause});
      }
    }
  }

  void respond(const std::set<NodeId>& responders, int t) {
    std::vector<NodeId> order(responders.begin(), responders.end());
    std::stable_sort(order.begin(), order.end(), [&](const NodeId& a, const NodeId& b) {
      return h_.home_level(a) < h_.home_level(b);
    });
    for (const auto& id : order) {
      const Node& node = h_.node(id);
      const auto costs = node_costs(node, s_.behavior_costs);
      const auto ceiling = classify(node.features).behavior;
      const auto choice = choose_behavior(costs, ceiling, budget_.remaining());
      std::int64_t cost = 0;
      if (choice) {
        cost = costs[static_cast<int>(*choice)];
        budget_.try_debit({{t, id, cost, std::string("behavior ") + to_string(*choice)}});
      }
      report_.behaviors.push_back({t, id, choice, cost});
    }
  }

  void allocate(int lvl, LevelAllocator& a, int t) {
    const auto& members = h_.level(lvl).members;
    a.state.capacity = static_cast<int>(members.size());
    a.state.fired = static_cast<int>(a.active.size());

    std::vector<NodeId> idle;
    SelectionView view;
    for (const auto& m : members) {
      if (a.active.count(m)) {
        const double sc = allocation_score(m);
        if (!view.worst_active_score || sc < *view.worst_active_score) view.worst_active_score = sc;
      } else if (engine_.roster().state(m) == NodeState::Failed) {
        ++view.unavailable;
      } else {
        idle.push_back(m);
        const double sc = allocation_score(m);
        if (!view.best_idle_score || sc > *view.best_idle_score) view.best_idle_score = sc;
      }
    }

    const int floor = a.situation.id == "idle" && a.situation.required == 0
                          ? 0
                          : min_threshold(a.situation, s_.allocator.thresholds);
    const int fired_before = a.state.fired;
    const auto decision = step(a.state, a.situation, floor, view);
    report_.allocator.push_back({t, lvl, a.situation.id, a.situation.required, fired_before,
                                 a.state.undershoot, a.state.overshoot,
                                 a.state.capacity > 0 ? dtof(a.state) : Rational(0), decision,
                                 a.state.capacity});

    auto by_score_desc = [&](const NodeId& x, const NodeId& y) {
      const double sx = allocation_score(x), sy = allocation_score(y);
      return sx != sy ? sx > sy : x < y;
    };
    std::vector<NodeId> active(a.active.begin(), a.active.end());
    // Weakest first: lowest score, then highest id.
    std::sort(active.begin(), active.end(), [&](const NodeId& x, const NodeId& y) { return by_score_desc(y, x); });
    std::sort(idle.begin(), idle.end(), by_score_desc);

    switch (decision.kind) {
      case AllocationDecision::Kind::Enroll:
        for (int i = 0; i < decision.count && i < static_cast<int>(idle.size()); ++i) a.active.insert(idle[i]);
        break;
      case AllocationDecision::Kind::Free:
        for (int i = 0; i < decision.count && i < static_cast<int>(active.size()); ++i) a.active.erase(active[i]);
        break;
      case AllocationDecision::Kind::Reselect:
        for (std::size_t i = 0; i < active.size() && i < idle.size(); ++i) {
          if (allocation_score(idle[i]) <= allocation_score(active[i])) break;
          a.active.erase(active[i]);
          a.active.insert(idle[i]);
        }
        break;
      case AllocationDecision::Kind::NoChange:
        break;
    }
    a.state.fired = static_cast<int>(a.active.size());
  }

  void serve_demands(int lvl, int t) {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < demands_.size(); ++i) {
      if (demands_[i].level == lvl) order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      const auto& px = protocols_.at(demands_[x].protocol);
      const auto& py = protocols_.at(demands_[y].protocol);
      if (px.priority != py.priority) return px.priority > py.priority;
      return px.id < py.id;
    });

    std::set<std::size_t> served;
    for (auto i : order) {
      const Demand& d = demands_[i];
      const Protocol& p = protocols_.at(d.protocol);
      auto result = enroll(p, lvl, h_, ranking(), engine_.roster());
      std::optional<SON> son;
      std::string outcome;
      if (auto* done = std::get_if<Complete>(&result)) {
        son = form_son(engine_.next_son_id(), p, done->placements, lvl, t);
        outcome = "complete";
      } else {
        const auto& ex = std::get<RoleException>(result);
        ++report_.escalations_per_level[lvl];
        auto esc = escalate(ex, p, h_, ranking(), engine_.roster(), t, engine_.next_son_id());
        if (auto* formed = std::get_if<SON>(&esc)) {
          son = std::move(*formed);
          outcome = "resolved";
        } else {
          report_.son_events.push_back({t, p.id, "", {lvl}, "pending"});
          continue;
        }
      }
      report_.son_events.push_back({t, p.id, son->signature, son->levels_spanned, outcome});
      auto& lat = report_.latencies[d.latency_index];
      if (!lat.latency) lat.latency = t - lat.set_at;
      progress_[son->id] = 0;
      engine_.activate(std::move(*son));
      served.insert(i);
    }
    std::vector<Demand> rest;
    for (std::size_t i = 0; i < demands_.size(); ++i) {
      if (!served.count(i)) rest.push_back(demands_[i]);
    }
    demands_ = std::move(rest);
  }

  std::vector<std::pair<SON, ExecutionOutcome>> execute_sons(int t) {
    std::vector<std::pair<SON, ExecutionOutcome>> done;
    std::vector<std::string> ids;
    for (const auto& [id, _] : engine_.active()) ids.push_back(id);
    for (const auto& id : ids) {
      const SON son = engine_.active().at(id);
      const Protocol& p = protocols_.at(son.protocol_id);
      std::optional<ExecutionOutcome> end;
      const bool broken = std::any_of(son.assignment.begin(), son.assignment.end(), [&](const auto& rn) {
        return engine_.roster().state(rn.second) == NodeState::Failed;
      });
      if (broken) {
        end = ExecutionOutcome{ExecutionOutcome::Kind::Failed, t};
      } else {
        auto out = fso::execute(son, p, budget_, 1, t);
        if (!out.ok()) {
          end = out;
        } else if (++progress_[id] >= p.duration) {
          end = out;
        }
      }
      if (end) {
        report_.son_events.push_back({t, p.id, son.signature, son.levels_spanned, to_string(end->kind)});
        engine_.dissolve(id, t, *end);
        progress_.erase(id);
        done.emplace_back(son, *end);
      }
    }
    return done;
  }

  void learn(const std::vector<std::pair<SON, ExecutionOutcome>>& dissolved, int t) {
    if (!s_.knowledge.enabled) return;
    for (const auto& [son, outcome] : dissolved) {
      scores_ = record_outcome(std::move(scores_), son, outcome, s_.knowledge.alpha, s_.knowledge.beta);
      if (!outcome.ok()) continue;
      auto [tracker, recurred] = observe_son(std::move(tracker_), son);
      tracker_ = std::move(tracker);
      const NodeId perm = permanent_node_id(son.signature);
      // Single-level SONs never escalate, so there is nothing to blackbox.
      if (!recurred || son.levels_spanned.size() < 2 || h_.contains(perm)) continue;
      h_ = permanentify(h_, son);
      engine_.roster().sync(h_);
      const int lvl = *son.levels_spanned.begin();
      report_.permanentifications.push_back({t, son.signature, perm, lvl});
      report_.son_events.push_back({t, son.protocol_id, son.signature, {lvl}, "permanentified"});
    }
  }

  const Scenario& s_;
  Hierarchy h_;
  RoleFlowEngine engine_;
  EnergyBudget budget_;
  ScoreLedger scores_;
  ScoreLedger blank_{s_.knowledge.default_score};
  RecurrenceTracker tracker_;
  std::mt19937_64 rng_;
  std::map<std::string, Protocol> protocols_;
  std::map<int, LevelAllocator> allocators_;
  std::vector<Demand> demands_;
  std::map<std::string, int> progress_;
  std::map<NodeId, int> failed_until_;
  MetricsReport report_;
};

}  // namespace

MetricsReport run(const Scenario& scenario) {
  for (const auto& v : validate_scenario(scenario)) {
    if (v.severity == Violation::Severity::Error) {
      throw Error(ErrorKind::Validation, v.subject + ": " + v.message + " [" + v.rule + "]");
    }
  }
  return Run(scenario).execute();
}

}  // namespace fso
