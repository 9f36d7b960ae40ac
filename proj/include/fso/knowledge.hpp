#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fso/hierarchy.hpp"
#include "fso/son.hpp"

namespace fso {

struct KnowledgeConfig {
  double alpha = 0.1;  // reward rate: s <- s + alpha * (1 - s)
  double beta = 0.5;   // penalty factor: s <- beta * s
  double default_score = 0.5;
  int recurrence_threshold = 3;
  bool enabled = true;
};

/// Enrollment scores in [0, 1] per (node, role). Unseen pairs read as the
/// default score.
class ScoreLedger {
 public:
  explicit ScoreLedger(double default_score = 0.5);

  double default_score() const noexcept { return default_score_; }
  double score(const NodeId& node, const Role& role) const;
  void set(const NodeId& node, const Role& role, double value);

  const std::map<std::pair<NodeId, Role>, double>& entries() const noexcept { return scores_; }

 private:
  std::map<std::pair<NodeId, Role>, double> scores_;
  double default_score_;
};

/// Gradual reward on success, multiplicative penalty otherwise, applied to
/// every (node, role) pair of the SON.
ScoreLedger record_outcome(ScoreLedger ledger, const SON& son, const ExecutionOutcome& outcome,
                           double alpha = 0.1, double beta = 0.5);

/// Candidates by score descending, node id ascending on ties.
std::vector<NodeId> rank(const ScoreLedger& ledger, const Role& role, std::vector<NodeId> candidates);

class RecurrenceTracker {
 public:
  explicit RecurrenceTracker(int threshold = 3);

  int threshold() const noexcept { return threshold_; }
  int count(const std::string& signature) const;
  const std::map<std::string, int>& counts() const noexcept { return counts_; }

 private:
  friend std::pair<RecurrenceTracker, bool> observe_son(RecurrenceTracker, const SON&);
  std::map<std::string, int> counts_;
  int threshold_;
};

/// Counts one more successful occurrence of the SON's signature.
/// `second` is true once the count reaches the threshold.
std::pair<RecurrenceTracker, bool> observe_son(RecurrenceTracker tracker, const SON& son);

/// Id of the permanent node that blackboxes SONs with this signature.
NodeId permanent_node_id(const std::string& signature);

/// Adds a composite permanent node capable of every role of the SON, at the
/// lowest level the SON spans. No-op if that node already exists.
Hierarchy permanentify(const Hierarchy& h, const SON& son);

}  // namespace fso
