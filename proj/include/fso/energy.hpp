#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fso {

struct LedgerEntry {
  int tick = 0;
  std::string node;
  std::int64_t cost = 0;
  std::string reason;
};

/// System-wide pool of consumable resources. Debits are all-or-nothing and
/// never drive `remaining` below zero.
class EnergyBudget {
 public:
  explicit EnergyBudget(std::int64_t initial = 0);

  std::int64_t initial() const noexcept { return initial_; }
  std::int64_t remaining() const noexcept { return remaining_; }
  const std::vector<LedgerEntry>& ledger() const noexcept { return ledger_; }

  bool affordable(std::int64_t cost) const noexcept { return cost <= remaining_; }

  /// Applies every entry or none. Returns false when the total exceeds
  /// `remaining`. Zero-cost entries are dropped.
  bool try_debit(const std::vector<LedgerEntry>& entries);

  /// Sum of ledger costs.
  std::int64_t spent() const noexcept;

  /// remaining == initial - sum(ledger) and remaining >= 0.
  bool conserved() const noexcept;

 private:
  std::int64_t initial_;
  std::int64_t remaining_;
  std::vector<LedgerEntry> ledger_;
};

}  // namespace fso
