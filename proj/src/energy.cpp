#include "fso/energy.hpp"

#include <numeric>
#include <stdexcept>

namespace fso {

EnergyBudget::EnergyBudget(std::int64_t initial) : initial_(initial), remaining_(initial) {
  if (initial < 0) throw std::invalid_argument("energy budget must be non-negative");
}

bool EnergyBudget::try_debit(const std::vector<LedgerEntry>& entries) {
  std::int64_t total = 0;
  for (const auto& e : entries) {
    if (e.cost < 0) throw std::invalid_argument("negative ledger cost for '" + e.node + "'");
    total += e.cost;
  }
  if (total > remaining_) return false;
  for (const auto& e : entries) {
    if (e.cost > 0) ledger_.push_back(e);
  }
  remaining_ -= total;
  return true;
}

std::int64_t EnergyBudget::spent() const noexcept {
  return std::accumulate(ledger_.begin(), ledger_.end(), std::int64_t{0},
                         [](std::int64_t acc, const LedgerEntry& e) { return acc + e.cost; });
}

bool EnergyBudget::conserved() const noexcept {
  return remaining_ >= 0 && remaining_ == initial_ - spent();
}

}  // namespace fso
