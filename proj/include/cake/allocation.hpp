// Allocations of the cake to agents plus the fairness auditor.
#pragma once

#include <vector>

#include "cake/piecewise.hpp"

namespace cake {

// One piece per agent. Shares may be empty and need not cover the cake, but
// any positive-measure overlap is rejected at construction.
class Allocation {
 public:
  Allocation() = default;
  explicit Allocation(std::vector<Piece> shares);

  std::size_t size() const { return shares_.size(); }
  const Piece& share(std::size_t i) const { return shares_.at(i); }
  const std::vector<Piece>& shares() const { return shares_; }

  bool entire() const;       // allocated lengths sum to 1
  Piece unallocated() const; // complement of the union of shares

  friend bool operator==(const Allocation&, const Allocation&) = default;

 private:
  std::vector<Piece> shares_;
};

// Fairness audit of an allocation against a profile. values[i][j] is agent
// i's value of agent j's share; totals[i] is agent i's value of the cake.
struct AuditReport {
  bool proportional = false;
  bool envy_free = false;
  bool entire = false;
  bool connected = false;
  bool exact = false;
  std::vector<Rational> totals;
  std::vector<std::vector<Rational>> values;
};

// Throws AgentCountMismatch when profile and allocation sizes differ.
AuditReport audit(const Profile& profile, const Allocation& allocation);

}  // namespace cake
