#include "cake/allocation.hpp"

namespace cake {

Allocation::Allocation(std::vector<Piece> shares) : shares_(std::move(shares)) {
  for (std::size_t i = 0; i < shares_.size(); ++i)
    for (std::size_t j = i + 1; j < shares_.size(); ++j)
      if (!intersect(shares_[i], shares_[j]).empty())
        throw Error("shares " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
}

bool Allocation::entire() const {
  Rational sum;
  for (const auto& s : shares_) sum += s.length();
  return sum == Rational(1);
}

Piece Allocation::unallocated() const {
  Piece all;
  for (const auto& s : shares_) all = unite(all, s);
  return all.complement();
}

AuditReport audit(const Profile& profile, const Allocation& allocation) {
  if (profile.size() != allocation.size())
    throw AgentCountMismatch("profile has " + std::to_string(profile.size()) +
                             " agents, allocation has " + std::to_string(allocation.size()));
  const std::size_t n = profile.size();
  AuditReport report;
  report.totals.reserve(n);
  for (const auto& f : profile) report.totals.push_back(f.total());
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rational> row;
    row.reserve(n);
    for (std::size_t j = 0; j < n; ++j) row.push_back(eval(profile[i], allocation.share(j)));
    report.values.push_back(std::move(row));
  }

  report.entire = allocation.entire();
  report.connected = true;
  for (const auto& s : allocation.shares()) report.connected = report.connected && s.connected();
  report.proportional = report.envy_free = report.exact = true;
  for (std::size_t i = 0; i < n; ++i) {
    Rational share = report.totals[i] / Rational(static_cast<std::int64_t>(n));
    report.proportional = report.proportional && !(report.values[i][i] < share);
    for (std::size_t j = 0; j < n; ++j) {
      report.envy_free = report.envy_free && !(report.values[i][i] < report.values[i][j]);
      report.exact = report.exact && report.values[i][j] == share;
    }
  }
  return report;
}

}  // namespace cake
