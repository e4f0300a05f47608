#include "cake/allocation.hpp"

#include <random>

#include "doctest.h"
#include "oracles.hpp"

using cake::Allocation;
using cake::AuditReport;
using cake::Interval;
using cake::Piece;
using cake::PiecewiseConstant;
using cake::Profile;
using cake::Rational;

namespace {
Rational r(long long n, long long d = 1) { return Rational(n, d); }

Allocation halves() {
  return Allocation({Piece::interval(0, r(1, 2)), Piece::interval(r(1, 2), 1)});
}
}  // namespace

TEST_CASE("allocation rejects positive-measure overlap") {
  CHECK_THROWS_AS(Allocation({Piece::interval(0, r(2, 3)), Piece::interval(r(1, 3), 1)}),
                  cake::Error);
  // Shared endpoints of half-open intervals are not overlap.
  CHECK_NOTHROW(halves());
  CHECK_NOTHROW(Allocation({Piece::interval(0, r(1, 3)), Piece(), Piece::interval(r(1, 3), 1)}));
}

TEST_CASE("entire and unallocated") {
  CHECK(halves().entire());
  CHECK(halves().unallocated().empty());

  Allocation partial({Piece::interval(0, r(1, 3))});
  CHECK_FALSE(partial.entire());
  CHECK(partial.unallocated() == Piece::interval(r(1, 3), 1));

  // Non-entire pair mirroring the open connected division on the two-agent
  // marking example: shares ([1/2,1], [0,1/3)) leave [1/3,1/2) on the table.
  Allocation open_pair({Piece::interval(r(1, 2), 1), Piece::interval(0, r(1, 3))});
  CHECK(open_pair.unallocated() == Piece::interval(r(1, 3), r(1, 2)));
}

TEST_CASE("audit on the symmetric uniform split") {
  Profile both_uniform{PiecewiseConstant::uniform(), PiecewiseConstant::uniform()};
  AuditReport rep = audit(both_uniform, halves());
  CHECK(rep.proportional);
  CHECK(rep.envy_free);
  CHECK(rep.exact);
  CHECK(rep.entire);
  CHECK(rep.connected);
  CHECK(rep.totals == std::vector<Rational>{r(1), r(1)});
  CHECK(rep.values[0][0] == r(1, 2));
  CHECK(rep.values[1][0] == r(1, 2));
}

TEST_CASE("audit on a lopsided but proportional split") {
  // Agent 2 cares almost only about the right half.
  PiecewiseConstant f2({r(0), r(1, 2), r(1)}, {r(1, 100), 1});
  Profile profile{PiecewiseConstant::uniform(), f2};
  AuditReport rep = audit(profile, halves());
  CHECK(rep.proportional);
  CHECK(rep.values[1][1] == r(1, 2));
  CHECK(rep.totals[1] == r(101, 200));
  CHECK(rep.envy_free);
  CHECK_FALSE(rep.exact);
  CHECK(rep.entire);
  CHECK(rep.connected);
}

TEST_CASE("audit on a deliberately unfair split") {
  Profile both_uniform{PiecewiseConstant::uniform(), PiecewiseConstant::uniform()};
  Allocation a({Piece::interval(0, r(1, 4)), Piece::interval(r(1, 4), r(1, 2))});
  AuditReport rep = audit(both_uniform, a);
  CHECK_FALSE(rep.proportional);
  CHECK(rep.values[0][0] == r(1, 4));
  CHECK_FALSE(rep.entire);
  CHECK_FALSE(rep.exact);
  CHECK(rep.connected);
  CHECK(rep.envy_free);  // equal quarters, nobody envies
}

TEST_CASE("audit flags disconnected shares") {
  Profile both_uniform{PiecewiseConstant::uniform(), PiecewiseConstant::uniform()};
  Piece split(std::vector<Interval>{{r(0), r(1, 4)}, {r(1, 2), r(3, 4)}});
  AuditReport rep = audit(both_uniform, Allocation({split, split.complement()}));
  CHECK_FALSE(rep.connected);
  CHECK(rep.exact);
  CHECK(rep.entire);
}

TEST_CASE("audit validates agent count") {
  Profile one{PiecewiseConstant::uniform()};
  CHECK_THROWS_AS(audit(one, halves()), cake::AgentCountMismatch);
}

TEST_CASE("implications between fairness notions hold on random audits") {
  std::mt19937_64 rng(20240814);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 2 + static_cast<int>(rng() % 3);
    Profile profile = oracle::random_profile(rng, n, 6);
    // Random contiguous entire split at grid points.
    std::vector<Rational> cuts{r(0)};
    for (int i = 1; i < n; ++i) cuts.push_back(r(static_cast<long long>(rng() % 13), 12));
    cuts.push_back(r(1));
    std::sort(cuts.begin(), cuts.end());
    std::vector<Piece> shares;
    for (int i = 0; i < n; ++i) shares.push_back(Piece::interval(cuts[i], cuts[i + 1]));
    AuditReport rep = audit(profile, Allocation(std::move(shares)));

    if (rep.exact) CHECK(rep.envy_free);
    if (rep.entire && rep.envy_free) CHECK(rep.proportional);
    for (int i = 0; i < n; ++i) {
      Rational sum(0);
      for (int j = 0; j < n; ++j) sum += rep.values[i][j];
      CHECK(sum == rep.totals[i]);  // entire split: row sums to the total
    }
  }
}
