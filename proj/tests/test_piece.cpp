#include "cake/piece.hpp"

#include "doctest.h"

using cake::Interval;
using cake::Piece;
using cake::Rational;

namespace {
Rational r(long long n, long long d = 1) { return Rational(n, d); }
}  // namespace

TEST_CASE("construction canonicalizes") {
  // Unsorted, touching and overlapping inputs collapse to one interval.
  Piece p(std::vector<Interval>{{r(1, 2), r(3, 4)}, {r(0), r(1, 4)}, {r(1, 4), r(1, 2)}});
  CHECK(p == Piece::interval(0, r(3, 4)));
  CHECK(p.connected());

  Piece q(std::vector<Interval>{{r(0), r(1, 3)}, {r(1, 4), r(1, 2)}});
  CHECK(q == Piece::interval(0, r(1, 2)));

  // Empty intervals vanish.
  CHECK(Piece(std::vector<Interval>{{r(1, 2), r(1, 2)}}).empty());
  CHECK(Piece::interval(r(1, 3), r(1, 3)).empty());

  CHECK_THROWS_AS(Piece::interval(r(1, 2), r(1, 3)), cake::Error);
  CHECK_THROWS_AS(Piece::interval(r(-1, 2), r(1, 3)), cake::Error);
  CHECK_THROWS_AS(Piece::interval(r(1, 2), r(3, 2)), cake::Error);
}

TEST_CASE("length, contains, connected") {
  Piece p(std::vector<Interval>{{r(0), r(1, 4)}, {r(1, 2), r(5, 8)}});
  CHECK(p.length() == r(3, 8));
  CHECK_FALSE(p.connected());
  CHECK(p.contains(r(0)));
  CHECK(p.contains(r(1, 8)));
  CHECK_FALSE(p.contains(r(1, 4)));  // right ends are open
  CHECK(p.contains(r(1, 2)));
  CHECK_FALSE(p.contains(r(3, 4)));
  CHECK(Piece::whole().length() == r(1));
  CHECK(Piece().empty());
  CHECK(Piece().connected());
  CHECK(Piece().length() == r(0));
}

TEST_CASE("complement") {
  CHECK(Piece::whole().complement().empty());
  CHECK(Piece().complement() == Piece::whole());
  Piece p(std::vector<Interval>{{r(1, 4), r(1, 2)}, {r(3, 4), r(1)}});
  CHECK(p.complement() ==
        Piece(std::vector<Interval>{{r(0), r(1, 4)}, {r(1, 2), r(3, 4)}}));
  CHECK(p.complement().complement() == p);
}

TEST_CASE("set algebra") {
  Piece a(std::vector<Interval>{{r(0), r(1, 2)}});
  Piece b(std::vector<Interval>{{r(1, 4), r(3, 4)}});
  CHECK(intersect(a, b) == Piece::interval(r(1, 4), r(1, 2)));
  CHECK(unite(a, b) == Piece::interval(0, r(3, 4)));
  CHECK(difference(a, b) == Piece::interval(0, r(1, 4)));
  CHECK(difference(b, a) == Piece::interval(r(1, 2), r(3, 4)));
  CHECK(symmetric_difference_length(a, b) == r(1, 2));
  CHECK(symmetric_difference_length(a, a) == r(0));
  CHECK(intersect(a, a.complement()).empty());
  CHECK(unite(a, a.complement()) == Piece::whole());

  // Disjoint but touching pieces: union merges, intersection is empty.
  Piece left = Piece::interval(0, r(1, 2)), right = Piece::interval(r(1, 2), 1);
  CHECK(intersect(left, right).empty());
  CHECK(unite(left, right) == Piece::whole());
}
