// Measurable subsets of the cake [0,1]: finite unions of half-open intervals.
#pragma once

#include <vector>

#include "cake/rational.hpp"

namespace cake {

// Half-open interval [lo, hi). An interval whose right end is 1 is read as
// closed there; the distinction has measure zero and never affects values.
struct Interval {
  Rational lo, hi;
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Canonical interval union: sorted, pairwise disjoint, no empty and no
// adjacent intervals. Two pieces are equal up to measure zero iff their
// canonical forms are equal.
class Piece {
 public:
  Piece() = default;
  // Canonicalizes: drops empty intervals, sorts, merges overlaps and
  // adjacencies. Throws Error if an interval is inverted or leaves [0,1].
  explicit Piece(std::vector<Interval> intervals);

  static Piece interval(const Rational& lo, const Rational& hi);
  static Piece whole() { return interval(0, 1); }

  const std::vector<Interval>& intervals() const { return ivs_; }
  bool empty() const { return ivs_.empty(); }
  // Empty pieces and single intervals count as connected.
  bool connected() const { return ivs_.size() <= 1; }
  Rational length() const;
  bool contains(const Rational& x) const;  // membership in the half-open union

  Piece complement() const;  // within [0,1]

  friend bool operator==(const Piece&, const Piece&) = default;

 private:
  std::vector<Interval> ivs_;
};

Piece intersect(const Piece& a, const Piece& b);
Piece unite(const Piece& a, const Piece& b);
Piece difference(const Piece& a, const Piece& b);
// Length of the symmetric difference; zero iff the pieces are equal.
Rational symmetric_difference_length(const Piece& a, const Piece& b);

}  // namespace cake
