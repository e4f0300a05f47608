#include "cake/piece.hpp"

#include <algorithm>

namespace cake {

Piece::Piece(std::vector<Interval> intervals) {
  for (const auto& iv : intervals) {
    if (iv.hi < iv.lo) throw Error("inverted interval [" + iv.lo.str() + "," + iv.hi.str() + ")");
    if (iv.lo < Rational(0) || Rational(1) < iv.hi)
      throw Error("interval [" + iv.lo.str() + "," + iv.hi.str() + ") leaves [0,1]");
  }
  std::erase_if(intervals, [](const Interval& iv) { return iv.lo == iv.hi; });
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (const auto& iv : intervals) {
    if (!ivs_.empty() && !(ivs_.back().hi < iv.lo)) {
      ivs_.back().hi = max(ivs_.back().hi, iv.hi);
    } else {
      ivs_.push_back(iv);
    }
  }
}

Piece Piece::interval(const Rational& lo, const Rational& hi) {
  return Piece(std::vector<Interval>{{lo, hi}});
}

Rational Piece::length() const {
  Rational sum;
  for (const auto& iv : ivs_) sum += iv.hi - iv.lo;
  return sum;
}

bool Piece::contains(const Rational& x) const {
  for (const auto& iv : ivs_)
    if (!(x < iv.lo) && x < iv.hi) return true;
  return false;
}

Piece Piece::complement() const {
  std::vector<Interval> out;
  Rational pos(0);
  for (const auto& iv : ivs_) {
    out.push_back({pos, iv.lo});
    pos = iv.hi;
  }
  out.push_back({pos, Rational(1)});
  return Piece(std::move(out));
}

Piece intersect(const Piece& a, const Piece& b) {
  std::vector<Interval> out;
  for (const auto& x : a.intervals())
    for (const auto& y : b.intervals()) {
      Rational lo = max(x.lo, y.lo), hi = min(x.hi, y.hi);
      if (lo < hi) out.push_back({lo, hi});
    }
  return Piece(std::move(out));
}

Piece unite(const Piece& a, const Piece& b) {
  std::vector<Interval> out = a.intervals();
  out.insert(out.end(), b.intervals().begin(), b.intervals().end());
  return Piece(std::move(out));
}

Piece difference(const Piece& a, const Piece& b) {
  return intersect(a, b.complement());
}

Rational symmetric_difference_length(const Piece& a, const Piece& b) {
  return difference(a, b).length() + difference(b, a).length();
}

}  // namespace cake
