// Piecewise constant value densities over the cake and the cut calculus.
#pragma once

#include <utility>
#include <vector>

#include "cake/piece.hpp"

namespace cake {

// A nonnegative step function on [0,1]. Breakpoints are strictly ascending
// from 0 to 1; densities[k] holds on [breakpoints[k], breakpoints[k+1]).
// The representation is canonical: adjacent cells never share a density, so
// every interior breakpoint is a genuine discontinuity.
class PiecewiseConstant {
 public:
  // Uniform density 1.
  PiecewiseConstant() : bps_{0, 1}, dens_{1} {}
  // Validates shape and merges equal neighbours. Throws Error on a breakpoint
  // vector that is not strictly ascending from 0 to 1, a density count that
  // does not match, or a negative density.
  PiecewiseConstant(std::vector<Rational> breakpoints, std::vector<Rational> densities);

  static PiecewiseConstant uniform() { return PiecewiseConstant(); }
  // Builds a density that equals the given constant on each region. Regions
  // must partition [0,1] exactly; throws Error otherwise.
  static PiecewiseConstant from_regions(const std::vector<std::pair<Piece, Rational>>& regions);

  const std::vector<Rational>& breakpoints() const { return bps_; }
  const std::vector<Rational>& densities() const { return dens_; }
  bool hungry() const;      // every density strictly positive
  Rational total() const;   // value of the whole cake

  friend bool operator==(const PiecewiseConstant&, const PiecewiseConstant&) = default;

 private:
  std::vector<Rational> bps_;
  std::vector<Rational> dens_;
};

// Agent densities in agent order.
using Profile = std::vector<PiecewiseConstant>;

Rational eval(const PiecewiseConstant& f, const Interval& iv);
Rational eval(const PiecewiseConstant& f, const Piece& piece);

// Leftmost y in [x,1] with eval(f, [x,y]) == r. Throws
// RequestExceedsRemaining if [x,1] is worth less than r.
Rational cut(const PiecewiseConstant& f, const Rational& x, const Rational& r);

// Interior breakpoints, ascending. Canonical form makes each one a jump.
std::vector<Rational> discontinuities(const PiecewiseConstant& f);

// The n-1 leftmost points splitting the cake into n consecutive spans of
// equal value under f. Throws ZeroTotalValue when f integrates to zero.
std::vector<Rational> mark_points(const PiecewiseConstant& f, int n);

// Subdivision densities: ell(n) is 3/2 on [0,1/(2n)), 1/2 on [1/(2n),1/n),
// 1 on [1/n,1]; rr(n) is its mirror image. Both integrate to 1. n >= 2.
PiecewiseConstant ell(int n);
PiecewiseConstant rr(int n);

}  // namespace cake
