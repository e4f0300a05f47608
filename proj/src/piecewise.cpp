#include "cake/piecewise.hpp"

#include <algorithm>

namespace cake {

PiecewiseConstant::PiecewiseConstant(std::vector<Rational> breakpoints,
                                     std::vector<Rational> densities) {
  if (breakpoints.size() < 2 || breakpoints.front() != Rational(0) ||
      breakpoints.back() != Rational(1))
    throw Error("breakpoints must run from 0 to 1");
  if (densities.size() + 1 != breakpoints.size())
    throw Error("need exactly one density per cell");
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k)
    if (!(breakpoints[k] < breakpoints[k + 1]))
      throw Error("breakpoints must be strictly ascending");
  for (const auto& d : densities)
    if (d.sign() < 0) throw Error("negative density");

  bps_.push_back(breakpoints.front());
  for (std::size_t k = 0; k < densities.size(); ++k) {
    if (!dens_.empty() && dens_.back() == densities[k]) {
      bps_.back() = breakpoints[k + 1];  // merge equal neighbours
    } else {
      dens_.push_back(densities[k]);
      bps_.push_back(breakpoints[k + 1]);
    }
  }
}

PiecewiseConstant PiecewiseConstant::from_regions(
    const std::vector<std::pair<Piece, Rational>>& regions) {
  std::vector<Rational> bounds{Rational(0), Rational(1)};
  for (const auto& [piece, density] : regions) {
    if (density.sign() < 0) throw Error("negative density");
    for (const auto& iv : piece.intervals()) {
      bounds.push_back(iv.lo);
      bounds.push_back(iv.hi);
    }
  }
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());

  // Each cell of the refined grid is atomic for every region, so midpoint
  // membership decides coverage exactly.
  std::vector<Rational> densities;
  for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
    Rational mid = (bounds[k] + bounds[k + 1]) / 2;
    const Rational* found = nullptr;
    for (const auto& [piece, density] : regions) {
      if (piece.contains(mid)) {
        if (found) throw Error("regions overlap");
        found = &density;
      }
    }
    if (!found) throw Error("regions do not cover [0,1]");
    densities.push_back(*found);
  }
  return PiecewiseConstant(std::move(bounds), std::move(densities));
}

bool PiecewiseConstant::hungry() const {
  return std::all_of(dens_.begin(), dens_.end(),
                     [](const Rational& d) { return d.sign() > 0; });
}

Rational PiecewiseConstant::total() const { return eval(*this, Piece::whole()); }

Rational eval(const PiecewiseConstant& f, const Interval& iv) {
  Rational sum;
  const auto& bps = f.breakpoints();
  for (std::size_t k = 0; k + 1 < bps.size(); ++k) {
    Rational lo = max(bps[k], iv.lo), hi = min(bps[k + 1], iv.hi);
    if (lo < hi) sum += f.densities()[k] * (hi - lo);
  }
  return sum;
}

Rational eval(const PiecewiseConstant& f, const Piece& piece) {
  Rational sum;
  for (const auto& iv : piece.intervals()) sum += eval(f, iv);
  return sum;
}

Rational cut(const PiecewiseConstant& f, const Rational& x, const Rational& r) {
  if (x < Rational(0) || Rational(1) < x) throw Error("cut start outside [0,1]");
  if (r.sign() < 0) throw Error("cut request negative");
  if (r.is_zero()) return x;
  Rational cum;
  const auto& bps = f.breakpoints();
  for (std::size_t k = 0; k + 1 < bps.size(); ++k) {
    Rational lo = max(bps[k], x), hi = bps[k + 1];
    if (!(lo < hi)) continue;
    const Rational& d = f.densities()[k];
    if (d.sign() == 0) continue;
    Rational gain = d * (hi - lo);
    if (!(cum + gain < r)) return lo + (r - cum) / d;  // leftmost point inside this cell
    cum += gain;
  }
  throw RequestExceedsRemaining("[" + x.str() + ",1] is worth less than " + r.str());
}

std::vector<Rational> discontinuities(const PiecewiseConstant& f) {
  const auto& bps = f.breakpoints();
  return {bps.begin() + 1, bps.end() - 1};
}

std::vector<Rational> mark_points(const PiecewiseConstant& f, int n) {
  if (n < 1) throw Error("mark_points needs n >= 1");
  Rational total = f.total();
  if (total.is_zero()) throw ZeroTotalValue("mark_points on a zero density");
  Rational span = total / n;
  std::vector<Rational> marks;
  Rational pos(0);
  for (int j = 1; j < n; ++j) {
    pos = cut(f, pos, span);
    marks.push_back(pos);
  }
  return marks;
}

PiecewiseConstant ell(int n) {
  if (n < 2) throw Error("ell(n) needs n >= 2");
  Rational half(1, 2 * n), full(1, n);
  return PiecewiseConstant({0, half, full, 1}, {{3, 2}, {1, 2}, 1});
}

PiecewiseConstant rr(int n) {
  if (n < 2) throw Error("rr(n) needs n >= 2");
  Rational full = Rational(1) - Rational(1, n), half = Rational(1) - Rational(1, 2 * n);
  return PiecewiseConstant({0, full, half, 1}, {1, {1, 2}, {3, 2}});
}

}  // namespace cake
