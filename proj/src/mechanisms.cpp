#include "cake/mechanisms.hpp"

#include <algorithm>
#include <numeric>

namespace cake {

namespace {

void require_agents(const Profile& profile) {
  if (profile.empty()) throw AgentCountMismatch("profile has no agents");
}

void require_positive_totals(const Profile& profile) {
  for (std::size_t i = 0; i < profile.size(); ++i)
    if (profile[i].total().is_zero())
      throw ZeroTotalValue("agent " + std::to_string(i + 1) + " values the cake at zero");
}

// 0, every reported interior discontinuity, 1.
std::vector<Rational> cell_bounds(const Profile& profile) {
  std::vector<Rational> bounds{Rational(0), Rational(1)};
  for (const auto& f : profile)
    for (const auto& d : discontinuities(f)) bounds.push_back(d);
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
  return bounds;
}

// Both exact mechanisms split every cell into n equal slices and hand agent i
// the slice whose index slice_of(i, j) names; any bijection per cell works.
template <typename SliceOf>
Allocation sliced_allocation(const Profile& profile, SliceOf slice_of) {
  require_agents(profile);
  const int n = static_cast<int>(profile.size());
  std::vector<Rational> bounds = cell_bounds(profile);
  std::vector<std::vector<Interval>> shares(n);
  for (std::size_t j = 0; j + 1 < bounds.size(); ++j) {
    Rational width = (bounds[j + 1] - bounds[j]) / n;
    for (int i = 0; i < n; ++i) {
      int s = slice_of(i, static_cast<int>(j));
      Rational lo = bounds[j] + width * s;
      shares[i].push_back({lo, lo + width});
    }
  }
  std::vector<Piece> pieces;
  pieces.reserve(n);
  for (auto& ivs : shares) pieces.emplace_back(std::move(ivs));
  return Allocation(std::move(pieces));
}

}  // namespace

std::string to_string(MechanismId id) {
  switch (id) {
    case MechanismId::SimpleEf: return "simple_ef";
    case MechanismId::RotatingEf: return "rotating_ef";
    case MechanismId::ConnectedProp: return "connected_prop";
    case MechanismId::ConnectedPropOpen: return "connected_prop_open";
    case MechanismId::MovingKnife: return "moving_knife";
    case MechanismId::EvenPaz: return "even_paz";
    case MechanismId::CutAndChoose: return "cut_and_choose";
  }
  throw Error("unknown mechanism id");
}

std::optional<MechanismId> mechanism_from_string(const std::string& name) {
  for (MechanismId id : {MechanismId::SimpleEf, MechanismId::RotatingEf,
                         MechanismId::ConnectedProp, MechanismId::ConnectedPropOpen,
                         MechanismId::MovingKnife, MechanismId::EvenPaz,
                         MechanismId::CutAndChoose})
    if (to_string(id) == name) return id;
  return std::nullopt;
}

Allocation run_mechanism(MechanismId id, const Profile& profile) {
  switch (id) {
    case MechanismId::SimpleEf: return simple_ef(profile);
    case MechanismId::RotatingEf: return rotating_ef(profile);
    case MechanismId::ConnectedProp: return connected_prop(profile, true);
    case MechanismId::ConnectedPropOpen: return connected_prop(profile, false);
    case MechanismId::MovingKnife: return moving_knife(profile);
    case MechanismId::EvenPaz: return even_paz(profile);
    case MechanismId::CutAndChoose: return cut_and_choose(profile);
  }
  throw Error("unknown mechanism id");
}

Allocation simple_ef(const Profile& profile) {
  return sliced_allocation(profile, [](int i, int) { return i; });
}

Allocation rotating_ef(const Profile& profile) {
  const int n = static_cast<int>(profile.size());
  return sliced_allocation(profile, [n](int i, int j) { return (i + j) % n; });
}

ConnectedPropRun connected_prop_run(const Profile& profile, bool entire) {
  require_agents(profile);
  require_positive_totals(profile);
  const int n = static_cast<int>(profile.size());
  std::vector<std::vector<Rational>> marks;
  marks.reserve(n);
  for (const auto& f : profile) marks.push_back(mark_points(f, n));

  ConnectedPropRun run;
  run.cuts.push_back(Rational(0));
  std::vector<int> alive(n);
  std::iota(alive.begin(), alive.end(), 0);
  std::vector<Piece> shares(n);
  for (int j = 1; j < n; ++j) {
    auto it = std::min_element(alive.begin(), alive.end(), [&](int a, int b) {
      return marks[a][j - 1] < marks[b][j - 1];  // strict: first minimum wins ties
    });
    int who = *it;
    Rational c = marks[who][j - 1];
    Rational from = entire ? run.cuts.back() : (j >= 2 ? marks[who][j - 2] : Rational(0));
    shares[who] = Piece::interval(from, c);
    run.cuts.push_back(c);
    run.order.push_back(who);
    alive.erase(it);
  }
  int last = alive.front();
  Rational from = entire ? run.cuts.back() : (n >= 2 ? marks[last][n - 2] : Rational(0));
  shares[last] = Piece::interval(from, Rational(1));
  run.order.push_back(last);
  run.allocation = Allocation(std::move(shares));
  return run;
}

Allocation connected_prop(const Profile& profile, bool entire) {
  return connected_prop_run(profile, entire).allocation;
}

MovingKnifeRun moving_knife_run(const Profile& profile) {
  require_agents(profile);
  require_positive_totals(profile);
  const int n = static_cast<int>(profile.size());
  std::vector<Rational> quota;
  quota.reserve(n);
  for (const auto& f : profile) quota.push_back(f.total() / n);

  MovingKnifeRun run;
  std::vector<int> alive(n);
  std::iota(alive.begin(), alive.end(), 0);
  std::vector<Piece> shares(n);
  Rational pos(0);
  while (alive.size() > 1) {
    int who = -1;
    Rational best;
    for (int i : alive) {
      Rational y = cut(profile[i], pos, quota[i]);
      if (who < 0 || y < best) {
        who = i;
        best = y;
      }
    }
    shares[who] = Piece::interval(pos, best);
    run.order.push_back(who);
    run.cuts.push_back(best);
    pos = best;
    alive.erase(std::find(alive.begin(), alive.end(), who));
  }
  shares[alive.front()] = Piece::interval(pos, Rational(1));
  run.order.push_back(alive.front());
  run.allocation = Allocation(std::move(shares));
  return run;
}

Allocation moving_knife(const Profile& profile) { return moving_knife_run(profile).allocation; }

namespace {

void even_paz_recurse(const Profile& profile, const Rational& lo, const Rational& hi,
                      std::vector<int> agents, std::vector<Piece>& shares,
                      std::vector<EvenPazStep>& steps) {
  const int k = static_cast<int>(agents.size());
  if (k == 1) {
    shares[agents.front()] = Piece::interval(lo, hi);
    return;
  }
  Rational frac(k / 2, k);
  std::vector<Rational> marks;
  marks.reserve(k);
  for (int i : agents) marks.push_back(cut(profile[i], lo, frac * eval(profile[i], {lo, hi})));

  Rational split;
  if (k == 2) {
    split = (marks[0] + marks[1]) / 2;
  } else {
    std::vector<Rational> sorted = marks;
    std::sort(sorted.begin(), sorted.end());
    split = sorted[k / 2];
  }
  steps.push_back({lo, hi, agents, marks, split});

  // Exactly floor(k/2) agents go left: everyone strictly below the split,
  // topped up by the lowest-index agents sitting exactly on it.
  std::vector<int> left, right;
  for (int a = 0; a < k; ++a)
    if (marks[a] < split) left.push_back(agents[a]);
  for (int a = 0; a < k && static_cast<int>(left.size()) < k / 2; ++a)
    if (marks[a] == split) left.push_back(agents[a]);
  for (int i : agents)
    if (std::find(left.begin(), left.end(), i) == left.end()) right.push_back(i);
  std::sort(left.begin(), left.end());

  even_paz_recurse(profile, lo, split, std::move(left), shares, steps);
  even_paz_recurse(profile, split, hi, std::move(right), shares, steps);
}

}  // namespace

EvenPazRun even_paz_run(const Profile& profile) {
  require_agents(profile);
  require_positive_totals(profile);
  const int n = static_cast<int>(profile.size());
  std::vector<int> agents(n);
  std::iota(agents.begin(), agents.end(), 0);
  std::vector<Piece> shares(n);
  EvenPazRun run;
  even_paz_recurse(profile, Rational(0), Rational(1), std::move(agents), shares, run.steps);
  run.allocation = Allocation(std::move(shares));
  return run;
}

Allocation even_paz(const Profile& profile) { return even_paz_run(profile).allocation; }

Allocation cut_and_choose(const Profile& profile) {
  if (profile.size() != 2) throw AgentCountMismatch("cut_and_choose needs exactly 2 agents");
  const auto& f1 = profile[0];
  const auto& f2 = profile[1];
  if (f1.total().is_zero()) throw ZeroTotalValue("agent 1 values the cake at zero");
  Rational x = cut(f1, 0, f1.total() / 2);
  Piece left = Piece::interval(0, x), right = Piece::interval(x, 1);
  bool two_takes_left = eval(f2, right) < eval(f2, left);
  std::vector<Piece> shares{two_takes_left ? right : left, two_takes_left ? left : right};
  return Allocation(std::move(shares));
}

}  // namespace cake
