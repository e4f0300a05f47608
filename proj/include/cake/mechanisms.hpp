// The division mechanisms and their execution traces.
#pragma once

#include <optional>
#include <string>

#include "cake/allocation.hpp"

namespace cake {

enum class MechanismId {
  SimpleEf,
  RotatingEf,
  ConnectedProp,
  ConnectedPropOpen,
  MovingKnife,
  EvenPaz,
  CutAndChoose,
};

// Wire names: "simple_ef", "rotating_ef", "connected_prop",
// "connected_prop_open", "moving_knife", "even_paz", "cut_and_choose".
std::string to_string(MechanismId id);
std::optional<MechanismId> mechanism_from_string(const std::string& name);

Allocation run_mechanism(MechanismId id, const Profile& profile);

// Exact division: cells between consecutive reported discontinuities are
// split into n equal slices, agent i taking slice i in every cell.
Allocation simple_ef(const Profile& profile);

// Exact division with rotation: in cell j (0-indexed) agent i (1-indexed)
// takes slice (i+j-1) mod n, so no agent keeps the leftmost slice throughout.
Allocation rotating_ef(const Profile& profile);

// Connected proportional division by everyone marking n equal-value spans.
// Round j gives the agent with the least j-th mark either [c_{j-1}, c_j)
// (entire variant) or her own span [x_{j-1}, c_j) (open variant); the last
// agent keeps the suffix, from c_{n-1} when entire and otherwise from her own
// final mark. Requires positive total value per agent.
struct ConnectedPropRun {
  Allocation allocation;
  std::vector<int> order;      // agents in service order, last agent included
  std::vector<Rational> cuts;  // c_0 = 0 through c_{n-1}
};
ConnectedPropRun connected_prop_run(const Profile& profile, bool entire);
Allocation connected_prop(const Profile& profile, bool entire = true);

// Left-to-right knife: each round every remaining agent marks the point
// closing a piece worth her fixed proportional value a_i; the least mark wins
// the piece, the last agent takes the remainder. Ties go to the lowest index.
struct MovingKnifeRun {
  Allocation allocation;
  std::vector<int> order;      // agents in the order they were served
  std::vector<Rational> cuts;  // right endpoint of each served piece
};
MovingKnifeRun moving_knife_run(const Profile& profile);
Allocation moving_knife(const Profile& profile);

// Divide and conquer: k agents mark the floor(k/2)/k value point of the
// current interval; the group splits at the median mark (average of the two
// marks when k = 2, otherwise the (floor(k/2)+1)-th smallest) and recurses.
struct EvenPazStep {
  Rational lo, hi;
  std::vector<int> agents;
  std::vector<Rational> marks;  // aligned with agents
  Rational cut;
};
struct EvenPazRun {
  Allocation allocation;
  std::vector<EvenPazStep> steps;  // preorder; steps[0] is the first split
};
EvenPazRun even_paz_run(const Profile& profile);
Allocation even_paz(const Profile& profile);

// Two agents: agent 1 halves the cake by her own measure, agent 2 takes the
// strictly more valuable piece (the right one on a tie).
Allocation cut_and_choose(const Profile& profile);

}  // namespace cake
