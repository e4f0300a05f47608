// Adaptive driver that defeats any proportional two-agent mechanism: it
// probes the mechanism with six profiles built from the mechanism's own
// earlier answers and returns a replay-verified fairness or truthfulness
// violation.
#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "cake/allocation.hpp"
#include "cake/mechanisms.hpp"
#include "cake/piecewise.hpp"

namespace cake {

// A two-agent mechanism treated as a black box: reported densities in, one
// share per agent out. Exceptions thrown by the callable propagate.
using TwoAgentMechanism = std::function<Allocation(const Profile&)>;

// Wraps a library mechanism as a black box.
TwoAgentMechanism as_black_box(MechanismId id);

// Everything the driver has learned so far: epsilon, the pieces named by the
// forced outputs of the early probes, and every probe allocation in order.
// x1/x2 are the halves from the first probe; x11..x22 are the quarters of
// x1/x2 fixed by the third probe.
struct GadgetState {
  Rational eps;
  std::optional<Piece> x1, x2;
  std::optional<Piece> x11, x12, x21, x22;
  std::array<std::optional<Allocation>, 6> instance_outputs;
};

enum class GadgetVerdict {
  ProportionalityViolation,
  TruthfulnessViolation,
  ForcedStateDiverged,
};

std::string to_string(GadgetVerdict verdict);
std::optional<GadgetVerdict> gadget_verdict_from_string(const std::string& name);

// A profitable misreport. Replays by running the mechanism on both the
// truthful and the deviated pair and valuing the deviator's share under the
// true density each time.
struct GadgetDeviation {
  int agent = 0;  // 0-based deviator
  PiecewiseConstant true_density;
  PiecewiseConstant reported_density;
  PiecewiseConstant opponent_density;
  Rational truthful_value;
  Rational deviating_value;
};

// A probe whose output fails the fairness audit.
struct GadgetAuditFailure {
  Profile profile;
  Allocation allocation;
  AuditReport report;
};

struct GadgetReport {
  GadgetVerdict verdict = GadgetVerdict::ForcedStateDiverged;
  std::string stage;  // "F1".."F5", or "F6:" plus the failing final check
  std::optional<GadgetDeviation> deviation;        // TruthfulnessViolation
  std::optional<GadgetAuditFailure> audit_failure; // ProportionalityViolation
  std::string note;  // guidance when the verdict is ForcedStateDiverged
  Rational eps_used;
  GadgetState state;
};

// The k-th probe profile, k in [1,6]. F1 is state independent; F2/F3 need
// x1/x2; F4/F6 need the quarters and F5 needs x11/x12/x2. Throws
// StateIncomplete when a required piece is missing, Error for k outside
// [1,6] or pieces that fail to partition the cake.
Profile build_instance(const GadgetState& state, int k);

// All six probes at once; requires a fully populated state.
std::array<Profile, 6> build_instances(const GadgetState& state);

// True iff (1+2e)/(8-8e) + e < 1/4 + e/4 holds exactly. This is the margin
// that makes the driver's final probe decisive. Requires 0 < eps < 1.
bool final_inequality_check(const Rational& eps);

// Re-runs the two probes behind the certificate and confirms both recorded
// values and the strict gain.
bool replay_deviation(const TwoAgentMechanism& m, const GadgetDeviation& d);

// Re-runs the failing probe and confirms the fresh output still fails the
// proportionality audit.
bool replay_audit_failure(const TwoAgentMechanism& m, const GadgetAuditFailure& f);

// Probes the mechanism with the six adaptive profiles. Outcome is always a
// violation: some probe output fails the proportionality audit, or some
// agent in some probe gains by misreporting; both kinds are re-verified
// against fresh mechanism calls before being returned. ForcedStateDiverged
// is returned only if a forced output diverges yet no derived witness
// survives replay (possible only for mechanisms that answer inconsistently
// at this eps; smaller eps tightens every margin). Throws EpsTooLarge
// unless 0 < eps < 1/2 and final_inequality_check(eps) holds, and
// AgentCountMismatch if the mechanism returns a share count other than two.
GadgetReport run_gadget(const TwoAgentMechanism& m, const Rational& eps);

}  // namespace cake
