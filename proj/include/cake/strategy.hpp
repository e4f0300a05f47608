// Deviation analysis: does misreporting help, and what deters it?
#pragma once

#include <optional>
#include <random>
#include <string>

#include "cake/mechanisms.hpp"

namespace cake {

// The n-1 densities reported by everyone except the deviating agent.
using OpponentTuple = std::vector<PiecewiseConstant>;

// One agent weighing a fixed misreport against a finite family of opponent
// behaviours. Utilities are always measured with true_f.
struct Scenario {
  MechanismId mechanism = MechanismId::SimpleEf;
  int agent = 0;  // deviator index
  PiecewiseConstant true_f;
  PiecewiseConstant deviation_f;
  std::vector<OpponentTuple> opponent_profiles;
};

// How the family treats the deviation, checked in this order:
//   Dominated          deviating never beats truth anywhere in the family
//   RatDeterred        some tuple drops the deviator below a proportional share
//   WratDeterredOnly   no such drop, but some tuple where deviating loses to truth
//   WratViolation      deviating never loses and strictly wins somewhere
enum class Classification { Dominated, RatDeterred, WratDeterredOnly, WratViolation };

// Wire names: "Dominated", "RAT_Deterred", "WRAT_Deterred_Only", "WRAT_Violation".
std::string to_string(Classification c);
std::optional<Classification> classification_from_string(const std::string& name);

// Replayable evidence: tuple indices into scenario.opponent_profiles plus the
// four utilities observed there. gain = deviating beats truth; risk =
// deviating falls below a proportional share, or failing that below truth.
struct DeviationCertificate {
  Scenario scenario;
  std::optional<std::size_t> gain_index;
  std::optional<std::size_t> risk_index;
  std::optional<Rational> truthful_at_gain, deviating_at_gain;
  std::optional<Rational> truthful_at_risk, deviating_at_risk;
};

struct ClassifiedDeviation {
  Classification classification = Classification::Dominated;
  DeviationCertificate certificate;
};

// Deviator's true-valuation utility when submitting `report` against `opp`.
Rational deviator_value(MechanismId mechanism, int agent, const PiecewiseConstant& true_f,
                        const PiecewiseConstant& report, const OpponentTuple& opp);

// Runs the mechanism truthfully and deviating against every tuple in the
// family and classifies the deviation. The verdict is exact for the supplied
// family: a WratViolation is a genuine counterexample to weak risk-averse
// truthfulness, while Dominated/Deterred are evidence relative to the family.
// Throws ProfileMismatch on an empty family, inconsistent tuple sizes, an
// out-of-range agent, or deviation_f equal to true_f.
ClassifiedDeviation classify_deviation(const Scenario& s);

// True iff re-running the mechanism reproduces every recorded utility and the
// recorded tuples actually witness a gain (deviating > truthful) and a risk
// (deviating below a proportional share or below truthful).
bool certificate_replays(const DeviationCertificate& cert);

// Knife marching left to right: uniform deviator, ell(n) misreport, and the
// one opponent tuple that rewards it. n >= 2.
Scenario movingknife_counterexample(int n);

// Five-agent divide-and-conquer scenario where tilting right pays off.
// Requires 0 < eps < 1/10; throws EpsOutOfRange otherwise.
Scenario evenpaz_counterexample(const Rational& eps);

// Per-cell slicing with fixed slice order: deleting the reported
// discontinuity grabs a longer slice against uniform opponents. n >= 2.
Scenario simpleef_counterexample(int n);

// Builds an opponent tuple under which the rotating-slice mechanism pays the
// deviator (agent 1, uniform slice rotation) strictly less than a
// proportional share of her true total. Applies when the deviation deletes a
// true discontinuity t; the tuple pins a one-cell window [t-eps, t+(n-1)eps)
// (mirrored for a downward jump) whose cell index hands the deviator the thin
// low-density side. Returns nullopt when the deviation only refines the true
// breakpoints; throws EpsTooLarge when the window hits other breakpoints or
// leaves (0,1). The returned tuple is verified by replay.
std::optional<OpponentTuple> rotatingef_risk_profile(const PiecewiseConstant& true_f,
                                                     const PiecewiseConstant& deviation_f,
                                                     int n, const Rational& eps);

struct BestResponse {
  PiecewiseConstant report;
  Rational utility;
  Rational truthful_utility;
};

// Exhaustively tries every step function with breakpoints from `grid` and
// densities from `levels` (all-zero reports skipped) and returns the one
// maximizing the deviator's true utility. Ties go to the truthful report when
// it achieves the maximum, else to the first candidate enumerated; the result
// never scores below the truthful report. Throws SearchSpaceEmpty when no
// candidate exists.
BestResponse brute_force_best_response(MechanismId mechanism, int agent,
                                       const PiecewiseConstant& true_f,
                                       const OpponentTuple& opponents,
                                       const std::vector<Rational>& grid,
                                       const std::vector<Rational>& levels);

// Hungry density with breakpoints on a 1/12 grid, densities drawn from
// {1/2, 1, 3/2, 2} and scaled so the total is exactly 1.
PiecewiseConstant sample_hungry_density(std::mt19937_64& rng);
OpponentTuple sample_opponents(std::mt19937_64& rng, int count);

}  // namespace cake
