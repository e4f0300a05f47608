#include "cake/strategy.hpp"

#include <random>

#include "doctest.h"
#include "oracles.hpp"

using cake::Classification;
using cake::ClassifiedDeviation;
using cake::MechanismId;
using cake::OpponentTuple;
using cake::PiecewiseConstant;
using cake::Rational;
using cake::Scenario;

namespace {
Rational r(long long n, long long d = 1) { return Rational(n, d); }

const PiecewiseConstant kUniform = PiecewiseConstant::uniform();

PiecewiseConstant step(const Rational& at, const Rational& left, const Rational& right) {
  return PiecewiseConstant({r(0), at, r(1)}, {left, right});
}
}  // namespace

TEST_CASE("classification names round trip") {
  for (Classification c : {Classification::Dominated, Classification::RatDeterred,
                           Classification::WratDeterredOnly, Classification::WratViolation})
    CHECK(cake::classification_from_string(cake::to_string(c)) == c);
  CHECK(cake::to_string(Classification::RatDeterred) == "RAT_Deterred");
  CHECK_FALSE(cake::classification_from_string("Sometimes").has_value());
}

TEST_CASE("classify_deviation validates the scenario") {
  Scenario s{MechanismId::SimpleEf, 0, kUniform, cake::ell(2), {}};
  CHECK_THROWS_AS(cake::classify_deviation(s), cake::ProfileMismatch);

  s.opponent_profiles = {{kUniform}, {kUniform, kUniform}};
  CHECK_THROWS_AS(cake::classify_deviation(s), cake::ProfileMismatch);

  s.opponent_profiles = {{kUniform}};
  s.agent = 2;
  CHECK_THROWS_AS(cake::classify_deviation(s), cake::ProfileMismatch);

  // A reparameterized but equal deviation is still the truth.
  s.agent = 0;
  s.deviation_f = PiecewiseConstant({r(0), r(1, 2), r(1)}, {1, 1});
  CHECK_THROWS_AS(cake::classify_deviation(s), cake::ProfileMismatch);
}

TEST_CASE("marks-preserving misreport is dominated for connected division") {
  // Same two-way marks as uniform (both split at 1/2), different shape.
  PiecewiseConstant same_marks({r(0), r(1, 4), r(3, 4), r(1)}, {2, r(1, 2), 2});
  REQUIRE(mark_points(same_marks, 2) == std::vector<Rational>{r(1, 2)});
  std::mt19937_64 rng(20240820);
  Scenario s{MechanismId::ConnectedProp, 0, kUniform, same_marks,
             {{kUniform}, {cake::ell(2)}, {cake::sample_hungry_density(rng)}}};
  ClassifiedDeviation out = cake::classify_deviation(s);
  CHECK(out.classification == Classification::Dominated);
  CHECK_FALSE(out.certificate.gain_index.has_value());
  CHECK(cake::certificate_replays(out.certificate));
}

TEST_CASE("moving-knife counterexample replays the published numbers") {
  Scenario s3 = cake::movingknife_counterexample(3);
  CHECK(s3.mechanism == MechanismId::MovingKnife);
  CHECK(s3.deviation_f == cake::ell(3));
  REQUIRE(s3.opponent_profiles.size() == 1);
  REQUIRE(s3.opponent_profiles[0].size() == 2);

  ClassifiedDeviation out = cake::classify_deviation(s3);
  CHECK(out.classification == Classification::WratViolation);
  REQUIRE(out.certificate.gain_index.has_value());
  CHECK(*out.certificate.truthful_at_gain == r(1, 3));
  CHECK(*out.certificate.deviating_at_gain == r(7, 18));
  CHECK(cake::certificate_replays(out.certificate));

  Scenario s5 = cake::movingknife_counterexample(5);
  ClassifiedDeviation out5 = cake::classify_deviation(s5);
  CHECK(*out5.certificate.deviating_at_gain - *out5.certificate.truthful_at_gain == r(1, 50));

  CHECK_THROWS_AS(cake::movingknife_counterexample(1), cake::Error);
}

TEST_CASE("moving-knife counterexample degenerates at n=2") {
  // With only one opponent the deviator is served last either way, so the
  // published gain vanishes and the misreport is merely pointless.
  Scenario s2 = cake::movingknife_counterexample(2);
  ClassifiedDeviation out = cake::classify_deviation(s2);
  CHECK(out.classification == Classification::Dominated);
  const OpponentTuple& opp = s2.opponent_profiles[0];
  CHECK(cake::deviator_value(MechanismId::MovingKnife, 0, kUniform, kUniform, opp) == r(3, 4));
  CHECK(cake::deviator_value(MechanismId::MovingKnife, 0, kUniform, cake::ell(2), opp) ==
        r(3, 4));
}

TEST_CASE("moving-knife misreport never harms across random hungry opponents") {
  std::mt19937_64 rng(20240821);
  for (int n : {2, 3, 4}) {
    for (int trial = 0; trial < 8; ++trial) {
      OpponentTuple opp = cake::sample_opponents(rng, n - 1);
      Rational truthful = cake::deviator_value(MechanismId::MovingKnife, 0, kUniform, kUniform, opp);
      Rational deviating =
          cake::deviator_value(MechanismId::MovingKnife, 0, kUniform, cake::ell(n), opp);
      CHECK(!(deviating < truthful));
      CHECK(!(deviating < r(1, n)));
    }
  }
}

TEST_CASE("divide-and-conquer counterexample replays the published numbers") {
  Scenario s = cake::evenpaz_counterexample(r(1, 20));
  CHECK(s.deviation_f == cake::rr(5));
  ClassifiedDeviation out = cake::classify_deviation(s);
  CHECK(out.classification == Classification::WratViolation);
  CHECK(*out.certificate.truthful_at_gain == r(143, 200));
  CHECK(*out.certificate.deviating_at_gain == r(23, 32));
  CHECK(*out.certificate.deviating_at_gain - *out.certificate.truthful_at_gain == r(3, 800));
  CHECK(cake::certificate_replays(out.certificate));

  Scenario fine = cake::evenpaz_counterexample(r(1, 40));
  ClassifiedDeviation out40 = cake::classify_deviation(fine);
  CHECK(*out40.certificate.deviating_at_gain - *out40.certificate.truthful_at_gain == r(3, 1600));

  CHECK_THROWS_AS(cake::evenpaz_counterexample(r(1, 5)), cake::EpsOutOfRange);
  CHECK_THROWS_AS(cake::evenpaz_counterexample(r(1, 10)), cake::EpsOutOfRange);
  CHECK_THROWS_AS(cake::evenpaz_counterexample(r(0)), cake::EpsOutOfRange);
  CHECK_THROWS_AS(cake::evenpaz_counterexample(r(-1, 20)), cake::EpsOutOfRange);
}

TEST_CASE("divide-and-conquer misreport keeps a proportional floor when sampled") {
  Scenario s = cake::evenpaz_counterexample(r(1, 20));
  std::mt19937_64 rng(20240822);
  for (int k = 0; k < 10; ++k) s.opponent_profiles.push_back(cake::sample_opponents(rng, 4));
  ClassifiedDeviation out = cake::classify_deviation(s);
  // The gain tuple survives and no tuple can push the misreport below 1/5.
  CHECK(out.certificate.gain_index == 0);
  CHECK(out.classification != Classification::Dominated);
  CHECK(out.classification != Classification::RatDeterred);
  for (const OpponentTuple& opp : s.opponent_profiles)
    CHECK(!(cake::deviator_value(MechanismId::EvenPaz, 0, kUniform, cake::rr(5), opp) < r(1, 5)));
}

TEST_CASE("per-cell slicing counterexample replays the published numbers") {
  Scenario s3 = cake::simpleef_counterexample(3);
  ClassifiedDeviation out = cake::classify_deviation(s3);
  CHECK(out.classification == Classification::WratViolation);
  CHECK(*out.certificate.truthful_at_gain == r(2, 9));
  CHECK(*out.certificate.deviating_at_gain == r(1, 3));
  CHECK(cake::certificate_replays(out.certificate));

  ClassifiedDeviation out2 = cake::classify_deviation(cake::simpleef_counterexample(2));
  CHECK(*out2.certificate.truthful_at_gain == r(3, 8));
  CHECK(*out2.certificate.deviating_at_gain == r(1, 2));

  ClassifiedDeviation out5 = cake::classify_deviation(cake::simpleef_counterexample(5));
  CHECK(*out5.certificate.truthful_at_gain == r(3, 25));
  CHECK(*out5.certificate.deviating_at_gain == r(1, 5));

  CHECK_THROWS_AS(cake::simpleef_counterexample(1), cake::Error);
}

TEST_CASE("rotating-slice risk tuple punishes deleting a discontinuity") {
  PiecewiseConstant truth = step(r(1, 2), r(1, 2), r(3, 2));
  auto opp = cake::rotatingef_risk_profile(truth, kUniform, 2, r(1, 100));
  REQUIRE(opp.has_value());
  REQUIRE(opp->size() == 1);
  Rational deviating = cake::deviator_value(MechanismId::RotatingEf, 0, truth, kUniform, *opp);
  CHECK(deviating == r(99, 200));
  CHECK(deviating < truth.total() / 2);

  // Downward jump takes the mirrored window and lands symmetrically.
  PiecewiseConstant rev = step(r(1, 2), r(3, 2), r(1, 2));
  auto opp2 = cake::rotatingef_risk_profile(rev, kUniform, 2, r(1, 100));
  REQUIRE(opp2.has_value());
  CHECK(cake::deviator_value(MechanismId::RotatingEf, 0, rev, kUniform, *opp2) == r(99, 200));
}

TEST_CASE("rotating-slice risk tuple generalizes across n") {
  PiecewiseConstant truth = step(r(1, 2), r(1, 2), r(3, 2));
  for (int n : {2, 3, 4, 5}) {
    auto opp = cake::rotatingef_risk_profile(truth, kUniform, n, r(1, 100));
    REQUIRE(opp.has_value());
    REQUIRE(opp->size() == static_cast<std::size_t>(n - 1));
    Rational deviating = cake::deviator_value(MechanismId::RotatingEf, 0, truth, kUniform, *opp);
    CHECK(deviating < truth.total() / n);
  }
}

TEST_CASE("rotating-slice risk tuple edge cases") {
  // Refinement only: nothing deleted, nothing to punish.
  PiecewiseConstant truth = step(r(1, 2), r(1, 2), r(3, 2));
  PiecewiseConstant refined({r(0), r(1, 4), r(1, 2), r(1)}, {r(1, 2), r(1), r(3, 2)});
  CHECK_FALSE(cake::rotatingef_risk_profile(truth, refined, 2, r(1, 100)).has_value());
  CHECK_FALSE(cake::rotatingef_risk_profile(kUniform, kUniform, 2, r(1, 100)).has_value());

  // Window must stay inside (0,1) and clear of other breakpoints.
  CHECK_THROWS_AS(cake::rotatingef_risk_profile(truth, kUniform, 2, r(1, 2)),
                  cake::EpsTooLarge);
  CHECK_THROWS_AS(cake::rotatingef_risk_profile(truth, kUniform, 2, r(0)), cake::EpsTooLarge);
  PiecewiseConstant two_jumps({r(0), r(1, 4), r(1, 2), r(1)}, {r(1, 4), r(1), r(3, 2)});
  PiecewiseConstant keeps_quarter({r(0), r(1, 4), r(1)}, {r(1, 4), r(5, 4)});
  CHECK_THROWS_AS(cake::rotatingef_risk_profile(two_jumps, keeps_quarter, 2, r(3, 10)),
                  cake::EpsTooLarge);
}

TEST_CASE("deleting a discontinuity classifies as risk-deterred") {
  PiecewiseConstant truth({r(0), r(1, 3), r(1)}, {r(1, 2), r(5, 4)});
  auto risk = cake::rotatingef_risk_profile(truth, kUniform, 2, r(1, 100));
  REQUIRE(risk.has_value());
  // One tuple where the misreport pays, one where it backfires.
  OpponentTuple gain{PiecewiseConstant({r(0), r(1, 4), r(1)}, {2, r(2, 3)})};
  Scenario s{MechanismId::RotatingEf, 0, truth, kUniform, {gain, *risk}};
  ClassifiedDeviation out = cake::classify_deviation(s);
  CHECK(out.classification == Classification::RatDeterred);
  CHECK(out.certificate.gain_index == 0);
  CHECK(out.certificate.risk_index == 1);
  CHECK(*out.certificate.deviating_at_risk < truth.total() / 2);
  CHECK(cake::certificate_replays(out.certificate));

  // Growing the family never upgrades a deterred misreport to a violation.
  std::mt19937_64 rng(20240823);
  for (int k = 0; k < 6; ++k) s.opponent_profiles.push_back(cake::sample_opponents(rng, 1));
  CHECK(cake::classify_deviation(s).classification == Classification::RatDeterred);
}

TEST_CASE("tampered certificates fail to replay") {
  ClassifiedDeviation out = cake::classify_deviation(cake::simpleef_counterexample(3));
  REQUIRE(cake::certificate_replays(out.certificate));
  auto tampered = out.certificate;
  *tampered.deviating_at_gain += r(1, 1000);
  CHECK_FALSE(cake::certificate_replays(tampered));

  auto swapped = out.certificate;
  std::swap(swapped.truthful_at_gain, swapped.deviating_at_gain);
  CHECK_FALSE(cake::certificate_replays(swapped));

  auto out_of_range = out.certificate;
  out_of_range.gain_index = 7;
  CHECK_FALSE(cake::certificate_replays(out_of_range));
}

TEST_CASE("brute force cannot beat the chooser") {
  std::vector<Rational> grid{r(1, 4), r(1, 2), r(3, 4)};
  std::vector<Rational> levels{r(1, 2), r(1), r(2)};
  for (const PiecewiseConstant& truth :
       {kUniform, cake::ell(2), step(r(1, 3), r(1, 2), r(5, 4))}) {
    for (const PiecewiseConstant& cutter : {kUniform, cake::rr(2)}) {
      cake::BestResponse best = cake::brute_force_best_response(
          MechanismId::CutAndChoose, 1, truth, {cutter}, grid, levels);
      CHECK(best.utility == best.truthful_utility);
      CHECK(best.report == truth);  // tie resolves to the truthful report
    }
  }
}

TEST_CASE("brute force rediscovers the knife misreport") {
  Scenario s = cake::movingknife_counterexample(3);
  cake::BestResponse best = cake::brute_force_best_response(
      MechanismId::MovingKnife, 0, kUniform, s.opponent_profiles[0], {r(1, 6), r(1, 3)},
      {r(1, 2), r(1), r(3, 2)});
  CHECK(best.truthful_utility == r(1, 3));
  CHECK(!(best.utility < r(7, 18)));  // ell(3) lives in this grid
}

TEST_CASE("brute force against an exact mechanism is capped at 1/n") {
  cake::BestResponse best = cake::brute_force_best_response(
      MechanismId::SimpleEf, 0, kUniform, {kUniform}, {r(1, 2)}, {r(1, 2), r(1)});
  CHECK(best.utility == r(1, 2));
  CHECK(best.report == kUniform);
}

TEST_CASE("brute force validates its search space") {
  CHECK_THROWS_AS(cake::brute_force_best_response(MechanismId::SimpleEf, 0, kUniform, {kUniform},
                                                  {r(1, 2)}, {}),
                  cake::SearchSpaceEmpty);
  CHECK_THROWS_AS(cake::brute_force_best_response(MechanismId::SimpleEf, 0, kUniform, {kUniform},
                                                  {}, {r(0)}),
                  cake::SearchSpaceEmpty);
  CHECK_THROWS_AS(cake::brute_force_best_response(MechanismId::SimpleEf, 0, kUniform, {kUniform},
                                                  {r(1, 2), r(1, 4)}, {r(1)}),
                  cake::Error);
  CHECK_THROWS_AS(cake::brute_force_best_response(MechanismId::SimpleEf, 0, kUniform, {kUniform},
                                                  {r(2)}, {r(1)}),
                  cake::Error);
  CHECK_THROWS_AS(cake::brute_force_best_response(MechanismId::SimpleEf, 2, kUniform, {kUniform},
                                                  {r(1, 2)}, {r(1)}),
                  cake::AgentCountMismatch);
}

TEST_CASE("brute force never lands below the truthful report") {
  std::mt19937_64 rng(20240824);
  std::vector<Rational> grid{r(1, 3), r(2, 3)};
  std::vector<Rational> levels{r(1, 2), r(2)};
  for (int trial = 0; trial < 6; ++trial) {
    PiecewiseConstant truth = cake::sample_hungry_density(rng);
    OpponentTuple opp = cake::sample_opponents(rng, 1);
    for (auto mech : {MechanismId::RotatingEf, MechanismId::MovingKnife, MechanismId::EvenPaz}) {
      cake::BestResponse best =
          cake::brute_force_best_response(mech, 0, truth, opp, grid, levels);
      CHECK(!(best.utility < best.truthful_utility));
    }
  }
}

TEST_CASE("sampled densities are hungry, normalized, and reproducible") {
  std::mt19937_64 a(7), b(7);
  PiecewiseConstant fa = cake::sample_hungry_density(a);
  CHECK(fa == cake::sample_hungry_density(b));
  for (int k = 0; k < 10; ++k) {
    PiecewiseConstant f = cake::sample_hungry_density(a);
    CHECK(f.hungry());
    CHECK(f.total() == r(1));
    for (const auto& bp : f.breakpoints()) CHECK((bp * 12).den() == 1);
  }
  CHECK(cake::sample_opponents(a, 3).size() == 3);
}
