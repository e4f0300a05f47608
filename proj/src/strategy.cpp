#include "cake/strategy.hpp"

#include <algorithm>
#include <set>

namespace cake {

namespace {

// Reported profile with the deviator's report spliced in at her index.
Profile splice(int agent, const PiecewiseConstant& report, const OpponentTuple& opp) {
  Profile profile(opp.begin(), opp.end());
  profile.insert(profile.begin() + agent, report);
  return profile;
}

void validate_scenario(const Scenario& s) {
  if (s.opponent_profiles.empty()) throw ProfileMismatch("scenario has no opponent tuples");
  std::size_t width = s.opponent_profiles.front().size();
  for (const auto& tuple : s.opponent_profiles)
    if (tuple.size() != width) throw ProfileMismatch("opponent tuples disagree on agent count");
  int n = static_cast<int>(width) + 1;
  if (s.agent < 0 || s.agent >= n) throw ProfileMismatch("deviator index out of range");
  if (s.true_f == s.deviation_f)
    throw ProfileMismatch("deviation is the true density in disguise");
}

}  // namespace

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Dominated: return "Dominated";
    case Classification::RatDeterred: return "RAT_Deterred";
    case Classification::WratDeterredOnly: return "WRAT_Deterred_Only";
    case Classification::WratViolation: return "WRAT_Violation";
  }
  throw Error("unknown classification");
}

std::optional<Classification> classification_from_string(const std::string& name) {
  for (Classification c : {Classification::Dominated, Classification::RatDeterred,
                           Classification::WratDeterredOnly, Classification::WratViolation})
    if (to_string(c) == name) return c;
  return std::nullopt;
}

Rational deviator_value(MechanismId mechanism, int agent, const PiecewiseConstant& true_f,
                        const PiecewiseConstant& report, const OpponentTuple& opp) {
  Allocation a = run_mechanism(mechanism, splice(agent, report, opp));
  return eval(true_f, a.share(static_cast<std::size_t>(agent)));
}

ClassifiedDeviation classify_deviation(const Scenario& s) {
  validate_scenario(s);
  const int n = static_cast<int>(s.opponent_profiles.front().size()) + 1;
  const Rational proportional = s.true_f.total() / n;

  ClassifiedDeviation out;
  DeviationCertificate& cert = out.certificate;
  cert.scenario = s;
  std::optional<std::size_t> below_truth;
  Rational bt_truth, bt_dev;
  for (std::size_t k = 0; k < s.opponent_profiles.size(); ++k) {
    const OpponentTuple& opp = s.opponent_profiles[k];
    Rational u_truth = deviator_value(s.mechanism, s.agent, s.true_f, s.true_f, opp);
    Rational u_dev = deviator_value(s.mechanism, s.agent, s.true_f, s.deviation_f, opp);
    if (!cert.gain_index && u_truth < u_dev) {
      cert.gain_index = k;
      cert.truthful_at_gain = u_truth;
      cert.deviating_at_gain = u_dev;
    }
    if (!cert.risk_index && u_dev < proportional) {
      cert.risk_index = k;
      cert.truthful_at_risk = u_truth;
      cert.deviating_at_risk = u_dev;
    }
    if (!below_truth && u_dev < u_truth) {
      below_truth = k;
      bt_truth = u_truth;
      bt_dev = u_dev;
    }
  }

  if (!cert.gain_index) {
    out.classification = Classification::Dominated;
  } else if (cert.risk_index) {
    out.classification = Classification::RatDeterred;
  } else if (below_truth) {
    out.classification = Classification::WratDeterredOnly;
  } else {
    out.classification = Classification::WratViolation;
  }
  if (!cert.risk_index && below_truth) {  // weak deterrence evidence
    cert.risk_index = below_truth;
    cert.truthful_at_risk = bt_truth;
    cert.deviating_at_risk = bt_dev;
  }
  return out;
}

bool certificate_replays(const DeviationCertificate& cert) {
  const Scenario& s = cert.scenario;
  const int n = static_cast<int>(s.opponent_profiles.front().size()) + 1;
  auto check = [&](const std::optional<std::size_t>& index, const std::optional<Rational>& truth,
                   const std::optional<Rational>& dev) {
    if (!index) return !truth && !dev;
    if (*index >= s.opponent_profiles.size() || !truth || !dev) return false;
    const OpponentTuple& opp = s.opponent_profiles[*index];
    return deviator_value(s.mechanism, s.agent, s.true_f, s.true_f, opp) == *truth &&
           deviator_value(s.mechanism, s.agent, s.true_f, s.deviation_f, opp) == *dev;
  };
  if (!check(cert.gain_index, cert.truthful_at_gain, cert.deviating_at_gain)) return false;
  if (!check(cert.risk_index, cert.truthful_at_risk, cert.deviating_at_risk)) return false;
  if (cert.gain_index && !(*cert.truthful_at_gain < *cert.deviating_at_gain)) return false;
  if (cert.risk_index) {
    Rational proportional = s.true_f.total() / n;
    if (!(*cert.deviating_at_risk < proportional) &&
        !(*cert.deviating_at_risk < *cert.truthful_at_risk))
      return false;
  }
  return true;
}

Scenario movingknife_counterexample(int n) {
  if (n < 2) throw Error("movingknife_counterexample needs n >= 2");
  PiecewiseConstant early({Rational(0), Rational(1, n), Rational(1)}, {1, 0});
  PiecewiseConstant late({Rational(0), Rational(1, n), Rational(1)}, {0, 1});
  OpponentTuple opp{early};
  for (int j = 3; j <= n; ++j) opp.push_back(late);
  return {MechanismId::MovingKnife, 0, PiecewiseConstant::uniform(), ell(n), {opp}};
}

Scenario evenpaz_counterexample(const Rational& eps) {
  if (!(Rational(0) < eps) || !(eps < Rational(1, 10)))
    throw EpsOutOfRange("evenpaz_counterexample needs 0 < eps < 1/10");
  PiecewiseConstant early({Rational(0), eps, Rational(1)}, {1, 0});
  PiecewiseConstant late({Rational(0), Rational(1) - eps, Rational(1)}, {0, 1});
  return {MechanismId::EvenPaz, 0, PiecewiseConstant::uniform(), rr(5),
          {{early, late, late, late}}};
}

Scenario simpleef_counterexample(int n) {
  if (n < 2) throw Error("simpleef_counterexample needs n >= 2");
  PiecewiseConstant truth({Rational(0), Rational(1, n), Rational(1)}, {1, {1, 2}});
  OpponentTuple opp(static_cast<std::size_t>(n - 1), PiecewiseConstant::uniform());
  return {MechanismId::SimpleEf, 0, truth, PiecewiseConstant::uniform(), {opp}};
}

std::optional<OpponentTuple> rotatingef_risk_profile(const PiecewiseConstant& true_f,
                                                     const PiecewiseConstant& deviation_f,
                                                     int n, const Rational& eps) {
  if (n < 2) throw Error("rotatingef_risk_profile needs n >= 2");
  std::vector<Rational> x1 = discontinuities(true_f);
  std::vector<Rational> x1p = discontinuities(deviation_f);
  std::set<Rational> reported(x1p.begin(), x1p.end());
  std::optional<Rational> deleted;
  for (const auto& b : x1)
    if (!reported.count(b)) {
      deleted = b;
      break;
    }
  if (!deleted) return std::nullopt;  // the misreport only refines
  const Rational t = *deleted;

  // Density on each side of the deleted jump.
  const auto& bps = true_f.breakpoints();
  std::size_t at = std::find(bps.begin(), bps.end(), t) - bps.begin();
  bool upward = true_f.densities()[at - 1] < true_f.densities()[at];

  if (!(Rational(0) < eps)) throw EpsTooLarge("window needs a positive eps");
  Rational w_lo = upward ? t - eps : t - eps * (n - 1);
  Rational w_hi = upward ? t + eps * (n - 1) : t + eps;
  if (!(Rational(0) < w_lo) || !(w_hi < Rational(1)))
    throw EpsTooLarge("window [" + w_lo.str() + "," + w_hi.str() + ") leaves (0,1)");

  // Every breakpoint anyone will report, except t itself.
  std::set<Rational> points(x1.begin(), x1.end());
  points.erase(t);
  points.insert(x1p.begin(), x1p.end());
  for (const auto& b : points)
    if (w_lo < b && b < w_hi)
      throw EpsTooLarge("breakpoint " + b.str() + " falls inside the window");
  points.insert(w_lo);
  points.insert(w_hi);

  // The window must land on a cell whose rotated slice 0 (upward jump) or
  // slice n-1 (downward) belongs to the deviator; pad with filler breakpoints
  // below everything else until the cell index has the right residue.
  std::vector<Rational> sorted(points.begin(), points.end());
  int cell = static_cast<int>(std::find(sorted.begin(), sorted.end(), w_lo) - sorted.begin()) + 1;
  int want = upward ? 0 : n - 1;
  int fill = ((want - cell) % n + n) % n;
  const Rational floor = sorted.front();
  std::vector<Rational> all_bps;
  for (int i = 1; i <= fill; ++i) all_bps.push_back(floor * Rational(i, fill + 1));
  all_bps.insert(all_bps.end(), sorted.begin(), sorted.end());

  std::vector<Rational> carrier_bps{Rational(0)};
  carrier_bps.insert(carrier_bps.end(), all_bps.begin(), all_bps.end());
  carrier_bps.push_back(Rational(1));
  std::vector<Rational> carrier_dens;
  for (std::size_t k = 0; k + 1 < carrier_bps.size(); ++k)
    carrier_dens.push_back(k % 2 == 0 ? Rational(1) : Rational(2));
  OpponentTuple opp{PiecewiseConstant(carrier_bps, carrier_dens)};
  for (int j = 0; j < n - 2; ++j) opp.push_back(PiecewiseConstant::uniform());

  Rational replayed = deviator_value(MechanismId::RotatingEf, 0, true_f, deviation_f, opp);
  if (!(replayed < true_f.total() / n))
    throw Error("risk construction failed to replay below the proportional share");
  return opp;
}

BestResponse brute_force_best_response(MechanismId mechanism, int agent,
                                       const PiecewiseConstant& true_f,
                                       const OpponentTuple& opponents,
                                       const std::vector<Rational>& grid,
                                       const std::vector<Rational>& levels) {
  const int n = static_cast<int>(opponents.size()) + 1;
  if (agent < 0 || agent >= n) throw AgentCountMismatch("deviator index out of range");
  if (grid.size() > 20) throw Error("breakpoint grid too large to enumerate");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(Rational(0) < grid[k]) || !(grid[k] < Rational(1)))
      throw Error("grid points must lie strictly inside (0,1)");
    if (k > 0 && !(grid[k - 1] < grid[k])) throw Error("grid must be strictly ascending");
  }
  for (const auto& d : levels)
    if (d.sign() < 0) throw Error("negative density level");

  auto evaluate = [&](const PiecewiseConstant& report) {
    return deviator_value(mechanism, agent, true_f, report, opponents);
  };
  Rational truthful = evaluate(true_f);

  std::optional<BestResponse> best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << grid.size()); ++mask) {
    std::vector<Rational> bps{Rational(0)};
    for (std::size_t b = 0; b < grid.size(); ++b)
      if (mask >> b & 1) bps.push_back(grid[b]);
    bps.push_back(Rational(1));
    const std::size_t cells = bps.size() - 1;

    // Odometer over density assignments, leftmost cell most significant.
    std::vector<std::size_t> pick(cells, 0);
    for (bool more = !levels.empty(); more;) {
      std::vector<Rational> dens;
      for (std::size_t c = 0; c < cells; ++c) dens.push_back(levels[pick[c]]);
      if (std::any_of(dens.begin(), dens.end(), [](const Rational& d) { return !d.is_zero(); })) {
        PiecewiseConstant report(bps, dens);
        Rational u = evaluate(report);
        if (!best || best->utility < u) best = BestResponse{report, u, truthful};
      }
      more = false;
      for (std::size_t c = cells; c-- > 0;) {
        if (++pick[c] < levels.size()) {
          more = true;
          break;
        }
        pick[c] = 0;
      }
    }
  }
  if (!best) throw SearchSpaceEmpty("no candidate deviation to enumerate");
  if (!(truthful < best->utility)) return {true_f, truthful, truthful};
  return *best;
}

PiecewiseConstant sample_hungry_density(std::mt19937_64& rng) {
  static const std::vector<Rational> levels{{1, 2}, {1, 1}, {3, 2}, {2, 1}};
  std::vector<Rational> bps, dens;
  for (int k = 0; k <= 12; ++k) bps.push_back(Rational(k, 12));
  for (int k = 0; k < 12; ++k) dens.push_back(levels[rng() % levels.size()]);
  PiecewiseConstant raw(bps, dens);
  std::vector<Rational> scaled;
  for (const auto& d : raw.densities()) scaled.push_back(d / raw.total());
  return PiecewiseConstant(raw.breakpoints(), scaled);
}

OpponentTuple sample_opponents(std::mt19937_64& rng, int count) {
  OpponentTuple opp;
  for (int i = 0; i < count; ++i) opp.push_back(sample_hungry_density(rng));
  return opp;
}

}  // namespace cake
