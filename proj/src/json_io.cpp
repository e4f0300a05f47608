#include "cake/json_io.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "cake/errors.hpp"

namespace cake {
namespace {

const Json& need(const Json& j, const char* key) {
  if (!j.is_object()) throw ParseError(std::string("expected an object holding \"") + key + "\"");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field \"") + key + "\"");
  return *it;
}

std::string need_string(const Json& j, const char* what) {
  if (!j.is_string()) throw ParseError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

bool need_bool(const Json& j, const char* what) {
  if (!j.is_boolean()) throw ParseError(std::string(what) + " must be a boolean");
  return j.get<bool>();
}

long long need_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw ParseError(std::string(what) + " must be an integer");
  return j.get<long long>();
}

const Json& need_list(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
  return j;
}

// Value-level invariants (ordered breakpoints, disjoint shares, ...) surface
// as plain Error from the constructors; to a caller feeding us a file that is
// still a parse failure.
template <class Fn>
auto as_parse(const char* what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

Json optional_rational(const std::optional<Rational>& r) {
  return r ? rational_to_json(*r) : Json(nullptr);
}

std::optional<Rational> optional_rational_from(const Json& j, const char* what) {
  if (j.is_null()) return std::nullopt;
  return as_parse(what, [&] { return rational_from_json(j); });
}

Json optional_index(const std::optional<std::size_t>& v) {
  return v ? Json(*v) : Json(nullptr);
}

std::optional<std::size_t> optional_index_from(const Json& j, const char* what) {
  if (j.is_null()) return std::nullopt;
  long long v = need_int(j, what);
  if (v < 0) throw ParseError(std::string(what) + " must be nonnegative");
  return static_cast<std::size_t>(v);
}

std::vector<PiecewiseConstant> density_list_from(const Json& j, const char* what) {
  std::vector<PiecewiseConstant> out;
  for (const Json& d : need_list(j, what)) out.push_back(density_from_json(d));
  return out;
}

Json density_list_to(const std::vector<PiecewiseConstant>& fs) {
  Json out = Json::array();
  for (const auto& f : fs) out.push_back(density_to_json(f));
  return out;
}

}  // namespace

Json rational_to_json(const Rational& r) { return r.str(); }

Rational rational_from_json(const Json& j) {
  return Rational::parse(need_string(j, "rational"));
}

Json density_to_json(const PiecewiseConstant& f) {
  Json bs = Json::array();
  for (const auto& b : f.breakpoints()) bs.push_back(rational_to_json(b));
  Json ds = Json::array();
  for (const auto& d : f.densities()) ds.push_back(rational_to_json(d));
  return Json{{"breakpoints", bs}, {"densities", ds}};
}

PiecewiseConstant density_from_json(const Json& j) {
  std::vector<Rational> bs, ds;
  for (const Json& b : need_list(need(j, "breakpoints"), "breakpoints"))
    bs.push_back(rational_from_json(b));
  for (const Json& d : need_list(need(j, "densities"), "densities"))
    ds.push_back(rational_from_json(d));
  return as_parse("density", [&] { return PiecewiseConstant(std::move(bs), std::move(ds)); });
}

Json profile_to_json(const Profile& p) {
  return Json{{"version", 1}, {"agents", density_list_to(p)}};
}

Profile profile_from_json(const Json& j) {
  if (long long v = need_int(need(j, "version"), "version"); v != 1)
    throw ParseError("unsupported profile version " + std::to_string(v));
  Profile agents = density_list_from(need(j, "agents"), "agents");
  if (agents.empty()) throw ParseError("profile needs at least one agent");
  return agents;
}

Json piece_to_json(const Piece& p) {
  Json out = Json::array();
  for (const auto& iv : p.intervals())
    out.push_back(Json::array({rational_to_json(iv.lo), rational_to_json(iv.hi)}));
  return out;
}

Piece piece_from_json(const Json& j) {
  std::vector<Interval> ivs;
  for (const Json& pair : need_list(j, "piece")) {
    const Json& arr = need_list(pair, "interval");
    if (arr.size() != 2) throw ParseError("interval must be a [lo, hi] pair");
    ivs.push_back(Interval{rational_from_json(arr[0]), rational_from_json(arr[1])});
  }
  return as_parse("piece", [&] { return Piece(std::move(ivs)); });
}

Json allocation_to_json(const Allocation& a) {
  Json shares = Json::array();
  for (const auto& s : a.shares()) shares.push_back(piece_to_json(s));
  return Json{{"shares", shares}};
}

Allocation allocation_from_json(const Json& j) {
  std::vector<Piece> shares;
  for (const Json& s : need_list(need(j, "shares"), "shares")) shares.push_back(piece_from_json(s));
  return as_parse("allocation", [&] { return Allocation(std::move(shares)); });
}

Json audit_to_json(const AuditReport& r) {
  Json totals = Json::array();
  for (const auto& t : r.totals) totals.push_back(rational_to_json(t));
  Json values = Json::array();
  for (const auto& row : r.values) {
    Json jrow = Json::array();
    for (const auto& v : row) jrow.push_back(rational_to_json(v));
    values.push_back(jrow);
  }
  return Json{{"proportional", r.proportional}, {"envy_free", r.envy_free},
              {"entire", r.entire},             {"connected", r.connected},
              {"exact", r.exact},               {"totals", totals},
              {"values", values}};
}

AuditReport audit_from_json(const Json& j) {
  AuditReport r;
  r.proportional = need_bool(need(j, "proportional"), "proportional");
  r.envy_free = need_bool(need(j, "envy_free"), "envy_free");
  r.entire = need_bool(need(j, "entire"), "entire");
  r.connected = need_bool(need(j, "connected"), "connected");
  r.exact = need_bool(need(j, "exact"), "exact");
  for (const Json& t : need_list(need(j, "totals"), "totals"))
    r.totals.push_back(rational_from_json(t));
  for (const Json& row : need_list(need(j, "values"), "values")) {
    std::vector<Rational> vs;
    for (const Json& v : need_list(row, "values row")) vs.push_back(rational_from_json(v));
    r.values.push_back(std::move(vs));
  }
  return r;
}

Json scenario_to_json(const Scenario& s) {
  Json opponents = Json::array();
  for (const auto& tuple : s.opponent_profiles) opponents.push_back(density_list_to(tuple));
  return Json{{"mechanism", to_string(s.mechanism)},
              {"agent", s.agent + 1},
              {"true_density", density_to_json(s.true_f)},
              {"deviation_density", density_to_json(s.deviation_f)},
              {"opponent_profiles", opponents}};
}

Scenario scenario_from_json(const Json& j) {
  Scenario s;
  std::string name = need_string(need(j, "mechanism"), "mechanism");
  auto id = mechanism_from_string(name);
  if (!id) throw ParseError("unknown mechanism \"" + name + "\"");
  s.mechanism = *id;
  long long agent = need_int(need(j, "agent"), "agent");
  if (agent < 1) throw ParseError("agent index must be >= 1");
  s.agent = static_cast<int>(agent - 1);
  s.true_f = density_from_json(need(j, "true_density"));
  s.deviation_f = density_from_json(need(j, "deviation_density"));
  for (const Json& tuple : need_list(need(j, "opponent_profiles"), "opponent_profiles"))
    s.opponent_profiles.push_back(density_list_from(tuple, "opponent tuple"));
  return s;
}

Json certificate_to_json(const DeviationCertificate& c) {
  return Json{{"scenario", scenario_to_json(c.scenario)},
              {"gain_index", optional_index(c.gain_index)},
              {"risk_index", optional_index(c.risk_index)},
              {"truthful_at_gain", optional_rational(c.truthful_at_gain)},
              {"deviating_at_gain", optional_rational(c.deviating_at_gain)},
              {"truthful_at_risk", optional_rational(c.truthful_at_risk)},
              {"deviating_at_risk", optional_rational(c.deviating_at_risk)}};
}

DeviationCertificate certificate_from_json(const Json& j) {
  DeviationCertificate c;
  c.scenario = scenario_from_json(need(j, "scenario"));
  c.gain_index = optional_index_from(need(j, "gain_index"), "gain_index");
  c.risk_index = optional_index_from(need(j, "risk_index"), "risk_index");
  c.truthful_at_gain = optional_rational_from(need(j, "truthful_at_gain"), "truthful_at_gain");
  c.deviating_at_gain = optional_rational_from(need(j, "deviating_at_gain"), "deviating_at_gain");
  c.truthful_at_risk = optional_rational_from(need(j, "truthful_at_risk"), "truthful_at_risk");
  c.deviating_at_risk = optional_rational_from(need(j, "deviating_at_risk"), "deviating_at_risk");
  return c;
}

Json classified_to_json(const ClassifiedDeviation& c) {
  return Json{{"classification", to_string(c.classification)},
              {"certificate", certificate_to_json(c.certificate)}};
}

ClassifiedDeviation classified_from_json(const Json& j) {
  ClassifiedDeviation c;
  std::string name = need_string(need(j, "classification"), "classification");
  auto cls = classification_from_string(name);
  if (!cls) throw ParseError("unknown classification \"" + name + "\"");
  c.classification = *cls;
  c.certificate = certificate_from_json(need(j, "certificate"));
  return c;
}

namespace {

Json optional_piece(const std::optional<Piece>& p) {
  return p ? piece_to_json(*p) : Json(nullptr);
}

std::optional<Piece> optional_piece_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return piece_from_json(j);
}

Json gadget_deviation_to_json(const GadgetDeviation& d) {
  return Json{{"agent", d.agent + 1},
              {"true_density", density_to_json(d.true_density)},
              {"reported_density", density_to_json(d.reported_density)},
              {"opponent_density", density_to_json(d.opponent_density)},
              {"truthful_value", rational_to_json(d.truthful_value)},
              {"deviating_value", rational_to_json(d.deviating_value)}};
}

GadgetDeviation gadget_deviation_from_json(const Json& j) {
  GadgetDeviation d;
  long long agent = need_int(need(j, "agent"), "agent");
  if (agent < 1 || agent > 2) throw ParseError("deviation agent must be 1 or 2");
  d.agent = static_cast<int>(agent - 1);
  d.true_density = density_from_json(need(j, "true_density"));
  d.reported_density = density_from_json(need(j, "reported_density"));
  d.opponent_density = density_from_json(need(j, "opponent_density"));
  d.truthful_value = rational_from_json(need(j, "truthful_value"));
  d.deviating_value = rational_from_json(need(j, "deviating_value"));
  return d;
}

Json gadget_audit_failure_to_json(const GadgetAuditFailure& f) {
  return Json{{"profile", profile_to_json(f.profile)},
              {"allocation", allocation_to_json(f.allocation)},
              {"audit", audit_to_json(f.report)}};
}

GadgetAuditFailure gadget_audit_failure_from_json(const Json& j) {
  GadgetAuditFailure f;
  f.profile = profile_from_json(need(j, "profile"));
  f.allocation = allocation_from_json(need(j, "allocation"));
  f.report = audit_from_json(need(j, "audit"));
  return f;
}

}  // namespace

Json gadget_report_to_json(const GadgetReport& r) {
  Json state = Json{{"x1", optional_piece(r.state.x1)},   {"x2", optional_piece(r.state.x2)},
                    {"x11", optional_piece(r.state.x11)}, {"x12", optional_piece(r.state.x12)},
                    {"x21", optional_piece(r.state.x21)}, {"x22", optional_piece(r.state.x22)}};
  Json instances = Json::array();
  for (int k = 1; k <= 6; ++k) {
    const auto& out = r.state.instance_outputs[static_cast<std::size_t>(k - 1)];
    if (!out) continue;
    instances.push_back(Json{{"instance", k},
                             {"profile", profile_to_json(build_instance(r.state, k))},
                             {"allocation", allocation_to_json(*out)}});
  }
  return Json{{"verdict", to_string(r.verdict)},
              {"stage", r.stage},
              {"note", r.note},
              {"eps", rational_to_json(r.eps_used)},
              {"deviation", r.deviation ? gadget_deviation_to_json(*r.deviation) : Json(nullptr)},
              {"audit_failure",
               r.audit_failure ? gadget_audit_failure_to_json(*r.audit_failure) : Json(nullptr)},
              {"state", state},
              {"instances", instances}};
}

GadgetReport gadget_report_from_json(const Json& j) {
  GadgetReport r;
  std::string name = need_string(need(j, "verdict"), "verdict");
  auto verdict = gadget_verdict_from_string(name);
  if (!verdict) throw ParseError("unknown verdict \"" + name + "\"");
  r.verdict = *verdict;
  r.stage = need_string(need(j, "stage"), "stage");
  r.note = need_string(need(j, "note"), "note");
  r.eps_used = rational_from_json(need(j, "eps"));
  const Json& dev = need(j, "deviation");
  if (!dev.is_null()) r.deviation = gadget_deviation_from_json(dev);
  const Json& fail = need(j, "audit_failure");
  if (!fail.is_null()) r.audit_failure = gadget_audit_failure_from_json(fail);
  const Json& state = need(j, "state");
  r.state.eps = r.eps_used;
  r.state.x1 = optional_piece_from(need(state, "x1"));
  r.state.x2 = optional_piece_from(need(state, "x2"));
  r.state.x11 = optional_piece_from(need(state, "x11"));
  r.state.x12 = optional_piece_from(need(state, "x12"));
  r.state.x21 = optional_piece_from(need(state, "x21"));
  r.state.x22 = optional_piece_from(need(state, "x22"));
  for (const Json& entry : need_list(need(j, "instances"), "instances")) {
    long long k = need_int(need(entry, "instance"), "instance");
    if (k < 1 || k > 6) throw ParseError("instance must be between 1 and 6");
    Profile recorded = profile_from_json(need(entry, "profile"));
    Profile rebuilt = as_parse("instance profile", [&] {
      return build_instance(r.state, static_cast<int>(k));
    });
    if (recorded != rebuilt)
      throw ParseError("instance " + std::to_string(k) + " profile does not match the state");
    r.state.instance_outputs[static_cast<std::size_t>(k - 1)] =
        allocation_from_json(need(entry, "allocation"));
  }
  return r;
}

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("bad JSON: ") + e.what());
  }
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str());
}

void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << dump_json(j);
  if (!out) throw Error("write failed for " + path);
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace cake
