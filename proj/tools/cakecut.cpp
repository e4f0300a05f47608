// cakecut: run mechanisms, audit allocations, replay attacks, drive the
// adaptive truthfulness gadget, and print the bundled instance generators.
//
// Exit codes: 0 success (or the expected confirmation), 1 ran but the
// expected property did not hold, 2 parse or usage error, 3 precondition
// violation, 4 external protocol violation.
#include <csignal>
#include <cstdio>
#include <iostream>
#include <memory>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "CLI11.hpp"

#include "cake/errors.hpp"
#include "cake/json_io.hpp"

namespace {

using cake::Json;

void emit(const Json& j, const std::string& out_path) {
  if (out_path.empty())
    std::cout << cake::dump_json(j);
  else
    cake::save_json_file(out_path, j);
}

cake::MechanismId parse_mechanism(const std::string& name) {
  auto id = cake::mechanism_from_string(name);
  if (!id)
    throw cake::ParseError("unknown mechanism \"" + name +
                           "\" (see cakecut run --help for the list)");
  return *id;
}

cake::Rational parse_eps(const std::string& text) { return cake::Rational::parse(text); }

// What each mechanism promises on every valid profile; `run` exits 0 only
// when the audit of this run backs the promise.
bool advertised_guarantees_hold(cake::MechanismId id, const cake::AuditReport& a) {
  switch (id) {
    case cake::MechanismId::SimpleEf:
    case cake::MechanismId::RotatingEf:
      return a.exact && a.entire && a.envy_free;
    case cake::MechanismId::MovingKnife:
    case cake::MechanismId::EvenPaz:
    case cake::MechanismId::ConnectedProp:
      return a.proportional && a.entire && a.connected;
    case cake::MechanismId::ConnectedPropOpen:
      return a.proportional && a.connected;
    case cake::MechanismId::CutAndChoose:
      return a.proportional && a.envy_free && a.entire && a.connected;
  }
  return false;
}

int cmd_run(const std::string& profile_path, const std::string& mechanism,
            const std::string& out_path) {
  cake::Profile profile = cake::profile_from_json(cake::load_json_file(profile_path));
  cake::MechanismId id = parse_mechanism(mechanism);
  cake::Allocation allocation = cake::run_mechanism(id, profile);
  cake::AuditReport report = cake::audit(profile, allocation);
  emit(Json{{"mechanism", cake::to_string(id)},
            {"allocation", cake::allocation_to_json(allocation)},
            {"audit", cake::audit_to_json(report)}},
       out_path);
  return advertised_guarantees_hold(id, report) ? 0 : 1;
}

int cmd_audit(const std::string& profile_path, const std::string& allocation_path,
              const std::string& out_path) {
  cake::Profile profile = cake::profile_from_json(cake::load_json_file(profile_path));
  cake::Allocation allocation = cake::allocation_from_json(cake::load_json_file(allocation_path));
  emit(cake::audit_to_json(cake::audit(profile, allocation)), out_path);
  return 0;
}

// The rotating-slice attack: a deviator whose report hides her jump at 1/2,
// one opponent choice that rewards the lie and one that punishes it.
cake::Scenario rotatingef_attack(const cake::Rational& eps) {
  cake::Scenario s;
  s.mechanism = cake::MechanismId::RotatingEf;
  s.agent = 0;
  s.true_f = cake::PiecewiseConstant({cake::Rational(0), cake::Rational(1, 2), cake::Rational(1)},
                                     {cake::Rational(1, 2), cake::Rational(3, 2)});
  s.deviation_f = cake::PiecewiseConstant::uniform();
  cake::OpponentTuple reward = {cake::PiecewiseConstant(
      {cake::Rational(0), cake::Rational(1, 4), cake::Rational(1)},
      {cake::Rational(2), cake::Rational(2, 3)})};
  auto punish = cake::rotatingef_risk_profile(s.true_f, s.deviation_f, 2, eps);
  if (!punish) throw cake::Error("risk construction failed for the built-in attack");
  s.opponent_profiles = {reward, *punish};
  return s;
}

int cmd_attack(const std::string& generator, const std::string& scenario_path, int n,
               const std::string& eps_text, const std::string& out_path) {
  cake::Scenario scenario;
  std::optional<cake::Classification> expected;
  if (!scenario_path.empty()) {
    scenario = cake::scenario_from_json(cake::load_json_file(scenario_path));
  } else if (generator == "movingknife") {
    scenario = cake::movingknife_counterexample(n > 0 ? n : 3);
    expected = cake::Classification::WratViolation;
  } else if (generator == "evenpaz") {
    scenario = cake::evenpaz_counterexample(parse_eps(eps_text.empty() ? "1/20" : eps_text));
    expected = cake::Classification::WratViolation;
  } else if (generator == "simpleef") {
    scenario = cake::simpleef_counterexample(n > 0 ? n : 2);
    expected = cake::Classification::WratViolation;
  } else if (generator == "rotatingef") {
    scenario = rotatingef_attack(parse_eps(eps_text.empty() ? "1/100" : eps_text));
    expected = cake::Classification::RatDeterred;
  } else {
    throw cake::ParseError("unknown attack generator \"" + generator +
                           "\" (movingknife, evenpaz, simpleef, rotatingef)");
  }
  cake::ClassifiedDeviation result = cake::classify_deviation(scenario);
  emit(cake::classified_to_json(result), out_path);
  if (!expected) return 0;
  return result.classification == *expected ? 0 : 1;
}

// One candidate mechanism per spawned command: each probe goes out as a
// single profile line on its stdin, each answer comes back as a single
// allocation line on its stdout. Any break in that rhythm is a protocol
// violation.
class ExternalMechanism {
 public:
  explicit ExternalMechanism(const std::string& command) {
    int to_child[2], from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0)
      throw cake::ProtocolError("cannot open pipes for the external mechanism");
    pid_ = fork();
    if (pid_ < 0) throw cake::ProtocolError("cannot fork the external mechanism");
    if (pid_ == 0) {
      dup2(to_child[0], STDIN_FILENO);
      dup2(from_child[1], STDOUT_FILENO);
      close(to_child[0]);
      close(to_child[1]);
      close(from_child[0]);
      close(from_child[1]);
      execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    request_ = fdopen(to_child[1], "w");
    response_ = fdopen(from_child[0], "r");
    if (!request_ || !response_)
      throw cake::ProtocolError("cannot attach to the external mechanism's pipes");
  }

  ExternalMechanism(const ExternalMechanism&) = delete;
  ExternalMechanism& operator=(const ExternalMechanism&) = delete;

  ~ExternalMechanism() {
    if (request_) fclose(request_);
    if (response_) fclose(response_);
    if (pid_ > 0) waitpid(pid_, nullptr, 0);
  }

  cake::Allocation operator()(const cake::Profile& profile) {
    std::string line = cake::profile_to_json(profile).dump() + "\n";
    if (fputs(line.c_str(), request_) == EOF || fflush(request_) == EOF)
      throw cake::ProtocolError("external mechanism stopped reading requests");
    std::string reply;
    for (int c; (c = fgetc(response_)) != EOF && c != '\n';) reply.push_back(static_cast<char>(c));
    if (reply.empty())
      throw cake::ProtocolError("external mechanism closed its output mid-run");
    cake::Allocation allocation;
    try {
      allocation = cake::allocation_from_json(cake::parse_json_text(reply));
    } catch (const cake::ParseError& e) {
      throw cake::ProtocolError(std::string("bad allocation line from external mechanism: ") +
                                e.what());
    }
    if (allocation.size() != profile.size())
      throw cake::ProtocolError("external mechanism returned " +
                                std::to_string(allocation.size()) + " shares for " +
                                std::to_string(profile.size()) + " agents");
    return allocation;
  }

 private:
  FILE* request_ = nullptr;
  FILE* response_ = nullptr;
  pid_t pid_ = -1;
};

int cmd_gadget(const std::string& mechanism, const std::string& external,
               const std::string& eps_text, const std::string& out_path) {
  cake::TwoAgentMechanism candidate;
  if (!external.empty()) {
    std::signal(SIGPIPE, SIG_IGN);  // a dying child must surface as ProtocolError
    auto child = std::make_shared<ExternalMechanism>(external);
    candidate = [child](const cake::Profile& p) { return (*child)(p); };
  } else {
    candidate = cake::as_black_box(parse_mechanism(mechanism));
  }
  cake::GadgetReport report = cake::run_gadget(candidate, parse_eps(eps_text));
  emit(cake::gadget_report_to_json(report), out_path);
  return report.verdict == cake::GadgetVerdict::ForcedStateDiverged ? 1 : 0;
}

// The standalone instance printer pins the halves/quarters layout the gadget
// would otherwise discover adaptively.
cake::GadgetState canonical_layout(const cake::Rational& eps) {
  cake::GadgetState st;
  st.eps = eps;
  st.x1 = cake::Piece::interval(cake::Rational(0), cake::Rational(1, 2));
  st.x2 = cake::Piece::interval(cake::Rational(1, 2), cake::Rational(1));
  st.x11 = cake::Piece::interval(cake::Rational(0), cake::Rational(1, 4));
  st.x12 = cake::Piece::interval(cake::Rational(1, 4), cake::Rational(1, 2));
  st.x21 = cake::Piece::interval(cake::Rational(1, 2), cake::Rational(3, 4));
  st.x22 = cake::Piece::interval(cake::Rational(3, 4), cake::Rational(1));
  return st;
}

// Truthful profile behind a scenario: the deviator's true density in her
// seat, the first opponent tuple around her.
cake::Profile scenario_profile(const cake::Scenario& s) {
  cake::Profile profile;
  std::size_t opp = 0;
  for (std::size_t i = 0; i <= s.opponent_profiles.at(0).size(); ++i) {
    if (static_cast<int>(i) == s.agent)
      profile.push_back(s.true_f);
    else
      profile.push_back(s.opponent_profiles[0][opp++]);
  }
  return profile;
}

int cmd_gen(const std::string& name, int n, const std::string& eps_text,
            const std::string& out_path) {
  if (name.size() == 2 && name[0] == 'F' && name[1] >= '1' && name[1] <= '6') {
    cake::Rational eps = parse_eps(eps_text.empty() ? "1/100" : eps_text);
    if (!(0 < eps && eps < cake::Rational(1, 2)))
      throw cake::EpsOutOfRange("instance generators need 0 < eps < 1/2");
    cake::Profile p = cake::build_instance(canonical_layout(eps), name[1] - '0');
    emit(cake::profile_to_json(p), out_path);
    return 0;
  }
  if (name == "ell" || name == "rr") {
    int agents = n > 0 ? n : 2;
    emit(cake::density_to_json(name == "ell" ? cake::ell(agents) : cake::rr(agents)), out_path);
    return 0;
  }
  if (name == "movingknife") {
    emit(cake::profile_to_json(scenario_profile(cake::movingknife_counterexample(n > 0 ? n : 3))),
         out_path);
    return 0;
  }
  if (name == "evenpaz") {
    emit(cake::profile_to_json(scenario_profile(
             cake::evenpaz_counterexample(parse_eps(eps_text.empty() ? "1/20" : eps_text)))),
         out_path);
    return 0;
  }
  if (name == "simpleef") {
    emit(cake::profile_to_json(scenario_profile(cake::simpleef_counterexample(n > 0 ? n : 2))),
         out_path);
    return 0;
  }
  if (name == "rotatingef") {
    emit(cake::profile_to_json(scenario_profile(
             rotatingef_attack(parse_eps(eps_text.empty() ? "1/100" : eps_text)))),
         out_path);
    return 0;
  }
  throw cake::ParseError("unknown generator \"" + name +
                         "\" (F1..F6, ell, rr, movingknife, evenpaz, simpleef, rotatingef)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact cake division: mechanisms, fairness audits, manipulation replays"};
  app.require_subcommand(1);

  std::string profile_path, allocation_path, mechanism, external, out_path, scenario_path;
  std::string generator, gen_name;
  std::string attack_eps, gadget_eps = "1/100", gen_eps;
  int attack_n = 0, gen_n = 0;

  CLI::App* run = app.add_subcommand("run", "Run a mechanism on a profile file and audit it");
  run->add_option("--profile", profile_path, "profile JSON file")->required();
  run->add_option("--mechanism", mechanism,
                  "simple_ef, rotating_ef, connected_prop, connected_prop_open, moving_knife, "
                  "even_paz, cut_and_choose")
      ->required();
  run->add_option("--out", out_path, "write the result here instead of stdout");

  CLI::App* audit_cmd = app.add_subcommand("audit", "Audit an allocation file against a profile");
  audit_cmd->add_option("--profile", profile_path, "profile JSON file")->required();
  audit_cmd->add_option("--allocation", allocation_path, "allocation JSON file")->required();
  audit_cmd->add_option("--out", out_path, "write the audit here instead of stdout");

  CLI::App* attack = app.add_subcommand(
      "attack", "Classify a deviation scenario (bundled generator or --scenario file)");
  attack->add_option("generator", generator, "movingknife, evenpaz, simpleef, rotatingef");
  attack->add_option("--scenario", scenario_path, "scenario JSON file");
  attack->add_option("--n", attack_n, "agent count for movingknife/simpleef");
  attack->add_option("--eps", attack_eps, "epsilon for evenpaz/rotatingef, as p/q");
  attack->add_option("--out", out_path, "write the certificate here instead of stdout");

  CLI::App* gadget = app.add_subcommand(
      "gadget", "Drive the adaptive six-probe truthfulness gadget against a mechanism");
  gadget->add_option("--mechanism", mechanism, "bundled mechanism to attack");
  gadget->add_option("--external", external,
                     "command implementing the mechanism: one profile JSON line on stdin, one "
                     "allocation JSON line on stdout, per probe");
  gadget->add_option("--eps", gadget_eps, "probe epsilon as p/q (default 1/100)");
  gadget->add_option("--out", out_path, "write the report here instead of stdout");

  CLI::App* gen = app.add_subcommand("gen", "Print a bundled profile or density");
  gen->add_option("name", gen_name, "F1..F6, ell, rr, movingknife, evenpaz, simpleef, rotatingef")
      ->required();
  gen->add_option("--n", gen_n, "agent count for ell/rr/movingknife/simpleef");
  gen->add_option("--eps", gen_eps, "epsilon as p/q where the instance takes one");
  gen->add_option("--out", out_path, "write the JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*run) return cmd_run(profile_path, mechanism, out_path);
    if (*audit_cmd) return cmd_audit(profile_path, allocation_path, out_path);
    if (*attack) {
      if (generator.empty() == scenario_path.empty())
        throw cake::ParseError("attack needs exactly one of a generator name or --scenario");
      return cmd_attack(generator, scenario_path, attack_n, attack_eps, out_path);
    }
    if (*gadget) {
      if (mechanism.empty() == external.empty())
        throw cake::ParseError("gadget needs exactly one of --mechanism or --external");
      return cmd_gadget(mechanism, external, gadget_eps, out_path);
    }
    if (*gen) return cmd_gen(gen_name, gen_n, gen_eps, out_path);
  } catch (const cake::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const cake::ProtocolError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const cake::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
