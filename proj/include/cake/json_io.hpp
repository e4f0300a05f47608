// JSON wire formats: profiles, allocations, audits, certificates, reports.
#pragma once

#include <string>

#include "json.hpp"

#include "cake/gadget.hpp"
#include "cake/strategy.hpp"

namespace cake {

using Json = nlohmann::json;

// Conventions shared by every schema below:
//   - rationals travel as canonical "p/q" strings ("p" when q = 1),
//   - agent identities are 1-based on the wire and 0-based in memory,
//   - array indices (opponent tuples, instances) keep their natural base,
//   - every from_* function throws ParseError on malformed input, including
//     structurally valid JSON that violates a value invariant (breakpoints
//     out of order, overlapping shares, bad version, unknown enum name).

// "p/q" string.
Json rational_to_json(const Rational& r);
Rational rational_from_json(const Json& j);

// {"breakpoints": ["0", ..., "1"], "densities": ["d1", ...]}
Json density_to_json(const PiecewiseConstant& f);
PiecewiseConstant density_from_json(const Json& j);

// {"version": 1, "agents": [density, ...]}
Json profile_to_json(const Profile& p);
Profile profile_from_json(const Json& j);

// [["lo","hi"], ...] with the canonical interval list.
Json piece_to_json(const Piece& p);
Piece piece_from_json(const Json& j);

// {"shares": [piece, ...]}
Json allocation_to_json(const Allocation& a);
Allocation allocation_from_json(const Json& j);

// Flags plus {"totals": [...], "values": [[...], ...]}.
Json audit_to_json(const AuditReport& r);
AuditReport audit_from_json(const Json& j);

// {"mechanism", "agent" (1-based), "true_density", "deviation_density",
//  "opponent_profiles": [[density, ...], ...]}
Json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const Json& j);

// Scenario plus nullable gain/risk indices (0-based into opponent_profiles)
// and the four utilities observed there.
Json certificate_to_json(const DeviationCertificate& c);
DeviationCertificate certificate_from_json(const Json& j);

// {"classification": wire name, "certificate": {...}}
Json classified_to_json(const ClassifiedDeviation& c);
ClassifiedDeviation classified_from_json(const Json& j);

// {"verdict", "stage", "note", "eps", "deviation": {...}|null,
//  "audit_failure": {...}|null, "state": {"x1": piece|null, ...},
//  "instances": [{"instance": k, "profile": {...}, "allocation": {...}}]}
// One instances entry per probe the run recorded, each carrying the exact
// densities sent and the allocation received so the report can be re-audited
// without this library.
Json gadget_report_to_json(const GadgetReport& r);
GadgetReport gadget_report_from_json(const Json& j);

// nlohmann parse wrapped to throw ParseError instead.
Json parse_json_text(const std::string& text);
Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

// Two-space indent, sorted keys, trailing newline: byte-stable output.
std::string dump_json(const Json& j);

}  // namespace cake
