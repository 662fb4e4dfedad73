#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "lintegra/cascade.hpp"
#include "lintegra/confinement.hpp"
#include "lintegra/degree_growth.hpp"
#include "lintegra/derivmatch.hpp"
#include "lintegra/rational.hpp"
#include "lintegra/rk.hpp"

namespace lintegra {

// std::map-backed, so object keys come out sorted and two runs with the same
// inputs render the same bytes.
using Json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kToolVersion = "0.3.0";

// Rationals travel as exact "p/q" strings (plain "p" for integers), never as
// floating point; the point at infinity is the string "inf".
std::string json_rational(const Rational& r);
std::string json_point(const std::optional<Rational>& v);

Json json_orbit(const Orbit& orbit);
Json json_degree(const DegreeSequence& seq, const GrowthClass& cls);
Json json_confinement(const ConfinementReport& rep);
Json json_conservation(const ConservationReport& rep);
Json json_oracle(const OracleReport& rep);
Json json_trajectory(const Trajectory& tr);

// {"type": ..., "what": ...} plus the context field the concrete exception
// carries (step, stage, offset, residual).
Json json_error(const std::exception& e);

// Top-level document: schema_version, tool_version, the effective config of
// the run, and the per-analysis payload.
Json report_envelope(const std::string& subcommand, Json config, Json analysis);

// dump(2) with a trailing newline; the only renderer, so byte-stability of a
// report is byte-stability of its Json value.
std::string render_json(const Json& doc);

// Degree sequences also render as two-column CSV.
std::string degree_csv(const DegreeSequence& seq);

}  // namespace lintegra
