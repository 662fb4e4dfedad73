#include "lintegra/report.hpp"

#include <sstream>
#include <typeinfo>

#include "lintegra/errors.hpp"

namespace lintegra {

std::string json_rational(const Rational& r) { return r.str(); }

std::string json_point(const std::optional<Rational>& v) {
  return v ? v->str() : std::string("inf");
}

Json json_orbit(const Orbit& orbit) {
  Json values = Json::object();
  for (std::size_t v = 0; v < orbit.vars.size(); ++v) {
    Json column = Json::array();
    for (const auto& entry : orbit.values[v]) column.push_back(json_point(entry));
    values[orbit.vars[v]] = std::move(column);
  }
  Json out;
  out["route"] = orbit.route;
  out["vars"] = orbit.vars;
  out["values"] = std::move(values);
  return out;
}

Json json_degree(const DegreeSequence& seq, const GrowthClass& cls) {
  Json spec_draws = Json::object();
  for (const auto& [name, value] : seq.specialization)
    spec_draws[name] = json_rational(value);
  Json out;
  out["degrees"] = seq.degrees;
  out["mode"] = seq.mode == DegreeMode::Exact ? "exact" : "modular";
  out["seed"] = seq.seed;
  if (seq.mode == DegreeMode::Modular) out["prime"] = seq.prime;
  out["specialization"] = std::move(spec_draws);
  Json growth;
  growth["kind"] = growth_str(cls);
  growth["evidence"] = cls.evidence;
  out["growth"] = std::move(growth);
  return out;
}

Json json_confinement(const ConfinementReport& rep) {
  Json out;
  out["site"] = rep.site.str();
  out["status"] = rep.status_str();
  out["step"] = rep.step;
  out["leads"] = rep.leads;
  out["witness_waived"] = rep.witness_waived;
  out["witnesses"] = Json::array({json_rational(rep.witnesses_used.first),
                                  json_rational(rep.witnesses_used.second)});
  if (!rep.detail.empty()) out["detail"] = rep.detail;
  return out;
}

Json json_conservation(const ConservationReport& rep) {
  Json distinct = Json::array();
  for (const auto& v : rep.distinct) distinct.push_back(json_rational(v));
  Json out;
  out["all_equal"] = rep.all_equal;
  out["distinct"] = std::move(distinct);
  out["max_deviation"] = json_rational(rep.max_deviation);
  return out;
}

Json json_oracle(const OracleReport& rep) {
  Json out;
  out["pass"] = rep.pass;
  out["samples"] = rep.samples;
  out["resampled"] = rep.resampled;
  out["seed"] = rep.seed;
  if (rep.counterexample) {
    Json ce = Json::array();
    for (const auto& v : *rep.counterexample) ce.push_back(json_rational(v));
    out["counterexample"] = std::move(ce);
  }
  return out;
}

Json json_trajectory(const Trajectory& tr) {
  Json out;
  out["blew_up"] = tr.blew_up;
  if (tr.blew_up) out["blowup_t"] = tr.blowup_t;
  out["steps_accepted"] = tr.steps_accepted;
  out["steps_rejected"] = tr.steps_rejected;
  out["samples"] = tr.times.size();
  if (!tr.times.empty()) {
    out["t_first"] = tr.times.front();
    out["t_last"] = tr.times.back();
    out["final_state"] = tr.states.back();
  }
  return out;
}

Json json_error(const std::exception& e) {
  Json out;
  out["what"] = e.what();
  if (auto* p = dynamic_cast<const SingularOrbit*>(&e)) {
    out["type"] = "SingularOrbit";
    out["step"] = p->step;
  } else if (auto* p = dynamic_cast<const SingularStep*>(&e)) {
    out["type"] = "SingularStep";
    out["step"] = p->step;
  } else if (auto* p = dynamic_cast<const DegenerateStage*>(&e)) {
    out["type"] = "DegenerateStage";
    out["step"] = p->step;
  } else if (auto* p = dynamic_cast<const PrecisionExhausted*>(&e)) {
    out["type"] = "PrecisionExhausted";
    out["step"] = p->step;
  } else if (auto* p = dynamic_cast<const LinearisationUnavailable*>(&e)) {
    out["type"] = "LinearisationUnavailable";
    out["stage"] = p->stage;
  } else if (auto* p = dynamic_cast<const ConstraintViolated*>(&e)) {
    out["type"] = "ConstraintViolated";
    out["residual"] = p->residual;
  } else if (auto* p = dynamic_cast<const ParseError*>(&e)) {
    out["type"] = "ParseError";
    out["offset"] = p->offset;
  } else if (dynamic_cast<const DomainError*>(&e)) {
    out["type"] = "DomainError";
  } else {
    out["type"] = "Error";
  }
  return out;
}

Json report_envelope(const std::string& subcommand, Json config, Json analysis) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["tool_version"] = kToolVersion;
  doc["subcommand"] = subcommand;
  doc["config"] = std::move(config);
  doc["analysis"] = std::move(analysis);
  return doc;
}

std::string render_json(const Json& doc) { return doc.dump(2) + "\n"; }

std::string degree_csv(const DegreeSequence& seq) {
  std::ostringstream out;
  out << "n,degree\n";
  for (std::size_t n = 0; n < seq.degrees.size(); ++n)
    out << n << ',' << seq.degrees[n] << '\n';
  return out.str();
}

}  // namespace lintegra
