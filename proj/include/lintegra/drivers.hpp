#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "lintegra/report.hpp"
#include "lintegra/spec.hpp"

namespace lintegra {

// Effective knobs for one run, echoed verbatim into the report's config
// block. Unset options fall back to per-subcommand defaults or to values
// carried by the spec file itself.
struct DriveOptions {
  std::string spec_path;
  std::optional<int> n_max;
  std::optional<std::string> mode;   // degree growth: exact | modular
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> prime;
  bool cross_check = false;
  std::optional<int> T;              // confinement series window
  std::optional<long> N;             // orbit length
  std::optional<std::string> route;  // cascade: direct | linearised | both
  std::optional<std::string> site;   // confinement: probe one site only
  std::optional<double> rtol, atol;
  std::string format = "json";       // json | csv (degree sequences only)
};

struct DriveResult {
  Json report;           // full envelope
  std::string rendered;  // what goes to stdout
  bool analysis_ok = true;
};

// Each driver validates its inputs first (throwing DomainError / ParseError,
// which callers treat as a usage or spec error) and then runs the analysis
// with every analysis-level exception folded into the report as an "error"
// object with analysis_ok = false.
DriveResult drive_degree_growth(const SpecFile& spec, const DriveOptions& opt);
DriveResult drive_confine(const SpecFile& spec, const DriveOptions& opt);
DriveResult drive_cascade(const SpecFile& spec, const DriveOptions& opt);
DriveResult drive_derivmatch(const SpecFile& spec, const DriveOptions& opt);
DriveResult drive_ode(const SpecFile& spec, const DriveOptions& opt);

}  // namespace lintegra
