#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lintegra/rational.hpp"
#include "lintegra/spec.hpp"

namespace lintegra {

// A candidate singular value of one mapping variable. nullopt value = the
// point at infinity. Auto-detected sites are rational roots only.
struct SingularSite {
  std::string variable;
  std::optional<Rational> value;
  bool user_supplied = false;

  std::string str() const {
    return variable + " = " + (value ? value->str() : "inf");
  }
};

struct ProbeConfig {
  int T = 12;        // series truncation window
  int n_max = 16;    // probe length
  std::uint64_t seed = 1;
  long n0 = 0;       // step index of the first image
  std::optional<std::pair<Rational, Rational>> witnesses;

  static ProbeConfig from_section(const ProbeSection& s) {
    ProbeConfig cfg;
    cfg.T = s.T;
    cfg.n_max = s.n_max;
    cfg.seed = s.seed;
    cfg.n0 = s.n0;
    cfg.witnesses = s.witnesses;
    return cfg;
  }
};

enum class ConfineStatus { Confined, NotConfined, PrecisionLoss };

struct ConfinementReport {
  ConfineStatus status = ConfineStatus::NotConfined;
  // Confined: the recovery step k (k >= 1, counting the first image as 0);
  // NotConfined: n_max; PrecisionLoss: the failing step.
  int step = 0;
  std::vector<int> leads;  // leading exponent of each image, witness run 1
  SingularSite site;
  bool witness_waived = false;   // single-datum maps have nothing to recover
  std::pair<Rational, Rational> witnesses_used{Rational(0), Rational(0)};
  std::string detail;

  std::string status_str() const {
    switch (status) {
      case ConfineStatus::Confined: return "ConfinedAt(" + std::to_string(step) + ")";
      case ConfineStatus::NotConfined: return "NotConfinedWithin(" + std::to_string(step) + ")";
      case ConfineStatus::PrecisionLoss: return "PrecisionExhausted(" + std::to_string(step) + ")";
    }
    return "?";
  }
};

// Detects candidate sites of the probed variable: rational roots of the
// update denominator and of the down-shift variation numerator (three-point,
// which also always gets the site at infinity), or of the stage denominator
// (cascades), stable under two random specializations of the other data.
// Coefficient sequences are evaluated at step n0. Sites listed in the spec's
// [probe] section override detection.
std::vector<SingularSite> find_singular_sites(const SpecFile& spec, long n0 = 0,
                                              std::uint64_t seed = 1);

// Twin-witness Laurent probe: the probed variable starts at value + epsilon
// (1/epsilon for the infinite site), the free data at two distinct witness
// values. Confined at the first k >= 1 whose image is finite at epsilon = 0
// with a witness-dependent limit.
ConfinementReport probe_confinement(const SpecFile& spec, const SingularSite& site,
                                    const ProbeConfig& cfg);

}  // namespace lintegra
