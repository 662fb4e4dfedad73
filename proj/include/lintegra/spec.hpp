#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lintegra/coeffseq.hpp"
#include "lintegra/expr.hpp"
#include "lintegra/rational.hpp"
#include "lintegra/sparsepoly.hpp"

namespace lintegra {

// A named parameter: either a fixed coefficient sequence or a placeholder
// drawn from the seeded generator at instantiation time.
struct ParamDef {
  bool random = false;
  CoeffSeq seq;
};

struct ParamInstance {
  std::map<std::string, CoeffSeq> seqs;
  std::map<std::string, Rational> random_values;  // the draws, for reports
};

// Resolves random placeholders with gen (in sorted name order, so a fixed
// seed fixes every value) and passes fixed sequences through.
ParamInstance instantiate_params(const std::map<std::string, ParamDef>& params,
                                 RandomRationalGen& gen);

// Three-point rational mapping: next = update(x, xp, n) where xp is the
// down-shifted value. update must be a ratio of polynomials in x, xp.
struct MapSpec {
  std::string name;
  ExprPtr update;
  std::map<std::string, ParamDef> params;
};

// One homographic stage of an ordered cascade. update is the authored
// expression; a, b, c, d are the extracted coefficients of
// (a*v + b)/(c*v + d), expressions over earlier-stage variables, n, params.
struct CascadeStage {
  std::string var;
  ExprPtr update;
  ExprPtr a, b, c, d;
};

struct CascadeSpec {
  std::string name;
  std::vector<CascadeStage> stages;
  std::map<std::string, ParamDef> params;
};

// Square linear system X(n+1) = A(n) X(n); the induced rational map acts on
// the ratios x_mu = X_mu / X_0.
struct ProjectiveSpec {
  std::string name;
  int dim = 0;  // matrix dimension, >= 2
  std::vector<std::vector<ExprPtr>> entries;  // expressions over n, params
  std::map<std::string, ParamDef> params;
};

// Probe defaults from the [probe] section.
struct ProbeSection {
  int T = 12;
  int n_max = 16;
  std::uint64_t seed = 1;
  long n0 = 0;
  std::optional<std::string> variable;           // cascade stage to probe
  std::vector<std::string> sites;                // "p/q" or "inf" overrides
  std::optional<std::pair<Rational, Rational>> witnesses;
};

// Run defaults from the [run] section.
struct RunSection {
  long N = 50;
  std::uint64_t seed = 1;
  std::optional<Rational> x0, x1;                // three-point initial data
  std::map<std::string, Rational> init;          // per-variable initial data
};

struct RawSection {
  std::string name;
  // insertion-ordered key/value pairs; duplicate keys permitted
  std::vector<std::pair<std::string, std::string>> entries;
};

enum class SpecKind { ThreePoint, Cascade, Projective, DerivMatch, Ode };

struct SpecFile {
  SpecKind kind;
  std::optional<MapSpec> map;
  std::optional<CascadeSpec> cascade;
  std::optional<ProjectiveSpec> projective;
  std::optional<RawSection> derivmatch;  // interpreted by the derivmatch layer
  std::optional<RawSection> ode;         // interpreted by the ode layer
  ProbeSection probe;
  RunSection run;
};

// Splits sectioned "key = value" text ('#' comments, blank lines ignored).
std::vector<RawSection> read_spec_sections(const std::string& text);

// Full parse + validation. Throws ParseError (syntax) or DomainError
// (structural violation: non-homographic stage, later-stage reference, ...).
SpecFile parse_specfile(const std::string& text);
SpecFile load_specfile(const std::string& path);

// Lowers a sparse polynomial to an expression tree (sum of monomials).
ExprPtr sparse_to_expr(const SparsePoly& p);

// Evaluates e with every free symbol generic; the result's num/den are
// sparse polynomials over the full symbol set. Rejects (DomainError) updates
// whose denominator is the zero polynomial.
PolyFrac update_polyfrac(const ExprPtr& e);

}  // namespace lintegra
