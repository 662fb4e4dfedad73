#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lintegra/rational.hpp"
#include "lintegra/spec.hpp"

namespace lintegra {

// 2x2 matrix over Rational acting on P1. Kept content-normalized (coprime
// integer entries, first nonzero entry positive), so equal actions compare
// equal entrywise. Construction rejects det = 0 with DegenerateStage.
struct MobiusMatrix {
  Rational a{1}, b{0}, c{0}, d{1};

  static MobiusMatrix from_entries(const Rational& a, const Rational& b, const Rational& c,
                                   const Rational& d, long step);
  Rational det() const { return a * d - b * c; }
  friend MobiusMatrix operator*(const MobiusMatrix& m, const MobiusMatrix& k);
  // P1 action; nullopt is the point at infinity.
  std::optional<Rational> apply(const std::optional<Rational>& v) const;
  std::pair<Rational, Rational> apply_pair(const std::pair<Rational, Rational>& p) const;
  friend bool operator==(const MobiusMatrix& m, const MobiusMatrix& k) {
    return m.a == k.a && m.b == k.b && m.c == k.c && m.d == k.d;
  }
};

std::string point_str(const std::optional<Rational>& v);

// Orbit of one or more variables: values[v][k] is vars[v] at step k
// (k = 0..N), nullopt marking a passage through infinity.
struct Orbit {
  std::vector<std::string> vars;
  std::vector<std::vector<std::optional<Rational>>> values;
  std::string route;

  const std::vector<std::optional<Rational>>& of(const std::string& var) const;
};

// Homographic stage matrix at step n; `earlier` holds the current values of
// the preceding stage variables. With exactly one infinite earlier value the
// projective limit of the matrix is well defined and is what is returned;
// with two or more it depends on the approach rates, which is reported as a
// DegenerateStage, as is a vanishing determinant.
MobiusMatrix stage_matrix(const CascadeStage& stage,
                          const std::map<std::string, std::optional<Rational>>& earlier, long n,
                          const std::map<std::string, CoeffSeq>& seqs, long step);

// Step route: each stage applies its matrix to its current value; all stages
// read the pre-step values of the others. First update uses n = n0.
Orbit cascade_direct(const CascadeSpec& spec, const RunSection& run, long n0 = 0);

// Superposition route: per stage, the running product of stage matrices is
// applied to the initial pair. Stages resolve in order, so later coefficient
// data comes from the already-linearised earlier stages.
Orbit cascade_linearised(const CascadeSpec& spec, const RunSection& run, long n0 = 0);

// Exact P1 x P1 evaluation of the update as a bihomogeneous pair: poles pass
// through as infinity; indeterminacy points (numerator and denominator both
// vanishing) throw SingularOrbit. x(n+1) = f(x(n), x(n-1); n), first update
// at n = 1, values indexed 0..N with the two initial values in front.
Orbit threepoint_direct(const MapSpec& spec, const RunSection& run);

// Recognizes x(n+1) = (a*x(n)*x(n-1) + b*x(n-1) + c) / (x(n)*x(n-1)) with
// a, b, c expressions over n and the parameters.
struct CompanionCoeffs {
  ExprPtr a, b, c;
};
std::optional<CompanionCoeffs> recognize_companion(const MapSpec& spec);

// Linearised route through the pattern above: x(n) = Z(n+1)/Z(n) where
// Z(n+2) = a(n) Z(n+1) + b(n) Z(n) + c(n) Z(n-1), seeded by Z(0) = 1,
// Z(1) = x0, Z(2) = x0*x1. Throws LinearisationUnavailable when the update
// lacks the pattern, SingularOrbit on a vanishing consecutive pair.
Orbit threepoint_companion(const MapSpec& spec, const RunSection& run);

}  // namespace lintegra
