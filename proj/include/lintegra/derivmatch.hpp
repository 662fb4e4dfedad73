#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lintegra/cascade.hpp"
#include "lintegra/coeffseq.hpp"
#include "lintegra/errors.hpp"
#include "lintegra/rational.hpp"

namespace lintegra {

// Conserved three-point quadratic form
//   f = [xm xb] xm xb + [x xb] x xb + [xb] xb + [xm x] xm x
//     + [x^2] x^2 + [x] x + [xm] xm + [1]
// with every bracket a CoeffSeq in n and target value M. The slot set itself
// enforces total degree <= 2 and degree <= 1 separately in xm and xb, which
// is what makes f linear in the forward value.
struct QuadFormSpec {
  CoeffSeq xmxb, xxb, xb, xmx, x2, x, xm, one;
  Rational M{0};
};

// Builds a QuadFormSpec from named monomial coefficients, rejecting any
// monomial outside the admissible slot set. Keys: 1, xm, x, xb, xm*x, x*xb,
// xm*xb, x^2. Missing keys default to zero.
QuadFormSpec validate_quadform(const std::map<std::string, CoeffSeq>& coeffs,
                               const Rational& M);

// Linear three-point form whose value along matched orbits is the constant K:
//   (alpha xb + beta (x - a) + gamma xm + delta)
//   / (eps xb + zeta (x - a) + eta xm + theta).
// a = 0 gives a plain middle term.
struct LinThreePoint {
  CoeffSeq alpha, beta, gamma, delta;  // numerator
  CoeffSeq eps, zeta, eta, theta;      // denominator
  Rational a{0};
  std::optional<Rational> K;  // set once fixed from a nonlinear step
};

// Rejects forms whose numerator and denominator coefficient vectors are
// proportional at every n in [n_lo, n_hi] (the ratio would be trivially
// constant, carrying no information).
void validate_linform(const LinThreePoint& lin, long n_lo = 0, long n_hi = 8);

// The one-function family: g together with the shifted combinations that
// appear in the worked quadratic/linear pair. zbar and Abar are the
// up-shifts of z and A.
struct GExample {
  CoeffSeq g;
  Rational a{0};
  CoeffSeq z;     // g(n+1) + g(n-1), checked nonzero when evaluated
  CoeffSeq zeta;  // g(n+1) + g(n),   checked nonzero
  CoeffSeq zbar;  // g(n+2) + g(n),   checked nonzero
  CoeffSeq A;     // g(n)^2 z(n), g checked nonzero
  CoeffSeq Abar;  // A(n+1)
  CoeffSeq B;     // -zeta(n) g(n+2) g(n-1) - (g(n+2) + g(n-1)) g(n+1) g(n)
};

GExample make_g_example(const CoeffSeq& g, const Rational& a);

// Expands the worked pair driven by g: the quadratic form
//   ((xb + x - a)/zbar - x/zeta) ((xm + x - a)/z - x/zeta) - x^2/zeta^2
// in slot coefficients, and the linear form
//   (A xb + B (x - a) + Abar xm) / (z xb + (zbar + z)(x - a) + zbar xm).
// Evaluating either at an n where z, zeta, zbar, or g vanishes throws
// DomainError naming the offending n.
std::pair<QuadFormSpec, LinThreePoint> build_g_example(const CoeffSeq& g,
                                                       const Rational& a);

Rational eval_quadform(const QuadFormSpec& f, const Rational& xm, const Rational& x,
                       const Rational& xb, long n);

// The unique xb with f(xm, x, xb; n) = M; a vanishing xb-coefficient throws
// SingularStep(n).
Rational solve_next(const QuadFormSpec& f, const Rational& M, const Rational& xm,
                    const Rational& x, long n);

// Evaluates the linear ratio at a triple; zero denominator throws DomainError.
Rational compute_K(const LinThreePoint& lin, const Rational& xm, const Rational& x,
                   const Rational& xb, long n);

// Orbit of (alpha - K eps) xb + (beta - K zeta)(x - a) + (gamma - K eta) xm
// + (delta - K theta) = 0 from (x0, x1); the update producing index k uses
// n = k - 1. A vanishing leading coefficient throws SingularStep(n).
Orbit propagate_linear(const LinThreePoint& lin, const Rational& K, const Rational& x0,
                       const Rational& x1, long N);

struct ConservationReport {
  bool all_equal = false;
  std::vector<Rational> distinct;  // values of f on consecutive triples, first-seen order
  Rational max_deviation{0};       // max |value - f.M|
};

// Evaluates f on every consecutive triple of the orbit (middle index k uses
// n = k). Needs at least three finite entries.
ConservationReport verify_conservation(const QuadFormSpec& f, const Orbit& orbit);

struct OracleReport {
  bool pass = false;
  int samples = 0;    // accepted sample count
  int resampled = 0;  // degenerate draws discarded
  std::uint64_t seed = 0;
  // xm, x, xb, K at n, K at n + 1 for the first disagreeing sample
  std::optional<std::array<Rational, 5>> counterexample;
};

// Samples random triples (xm, x, xb) at step n, pushes each one step through
// the quadratic form (same f-value at n + 1) and checks that the linear
// ratio is unchanged, exactly. This is the gate for trusting a (f, lin)
// pair: it fails immediately if the two forms do not actually match.
OracleReport consistency_oracle(const QuadFormSpec& f, const LinThreePoint& lin, long n,
                                int samples, std::uint64_t seed);

}  // namespace lintegra
