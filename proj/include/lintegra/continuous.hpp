#pragma once

#include <array>
#include <string>
#include <vector>

#include "lintegra/expr.hpp"
#include "lintegra/ratfun.hpp"
#include "lintegra/rational.hpp"
#include "lintegra/rk.hpp"
#include "lintegra/unipoly.hpp"

namespace lintegra {

// First-order system x' = rhs(t, x) with expression right-hand sides over
// the state symbols and t.
struct ODESystem {
  std::vector<std::string> state;
  std::vector<ExprPtr> rhs;
};

// Rejects systems whose expressions mention symbols outside state + {t},
// then evaluates through the double ring. An exact division by zero during
// evaluation surfaces as a non-finite right-hand side (blow-up), not a crash.
RhsFn compile_system(const ODESystem& sys);
Trajectory integrate_system(const ODESystem& sys, const std::vector<double>& ic,
                            const RKConfig& cfg);

// --- quintic two-invariant Hamiltonian flow ------------------------------

struct HamiltonianHH {
  double x = 0, y = 0, px = 0, py = 0;
};

// H = px^2/2 + py^2/2 + y^5 + y^3 x^2 + (3/16) y x^4
double hh_energy(const HamiltonianHH& s);
// C = -y px^2 + x px py + y^4 x^2/2 + (3/8) y^2 x^4 + x^6/32
double hh_second_invariant(const HamiltonianHH& s);

// Canonical flow of H in the order (x, y, px, py).
Trajectory hamiltonian_flow(const HamiltonianHH& ic, const RKConfig& cfg);

struct DriftPair {
  double dH = 0, dC = 0;
};

// Max over samples of |Q(t) - Q(0)| / max(1, |Q(0)|) for Q in {H, C}.
DriftPair invariant_drift(const Trajectory& traj);

// --- Riccati chains -------------------------------------------------------

// Stage var' = a var^2 + b var + c; a, b, c are expressions over t and the
// variables of strictly earlier stages.
struct RiccatiStage {
  std::string var;
  ExprPtr a, b, c;
};

struct RiccatiChain {
  std::vector<RiccatiStage> stages;
};

enum class RiccatiMethod { Direct, Linearised };

void validate_chain(const RiccatiChain& chain);

// Direct: one nonlinear system. Linearised: every stage is advanced through
// its linear second-order w equation (var = -w'/(a w), so w'' = (b + a'/a) w'
// - a c w, with a' expanded through the earlier stages by the chain rule)
// and the ratios are recovered at the samples. A zero of w is a movable pole
// of the stage variable: the recovered trajectory is truncated there and
// flagged. A stage whose leading coefficient vanishes at t0 cannot be
// transformed and throws LinearisationUnavailable.
Trajectory riccati_chain_integrate(const RiccatiChain& chain, const std::vector<double>& ic,
                                   const RKConfig& cfg, RiccatiMethod method);

// --- projective / Riccati consistency ------------------------------------

struct ProjectiveReport {
  double residual = 0;   // max |x1' - (A10 + (A11 - A00) x1 - A01 x1^2)|
  bool truncated = false;  // X0 lost its sign before t1
  double t_last = 0;
};

// Integrates X' = A X from ic, forms x1 = X1/X0 and checks the induced
// Riccati equation using the interpolant derivative at every sample.
ProjectiveReport projective_consistency(const std::array<std::array<double, 2>, 2>& A,
                                        const std::array<double, 2>& ic,
                                        const RKConfig& cfg);

// --- exact Chazy layer ----------------------------------------------------

struct ChazyInstance {
  UniPoly<Rational> u;
  RatFun<Rational> a;  // -u'/(2u)
  RatFun<Rational> b;  // a^2 - a'/2
};

// Requires deg u <= 4, u != 0, and the exact polynomial identity
// u'''' u - u''' u' + u''^2/2 = 0; violations carry the residual polynomial.
ChazyInstance chazy_instance(const UniPoly<Rational>& u);

// Exact value of a''' - (6 a'' a + 7 a'^2 - 16 a' a^2 + 4 a^4) at t.
Rational chazy_residual(const ChazyInstance& inst, const Rational& t);

// --- continuous derivative matching ---------------------------------------

struct ContDerivMatchPair {
  RatFun<Rational> a, b;
  double margin = 0.1;  // exclusion radius around t = K and the poles
};

struct DerivMatchResult {
  double K = 0;
  Trajectory traj;  // states (x, x')
  double drift = 0;  // max |x'' x' + 2a x'^2 + 3b x' x + (2ab - b') x^2 - M|
};

// One nonlinear evaluation fixes x''(t0) from the conserved form (value M)
// and then K from the linear form; the linear equation
// (t - K) x'' + ((a t - 1/2) - K a) x' + b (t - K) x = 0 is integrated over
// cfg's interval, which must keep margin distance from t = K and from every
// rational pole of a and b. x'(t0) = 0 makes the nonlinear form singular
// and is rejected.
DerivMatchResult deriv_match_solve(const ContDerivMatchPair& pair, double M, double x0,
                                   double xp0, const RKConfig& cfg);

}  // namespace lintegra
