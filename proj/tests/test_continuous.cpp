#include <cmath>
#include <set>
#include <string>

#include "doctest.h"
#include "lintegra/continuous.hpp"

using namespace lintegra;

namespace {

ExprPtr E(const std::string& text, std::set<std::string> vars = {}) {
  vars.insert("t");
  return parse_expr(text, vars);
}

RKConfig cfg_on(double t0, double t1, double rtol = 1e-10, double atol = 1e-12) {
  RKConfig c;
  c.t0 = t0;
  c.t1 = t1;
  c.rtol = rtol;
  c.atol = atol;
  return c;
}

// Max over the common sample range of the componentwise distance.
double max_gap(const Trajectory& a, const Trajectory& b) {
  std::size_t n = std::min(a.states.size(), b.states.size());
  double gap = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      gap = std::max(gap, std::abs(a.states[i][j] - b.states[i][j]));
  return gap;
}

}  // namespace

TEST_CASE("expression systems integrate and reject unknown symbols") {
  ODESystem sys{{"x"}, {E("x", {"x"})}};
  Trajectory tr = integrate_system(sys, {1.0}, cfg_on(0, 1));
  REQUIRE(!tr.blew_up);
  CHECK(tr.times.back() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(tr.states.back()[0] == doctest::Approx(std::exp(1.0)).epsilon(1e-9));

  ODESystem bad{{"x"}, {E("x + q", {"x", "q"})}};
  CHECK_THROWS_AS(compile_system(bad), DomainError);
  ODESystem mismatch{{"x", "y"}, {E("x", {"x"})}};
  CHECK_THROWS_AS(compile_system(mismatch), DomainError);
  CHECK_THROWS_AS(compile_system(ODESystem{}), DomainError);
}

TEST_CASE("quintic Hamiltonian invariants evaluate exactly at a pinned point") {
  HamiltonianHH s{1, 1, 1, 1};
  CHECK(hh_energy(s) == 3.1875);            // 1/2 + 1/2 + 1 + 1 + 3/16
  CHECK(hh_second_invariant(s) == 0.90625);  // -1 + 1 + 1/2 + 3/8 + 1/32
  HamiltonianHH origin{};
  CHECK(hh_energy(origin) == 0.0);
  CHECK(hh_second_invariant(origin) == 0.0);
}

TEST_CASE("quintic Hamiltonian flow conserves both invariants") {
  HamiltonianHH ic{0.1, -0.2, 0.3, 0.15};
  Trajectory tr = hamiltonian_flow(ic, cfg_on(0, 2));
  REQUIRE(!tr.blew_up);
  DriftPair d = invariant_drift(tr);
  CHECK(d.dH <= 1e-8);
  CHECK(d.dC <= 1e-8);

  // Tightening the tolerance by 100 must buy at least a factor 10.
  Trajectory fine = hamiltonian_flow(ic, cfg_on(0, 2, 1e-12, 1e-14));
  DriftPair df = invariant_drift(fine);
  CHECK(df.dH * 10 <= std::max(d.dH, 1e-14));
  CHECK(df.dC * 10 <= std::max(d.dC, 1e-14));

  // The equilibrium stays put: drift identically zero.
  Trajectory still = hamiltonian_flow(HamiltonianHH{}, cfg_on(0, 2));
  DriftPair dz = invariant_drift(still);
  CHECK(dz.dH == 0.0);
  CHECK(dz.dC == 0.0);
}

TEST_CASE("riccati: single stage matches the closed form through both routes") {
  // x' = -x^2, x(0) = 1 has solution 1/(1+t).
  RiccatiChain chain{{{"x", E("-1"), E("0"), E("0")}}};
  for (auto method : {RiccatiMethod::Direct, RiccatiMethod::Linearised}) {
    Trajectory tr = riccati_chain_integrate(chain, {1.0}, cfg_on(0, 2), method);
    REQUIRE(!tr.blew_up);
    double worst = 0;
    for (std::size_t i = 0; i < tr.times.size(); ++i)
      worst = std::max(worst,
                       std::abs(tr.states[i][0] - 1.0 / (1.0 + tr.times[i])));
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("riccati: two-stage cascade agrees between routes") {
  // y' = -y^2 + y + 5/3, x' = x^2/3 + y x + 1 from (0, 0); the x stage blows
  // up near t = 1.66, so [0, 1.2] is pole-free.
  RiccatiChain chain{{{"y", E("-1"), E("1"), E("5/3")},
                      {"x", E("1/3"), E("y", {"y"}), E("1")}}};
  Trajectory direct =
      riccati_chain_integrate(chain, {0, 0}, cfg_on(0, 1.2), RiccatiMethod::Direct);
  Trajectory lin = riccati_chain_integrate(chain, {0, 0}, cfg_on(0, 1.2),
                                           RiccatiMethod::Linearised);
  REQUIRE(!direct.blew_up);
  REQUIRE(!lin.blew_up);
  REQUIRE(direct.states.size() == lin.states.size());
  CHECK(max_gap(direct, lin) <= 1e-6);
  CHECK(direct.states.back()[0] == doctest::Approx(1.686893).epsilon(1e-4));
  CHECK(direct.states.back()[1] == doctest::Approx(4.048886).epsilon(1e-4));
}

TEST_CASE("riccati: three-stage chain-rule coefficients agree between routes") {
  // Leading coefficients depending on an earlier variable (stage v) and on t
  // (stage w) exercise the chain-rule expansion of a' in the w equation.
  RiccatiChain chain{{{"u", E("-1"), E("0"), E("1")},
                      {"v", E("-(1 + u)", {"u"}), E("0"), E("1")},
                      {"w", E("-(1 + t)"), E("u - v", {"u", "v"}), E("1")}}};
  Trajectory direct = riccati_chain_integrate(chain, {0, 0, 0}, cfg_on(0, 1.5),
                                              RiccatiMethod::Direct);
  Trajectory lin = riccati_chain_integrate(chain, {0, 0, 0}, cfg_on(0, 1.5),
                                           RiccatiMethod::Linearised);
  REQUIRE(!direct.blew_up);
  REQUIRE(!lin.blew_up);
  CHECK(max_gap(direct, lin) <= 1e-6);
  // Stage u is exactly tanh(t).
  CHECK(direct.states.back()[0] == doctest::Approx(std::tanh(1.5)).epsilon(1e-9));
  CHECK(direct.states.back()[1] == doctest::Approx(0.71644899).epsilon(1e-5));
  CHECK(direct.states.back()[2] == doctest::Approx(0.68551523).epsilon(1e-5));
}

TEST_CASE("riccati: validation rejects malformed chains") {
  auto one = E("1");
  CHECK_THROWS_AS(validate_chain(RiccatiChain{}), DomainError);
  // Duplicate stage variable.
  CHECK_THROWS_AS(
      validate_chain(RiccatiChain{{{"x", one, one, one}, {"x", one, one, one}}}),
      DomainError);
  // Forward reference: u's coefficient mentions the later stage v.
  CHECK_THROWS_AS(validate_chain(RiccatiChain{{{"u", E("v", {"v"}), one, one},
                                               {"v", one, one, one}}}),
                  DomainError);
  // Self reference inside a coefficient.
  CHECK_THROWS_AS(
      validate_chain(RiccatiChain{{{"x", E("x", {"x"}), one, one}}}),
      DomainError);
  // Initial condition dimension mismatch.
  RiccatiChain ok{{{"x", E("-1"), E("0"), E("0")}}};
  CHECK_THROWS_AS(
      riccati_chain_integrate(ok, {1.0, 2.0}, cfg_on(0, 1), RiccatiMethod::Direct),
      DomainError);
}

TEST_CASE("riccati: linearisation unavailable when a stage coefficient vanishes at t0") {
  RiccatiChain chain{{{"x", E("t"), E("0"), E("1")}}};
  try {
    riccati_chain_integrate(chain, {0.5}, cfg_on(0, 1), RiccatiMethod::Linearised);
    FAIL("expected LinearisationUnavailable");
  } catch (const LinearisationUnavailable& e) {
    CHECK(e.stage == 0);
  }
  // The direct route has no such restriction.
  Trajectory tr =
      riccati_chain_integrate(chain, {0.5}, cfg_on(0, 1), RiccatiMethod::Direct);
  CHECK(!tr.blew_up);
}

TEST_CASE("riccati: movable pole flags a partial trajectory") {
  // x' = x^2 from x(0) = 1 has the movable pole x = 1/(1-t) at t = 1.
  RiccatiChain chain{{{"x", E("1"), E("0"), E("0")}}};

  Trajectory direct =
      riccati_chain_integrate(chain, {1.0}, cfg_on(0, 2), RiccatiMethod::Direct);
  CHECK(direct.blew_up);
  CHECK(direct.blowup_t == doctest::Approx(1.0).epsilon(1e-3));

  // Linearised: w'' = 0 with w(0) = 1, w'(0) = -1 gives w = 1 - t; the zero
  // of w at t = 1 truncates the recovered trajectory.
  Trajectory lin = riccati_chain_integrate(chain, {1.0}, cfg_on(0, 2),
                                           RiccatiMethod::Linearised);
  CHECK(lin.blew_up);
  CHECK(lin.blowup_t == doctest::Approx(1.0).epsilon(2e-2));
  REQUIRE(!lin.times.empty());
  CHECK(lin.times.back() < 1.0);
  double worst = 0;
  for (std::size_t i = 0; i < lin.times.size(); ++i)
    worst = std::max(worst,
                     std::abs(lin.states[i][0] - 1.0 / (1.0 - lin.times[i])));
  CHECK(worst <= 1e-6 * 100);  // values grow like 1/(1-t); absolute scale ~100
}

TEST_CASE("projective consistency: constant ratio and tanh fixtures") {
  // A = I keeps x1 exactly constant: residual at rounding level.
  ProjectiveReport id = projective_consistency({{{1, 0}, {0, 1}}}, {1, 0.5},
                                               cfg_on(0, 2));
  CHECK(!id.truncated);
  CHECK(id.residual <= 1e-8);

  // A = ((0,1),(1,0)) from (1,0): X = (cosh t, sinh t), x1 = tanh t.
  ProjectiveReport th = projective_consistency({{{0, 1}, {1, 0}}}, {1, 0},
                                               cfg_on(0, 2));
  CHECK(!th.truncated);
  CHECK(th.residual <= 1e-6);
  CHECK(th.t_last == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("projective consistency: generic matrix and truncation at X0 = 0") {
  ProjectiveReport rep = projective_consistency({{{0.3, -0.7}, {1.2, -0.4}}},
                                                {1, 0.2}, cfg_on(0, 1.5));
  CHECK(!rep.truncated);
  CHECK(rep.residual <= 1e-6);

  // Rotation from (1, 0): X0 = cos t vanishes at pi/2.
  ProjectiveReport rot = projective_consistency({{{0, -1}, {1, 0}}}, {1, 0},
                                                cfg_on(0, 3));
  CHECK(rot.truncated);
  CHECK(rot.t_last < 3.141592653589793 / 2);
  CHECK(rot.t_last > 1.4);
}

TEST_CASE("chazy layer: valid quartics produce the matched coefficient pair") {
  using P = UniPoly<Rational>;
  // u = t^4: a = -2/t, b = 3/t^2.
  ChazyInstance q = chazy_instance(P::monomial(Rational(1), 4));
  CHECK(q.a.eval(Rational(3)) == Rational(-2, 3));
  CHECK(q.b.eval(Rational(2)) == Rational(3, 4));
  CHECK(q.a.str("t") == "(-2)/(t)");

  // u = 1: the free equation.
  ChazyInstance c = chazy_instance(P::one());
  CHECK(c.a.is_zero());
  CHECK(c.b.is_zero());

  // u = t^3 satisfies the constraint as well: a = -3/(2t).
  ChazyInstance cub = chazy_instance(P::monomial(Rational(1), 3));
  CHECK(cub.a.eval(Rational(2)) == Rational(-3, 4));

  // Translation invariance: u = (t - 5)^4.
  P shifted = (P::variable() - P::constant(Rational(5))).pow(4);
  ChazyInstance sh = chazy_instance(shifted);
  CHECK(sh.a.eval(Rational(6)) == Rational(-2));
}

TEST_CASE("chazy layer: constraint violations carry the exact residual") {
  using P = UniPoly<Rational>;
  try {
    chazy_instance(P::monomial(Rational(1), 4) + P::one());  // t^4 + 1
    FAIL("expected ConstraintViolated");
  } catch (const ConstraintViolated& e) {
    CHECK(e.residual == "24");
  }
  try {
    chazy_instance(P::monomial(Rational(1), 2));  // t^2
    FAIL("expected ConstraintViolated");
  } catch (const ConstraintViolated& e) {
    CHECK(e.residual == "2");
  }
  CHECK_THROWS_AS(chazy_instance(P::zero()), DomainError);
  CHECK_THROWS_AS(chazy_instance(P::monomial(Rational(1), 5)), DomainError);
}

TEST_CASE("chazy layer: a = -u'/2u satisfies the third-order equation exactly") {
  using P = UniPoly<Rational>;
  for (const P& u : {P::monomial(Rational(1), 4), P::monomial(Rational(1), 3),
                     (P::variable() - P::constant(Rational(5))).pow(4)}) {
    ChazyInstance inst = chazy_instance(u);
    for (int k = 1; k <= 20; ++k) {
      Rational t(2 * k + 11, 7);  // rational points clear of the pole at the root
      CHECK(chazy_residual(inst, t) == Rational(0));
    }
  }

  // The identity is sharp: perturbing one coefficient of the equation breaks it.
  ChazyInstance inst = chazy_instance(P::monomial(Rational(1), 4));
  using RF = RatFun<Rational>;
  RF a = inst.a, a1 = a.derivative(), a2 = a1.derivative(), a3 = a2.derivative();
  auto cst = [](long v) { return RF::constant(Rational(v)); };
  RF corrupted = a3 - (cst(6) * a2 * a + cst(8) * a1 * a1 - cst(16) * a1 * a * a +
                       cst(4) * a.pow(4));
  CHECK(corrupted.eval(Rational(1)) != Rational(0));
}

TEST_CASE("derivative matching: free pair recovers the closed-form solution") {
  // a = b = 0, M = 2 from (x, x') = (0, 2) at t0 = 0: x'' = 1/x' * (M - 0),
  // K = -1, and x(t) = (4/3)((t+1)^{3/2} - 1) solves x''x' = 1.
  ContDerivMatchPair pair;  // both coefficients zero
  DerivMatchResult res = deriv_match_solve(pair, 2.0, 0.0, 2.0, cfg_on(0, 2));
  CHECK(res.K == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(res.drift <= 1e-6);
  REQUIRE(!res.traj.blew_up);
  double x2 = res.traj.states.back()[0];
  CHECK(x2 == doctest::Approx(4.0 / 3 * (std::pow(3.0, 1.5) - 1)).epsilon(1e-8));
}

TEST_CASE("derivative matching: chazy pair stays on the conserved surface") {
  using P = UniPoly<Rational>;
  ChazyInstance inst = chazy_instance(P::monomial(Rational(1), 4));
  ContDerivMatchPair pair{inst.a, inst.b};  // a = -2/t, b = 3/t^2

  DerivMatchResult res = deriv_match_solve(pair, 1.0, 1.0, 1.0, cfg_on(1, 2));
  CHECK(res.K == doctest::Approx(5.0 / 6).epsilon(1e-12));
  CHECK(res.drift <= 1e-6);
  REQUIRE(!res.traj.blew_up);

  // Corrupting b detaches the linear flow from the conserved form.
  ContDerivMatchPair bad{inst.a,
                         RatFun<Rational>(P::one(), P::monomial(Rational(1), 2))};
  DerivMatchResult broken = deriv_match_solve(bad, 1.0, 1.0, 1.0, cfg_on(1, 2));
  CHECK(broken.drift > 1.0);
}

TEST_CASE("derivative matching: domain guards") {
  using P = UniPoly<Rational>;
  ChazyInstance inst = chazy_instance(P::monomial(Rational(1), 4));
  ContDerivMatchPair pair{inst.a, inst.b};

  // x'(t0) = 0 makes the nonlinear form unsolvable for x''.
  CHECK_THROWS_AS(deriv_match_solve(pair, 1.0, 1.0, 0.0, cfg_on(1, 2)), DomainError);
  // The pole of a at t = 0 sits within the margin of [0.05, 1].
  CHECK_THROWS_AS(deriv_match_solve(pair, 1.0, 1.0, 1.0, cfg_on(0.05, 1)),
                  DomainError);
  // Free pair from (0, 2) has K = -1, inside [-2, 0].
  ContDerivMatchPair free_pair;
  CHECK_THROWS_AS(deriv_match_solve(free_pair, 2.0, 0.0, 2.0, cfg_on(0, -2)),
                  DomainError);
}
