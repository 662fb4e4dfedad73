#include "doctest.h"

#include "lintegra/derivmatch.hpp"
#include "lintegra/expr.hpp"

using namespace lintegra;

namespace {

CoeffSeq seq_n_plus_1() { return CoeffSeq::closed(parse_expr("n + 1", {"n"})); }

std::pair<QuadFormSpec, LinThreePoint> unit_pair() {
  return build_g_example(CoeffSeq::constant(Rational(1)), Rational(0));
}

}  // namespace

TEST_CASE("quadratic slot validation accepts the admissible set only") {
  std::map<std::string, CoeffSeq> coeffs{
      {"xm*xb", CoeffSeq::constant(Rational(1, 4))},
      {"x^2", CoeffSeq::constant(Rational(-1, 4))},
  };
  QuadFormSpec f = validate_quadform(coeffs, Rational(0));
  CHECK(eval_quadform(f, Rational(1), Rational(2), Rational(4), 0) == Rational(0));
  CHECK(eval_quadform(f, Rational(1), Rational(2), Rational(4), 7) == Rational(0));
  CHECK(eval_quadform(f, Rational(1), Rational(3), Rational(4), 0) == Rational(-5, 4));

  coeffs["xb^2"] = CoeffSeq::constant(Rational(1));
  CHECK_THROWS_AS(validate_quadform(coeffs, Rational(0)), DomainError);
  coeffs.erase("xb^2");
  coeffs["x^3"] = CoeffSeq::constant(Rational(1));
  CHECK_THROWS_AS(validate_quadform(coeffs, Rational(0)), DomainError);
}

TEST_CASE("constant g reduces to the quarter difference form") {
  auto [f, lin] = unit_pair();
  // f = xm xb / 4 - x^2 / 4, so the slot route must agree everywhere.
  for (long n : {0L, 1L, 5L}) {
    CHECK(eval_quadform(f, Rational(1), Rational(2), Rational(4), n) == Rational(0));
    CHECK(eval_quadform(f, Rational(3), Rational(1), Rational(5), n) == Rational(14, 4));
  }
  CHECK(f.xmxb.at(2) == Rational(1, 4));
  CHECK(f.x2.at(2) == Rational(-1, 4));
  CHECK(f.xxb.at(2) == Rational(0));
  CHECK(f.one.at(2) == Rational(0));

  // Linear pair (2, -4, 2) / (2, 4, 2).
  CHECK(lin.alpha.at(0) == Rational(2));
  CHECK(lin.beta.at(0) == Rational(-4));
  CHECK(lin.gamma.at(0) == Rational(2));
  CHECK(lin.eps.at(0) == Rational(2));
  CHECK(lin.zeta.at(0) == Rational(4));
  CHECK(lin.eta.at(0) == Rational(2));
  validate_linform(lin);
}

TEST_CASE("one nonlinear step: solve, degenerate input, fixed ratio") {
  auto [f, lin] = unit_pair();
  CHECK(solve_next(f, Rational(0), Rational(1), Rational(2), 0) == Rational(4));
  CHECK(solve_next(f, Rational(3), Rational(1), Rational(2), 0) == Rational(16));
  CHECK_THROWS_AS(solve_next(f, Rational(0), Rational(0), Rational(2), 5), SingularStep);
  try {
    solve_next(f, Rational(0), Rational(0), Rational(2), 5);
  } catch (const SingularStep& e) {
    CHECK(e.step == 5);
  }

  CHECK(compute_K(lin, Rational(1), Rational(2), Rational(4), 0) == Rational(1, 9));
  CHECK(compute_K(lin, Rational(1), Rational(2), Rational(4), 9) == Rational(1, 9));
  // Numerator-zero triple gives K = 0 exactly.
  CHECK(compute_K(lin, Rational(1), Rational(1), Rational(1), 0) == Rational(0));
  // Denominator-zero triple is rejected.
  CHECK_THROWS_AS(compute_K(lin, Rational(1), Rational(0), Rational(-1), 0), DomainError);
}

TEST_CASE("fixed K drives the geometric orbit and conserves M = 0 exactly") {
  auto [f, lin] = unit_pair();
  Orbit orbit = propagate_linear(lin, Rational(1, 9), Rational(1), Rational(2), 12);
  const auto& v = orbit.of("x");
  REQUIRE(v.size() == 13);
  Rational expect(1);
  for (size_t k = 0; k < v.size(); ++k) {
    REQUIRE(v[k].has_value());
    CHECK(*v[k] == expect);
    expect *= Rational(2);
  }

  ConservationReport rep = verify_conservation(f, orbit);
  CHECK(rep.all_equal);
  REQUIRE(rep.distinct.size() == 1);
  CHECK(rep.distinct[0] == Rational(0));
  CHECK(rep.max_deviation == Rational(0));

  // K recomputed from every consecutive triple is the same rational.
  for (size_t k = 1; k + 1 < v.size(); ++k)
    CHECK(compute_K(lin, *v[k - 1], *v[k], *v[k + 1], static_cast<long>(k)) ==
          Rational(1, 9));

  // Altering the final entry breaks exactly one triple.
  Orbit bad = orbit;
  bad.values[0][12] = Rational(4097);
  ConservationReport brep = verify_conservation(f, bad);
  CHECK_FALSE(brep.all_equal);
  CHECK(brep.distinct.size() == 2);
  CHECK(brep.max_deviation > Rational(0));
}

TEST_CASE("step dependent g: shifted combinations and printed coefficients") {
  GExample gx = make_g_example(seq_n_plus_1(), Rational(2));
  CHECK(gx.z.at(3) == Rational(8));      // 2n + 2
  CHECK(gx.zeta.at(3) == Rational(9));   // 2n + 3
  CHECK(gx.zbar.at(3) == Rational(10));  // 2n + 4
  CHECK(gx.A.at(1) == Rational(16));     // (n+1)^2 (2n+2)
  CHECK(gx.Abar.at(1) == Rational(54));
  CHECK(gx.B.at(1) == Rational(-50));

  // g = n makes z vanish at n = 0 and g itself vanish there.
  GExample zero = make_g_example(CoeffSeq::closed(parse_expr("n", {"n"})), Rational(0));
  CHECK_THROWS_AS(zero.z.at(0), DomainError);
  CHECK_THROWS_AS(zero.A.at(0), DomainError);
  CHECK(zero.z.at(2) == Rational(4));
}

TEST_CASE("consistency oracle passes for both worked instances") {
  {
    auto [f, lin] = unit_pair();
    OracleReport rep = consistency_oracle(f, lin, 0, 20, 11);
    CHECK(rep.pass);
    CHECK(rep.samples == 20);
    CHECK_FALSE(rep.counterexample.has_value());
  }
  {
    auto [f, lin] = build_g_example(seq_n_plus_1(), Rational(2));
    for (long n : {1L, 3L}) {
      OracleReport rep = consistency_oracle(f, lin, n, 20, 11);
      CHECK(rep.pass);
      CHECK(rep.samples == 20);
    }
  }
}

TEST_CASE("consistency oracle exposes a corrupted linear coefficient") {
  auto [f, lin] = build_g_example(seq_n_plus_1(), Rational(2));
  LinThreePoint bad = lin;
  bad.beta = CoeffSeq::fn([b = lin.beta](long n) { return b.at(n) + Rational(1); },
                          "corrupted");
  OracleReport rep = consistency_oracle(f, bad, 2, 20, 11);
  CHECK_FALSE(rep.pass);
  REQUIRE(rep.counterexample.has_value());
  CHECK((*rep.counterexample)[3] != (*rep.counterexample)[4]);
}

TEST_CASE("a step fixed from one nonlinear solve conserves M downstream") {
  auto [f, lin] = build_g_example(seq_n_plus_1(), Rational(2));
  f.M = Rational(5);
  Rational x0(1), x1(2);
  Rational x2 = solve_next(f, f.M, x0, x1, 1);
  Rational K = compute_K(lin, x0, x1, x2, 1);
  Orbit orbit = propagate_linear(lin, K, x0, x1, 30);
  const auto& v = orbit.of("x");
  REQUIRE(v.size() == 31);
  CHECK(*v[2] == x2);

  ConservationReport rep = verify_conservation(f, orbit);
  CHECK(rep.all_equal);
  REQUIRE(rep.distinct.size() == 1);
  CHECK(rep.distinct[0] == Rational(5));
  CHECK(rep.max_deviation == Rational(0));

  for (size_t k = 1; k + 1 < v.size(); ++k)
    CHECK(compute_K(lin, *v[k - 1], *v[k], *v[k + 1], static_cast<long>(k)) == K);
}

TEST_CASE("common scaling of the linear coefficients changes nothing") {
  auto [f, lin] = build_g_example(seq_n_plus_1(), Rational(2));
  auto scale = [](const CoeffSeq& s) {
    return CoeffSeq::fn(
        [s](long n) { return s.at(n) * Rational(n + 2, 3); }, "scaled");
  };
  LinThreePoint sc = lin;
  sc.alpha = scale(lin.alpha);
  sc.beta = scale(lin.beta);
  sc.gamma = scale(lin.gamma);
  sc.delta = scale(lin.delta);
  sc.eps = scale(lin.eps);
  sc.zeta = scale(lin.zeta);
  sc.eta = scale(lin.eta);
  sc.theta = scale(lin.theta);

  RandomRationalGen gen(4);
  for (long n : {0L, 1L, 4L}) {
    Rational xm = gen.next(), x = gen.next(), xb = gen.next();
    CHECK(compute_K(lin, xm, x, xb, n) == compute_K(sc, xm, x, xb, n));
  }
  Rational K = compute_K(lin, Rational(1), Rational(2), Rational(3), 1);
  Orbit a = propagate_linear(lin, K, Rational(1), Rational(2), 15);
  Orbit b = propagate_linear(sc, K, Rational(1), Rational(2), 15);
  for (size_t k = 0; k < a.of("x").size(); ++k) CHECK(a.of("x")[k] == b.of("x")[k]);
}

TEST_CASE("proportional numerator and denominator are rejected") {
  LinThreePoint lin;
  lin.alpha = CoeffSeq::constant(Rational(1));
  lin.beta = CoeffSeq::constant(Rational(2));
  lin.gamma = CoeffSeq::constant(Rational(3));
  lin.delta = CoeffSeq::constant(Rational(4));
  lin.eps = CoeffSeq::constant(Rational(2));
  lin.zeta = CoeffSeq::constant(Rational(4));
  lin.eta = CoeffSeq::constant(Rational(6));
  lin.theta = CoeffSeq::constant(Rational(8));
  CHECK_THROWS_AS(validate_linform(lin), DomainError);
}
