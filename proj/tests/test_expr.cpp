#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "lintegra/expr.hpp"
#include "lintegra/laurent.hpp"
#include "lintegra/primefield.hpp"
#include "lintegra/ratfun.hpp"
#include "lintegra/rational.hpp"

using namespace lintegra;

namespace {

const std::set<std::string> kVars = {"x", "xp", "n", "a", "b", "y", "t"};

Rational eval_q(const ExprPtr& e, const std::map<std::string, Rational>& env) {
  return eval_expr<Rational>(e, env, Rational(0));
}

}  // namespace

TEST_CASE("expression parsing and evaluation") {
  auto e = parse_expr("(2*n+1)/3", kVars);
  CHECK(eval_q(e, {{"n", Rational(1)}}) == Rational(1));
  CHECK(eval_q(e, {{"n", Rational(4)}}) == Rational(3));

  auto f = parse_expr("x^2/xp", kVars);
  auto syms = free_symbols(f);
  CHECK(syms == std::set<std::string>{"x", "xp"});
  CHECK(eval_q(f, {{"x", Rational(3)}, {"xp", Rational(2)}}) == Rational(9, 2));

  auto g = parse_expr("a + b/y", kVars);
  CHECK(eval_q(g, {{"a", Rational(1)}, {"b", Rational(2)}, {"y", Rational(4)}}) ==
        Rational(3, 2));

  CHECK(eval_q(parse_expr("-n^2", kVars), {{"n", Rational(3)}}) == Rational(-9));
  CHECK(eval_q(parse_expr("(2^3)^2", kVars), {}) == Rational(64));
  CHECK_THROWS_AS(parse_expr("2^3^1", kVars), ParseError);  // no chained ^
}

TEST_CASE("parse errors carry offsets and symbol names") {
  try {
    parse_expr("x++1", kVars);
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.offset == 2);
  }

  try {
    parse_expr("x + foo*2", kVars);
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(std::string(err.what()).find("foo") != std::string::npos);
    CHECK(err.offset == 4);
  }

  CHECK_THROWS_AS(parse_expr("", kVars), ParseError);
  CHECK_THROWS_AS(parse_expr("(x+1", kVars), ParseError);
  CHECK_THROWS_AS(parse_expr("x^n", kVars), ParseError);   // exponent must be a literal
  CHECK_THROWS_AS(parse_expr("x^-2", kVars), ParseError);
  CHECK_THROWS_AS(parse_expr("x 2", kVars), ParseError);   // trailing input
}

TEST_CASE("print then reparse preserves structure") {
  std::vector<std::string> corpus = {
      "(2*n+1)/3",
      "x^2/xp",
      "a + b/y",
      "-(x+1)*(x-1)",
      "1/(n*(n+2))",
      "x*(xp - 2)^3",
      "(a-b)/(a+b)",
      "n^2 - 2*n + 1",
      "-x^4",
      "2 - (3 - n)",
  };
  for (const auto& text : corpus) {
    auto e = parse_expr(text, kVars);
    auto round = parse_expr(expr_str(e), kVars);
    CHECK_MESSAGE(expr_equal(e, round), text, " -> ", expr_str(e));
  }
}

TEST_CASE("rational and prime-field evaluation agree on integer inputs") {
  std::vector<std::string> corpus = {
      "(2*n+1)/3", "x^2/xp", "a + b/y", "n^2 - 2*n + 1", "x*(xp-2)^3 + 7",
  };
  RandomRationalGen gen(101);
  int checked = 0;
  for (int trial = 0; checked < 100; ++trial) {
    REQUIRE(trial < 1000);
    const auto& text = corpus[trial % corpus.size()];
    auto e = parse_expr(text, kVars);
    std::map<std::string, Rational> qenv;
    std::map<std::string, FpDefault> penv;
    for (const auto& s : free_symbols(e)) {
      long v = static_cast<long>(gen.next_index(19)) - 9;
      qenv[s] = Rational(v);
      penv[s] = FpDefault(v);
    }
    Rational qv;
    try {
      qv = eval_q(e, qenv);
    } catch (const DomainError&) {
      continue;  // division by zero in this sample
    }
    CHECK(eval_expr<FpDefault>(e, penv, FpDefault(0)) == FpDefault::from_rational(qv));
    ++checked;
  }
}

TEST_CASE("expressions evaluate over series and rational-function rings") {
  auto inv = parse_expr("1/(x)", kVars);
  auto series =
      eval_expr<LaurentSeries>(inv, {{"x", LaurentSeries::epsilon()}}, LaurentSeries::epsilon());
  CHECK(series.lead() == -1);
  CHECK(series.coeff(-1) == Rational(1));

  auto e = parse_expr("(x+1)/(x-1)", kVars);
  using QFun = RatFun<Rational>;
  auto f = eval_expr<QFun>(e, {{"x", QFun::variable()}}, QFun());
  CHECK(f.num().degree() == 1);
  CHECK(f.den().degree() == 1);
  CHECK(f.eval(Rational(3)) == Rational(2));

  CHECK_THROWS_AS(eval_q(parse_expr("1/(n-1)", kVars), {{"n", Rational(1)}}), DomainError);
  CHECK_THROWS_AS(eval_q(parse_expr("x+y", kVars), {{"x", Rational(1)}}), DomainError);
}

TEST_CASE("substitution and index shifts") {
  auto e = parse_expr("n^2 + x", kVars);
  auto shifted = shift_n(e, 2);
  CHECK(eval_q(shifted, {{"n", Rational(1)}, {"x", Rational(0)}}) == Rational(9));
  auto back = shift_n(shifted, -2);
  CHECK(eval_q(back, {{"n", Rational(5)}, {"x", Rational(1)}}) == Rational(26));

  auto sub = expr_subst(e, "x", parse_expr("2*n", kVars));
  CHECK(eval_q(sub, {{"n", Rational(3)}}) == Rational(15));
  CHECK(free_symbols(sub) == std::set<std::string>{"n"});
}

TEST_CASE("symbolic differentiation") {
  auto d1 = expr_diff(parse_expr("t^2", kVars), "t");
  CHECK(eval_q(d1, {{"t", Rational(5)}}) == Rational(10));

  auto d2 = expr_diff(parse_expr("a/t", kVars), "t");  // -a/t^2
  CHECK(eval_q(d2, {{"a", Rational(4)}, {"t", Rational(2)}}) == Rational(-1));

  auto d3 = expr_diff(parse_expr("(t+1)*(t-1)", kVars), "t");  // 2t
  CHECK(eval_q(d3, {{"t", Rational(7)}}) == Rational(14));

  auto d4 = expr_diff(parse_expr("a^2 - a", kVars), "a");
  CHECK(eval_q(d4, {{"a", Rational(3)}}) == Rational(5));

  CHECK(eval_q(expr_diff(parse_expr("n", kVars), "t"), {{"n", Rational(9)}}) == Rational(0));
}
