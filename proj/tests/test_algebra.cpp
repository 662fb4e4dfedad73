#include <doctest.h>

#include <gmpxx.h>

#include "lintegra/homogpair.hpp"
#include "lintegra/laurent.hpp"
#include "lintegra/polyroots.hpp"
#include "lintegra/primefield.hpp"
#include "lintegra/ratfun.hpp"
#include "lintegra/rational.hpp"
#include "lintegra/sparsepoly.hpp"
#include "lintegra/unipoly.hpp"

using namespace lintegra;

namespace {

using QPoly = UniPoly<Rational>;
using QFun = RatFun<Rational>;

QPoly qpoly(std::initializer_list<long> cs) {
  std::vector<Rational> v;
  for (long c : cs) v.emplace_back(c);
  return QPoly(v);
}

QPoly random_poly(RandomRationalGen& gen, int deg) {
  std::vector<Rational> v;
  for (int i = 0; i < deg; ++i) v.push_back(gen.next());
  v.push_back(gen.next());  // nonzero leading coefficient
  return QPoly(v);
}

}  // namespace

TEST_CASE("rational canonical forms and parsing") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-2, -4) == Rational(1, 2));
  CHECK(Rational(2, -4) == Rational(-1, 2));
  CHECK(Rational(0, 7).str() == "0");
  CHECK(Rational::from_string("3/4") == Rational(3, 4));
  CHECK(Rational::from_string("-6/8") == Rational(-3, 4));
  CHECK(Rational::from_string("5") == Rational(5));
  CHECK(Rational(7, 3).str() == "7/3");
  CHECK_THROWS_AS(Rational::from_string("1/0"), DomainError);
  CHECK_THROWS_AS(Rational(1, 0), DomainError);
  CHECK_THROWS_AS(Rational(1) / Rational(0), DomainError);
}

TEST_CASE("rational arithmetic is exact for 256-bit samples") {
  gmp_randclass rng(gmp_randinit_default);
  rng.seed(20240817UL);
  for (int i = 0; i < 50; ++i) {
    Rational a(mpz_class(rng.get_z_bits(256)), mpz_class(rng.get_z_bits(128)) + 1);
    Rational b(mpz_class(rng.get_z_bits(256)), mpz_class(rng.get_z_bits(128)) + 1);
    CHECK((a + b) - b == a);
    if (!b.is_zero()) CHECK((a * b) / b == a);
  }
}

TEST_CASE("seeded rational generator is deterministic and in range") {
  RandomRationalGen g1(42), g2(42);
  for (int i = 0; i < 20; ++i) {
    Rational a = g1.next();
    CHECK(a == g2.next());
    CHECK(!a.is_zero());
    CHECK(a.num().get_si() >= -9);
    CHECK(a.num().get_si() <= 9);
    CHECK(a.den().get_si() <= 9);
  }
  RandomRationalGen g3(42);
  Rational avoid = g3.next();
  CHECK(g3.next_distinct_from(avoid) != avoid);
  for (int i = 0; i < 20; ++i) {
    Rational b = g3.next_bounded_half();
    CHECK(b.abs() <= Rational(1, 2));
  }
}

TEST_CASE("prime field arithmetic") {
  FpDefault a(7), b(-3);
  CHECK(b.value() == FpDefault::modulus() - 3);
  CHECK((a + b).value() == 4);
  CHECK((a * b) == FpDefault(-21));
  CHECK(a * a.inverse() == FpDefault(1));
  CHECK(FpDefault::from_rational(Rational(1, 2)) * FpDefault(2) == FpDefault(1));
  // denominator divisible by the modulus is an unlucky-prime event
  Rational bad(mpz_class(1), mpz_class(kPrimeDefault));
  CHECK_THROWS_AS(FpDefault::from_rational(bad), DomainError);
  CHECK(detail::is_prime_u64(kPrimeDefault));
  CHECK(detail::is_prime_u64(kPrimeAlt1));
  CHECK(detail::is_prime_u64(kPrimeAlt2));
}

TEST_CASE("unipoly canonical degree and division") {
  QPoly z;
  CHECK(z.degree() == kDegNegInf);
  CHECK(qpoly({1, 0, 0}).degree() == 0);
  QPoly a = qpoly({-1, 0, 1});  // s^2 - 1
  QPoly b = qpoly({-1, 1});     // s - 1
  auto [q, r] = QPoly::divmod(a, b);
  CHECK(q == qpoly({1, 1}));
  CHECK(r.is_zero());
  CHECK(a.eval(Rational(3)) == Rational(8));
  CHECK(a.derivative() == qpoly({0, 2}));

  RandomRationalGen gen(7);
  for (int i = 0; i < 10; ++i) {
    QPoly p = random_poly(gen, 5), d = random_poly(gen, 2);
    auto [qq, rr] = QPoly::divmod(p, d);
    CHECK(qq * d + rr == p);
    CHECK(rr.degree() < d.degree());
  }
}

TEST_CASE("modular gcd over rationals agrees with the Euclidean sequence") {
  RandomRationalGen gen(11);
  for (int i = 0; i < 12; ++i) {
    QPoly g = random_poly(gen, 3);
    QPoly a = random_poly(gen, 4) * g;
    QPoly b = random_poly(gen, 4) * g;
    QPoly via_mod = poly_gcd(a, b);
    QPoly via_euclid = poly_gcd_euclid(a, b);
    CHECK(via_mod == via_euclid);
    CHECK((a % via_mod).is_zero());
    CHECK((b % via_mod).is_zero());
    CHECK((via_mod % g.monic()).is_zero());
  }
  CHECK(poly_gcd(qpoly({-1, 0, 1}), qpoly({-1, 1})) == qpoly({-1, 1}));
  CHECK(poly_gcd(qpoly({1, 1}), qpoly({2, 0, 1})) == QPoly::one());
  CHECK(poly_gcd(QPoly::zero(), qpoly({2, 4})) == qpoly({1, 2}).monic());
}

TEST_CASE("rational root enumeration") {
  // (s - 1)(s + 2)(2s - 3)
  QPoly p = qpoly({-1, 1}) * qpoly({2, 1}) * qpoly({-3, 0, 0}).derivative();
  p = qpoly({-1, 1}) * qpoly({2, 1}) * qpoly({-3, 2});
  auto roots = rational_roots(p);
  REQUIRE(roots.size() == 3);
  CHECK(roots[0] == Rational(-2));
  CHECK(roots[1] == Rational(1));
  CHECK(roots[2] == Rational(3, 2));

  CHECK(rational_roots(qpoly({1, 0, 1})).empty());
  auto cubed = rational_roots(qpoly({0, 0, 0, 1}));
  REQUIRE(cubed.size() == 1);
  CHECK(cubed[0] == Rational(0));
  // fractional coefficients are cleared before enumeration
  QPoly frac({Rational(-1, 6), Rational(1, 3)});  // s/3 - 1/6 -> root 1/2
  auto fr = rational_roots(frac);
  REQUIRE(fr.size() == 1);
  CHECK(fr[0] == Rational(1, 2));
}

TEST_CASE("ratfun normalization examples") {
  QFun a(qpoly({-1, 0, 1}), qpoly({-1, 1}));
  CHECK(a.num() == qpoly({1, 1}));
  CHECK(a.den() == QPoly::one());

  QFun b(qpoly({0, 2}), qpoly({4}));
  CHECK(b.num() == QPoly({Rational(0), Rational(1, 2)}));
  CHECK(b.den() == QPoly::one());

  // a = -u'/2u with u = t^4
  QPoly u = QPoly::monomial(Rational(1), 4);
  QFun au(-u.derivative(), u.scaled(Rational(2)));
  CHECK(au.num() == QPoly::constant(Rational(-2)));
  CHECK(au.den() == QPoly::variable());

  CHECK_THROWS_AS(QFun(qpoly({1}), QPoly::zero()), DomainError);
}

TEST_CASE("ratfun normalization is idempotent and value-preserving") {
  RandomRationalGen gen(23);
  for (int trial = 0; trial < 5; ++trial) {
    QPoly n = random_poly(gen, 4), d = random_poly(gen, 3);
    QFun f(n, d);
    QFun again(f.num(), f.den());
    CHECK(again == f);
    int hits = 0;
    while (hits < 20) {
      Rational x = gen.next();
      if (d.eval(x).is_zero() || f.den().eval(x).is_zero()) continue;
      CHECK(f.eval(x) == n.eval(x) / d.eval(x));
      ++hits;
    }
  }
}

TEST_CASE("ratfun arithmetic") {
  QFun s = QFun::variable();
  CHECK(s * s.reciprocal() == QFun::constant(Rational(1)));
  QFun f = (s + QFun::constant(Rational(1))) / s;
  QFun g = f - QFun::constant(Rational(1));
  CHECK(g == s.reciprocal());
  CHECK(f.degree() == 1);
  // quotient-rule derivative: d/ds (1/s) = -1/s^2
  CHECK(s.reciprocal().derivative() ==
        QFun(QPoly::constant(Rational(-1)), QPoly::monomial(Rational(1), 2)));
  CHECK(f.pow(2) == f * f);
  CHECK_THROWS_AS(QFun().reciprocal(), DomainError);
  CHECK_THROWS_AS(s.reciprocal().eval(Rational(0)), DomainError);
}

TEST_CASE("homog_reduce examples") {
  SparsePoly q = SparsePoly::variable("q"), r = SparsePoly::variable("r");
  auto h1 = homog_reduce(q.pow(2) * r, q * r.pow(2));
  CHECK(h1.deg() == 1);
  CHECK(h1.N() == q);
  CHECK(h1.D() == r);

  auto h2 = homog_reduce(q.pow(2) - r.pow(2), q * r - r.pow(2));
  CHECK(h2.deg() == 1);
  CHECK(h2.N() == q + r);
  CHECK(h2.D() == r);

  CHECK_THROWS_AS(homog_reduce(q + r, r.pow(2)), DomainError);          // unequal degree
  CHECK_THROWS_AS(homog_reduce(q + SparsePoly::constant(Rational(1)), r), DomainError);
  CHECK_THROWS_AS(homog_reduce(q, SparsePoly::zero()), DomainError);
}

TEST_CASE("second iterate of the projective three-point map has degree 1") {
  for (std::uint64_t seed : {5ULL, 17ULL}) {
    RandomRationalGen gen(seed);
    QFun alpha = QFun::constant(gen.next());
    QFun beta = QFun::constant(gen.next());
    QFun w0 = QFun::constant(gen.next());  // x0 = p, degree 0
    QFun w1 = QFun::variable();            // x1 = q/r, degree 1
    QFun w2 = alpha + beta / w1 + (w1 * w0).reciprocal();
    CHECK(homog_from_ratio(w2).deg() == 1);
    QFun w3 = alpha + beta / w2 + (w2 * w1).reciprocal();
    CHECK(homog_from_ratio(w3).deg() == 1);
  }
}

TEST_CASE("laurent inversion examples") {
  auto eps = LaurentSeries::epsilon();
  auto inv_eps = eps.inverse();
  CHECK(inv_eps.lead() == -1);
  CHECK(inv_eps.coeff(-1) == Rational(1));

  auto one_plus = LaurentSeries::from_rational(Rational(1)) + eps;
  auto geo = one_plus.inverse();
  CHECK(geo.lead() == 0);
  for (int k = 0; k < 8; ++k) CHECK(geo.coeff(k) == Rational(k % 2 ? -1 : 1));

  auto s = LaurentSeries::from_terms(-1, {Rational(2), Rational(3)}, kExactHorizon);
  auto inv = s.inverse();
  CHECK(inv.lead() == 1);
  CHECK(inv.coeff(1) == Rational(1, 2));
  CHECK(inv.coeff(2) == Rational(-3, 4));
  CHECK(inv.coeff(3) == Rational(9, 8));
}

TEST_CASE("laurent product of a series with its inverse is 1") {
  RandomRationalGen gen(31);
  for (int trial = 0; trial < 6; ++trial) {
    int lead = static_cast<int>(gen.next_index(5)) - 2;
    std::vector<Rational> cs;
    cs.push_back(gen.next());
    for (int i = 0; i < 4; ++i) cs.push_back(gen.next_bounded_half());
    auto s = LaurentSeries::from_terms(lead, cs, kExactHorizon);
    auto p = s * s.inverse();
    CHECK(p.lead() == 0);
    CHECK(p.coeff(0) == Rational(1));
    for (int k = 1; k < p.horizon(); ++k) CHECK(p.coeff(k) == Rational(0));
  }
}

TEST_CASE("laurent horizons track reliability") {
  auto eps = LaurentSeries::epsilon();
  auto one = LaurentSeries::from_rational(Rational(1));
  auto geo = (one + eps).inverse();  // horizon 12
  CHECK(geo.horizon() == 12);
  CHECK_THROWS_AS(geo.coeff(12), PrecisionExhausted);

  auto diff = geo - geo;
  CHECK(!diff.is_zero());  // zero only to known precision
  CHECK(!diff.lead_known());
  CHECK_THROWS_AS(diff.lead(), PrecisionExhausted);
  CHECK(diff.coeff(5) == Rational(0));

  auto exact_zero = eps - eps;
  CHECK(exact_zero.is_zero());

  // multiplication horizon is min over (K_a + lead_b, K_b + lead_a)
  auto prod = geo * LaurentSeries::monomial(Rational(1), 3);
  CHECK(prod.lead() == 3);
  CHECK(prod.horizon() == 15);

  // division by an unknown-lead series cannot proceed
  CHECK_THROWS_AS(one / diff, PrecisionExhausted);
  CHECK_THROWS_AS(one / LaurentSeries(), DomainError);

  // inversion loses 2*lead of horizon: K - 2L
  auto t = LaurentSeries::from_terms(2, {Rational(1), Rational(1)}, 8);
  CHECK(t.inverse().horizon() == 4);
  CHECK(t.inverse().lead() == -2);
}

TEST_CASE("sparse polynomials and fractions") {
  SparsePoly x = SparsePoly::variable("x"), y = SparsePoly::variable("y");
  SparsePoly p = x * y + y.pow(2).scaled(Rational(3));
  CHECK(p.degree("y") == 2);
  CHECK(p.degree("x") == 1);
  CHECK(p.total_degree() == 2);
  CHECK(p.subst("x", Rational(2)) == y.scaled(Rational(2)) + y.pow(2).scaled(Rational(3)));
  CHECK(p.eval({{"x", Rational(1)}, {"y", Rational(2)}}) == Rational(14));
  auto cs = p.coeffs_in("y");
  REQUIRE(cs.size() == 3);
  CHECK(cs[0].is_zero());
  CHECK(cs[1] == x);
  CHECK(cs[2] == SparsePoly::constant(Rational(3)));

  PolyFrac f = PolyFrac::variable("x") / PolyFrac::variable("y");
  PolyFrac g = f + PolyFrac::constant(Rational(1));
  CHECK(g.num() == x + y);
  CHECK(g.den() == y);
  // monomial content cancels without polynomial gcd
  PolyFrac h(x.pow(2) * y, x * y.pow(2));
  CHECK(h.num() == x);
  CHECK(h.den() == y);
  CHECK((f / f).is_one());
  CHECK_THROWS_AS(f / (f - f), DomainError);
}
