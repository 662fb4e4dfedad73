#include "doctest.h"

#include "lintegra/confinement.hpp"
#include "lintegra/spec.hpp"

using namespace lintegra;

namespace {

SpecFile parse(const std::string& text) { return parse_specfile(text); }

const char* kInverseMap =
    "[mapping]\n"
    "name = toy\n"
    "type = three-point\n"
    "update = alpha + beta/x + 1/(x*xp)\n"
    "\n"
    "[coefficients]\n"
    "alpha = 2\n"
    "beta = 1\n";

ProbeConfig probe_cfg(int T = 12, int n_max = 16, std::uint64_t seed = 1) {
  ProbeConfig cfg;
  cfg.T = T;
  cfg.n_max = n_max;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("site detection: denominator and variation roots, stable only") {
  SpecFile inv = parse(kInverseMap);
  auto sites = find_singular_sites(inv);
  // x = 0 (denominator and variation) plus the point at infinity.
  REQUIRE(sites.size() == 2);
  CHECK(sites[0].variable == "x");
  CHECK(sites[0].value == Rational(0));
  CHECK_FALSE(sites[0].user_supplied);
  CHECK_FALSE(sites[1].value.has_value());

  // (x^2 - 4)/xp: the image forgets xp exactly at x = +-2.
  SpecFile quad = parse(
      "[mapping]\nname = q\ntype = three-point\nupdate = (x^2 - 4)/xp\n");
  auto qs = find_singular_sites(quad);
  REQUIRE(qs.size() == 3);
  CHECK(qs[0].value == Rational(-2));
  CHECK(qs[1].value == Rational(2));
  CHECK_FALSE(qs[2].value.has_value());

  // Generic quadratic map: every finite root moves with the specialization.
  SpecFile gen = parse(
      "[mapping]\nname = g\ntype = three-point\n"
      "update = (x^2 + a*xp + b)/(xp^2 + c*x + d)\n"
      "\n[coefficients]\na = random\nb = random\nc = random\nd = random\n");
  auto gsites = find_singular_sites(gen);
  REQUIRE(gsites.size() == 1);
  CHECK_FALSE(gsites[0].value.has_value());
}

TEST_CASE("site detection: cascade stage roots keep only specialization-stable ones") {
  SpecFile casc = parse(
      "[mapping]\nname = c\ntype = cascade\n"
      "y = (2*y + 1)/(3*y + 4)\n"
      "x = (y*x + 2*x + y + 5)/(x + y + 7)\n");
  auto sites = find_singular_sites(casc);
  REQUIRE(sites.size() == 1);
  CHECK(sites[0].variable == "y");
  CHECK(sites[0].value == Rational(-4, 3));
}

TEST_CASE("site overrides from the probe section") {
  SpecFile quad = parse(
      "[mapping]\nname = q\ntype = three-point\nupdate = (x^2 - 4)/xp\n"
      "\n[probe]\nsites = 2, -2, inf\n");
  auto sites = find_singular_sites(quad);
  REQUIRE(sites.size() == 3);
  CHECK(sites[0].value == Rational(2));
  CHECK(sites[0].user_supplied);
  CHECK(sites[1].value == Rational(-2));
  CHECK_FALSE(sites[2].value.has_value());
}

TEST_CASE("probe: pole site recovers in one step with witness-dependent limit") {
  SpecFile inv = parse(kInverseMap);
  SingularSite zero{"x", Rational(0), false};

  ConfinementReport rep = probe_confinement(inv, zero, probe_cfg());
  CHECK(rep.status == ConfineStatus::Confined);
  CHECK(rep.step == 1);
  CHECK(rep.status_str() == "ConfinedAt(1)");
  REQUIRE(rep.leads.size() == 2);
  CHECK(rep.leads[0] == -1);
  CHECK(rep.leads[1] == 0);
  CHECK_FALSE(rep.witness_waived);
  CHECK(rep.witnesses_used.first != rep.witnesses_used.second);

  // Verdict is stable under the witness pair and the window.
  ProbeConfig alt = probe_cfg(20);
  alt.witnesses = {{Rational(3), Rational(5)}};
  ConfinementReport rep2 = probe_confinement(inv, zero, alt);
  CHECK(rep2.status == ConfineStatus::Confined);
  CHECK(rep2.step == 1);
  ProbeConfig alt2 = probe_cfg();
  alt2.witnesses = {{Rational(-2), Rational(7)}};
  CHECK(probe_confinement(inv, zero, alt2).step == 1);
}

TEST_CASE("probe: infinity site of the inverse map never recovers the witness") {
  SpecFile inv = parse(kInverseMap);
  SingularSite at_inf{"x", std::nullopt, false};
  ConfinementReport rep = probe_confinement(inv, at_inf, probe_cfg());
  CHECK(rep.status == ConfineStatus::NotConfined);
  CHECK(rep.step == 16);
  CHECK(rep.status_str() == "NotConfinedWithin(16)");
  REQUIRE(rep.leads.size() == 17);
  // The image is finite immediately, but its limit carries no memory of the
  // free datum at any later step either.
  CHECK(rep.leads[0] == 0);
  CHECK(rep.leads[1] == 0);
}

TEST_CASE("probe: two-step recovery of the symmetric quadratic map") {
  SpecFile quad = parse(
      "[mapping]\nname = q\ntype = three-point\nupdate = (x^2 - 4)/xp\n");
  for (long s : {2L, -2L}) {
    SingularSite site{"x", Rational(s), false};
    ConfinementReport rep = probe_confinement(quad, site, probe_cfg());
    CHECK(rep.status == ConfineStatus::Confined);
    CHECK(rep.step == 2);
    REQUIRE(rep.leads.size() == 3);
    CHECK(rep.leads[0] == 1);
    CHECK(rep.leads[1] == 0);
    CHECK(rep.leads[2] == 0);
  }
}

TEST_CASE("probe: degenerate quadratic map keeps climbing instead of recovering") {
  SpecFile quad = parse(
      "[mapping]\nname = q0\ntype = three-point\nupdate = x^2/xp\n");
  SingularSite zero{"x", Rational(0), false};
  ConfinementReport rep = probe_confinement(quad, zero, probe_cfg());
  CHECK(rep.status == ConfineStatus::NotConfined);
  CHECK(rep.step == 16);
  REQUIRE(rep.leads.size() == 17);
  for (int k = 0; k <= 16; ++k) CHECK(rep.leads[static_cast<size_t>(k)] == k + 2);
}

TEST_CASE("probe: cascade pole stays unconfined because the driving stage is autonomous") {
  SpecFile casc = parse(
      "[mapping]\nname = c\ntype = cascade\n"
      "y = (2*y + 1)/(3*y + 4)\n"
      "x = (y*x + 2*x + y + 5)/(x + y + 7)\n");
  SingularSite site{"y", Rational(-4, 3), false};
  ConfinementReport rep = probe_confinement(casc, site, probe_cfg());
  CHECK(rep.status == ConfineStatus::NotConfined);
  CHECK(rep.step == 16);
  CHECK(rep.leads[0] == -1);
  CHECK(rep.leads[1] == 0);
  CHECK_FALSE(rep.witness_waived);
}

TEST_CASE("probe: single-stage cascade is waived and confirms on finiteness alone") {
  SpecFile casc = parse(
      "[mapping]\nname = m\ntype = cascade\ny = (2*y + 1)/(3*y + 4)\n");
  SingularSite site{"y", Rational(-4, 3), false};
  ConfinementReport rep = probe_confinement(casc, site, probe_cfg());
  CHECK(rep.status == ConfineStatus::Confined);
  CHECK(rep.step == 1);
  CHECK(rep.witness_waived);
  CHECK(rep.leads[0] == -1);
}

TEST_CASE("probe: window exhaustion is reported, not silently misread") {
  // Algebraically the identity map; the series quotient needs coefficients
  // past any finite window once the two states agree through it.
  SpecFile ident = parse(
      "[mapping]\nname = id\ntype = three-point\n"
      "update = (x^2 - xp^2)/(x - xp) - xp\n");
  SingularSite site{"x", Rational(1), true};
  ConfinementReport rep = probe_confinement(ident, site, probe_cfg(8, 10));
  CHECK(rep.status == ConfineStatus::PrecisionLoss);
  CHECK(rep.step == 1);
  CHECK(rep.status_str() == "PrecisionExhausted(1)");
}

TEST_CASE("probe rejects equal witnesses and foreign variables") {
  SpecFile inv = parse(kInverseMap);
  SingularSite zero{"x", Rational(0), false};
  ProbeConfig cfg = probe_cfg();
  cfg.witnesses = {{Rational(3), Rational(3)}};
  CHECK_THROWS_AS(probe_confinement(inv, zero, cfg), DomainError);
  SingularSite foreign{"y", Rational(0), false};
  CHECK_THROWS_AS(probe_confinement(inv, foreign, probe_cfg()), DomainError);

  SpecFile proj = parse(
      "[mapping]\nname = p\ntype = projective\n"
      "matrix = 0, 1; 1, 1\n");
  CHECK_THROWS_AS(find_singular_sites(proj), DomainError);
  CHECK_THROWS_AS(probe_confinement(proj, zero, probe_cfg()), DomainError);
}
