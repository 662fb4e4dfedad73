#include <doctest.h>

#include "lintegra/degree_growth.hpp"
#include "lintegra/errors.hpp"

using namespace lintegra;

namespace {

DegreeSequence seq_of(std::vector<int> d) {
  DegreeSequence s;
  s.degrees = std::move(d);
  return s;
}

const char* kProjectiveOrigin = R"(
[mapping]
name = origin
type = three-point
update = alpha + beta/x + 1/(x*xp)

[coefficients]
alpha = random
beta = random
)";

const char* kGambierPair = R"(
[mapping]
name = pair
type = cascade
y = (alpha*y + beta)/(gamma*y + delta)
x = (a*y*x + b*x + c*y + d)/(f*y*x + g*x + h*y + k)

[coefficients]
alpha = random
beta = random
gamma = random
delta = random
a = random
b = random
c = random
d = random
f = random
g = random
h = random
k = random
)";

}  // namespace

TEST_CASE("growth classification rules") {
  CHECK(classify_growth(seq_of({0, 1, 1, 1, 1, 1, 1, 1})).kind == GrowthKind::Constant);
  CHECK(classify_growth(seq_of({0, 1, 2, 3, 4, 5, 6, 7})).kind == GrowthKind::Linear);
  CHECK(classify_growth(seq_of({0, 1, 2, 4, 8, 16, 32, 64})).kind == GrowthKind::Exponential);
  // quadratic degrees: third differences vanish
  CHECK(classify_growth(seq_of({0, 1, 4, 9, 16, 25, 36, 49, 64, 81})).kind ==
        GrowthKind::Polynomial);
  CHECK(classify_growth(seq_of({0, 1, 4, 9, 16, 25, 36, 49, 64, 81})).order == 2);
  CHECK(classify_growth(seq_of({0, 1, 2, 3, 4})).kind == GrowthKind::Undetermined);
  // erratic: neither difference- nor ratio-test fires
  CHECK(classify_growth(seq_of({0, 1, 5, 2, 9, 3, 12, 4, 1})).kind ==
        GrowthKind::Undetermined);
  CHECK(growth_str(classify_growth(seq_of({0, 1, 2, 3, 4, 5, 6, 7}))) == "Linear");
}

TEST_CASE("three-point constant growth for the projective-origin mapping") {
  SpecFile spec = parse_specfile(kProjectiveOrigin);
  for (std::uint64_t seed : {3ULL, 11ULL}) {
    auto seq = degree_sequence(spec, 15, DegreeMode::Exact, seed);
    REQUIRE(seq.degrees.size() == 16);
    CHECK(seq.degrees[0] == 0);
    CHECK(seq.degrees[1] == 1);
    for (size_t i = 1; i < seq.degrees.size(); ++i) CHECK(seq.degrees[i] == 1);
    CHECK(classify_growth(seq).kind == GrowthKind::Constant);
  }
}

TEST_CASE("quadratic conserved map grows linearly") {
  SpecFile spec = parse_specfile(
      "[mapping]\ntype = three-point\nupdate = x^2/xp\n");
  auto seq = degree_sequence(spec, 12, DegreeMode::Exact, 5);
  for (size_t i = 0; i < seq.degrees.size(); ++i)
    CHECK(seq.degrees[i] == static_cast<int>(i));
  CHECK(classify_growth(seq).kind == GrowthKind::Linear);
}

TEST_CASE("generic quadratic three-point map grows exponentially") {
  SpecFile spec = parse_specfile(R"(
[mapping]
name = generic
type = three-point
update = (x^2 + a*xp + b)/(xp^2 + c*x + d)

[coefficients]
a = random
b = random
c = random
d = random
)");
  auto seq = degree_sequence(spec, 8, DegreeMode::Exact, 2);
  CHECK(classify_growth(seq).kind == GrowthKind::Exponential);
  auto modular = degree_sequence(spec, 12, DegreeMode::Modular, 2);
  CHECK(classify_growth(modular).kind == GrowthKind::Exponential);
  for (size_t i = 0; i < seq.degrees.size(); ++i)
    CHECK(modular.degrees[i] <= seq.degrees[i]);
}

TEST_CASE("gambier cascade growth is linear") {
  SpecFile spec = parse_specfile(kGambierPair);
  auto seq = degree_sequence(spec, 12, DegreeMode::Exact, 7);
  CHECK(seq.degrees[0] == 0);
  CHECK(seq.degrees[1] == 1);
  CHECK(classify_growth(seq).kind == GrowthKind::Linear);
}

TEST_CASE("projective systems keep constant degree") {
  SpecFile spec = parse_specfile(R"(
[mapping]
type = projective
matrix = 0, 1, 0; 0, 0, 1; 1, beta, alpha

[coefficients]
alpha = random
beta = random
)");
  auto seq = degree_sequence(spec, 12, DegreeMode::Exact, 4);
  for (int d : seq.degrees) CHECK(d == 1);
  CHECK(classify_growth(seq).kind == GrowthKind::Constant);
}

TEST_CASE("homographic map stays degree one") {
  SpecFile spec = parse_specfile(R"(
[mapping]
type = cascade
y = (a*y + b)/(c*y + d)

[coefficients]
a = random
b = random
c = random
d = random
)");
  auto seq = degree_sequence(spec, 12, DegreeMode::Exact, 9);
  for (int d : seq.degrees) CHECK(d == 1);
  CHECK(classify_growth(seq).kind == GrowthKind::Constant);
}

TEST_CASE("cross check agreement and modular bound") {
  SpecFile spec = parse_specfile(kProjectiveOrigin);
  auto cc = cross_check(spec, 12, 1);
  REQUIRE(cc.runs.size() == 6);
  CHECK(cc.flagged.empty());
  CHECK(cc.consensus == cc.runs[0].degrees);
  CHECK(cc.runs[2].prime == kPrimeDefault);
  CHECK(cc.runs[4].prime == kPrimeAlt1);

  SpecFile pair = parse_specfile(kGambierPair);
  auto cc2 = cross_check(pair, 10, 1);
  CHECK(cc2.flagged.empty());
  auto cls = classify_growth(cc2.runs[0]);
  CHECK(cls.kind == GrowthKind::Linear);
}

TEST_CASE("non-generic specialization is flagged by disagreement") {
  // alpha = 0 kills the x*xp term of the second iterate numerator in one run
  SpecFile generic = parse_specfile(kProjectiveOrigin);
  auto exact = degree_sequence(generic, 8, DegreeMode::Exact, 3);

  SpecFile tuned = parse_specfile(R"(
[mapping]
type = three-point
update = alpha + beta/x + 1/(x*xp)

[coefficients]
alpha = 0
beta = 0
)");
  auto degenerate = degree_sequence(tuned, 8, DegreeMode::Exact, 3);
  CHECK(degenerate.degrees != exact.degrees);
}

TEST_CASE("singular orbits are reported with their step") {
  // the coefficient 1/(n-2) is finite symbolically but blows up at n = 2
  SpecFile spec = parse_specfile(
      "[mapping]\ntype = three-point\nupdate = x/(n - 2)\n");
  try {
    degree_sequence(spec, 6, DegreeMode::Exact, 1);
    FAIL("expected SingularOrbit");
  } catch (const SingularOrbit& err) {
    CHECK(err.step == 3);  // x_3 = f(x_2, x_1; n=2)
  }
}

TEST_CASE("degree sequences record their specialization") {
  SpecFile spec = parse_specfile(kProjectiveOrigin);
  auto seq = degree_sequence(spec, 6, DegreeMode::Exact, 42);
  CHECK(seq.specialization.count("alpha"));
  CHECK(seq.specialization.count("beta"));
  CHECK(seq.specialization.count("p"));
  auto again = degree_sequence(spec, 6, DegreeMode::Exact, 42);
  CHECK(seq.specialization == again.specialization);
  CHECK(seq.degrees == again.degrees);
}
