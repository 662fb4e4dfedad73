#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lintegra/primefield.hpp"
#include "lintegra/spec.hpp"

namespace lintegra {

enum class DegreeMode { Exact, Modular };

// Degrees of the reduced iterate ratio in homogeneous coordinates, one entry
// per step starting at n = 0. For cascades the last stage variable is
// reported. All free constants (the degree-0 datum p, per-variable shifts,
// random parameters) are drawn from the seeded generator.
struct DegreeSequence {
  std::vector<int> degrees;
  DegreeMode mode = DegreeMode::Exact;
  std::uint64_t seed = 0;
  std::uint64_t prime = 0;  // modular runs only
  std::map<std::string, Rational> specialization;  // the draws, for reports
};

enum class GrowthKind { Constant, Linear, Polynomial, Exponential, Undetermined };

struct GrowthClass {
  GrowthKind kind = GrowthKind::Undetermined;
  int order = 0;  // set for Polynomial: degree of the polynomial growth
  std::string evidence;
};

std::string growth_str(const GrowthClass& g);

inline constexpr int kExactNmaxDefault = 12;
inline constexpr int kModularNmaxDefault = 24;

// Iterates the mapping in reduced homogeneous form over Rational (exact) or
// a prime field (modular, same seeded draws reduced mod prime). Throws
// SingularOrbit when an iterate's denominator collapses to zero.
DegreeSequence degree_sequence(const SpecFile& spec, int n_max, DegreeMode mode,
                               std::uint64_t seed,
                               std::uint64_t prime = kPrimeDefault);

// Transient of ceil(n_max/3) dropped, then: k-th differences vanishing on the
// window give Constant (k=1), Linear (k=2), or Polynomial(k-1) (k <= 4);
// sustained ratio >= 1.15 gives Exponential; otherwise Undetermined.
GrowthClass classify_growth(const DegreeSequence& seq);

struct CrossCheck {
  std::vector<DegreeSequence> runs;  // two exact seeds, then two primes x two seeds
  std::vector<int> consensus;        // elementwise max over runs
  std::vector<int> flagged;          // steps where any run disagrees
};

CrossCheck cross_check(const SpecFile& spec, int n_max, std::uint64_t seed);

}  // namespace lintegra
