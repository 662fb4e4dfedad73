#pragma once

#include <vector>

#include "lintegra/rational.hpp"
#include "lintegra/unipoly.hpp"

namespace lintegra {

// All rational roots of p, ascending, each listed once. Candidate divisors
// come from trial factoring up to 10^6 with any unfactored remainder treated
// as prime; a constant term with two distinct prime factors above 10^6 could
// therefore hide a root, which is far outside the coefficient sizes the site
// detector feeds in.
std::vector<Rational> rational_roots(const UniPoly<Rational>& p);

}  // namespace lintegra
