#pragma once

#include <string>

#include "lintegra/ratfun.hpp"
#include "lintegra/sparsepoly.hpp"

namespace lintegra {

// Reduced ratio N/D of homogeneous bivariate polynomials in (q, r) of equal
// total degree. Invariants: gcd(N, D) = 1, D != 0, deg = shared total degree
// after reduction; the dehomogenized denominator is monic.
class HomogPair {
 public:
  const SparsePoly& N() const { return n_; }
  const SparsePoly& D() const { return d_; }
  int deg() const { return deg_; }

  // N(s, 1) / D(s, 1), already reduced.
  RatFun<Rational> dehomogenized() const;

  std::string str() const;

  friend HomogPair homog_reduce(const SparsePoly& N, const SparsePoly& D);
  friend HomogPair homog_from_ratio(const RatFun<Rational>& f);
  friend bool operator==(const HomogPair& a, const HomogPair& b) {
    return a.deg_ == b.deg_ && a.n_ == b.n_ && a.d_ == b.d_;
  }

 private:
  HomogPair(SparsePoly n, SparsePoly d, int deg)
      : n_(std::move(n)), d_(std::move(d)), deg_(deg) {}
  SparsePoly n_, d_;
  int deg_;
};

// True iff every monomial of p has total degree deg and uses only {q, r}.
bool is_homogeneous_qr(const SparsePoly& p, int deg);

// gcd removal by dehomogenizing to s = q/r, reducing the univariate ratio,
// and restoring the minimal shared power of r.
HomogPair homog_reduce(const SparsePoly& N, const SparsePoly& D);

// Homogenization of a reduced univariate ratio at its max degree.
HomogPair homog_from_ratio(const RatFun<Rational>& f);

}  // namespace lintegra
