#include "lintegra/homogpair.hpp"

#include <algorithm>

#include "lintegra/errors.hpp"

namespace lintegra {

namespace {

int total_degree_checked(const SparsePoly& p) {
  int deg = -1;
  for (const auto& [m, c] : p.terms()) {
    int t = 0;
    for (const auto& [v, e] : m) {
      if (v != "q" && v != "r") throw DomainError("homogeneous pair may only use q and r");
      t += static_cast<int>(e);
    }
    if (deg < 0) {
      deg = t;
    } else if (t != deg) {
      throw DomainError("polynomial is not homogeneous");
    }
  }
  return deg;  // -1 for the zero polynomial
}

// Coefficients of s^i in p(s, 1), index i = q-exponent.
UniPoly<Rational> dehomog(const SparsePoly& p) {
  std::vector<Rational> cs;
  for (const auto& [m, c] : p.terms()) {
    unsigned i = 0;
    auto it = m.find("q");
    if (it != m.end()) i = it->second;
    if (cs.size() <= i) cs.resize(i + 1, Rational(0));
    cs[i] += c;
  }
  return UniPoly<Rational>(cs);
}

SparsePoly homogenize(const UniPoly<Rational>& p, int deg) {
  SparsePoly out;
  if (p.is_zero()) return out;
  SparsePoly q = SparsePoly::variable("q"), r = SparsePoly::variable("r");
  for (int i = 0; i <= p.degree(); ++i) {
    Rational c = p.coeff(i);
    if (c.is_zero()) continue;
    SparsePoly term = q.pow(static_cast<unsigned>(i)) * r.pow(static_cast<unsigned>(deg - i));
    out = out + term.scaled(c);
  }
  return out;
}

}  // namespace

bool is_homogeneous_qr(const SparsePoly& p, int deg) {
  try {
    int d = total_degree_checked(p);
    return d < 0 || d == deg;
  } catch (const DomainError&) {
    return false;
  }
}

HomogPair homog_reduce(const SparsePoly& N, const SparsePoly& D) {
  if (D.is_zero()) throw DomainError("homogeneous pair with zero denominator");
  int dn = total_degree_checked(N);
  int dd = total_degree_checked(D);
  if (dn >= 0 && dn != dd) throw DomainError("homogeneous parts have unequal degree");
  RatFun<Rational> red(dehomog(N), dehomog(D));
  int deg = red.is_zero() ? 0 : std::max(red.num().degree(), red.den().degree());
  return HomogPair(homogenize(red.num(), deg), homogenize(red.den(), deg), deg);
}

HomogPair homog_from_ratio(const RatFun<Rational>& f) {
  int deg = f.is_zero() ? 0 : std::max(f.num().degree(), f.den().degree());
  return HomogPair(homogenize(f.num(), deg), homogenize(f.den(), deg), deg);
}

RatFun<Rational> HomogPair::dehomogenized() const {
  return RatFun<Rational>(dehomog(n_), dehomog(d_));
}

std::string HomogPair::str() const {
  return "(" + n_.str() + ") / (" + d_.str() + ") deg " + std::to_string(deg_);
}

}  // namespace lintegra
