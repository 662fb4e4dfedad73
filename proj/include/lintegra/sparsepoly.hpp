#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "lintegra/rational.hpp"
#include "lintegra/unipoly.hpp"

namespace lintegra {

// Sparse multivariate polynomial over Rational with named variables.
class SparsePoly {
 public:
  // Variable name -> positive exponent.
  using Monomial = std::map<std::string, unsigned>;

  SparsePoly() = default;
  static SparsePoly zero() { return SparsePoly(); }
  static SparsePoly constant(const Rational& c);
  static SparsePoly variable(const std::string& name);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  // Value when is_constant(); zero polynomial reads as 0.
  Rational constant_value() const;

  const std::map<Monomial, Rational>& terms() const { return terms_; }
  std::set<std::string> free_vars() const;
  int degree(const std::string& var) const;
  int total_degree() const;

  SparsePoly operator-() const;
  friend SparsePoly operator+(const SparsePoly& a, const SparsePoly& b);
  friend SparsePoly operator-(const SparsePoly& a, const SparsePoly& b);
  friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b);
  SparsePoly scaled(const Rational& c) const;
  SparsePoly pow(unsigned k) const;
  friend bool operator==(const SparsePoly& a, const SparsePoly& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const SparsePoly& a, const SparsePoly& b) { return !(a == b); }

  // Coefficients of var^0, var^1, ... as polynomials in the other variables.
  std::vector<SparsePoly> coeffs_in(const std::string& var) const;
  SparsePoly subst(const std::string& var, const Rational& value) const;
  SparsePoly subst(const std::string& var, const SparsePoly& value) const;
  SparsePoly derivative(const std::string& var) const;
  Rational eval(const std::map<std::string, Rational>& env) const;
  // Requires every variable other than var to be absent.
  UniPoly<Rational> as_unipoly(const std::string& var) const;

  std::string str() const;

 private:
  void add_term(Monomial m, const Rational& c);
  std::map<Monomial, Rational> terms_;
};

// Unreduced fraction of sparse polynomials. No polynomial gcd is taken;
// only shared monomial content and a scalar normalization are cancelled,
// which keeps sizes tame for the shallow symbolic work this is used for.
class PolyFrac {
 public:
  PolyFrac() : num_(), den_(SparsePoly::constant(Rational(1))) {}
  PolyFrac(SparsePoly num, SparsePoly den);
  static PolyFrac constant(const Rational& c) {
    return PolyFrac(SparsePoly::constant(c), SparsePoly::constant(Rational(1)));
  }
  static PolyFrac variable(const std::string& name) {
    return PolyFrac(SparsePoly::variable(name), SparsePoly::constant(Rational(1)));
  }
  static PolyFrac from_poly(SparsePoly p) {
    return PolyFrac(std::move(p), SparsePoly::constant(Rational(1)));
  }

  const SparsePoly& num() const { return num_; }
  const SparsePoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const {
    return num_ == den_;
  }

  PolyFrac operator-() const;
  friend PolyFrac operator+(const PolyFrac& a, const PolyFrac& b);
  friend PolyFrac operator-(const PolyFrac& a, const PolyFrac& b);
  friend PolyFrac operator*(const PolyFrac& a, const PolyFrac& b);
  friend PolyFrac operator/(const PolyFrac& a, const PolyFrac& b);
  PolyFrac pow(unsigned k) const;

  Rational eval(const std::map<std::string, Rational>& env) const;
  std::string str() const;

 private:
  void normalize();
  SparsePoly num_, den_;
};

inline PolyFrac ring_from_rational(const PolyFrac&, const Rational& v) {
  return PolyFrac::constant(v);
}
inline bool ring_is_zero(const PolyFrac& v) { return v.is_zero(); }

}  // namespace lintegra
