#pragma once

#include <string>
#include <utility>

#include "lintegra/unipoly.hpp"

namespace lintegra {

// Reduced rational function num/den over a field scalar R.
// Invariants: gcd(num, den) = 1, den monic and nonzero; zero is 0/1.
template <class R>
class RatFun {
 public:
  RatFun() : num_(), den_(UniPoly<R>::one()) {}
  RatFun(UniPoly<R> num, UniPoly<R> den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw DomainError("rational function with zero denominator");
    reduce();
  }
  static RatFun constant(const R& v) { return RatFun(UniPoly<R>::constant(v), UniPoly<R>::one()); }
  static RatFun variable() { return RatFun(UniPoly<R>::variable(), UniPoly<R>::one()); }
  static RatFun from_poly(UniPoly<R> p) {
    RatFun r;
    r.num_ = std::move(p);
    return r;
  }

  const UniPoly<R>& num() const { return num_; }
  const UniPoly<R>& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_poly() const { return den_.degree() == 0; }

  // Homogeneous degree of the reduced pair: max of the two poly degrees.
  int degree() const {
    if (is_zero()) return 0;
    return std::max(num_.degree(), den_.degree());
  }

  RatFun operator-() const {
    RatFun r(*this);
    r.num_ = -r.num_;
    return r;
  }

  friend RatFun operator+(const RatFun& a, const RatFun& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    // Henrici: factor the shared denominator part first.
    UniPoly<R> g = poly_gcd(a.den_, b.den_);
    UniPoly<R> da = a.den_ / g, db = b.den_ / g;
    UniPoly<R> t = a.num_ * db + b.num_ * da;
    if (t.is_zero()) return RatFun();
    UniPoly<R> h = poly_gcd(t, g);
    RatFun r;
    r.num_ = t / h;
    r.den_ = da * (g / h) * db;
    r.make_monic();
    return r;
  }
  friend RatFun operator-(const RatFun& a, const RatFun& b) { return a + (-b); }

  friend RatFun operator*(const RatFun& a, const RatFun& b) {
    if (a.is_zero() || b.is_zero()) return RatFun();
    UniPoly<R> g1 = poly_gcd(a.num_, b.den_);
    UniPoly<R> g2 = poly_gcd(b.num_, a.den_);
    RatFun r;
    r.num_ = (a.num_ / g1) * (b.num_ / g2);
    r.den_ = (a.den_ / g2) * (b.den_ / g1);
    r.make_monic();
    return r;
  }
  friend RatFun operator/(const RatFun& a, const RatFun& b) {
    if (b.is_zero()) throw DomainError("division by zero rational function");
    return a * b.reciprocal();
  }

  RatFun reciprocal() const {
    if (is_zero()) throw DomainError("reciprocal of zero");
    RatFun r;
    r.num_ = den_;
    r.den_ = num_;
    r.make_monic();
    return r;
  }

  friend bool operator==(const RatFun& a, const RatFun& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RatFun& a, const RatFun& b) { return !(a == b); }

  R eval(const R& x) const {
    R d = den_.eval(x);
    if (d.is_zero()) throw DomainError("evaluation at a pole");
    return num_.eval(x) / d;
  }

  RatFun derivative() const {
    return RatFun(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
  }

  RatFun pow(unsigned k) const {
    RatFun acc = constant(R(1)), base = *this;
    while (k) {
      if (k & 1u) acc = acc * base;
      if (k >>= 1u) base = base * base;
    }
    return acc;
  }

  std::string str(const std::string& var = "s") const {
    if (is_poly()) return num_.str(var);
    return "(" + num_.str(var) + ")/(" + den_.str(var) + ")";
  }

 private:
  void reduce() {
    if (num_.is_zero()) {
      den_ = UniPoly<R>::one();
      return;
    }
    UniPoly<R> g = poly_gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = num_ / g;
      den_ = den_ / g;
    }
    make_monic();
  }
  void make_monic() {
    const R& l = den_.leading();
    if (!l.is_one()) {
      R inv = R(1) / l;
      num_ = num_.scaled(inv);
      den_ = den_.scaled(inv);
    }
  }
  UniPoly<R> num_, den_;
};

// Normalizes an arbitrary numerator/denominator pair to the canonical
// reduced, monic-denominator representative.
template <class R>
RatFun<R> ratfun_normalize(UniPoly<R> num, UniPoly<R> den) {
  return RatFun<R>(std::move(num), std::move(den));
}

}  // namespace lintegra
