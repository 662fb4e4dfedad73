#pragma once

#include <initializer_list>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "lintegra/errors.hpp"
#include "lintegra/rational.hpp"

namespace lintegra {

// Degree of the zero polynomial. Kept far below any attainable degree so a
// forgotten is_zero() check fails loudly rather than off by one.
inline constexpr int kDegNegInf = std::numeric_limits<int>::min() / 2;

// Dense univariate polynomial over a field scalar R, coefficients ascending,
// canonical: no trailing zero coefficients.
template <class R>
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<R> coeffs) : c_(std::move(coeffs)) { trim(); }
  UniPoly(std::initializer_list<R> coeffs) : c_(coeffs) { trim(); }

  static UniPoly zero() { return UniPoly(); }
  static UniPoly one() { return constant(R(1)); }
  static UniPoly constant(const R& v) {
    UniPoly p;
    if (!v.is_zero()) p.c_.push_back(v);
    return p;
  }
  static UniPoly variable() {
    UniPoly p;
    p.c_ = {R(0), R(1)};
    return p;
  }
  // c * s^k
  static UniPoly monomial(const R& c, int k) {
    UniPoly p;
    if (!c.is_zero()) {
      p.c_.assign(static_cast<std::size_t>(k) + 1, R(0));
      p.c_.back() = c;
    }
    return p;
  }

  bool is_zero() const { return c_.empty(); }
  int degree() const {
    return c_.empty() ? kDegNegInf : static_cast<int>(c_.size()) - 1;
  }
  const std::vector<R>& coeffs() const { return c_; }
  R coeff(int k) const {
    if (k < 0 || static_cast<std::size_t>(k) >= c_.size()) return R(0);
    return c_[static_cast<std::size_t>(k)];
  }
  const R& leading() const {
    if (c_.empty()) throw DomainError("leading coefficient of zero poly");
    return c_.back();
  }

  UniPoly operator-() const {
    UniPoly r(*this);
    for (auto& x : r.c_) x = -x;
    return r;
  }

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
    UniPoly r;
    r.c_.resize(std::max(a.c_.size(), b.c_.size()), R(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r.c_[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r.c_[i] += b.c_[i];
    r.trim();
    return r;
  }
  friend UniPoly operator-(const UniPoly& a, const UniPoly& b) {
    return a + (-b);
  }
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return UniPoly();
    UniPoly r;
    r.c_.assign(a.c_.size() + b.c_.size() - 1, R(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    r.trim();
    return r;
  }
  friend bool operator==(const UniPoly& a, const UniPoly& b) {
    return a.c_ == b.c_;
  }
  friend bool operator!=(const UniPoly& a, const UniPoly& b) {
    return !(a == b);
  }

  UniPoly scaled(const R& s) const {
    if (s.is_zero()) return UniPoly();
    UniPoly r(*this);
    for (auto& x : r.c_) x = x * s;
    return r;
  }
  // *this * s^k
  UniPoly shifted_up(int k) const {
    if (is_zero() || k == 0) return *this;
    UniPoly r;
    r.c_.assign(c_.size() + static_cast<std::size_t>(k), R(0));
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i + k] = c_[i];
    return r;
  }

  UniPoly monic() const {
    if (is_zero()) return *this;
    return scaled(R(1) / leading());
  }

  // Quotient and remainder over the field R; divisor must be nonzero.
  static std::pair<UniPoly, UniPoly> divmod(UniPoly a, const UniPoly& b) {
    if (b.is_zero()) throw DomainError("polynomial division by zero");
    UniPoly q;
    if (a.degree() < b.degree()) return {q, a};
    q.c_.assign(static_cast<std::size_t>(a.degree() - b.degree()) + 1, R(0));
    R lb = b.leading();
    while (!a.is_zero() && a.degree() >= b.degree()) {
      int shift = a.degree() - b.degree();
      R f = a.leading() / lb;
      q.c_[static_cast<std::size_t>(shift)] = f;
      // a -= f * s^shift * b, done in place to avoid temporaries
      for (std::size_t i = 0; i < b.c_.size(); ++i)
        a.c_[i + shift] -= f * b.c_[i];
      a.trim();
    }
    q.trim();
    return {q, a};
  }

  friend UniPoly operator/(const UniPoly& a, const UniPoly& b) {
    return divmod(a, b).first;
  }
  friend UniPoly operator%(const UniPoly& a, const UniPoly& b) {
    return divmod(a, b).second;
  }

  UniPoly derivative() const {
    UniPoly r;
    if (c_.size() < 2) return r;
    r.c_.resize(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i)
      r.c_[i - 1] = c_[i] * R(static_cast<long>(i));
    r.trim();
    return r;
  }

  R eval(const R& x) const {
    R acc(0);
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  UniPoly pow(unsigned k) const {
    UniPoly acc = one(), base = *this;
    while (k) {
      if (k & 1u) acc = acc * base;
      if (k >>= 1u) base = base * base;
    }
    return acc;
  }

  // Rendering uses `var` for the indeterminate; report-facing.
  std::string str(const std::string& var = "s") const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (c_[i].is_zero()) continue;
      if (!out.empty()) out += " + ";
      std::string cs = c_[i].str();
      if (i == 0) {
        out += cs;
      } else {
        if (cs != "1") out += (cs == "-1") ? "-" : cs + "*";
        out += var;
        if (i > 1) out += "^" + std::to_string(i);
      }
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<R> c_;
};

// Monic gcd by the Euclidean remainder sequence; fine over F_p, catastrophic
// over Q for large degrees (see the Rational overload below).
template <class R>
UniPoly<R> poly_gcd_euclid(UniPoly<R> a, UniPoly<R> b) {
  while (!b.is_zero()) {
    UniPoly<R> r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.is_zero() ? a : a.monic();
}

template <class R>
UniPoly<R> poly_gcd(const UniPoly<R>& a, const UniPoly<R>& b) {
  return poly_gcd_euclid(a, b);
}

// Modular gcd over Q (Brown): images mod word-size primes, CRT, symmetric
// lift, trial division. A degree-0 image short-circuits to coprime, which is
// the hot path in exponential-growth iterations. Implemented in polygcd.cpp.
UniPoly<Rational> poly_gcd(const UniPoly<Rational>& a,
                           const UniPoly<Rational>& b);

}  // namespace lintegra
