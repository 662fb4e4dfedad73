#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>

#include "lintegra/errors.hpp"

namespace lintegra {

// Exact rational scalar. Canonical form: gcd(num, den) = 1, den > 0, zero is
// 0/1; mpq_class canonicalization maintains exactly that, so every accessor
// sees the canonical representative.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}  // NOLINT: implicit for integer literals
  Rational(long n, long d) {
    if (d == 0) throw DomainError("rational with zero denominator");
    v_ = mpq_class(n, d);
    v_.canonicalize();
  }
  explicit Rational(const mpz_class& n) : v_(n) {}
  Rational(const mpz_class& n, const mpz_class& d) {
    if (d == 0) throw DomainError("rational with zero denominator");
    v_ = mpq_class(n, d);
    v_.canonicalize();
  }
  explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  // Accepts "p", "-p", "p/q" with optional sign on either part.
  static Rational from_string(const std::string& s);

  const mpq_class& raw() const { return v_; }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  int sign() const { return sgn(v_); }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw DomainError("division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.v_ == b.v_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) {
    return a.v_ != b.v_;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.v_ < b.v_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return a.v_ <= b.v_;
  }
  friend bool operator>(const Rational& a, const Rational& b) {
    return a.v_ > b.v_;
  }
  friend bool operator>=(const Rational& a, const Rational& b) {
    return a.v_ >= b.v_;
  }

  Rational pow(unsigned k) const;
  Rational inverse() const {
    if (is_zero()) throw DomainError("inverse of zero");
    return Rational(mpq_class(1) / v_);
  }
  Rational abs() const { return Rational(mpq_class(::abs(v_))); }

  // "p/q" for non-integers, "p" otherwise; the report-facing form.
  std::string str() const;
  double to_double() const { return v_.get_d(); }

 private:
  mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

// Seeded source of small rationals used to instantiate `random` coefficient
// placeholders, probe witnesses, and generic specializations. Single-digit
// numerators and denominators keep iterates compact while staying generic.
// Draws avoid std::uniform_int_distribution so streams are identical across
// standard libraries.
class RandomRationalGen {
 public:
  explicit RandomRationalGen(std::uint64_t seed) : state_(seed ? seed : 1) {}

  // Nonzero, numerator in ±[1,9], denominator in [1,9].
  Rational next();
  // As next(), guaranteed different from `avoid`.
  Rational next_distinct_from(const Rational& avoid);
  // Magnitude at most 1/2 (numerator in [-9,9], denominator in [18,27]).
  Rational next_bounded_half();
  // Uniform in [0, n).
  std::uint64_t next_index(std::uint64_t n);

 private:
  std::uint64_t next_u64();
  std::uint64_t state_;
};

}  // namespace lintegra
