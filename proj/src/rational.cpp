#include "lintegra/rational.hpp"

#include <ostream>

namespace lintegra {

Rational Rational::from_string(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      return Rational(mpz_class(s));
    }
    mpz_class n(s.substr(0, slash));
    mpz_class d(s.substr(slash + 1));
    if (d == 0) throw DomainError("rational literal with zero denominator");
    return Rational(n, d);
  } catch (const std::invalid_argument&) {
    throw DomainError("malformed rational literal: '" + s + "'");
  }
}

Rational Rational::pow(unsigned k) const {
  mpq_class acc(1), base(v_);
  while (k) {
    if (k & 1u) acc *= base;
    base *= base;
    k >>= 1u;
  }
  return Rational(acc);
}

std::string Rational::str() const {
  if (v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.str();
}

std::uint64_t RandomRationalGen::next_u64() {
  // splitmix64: tiny, seedable, identical everywhere.
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t RandomRationalGen::next_index(std::uint64_t n) {
  // Rejection sampling keeps the distribution exactly uniform.
  std::uint64_t limit = n * ((~0ULL) / n);
  std::uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % n;
}

Rational RandomRationalGen::next() {
  long num = static_cast<long>(next_index(9)) + 1;
  if (next_index(2)) num = -num;
  long den = static_cast<long>(next_index(9)) + 1;
  return Rational(num, den);
}

Rational RandomRationalGen::next_distinct_from(const Rational& avoid) {
  for (;;) {
    Rational r = next();
    if (r != avoid) return r;
  }
}

Rational RandomRationalGen::next_bounded_half() {
  long num = static_cast<long>(next_index(19)) - 9;  // [-9, 9]
  long den = static_cast<long>(next_index(10)) + 18;  // [18, 27]
  return Rational(num, den);
}

}  // namespace lintegra
