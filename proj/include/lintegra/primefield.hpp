#pragma once

#include <cstdint>
#include <string>

#include "lintegra/errors.hpp"
#include "lintegra/rational.hpp"

namespace lintegra {

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b,
                                std::uint64_t m) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e,
                                std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1u) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1u;
  }
  return r;
}

// Deterministic Miller-Rabin; the listed bases decide primality for all
// 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1u) == 0) {
    d >>= 1u;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

inline std::uint64_t invmod_u64(std::uint64_t a, std::uint64_t p) {
  if (a % p == 0) throw DomainError("inverse of zero in prime field");
  return powmod_u64(a % p, p - 2, p);
}

// Reduce a rational into F_p; throws when the denominator vanishes mod p
// (an unlucky-prime event the caller can flag).
inline std::uint64_t rational_mod_u64(const Rational& r, std::uint64_t p) {
  std::uint64_t n = mpz_fdiv_ui(r.num().get_mpz_t(), p);
  std::uint64_t d = mpz_fdiv_ui(r.den().get_mpz_t(), p);
  if (d == 0)
    throw DomainError("denominator divisible by prime " + std::to_string(p));
  return mulmod_u64(n, invmod_u64(d, p), p);
}

}  // namespace detail

// Largest prime below 2^63, plus two alternates for cross-checking.
inline constexpr std::uint64_t kPrimeDefault = 9223372036854775783ULL;
inline constexpr std::uint64_t kPrimeAlt1 = 9223372036854775643ULL;
inline constexpr std::uint64_t kPrimeAlt2 = 2305843009213693951ULL;

// Prime-field scalar with compile-time modulus just under the machine word.
// The modulus is revalidated once per process the first time the field is
// touched; a composite modulus is a build defect, not an analysis result.
template <std::uint64_t P>
class Fp {
 public:
  Fp() : v_(0) {}
  explicit Fp(long long v) {
    check_prime_once();
    long long m = v % static_cast<long long>(P);
    v_ = static_cast<std::uint64_t>(m < 0 ? m + static_cast<long long>(P) : m);
  }
  static Fp from_raw(std::uint64_t v) {
    Fp r;
    r.v_ = v % P;
    return r;
  }
  static Fp from_rational(const Rational& r) {
    check_prime_once();
    return from_raw(detail::rational_mod_u64(r, P));
  }

  static constexpr std::uint64_t modulus() { return P; }
  std::uint64_t value() const { return v_; }
  bool is_zero() const { return v_ == 0; }
  bool is_one() const { return v_ == 1; }

  Fp operator-() const { return from_raw(v_ ? P - v_ : 0); }
  Fp& operator+=(const Fp& o) {
    v_ += o.v_;
    if (v_ >= P) v_ -= P;
    return *this;
  }
  Fp& operator-=(const Fp& o) {
    v_ = (v_ >= o.v_) ? v_ - o.v_ : v_ + P - o.v_;
    return *this;
  }
  Fp& operator*=(const Fp& o) {
    v_ = detail::mulmod_u64(v_, o.v_, P);
    return *this;
  }
  Fp& operator/=(const Fp& o) {
    if (o.v_ == 0) throw DomainError("division by zero");
    v_ = detail::mulmod_u64(v_, detail::invmod_u64(o.v_, P), P);
    return *this;
  }

  friend Fp operator+(Fp a, const Fp& b) { return a += b; }
  friend Fp operator-(Fp a, const Fp& b) { return a -= b; }
  friend Fp operator*(Fp a, const Fp& b) { return a *= b; }
  friend Fp operator/(Fp a, const Fp& b) { return a /= b; }
  friend bool operator==(const Fp& a, const Fp& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Fp& a, const Fp& b) { return a.v_ != b.v_; }

  Fp inverse() const { return from_raw(detail::invmod_u64(v_, P)); }
  std::string str() const { return std::to_string(v_); }

  static void check_prime_once() {
    static const bool ok = detail::is_prime_u64(P);
    if (!ok)
      throw std::logic_error("compiled field modulus " + std::to_string(P) +
                             " is not prime");
  }

 private:
  std::uint64_t v_;
};

using FpDefault = Fp<kPrimeDefault>;
using FpAlt1 = Fp<kPrimeAlt1>;
using FpAlt2 = Fp<kPrimeAlt2>;

}  // namespace lintegra
