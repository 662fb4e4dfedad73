#include <algorithm>
#include <cstdint>
#include <set>

#include "lintegra/polyroots.hpp"
#include "lintegra/primefield.hpp"
#include "lintegra/unipoly.hpp"

namespace lintegra {
namespace {

using PolyZ = std::vector<mpz_class>;   // ascending, trimmed; empty = 0
using PolyP = std::vector<std::uint64_t>;

void trim_z(PolyZ& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

mpz_class content_z(const PolyZ& p) {
  mpz_class c = 0;
  for (const auto& x : p) {
    mpz_gcd(c.get_mpz_t(), c.get_mpz_t(), x.get_mpz_t());
    if (c == 1) break;
  }
  return c;
}

void divide_exact(PolyZ& p, const mpz_class& d) {
  for (auto& x : p) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), d.get_mpz_t());
}

// Clears denominators and strips integer content; sign of the leading
// coefficient is preserved (irrelevant to gcd, kept for determinism).
PolyZ primitive_from_rational(const UniPoly<Rational>& p) {
  mpz_class l = 1;
  for (const auto& c : p.coeffs())
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.den().get_mpz_t());
  PolyZ out;
  out.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) out.push_back(c.num() * (l / c.den()));
  trim_z(out);
  mpz_class cont = content_z(out);
  if (cont > 1) divide_exact(out, cont);
  return out;
}

PolyP mod_image(const PolyZ& p, std::uint64_t m) {
  PolyP out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    out[i] = mpz_fdiv_ui(p[i].get_mpz_t(), m);
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

PolyP gcd_mod_p(PolyP a, PolyP b, std::uint64_t m) {
  using detail::invmod_u64;
  using detail::mulmod_u64;
  while (!b.empty()) {
    // a mod b in place
    std::uint64_t inv_lb = invmod_u64(b.back(), m);
    while (a.size() >= b.size()) {
      std::uint64_t f = mulmod_u64(a.back(), inv_lb, m);
      std::size_t off = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) {
        std::uint64_t t = mulmod_u64(f, b[i], m);
        a[off + i] = (a[off + i] >= t) ? a[off + i] - t : a[off + i] + m - t;
      }
      while (!a.empty() && a.back() == 0) a.pop_back();
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  if (!a.empty()) {
    std::uint64_t inv = invmod_u64(a.back(), m);
    for (auto& x : a) x = mulmod_u64(x, inv, m);
  }
  return a;
}

// True iff b divides a exactly over Z; b primitive with nonzero leading
// coefficient. Long division with a divisibility check at every step.
bool divides_z(PolyZ a, const PolyZ& b) {
  if (b.empty()) return a.empty();
  while (a.size() >= b.size()) {
    mpz_class q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.back().get_mpz_t(),
                b.back().get_mpz_t());
    if (r != 0) return false;
    std::size_t off = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[off + i] -= q * b[i];
    if (a.back() != 0) return false;
    trim_z(a);
    if (a.empty()) return true;
  }
  return a.empty();
}

mpz_class symmetric_lift(const mpz_class& v, const mpz_class& m) {
  mpz_class r = v % m;
  if (r < 0) r += m;
  if (r * 2 > m) r -= m;
  return r;
}

// Brown's modular gcd on primitive integer polynomials of degree >= 1.
PolyZ gcd_primitive_z(const PolyZ& a, const PolyZ& b) {
  mpz_class gamma;
  mpz_gcd(gamma.get_mpz_t(), a.back().get_mpz_t(), b.back().get_mpz_t());

  PolyZ cand;
  mpz_class modulus = 0;
  mpz_class p_mpz = (mpz_class(1) << 62);
  for (int tries = 0; tries < 200; ++tries) {
    mpz_nextprime(p_mpz.get_mpz_t(), p_mpz.get_mpz_t());
    std::uint64_t p = mpz_get_ui(p_mpz.get_mpz_t());
    if (mpz_fdiv_ui(a.back().get_mpz_t(), p) == 0 ||
        mpz_fdiv_ui(b.back().get_mpz_t(), p) == 0)
      continue;
    PolyP gp = gcd_mod_p(mod_image(a, p), mod_image(b, p), p);
    if (gp.size() == 1) return {mpz_class(1)};  // coprime apart from content
    std::uint64_t gm = mpz_fdiv_ui(gamma.get_mpz_t(), p);
    for (auto& x : gp) x = detail::mulmod_u64(x, gm, p);

    std::size_t cand_size = cand.size();
    if (cand.empty() || gp.size() < cand_size) {
      cand.assign(gp.size(), 0);
      for (std::size_t i = 0; i < gp.size(); ++i)
        cand[i] = symmetric_lift(mpz_class(gp[i]), mpz_class(p));
      modulus = p;
    } else if (gp.size() > cand_size) {
      continue;  // unlucky prime, image degree too high
    } else {
      // CRT combine coefficientwise, symmetric representatives
      mpz_class minv_m =
          mpz_class(detail::invmod_u64(mpz_fdiv_ui(modulus.get_mpz_t(), p), p));
      mpz_class new_mod = modulus * p;
      for (std::size_t i = 0; i < cand.size(); ++i) {
        std::uint64_t ci = mpz_fdiv_ui(cand[i].get_mpz_t(), p);
        std::uint64_t diff = gp[i] >= ci ? gp[i] - ci : gp[i] + p - ci;
        std::uint64_t t =
            detail::mulmod_u64(diff, mpz_get_ui(minv_m.get_mpz_t()), p);
        cand[i] = symmetric_lift(cand[i] + modulus * mpz_class(t), new_mod);
      }
      modulus = new_mod;
    }

    PolyZ trial = cand;
    trim_z(trial);
    if (trial.empty()) continue;
    mpz_class cont = content_z(trial);
    if (cont > 1) divide_exact(trial, cont);
    if (divides_z(a, trial) && divides_z(b, trial)) return trial;
  }
  throw std::logic_error("modular gcd failed to stabilize");
}

}  // namespace

UniPoly<Rational> poly_gcd(const UniPoly<Rational>& a,
                           const UniPoly<Rational>& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.degree() == 0 || b.degree() == 0) return UniPoly<Rational>::one();
  PolyZ az = primitive_from_rational(a);
  PolyZ bz = primitive_from_rational(b);
  PolyZ g = az.size() >= bz.size() ? gcd_primitive_z(az, bz)
                                   : gcd_primitive_z(bz, az);
  std::vector<Rational> coeffs;
  coeffs.reserve(g.size());
  for (const auto& x : g) coeffs.emplace_back(x);
  return UniPoly<Rational>(std::move(coeffs)).monic();
}

std::vector<Rational> rational_roots(const UniPoly<Rational>& p) {
  if (p.is_zero()) throw DomainError("roots of the zero polynomial");
  std::vector<Rational> roots;
  PolyZ z = primitive_from_rational(p);
  std::size_t val = 0;
  while (val < z.size() && z[val] == 0) ++val;
  if (val > 0) {
    roots.push_back(Rational(0));
    z.erase(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(val));
  }
  if (z.size() < 2) {
    std::sort(roots.begin(), roots.end());
    return roots;
  }

  auto divisors = [](mpz_class n) {
    n = abs(n);
    std::vector<mpz_class> primes;
    for (mpz_class d = 2; d * d <= n && d < 1000000; ++d) {
      while (n % d == 0) {
        primes.push_back(d);
        n /= d;
      }
    }
    if (n > 1) primes.push_back(n);  // may be composite; see header note
    std::set<mpz_class> divs{mpz_class(1)};
    for (const auto& q : primes) {
      std::set<mpz_class> next = divs;
      for (const auto& d : divs) next.insert(d * q);
      divs = std::move(next);
      if (divs.size() > 4096) throw DomainError("too many divisor candidates");
    }
    return divs;
  };

  std::set<Rational> found;
  for (const auto& num : divisors(z.front())) {
    for (const auto& den : divisors(z.back())) {
      for (int sign : {1, -1}) {
        Rational cand(sign * num, den);
        if (found.count(cand)) continue;
        if (p.eval(cand).is_zero()) found.insert(cand);
      }
    }
  }
  roots.insert(roots.end(), found.begin(), found.end());
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace lintegra
