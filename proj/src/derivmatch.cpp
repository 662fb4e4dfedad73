#include "lintegra/derivmatch.hpp"

#include <algorithm>

#include "lintegra/spec.hpp"

namespace lintegra {

namespace {

Rational nonzero(Rational v, const char* what, long n) {
  if (v.is_zero())
    throw DomainError(std::string(what) + " vanishes at n = " + std::to_string(n));
  return v;
}

}  // namespace

QuadFormSpec validate_quadform(const std::map<std::string, CoeffSeq>& coeffs,
                               const Rational& M) {
  QuadFormSpec f;
  f.M = M;
  std::map<std::string, CoeffSeq*> slots{
      {"1", &f.one},     {"xm", &f.xm},       {"x", &f.x},
      {"xb", &f.xb},     {"xm*x", &f.xmx},    {"x*xb", &f.xxb},
      {"xm*xb", &f.xmxb}, {"x^2", &f.x2},
  };
  for (const auto& [key, seq] : coeffs) {
    auto it = slots.find(key);
    if (it == slots.end())
      throw DomainError("monomial '" + key +
                        "' is outside the admissible quadratic slots");
    *it->second = seq;
  }
  return f;
}

void validate_linform(const LinThreePoint& lin, long n_lo, long n_hi) {
  for (long n = n_lo; n <= n_hi; ++n) {
    Rational num[4] = {lin.alpha.at(n), lin.beta.at(n), lin.gamma.at(n), lin.delta.at(n)};
    Rational den[4] = {lin.eps.at(n), lin.zeta.at(n), lin.eta.at(n), lin.theta.at(n)};
    // Proportional iff every 2x2 cross product vanishes.
    bool prop = true;
    for (int i = 0; i < 4 && prop; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (num[i] * den[j] != num[j] * den[i]) {
          prop = false;
          break;
        }
    if (!prop) return;
  }
  throw DomainError("linear form numerator and denominator are proportional");
}

GExample make_g_example(const CoeffSeq& g, const Rational& a) {
  GExample gx;
  gx.g = g;
  gx.a = a;
  gx.z = CoeffSeq::fn(
      [g](long n) { return nonzero(g.at(n + 1) + g.at(n - 1), "z", n); },
      "g(n+1) + g(n-1)");
  gx.zeta = CoeffSeq::fn(
      [g](long n) { return nonzero(g.at(n + 1) + g.at(n), "zeta", n); },
      "g(n+1) + g(n)");
  gx.zbar = gx.z.shifted(1);
  gx.A = CoeffSeq::fn(
      [g, z = gx.z](long n) {
        return nonzero(g.at(n), "g", n).pow(2) * z.at(n);
      },
      "g(n)^2 (g(n+1) + g(n-1))");
  gx.Abar = gx.A.shifted(1);
  gx.B = CoeffSeq::fn(
      [g, zeta = gx.zeta](long n) {
        return -zeta.at(n) * g.at(n + 2) * g.at(n - 1) -
               (g.at(n + 2) + g.at(n - 1)) * g.at(n + 1) * g.at(n);
      },
      "-zeta g(n+2) g(n-1) - (g(n+2) + g(n-1)) g(n+1) g(n)");
  return gx;
}

std::pair<QuadFormSpec, LinThreePoint> build_g_example(const CoeffSeq& g,
                                                       const Rational& a) {
  GExample gx = make_g_example(g, a);
  const CoeffSeq z = gx.z, zeta = gx.zeta, zbar = gx.zbar;

  // cz = 1/z - 1/zeta and czb = 1/zbar - 1/zeta carry the cross terms of the
  // two factors; everything else is the expanded product minus x^2/zeta^2.
  auto cz = [z, zeta](long n) { return z.at(n).inverse() - zeta.at(n).inverse(); };
  auto czb = [zbar, zeta](long n) { return zbar.at(n).inverse() - zeta.at(n).inverse(); };

  QuadFormSpec f;
  f.xmxb = CoeffSeq::fn([z, zbar](long n) { return (z.at(n) * zbar.at(n)).inverse(); },
                        "1/(z zbar)");
  f.xxb = CoeffSeq::fn([cz, zbar](long n) { return cz(n) / zbar.at(n); }, "cz/zbar");
  f.xb = CoeffSeq::fn([z, zbar, a](long n) { return -a / (z.at(n) * zbar.at(n)); },
                      "-a/(z zbar)");
  f.xmx = CoeffSeq::fn([czb, z](long n) { return czb(n) / z.at(n); }, "czb/z");
  f.x2 = CoeffSeq::fn(
      [cz, czb, zeta](long n) { return cz(n) * czb(n) - zeta.at(n).pow(2).inverse(); },
      "cz czb - 1/zeta^2");
  f.x = CoeffSeq::fn(
      [cz, czb, z, zbar, a](long n) {
        return -a * (czb(n) / z.at(n) + cz(n) / zbar.at(n));
      },
      "-a (czb/z + cz/zbar)");
  f.xm = f.xb;
  f.one = CoeffSeq::fn([z, zbar, a](long n) { return a * a / (z.at(n) * zbar.at(n)); },
                       "a^2/(z zbar)");

  LinThreePoint lin;
  lin.alpha = gx.A;
  lin.beta = gx.B;
  lin.gamma = gx.Abar;
  lin.delta = CoeffSeq::constant(Rational(0));
  lin.eps = z;
  lin.zeta = CoeffSeq::fn([z, zbar](long n) { return zbar.at(n) + z.at(n); }, "zbar + z");
  lin.eta = zbar;
  lin.theta = CoeffSeq::constant(Rational(0));
  lin.a = a;
  return {std::move(f), std::move(lin)};
}

Rational eval_quadform(const QuadFormSpec& f, const Rational& xm, const Rational& x,
                       const Rational& xb, long n) {
  return f.xmxb.at(n) * xm * xb + f.xxb.at(n) * x * xb + f.xb.at(n) * xb +
         f.xmx.at(n) * xm * x + f.x2.at(n) * x * x + f.x.at(n) * x +
         f.xm.at(n) * xm + f.one.at(n);
}

Rational solve_next(const QuadFormSpec& f, const Rational& M, const Rational& xm,
                    const Rational& x, long n) {
  Rational lead = f.xmxb.at(n) * xm + f.xxb.at(n) * x + f.xb.at(n);
  if (lead.is_zero()) throw SingularStep(n);
  Rational rest = f.xmx.at(n) * xm * x + f.x2.at(n) * x * x + f.x.at(n) * x +
                  f.xm.at(n) * xm + f.one.at(n);
  return (M - rest) / lead;
}

Rational compute_K(const LinThreePoint& lin, const Rational& xm, const Rational& x,
                   const Rational& xb, long n) {
  Rational mid = x - lin.a;
  Rational den =
      lin.eps.at(n) * xb + lin.zeta.at(n) * mid + lin.eta.at(n) * xm + lin.theta.at(n);
  if (den.is_zero())
    throw DomainError("linear form denominator vanishes at n = " + std::to_string(n));
  Rational num = lin.alpha.at(n) * xb + lin.beta.at(n) * mid + lin.gamma.at(n) * xm +
                 lin.delta.at(n);
  return num / den;
}

Orbit propagate_linear(const LinThreePoint& lin, const Rational& K, const Rational& x0,
                       const Rational& x1, long N) {
  Orbit orbit;
  orbit.route = "linear";
  orbit.vars = {"x"};
  orbit.values.assign(1, {});
  auto& v = orbit.values[0];
  v.push_back(x0);
  if (N >= 1) v.push_back(x1);
  for (long k = 2; k <= N; ++k) {
    long n = k - 1;
    Rational lead = lin.alpha.at(n) - K * lin.eps.at(n);
    if (lead.is_zero()) throw SingularStep(n);
    const Rational& xm = *v[static_cast<size_t>(k - 2)];
    const Rational& x = *v[static_cast<size_t>(k - 1)];
    Rational rest = (lin.beta.at(n) - K * lin.zeta.at(n)) * (x - lin.a) +
                    (lin.gamma.at(n) - K * lin.eta.at(n)) * xm +
                    (lin.delta.at(n) - K * lin.theta.at(n));
    v.push_back(-rest / lead);
  }
  return orbit;
}

ConservationReport verify_conservation(const QuadFormSpec& f, const Orbit& orbit) {
  const auto& v = orbit.of(orbit.vars.at(0));
  if (v.size() < 3) throw DomainError("conservation check needs at least three values");
  ConservationReport rep;
  for (size_t k = 1; k + 1 < v.size(); ++k) {
    if (!v[k - 1] || !v[k] || !v[k + 1])
      throw DomainError("conservation check needs finite orbit values");
    Rational val =
        eval_quadform(f, *v[k - 1], *v[k], *v[k + 1], static_cast<long>(k));
    if (std::find(rep.distinct.begin(), rep.distinct.end(), val) == rep.distinct.end())
      rep.distinct.push_back(val);
    Rational dev = (val - f.M).abs();
    if (dev > rep.max_deviation) rep.max_deviation = dev;
  }
  rep.all_equal = rep.distinct.size() == 1;
  return rep;
}

OracleReport consistency_oracle(const QuadFormSpec& f, const LinThreePoint& lin, long n,
                                int samples, std::uint64_t seed) {
  OracleReport rep;
  rep.seed = seed;
  RandomRationalGen gen(seed);
  const int budget = 64 + 8 * samples;
  while (rep.samples < samples) {
    Rational xm = gen.next(), x = gen.next(), xb = gen.next();
    Rational kn, kn1;
    try {
      Rational m = eval_quadform(f, xm, x, xb, n);
      kn = compute_K(lin, xm, x, xb, n);
      Rational xbb = solve_next(f, m, x, xb, n + 1);
      kn1 = compute_K(lin, x, xb, xbb, n + 1);
    } catch (const SingularStep&) {
      if (++rep.resampled > budget)
        throw DomainError("consistency oracle: degenerate-draw budget exhausted");
      continue;
    } catch (const DomainError&) {
      if (++rep.resampled > budget)
        throw DomainError("consistency oracle: degenerate-draw budget exhausted");
      continue;
    }
    ++rep.samples;
    if (kn != kn1) {
      rep.counterexample = {xm, x, xb, kn, kn1};
      rep.pass = false;
      return rep;
    }
  }
  rep.pass = true;
  return rep;
}

}  // namespace lintegra
