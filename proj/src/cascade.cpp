#include "lintegra/cascade.hpp"

#include <algorithm>

#include "lintegra/expr.hpp"
#include "lintegra/laurent.hpp"
#include "lintegra/sparsepoly.hpp"

namespace lintegra {

namespace {

// Scale a projective tuple to coprime integers (gcd of numerators over lcm
// of denominators) with the first nonzero entry positive.
void normalize_projective(std::initializer_list<Rational*> vals) {
  mpz_class g = 0, l = 1;
  bool any = false;
  for (Rational* r : vals) {
    if (r->is_zero()) continue;
    any = true;
    g = gcd(g, r->num());
    l = lcm(l, r->den());
  }
  if (!any) return;
  Rational content(g, l);
  for (Rational* r : vals) *r /= content;
  for (Rational* r : vals) {
    if (r->is_zero()) continue;
    if (r->sign() < 0)
      for (Rational* q : vals) *q = -*q;
    break;
  }
}

// Window for the one-variable projective limits; stage coefficients are
// polynomial, so this only needs to cover their degree spread.
constexpr int kLimitWindow = 64;

constexpr long kFirstThreePointUpdate = 1;  // x2 = f(x1, x0; n = 1)

Rational resolved_init(const RunSection& run, const std::string& var, RandomRationalGen& gen) {
  auto it = run.init.find(var);
  if (it != run.init.end()) return it->second;
  return gen.next();
}

std::optional<Rational> pair_value(const std::pair<Rational, Rational>& p, long step) {
  if (p.second.is_zero()) {
    if (p.first.is_zero()) throw SingularOrbit(static_cast<int>(step));
    return std::nullopt;
  }
  return p.first / p.second;
}

}  // namespace

MobiusMatrix MobiusMatrix::from_entries(const Rational& a, const Rational& b, const Rational& c,
                                        const Rational& d, long step) {
  MobiusMatrix m{a, b, c, d};
  normalize_projective({&m.a, &m.b, &m.c, &m.d});
  if (m.det().is_zero()) throw DegenerateStage(step);
  return m;
}

MobiusMatrix operator*(const MobiusMatrix& m, const MobiusMatrix& k) {
  MobiusMatrix r{m.a * k.a + m.b * k.c, m.a * k.b + m.b * k.d, m.c * k.a + m.d * k.c,
                 m.c * k.b + m.d * k.d};
  normalize_projective({&r.a, &r.b, &r.c, &r.d});
  return r;
}

std::optional<Rational> MobiusMatrix::apply(const std::optional<Rational>& v) const {
  // Nonsingular action: (num, den) never both vanish.
  Rational num = v ? a * *v + b : a;
  Rational den = v ? c * *v + d : c;
  if (den.is_zero()) return std::nullopt;
  return num / den;
}

std::pair<Rational, Rational> MobiusMatrix::apply_pair(
    const std::pair<Rational, Rational>& p) const {
  std::pair<Rational, Rational> r{a * p.first + b * p.second, c * p.first + d * p.second};
  normalize_projective({&r.first, &r.second});
  return r;
}

std::string point_str(const std::optional<Rational>& v) { return v ? v->str() : "inf"; }

const std::vector<std::optional<Rational>>& Orbit::of(const std::string& var) const {
  for (size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == var) return values[i];
  throw DomainError("orbit has no variable '" + var + "'");
}

MobiusMatrix stage_matrix(const CascadeStage& stage,
                          const std::map<std::string, std::optional<Rational>>& earlier, long n,
                          const std::map<std::string, CoeffSeq>& seqs, long step) {
  std::set<std::string> used;
  for (const ExprPtr* e : {&stage.a, &stage.b, &stage.c, &stage.d})
    for (const auto& s : free_symbols(*e)) used.insert(s);
  int infinite = 0;
  for (const auto& [name, v] : earlier)
    if (!v && used.count(name)) ++infinite;
  if (infinite >= 2) throw DegenerateStage(step);

  if (infinite == 0) {
    std::map<std::string, Rational> env;
    env["n"] = Rational(n);
    for (const auto& [name, s] : seqs) env[name] = s.at(n);
    for (const auto& [name, v] : earlier)
      if (v) env[name] = *v;
    const Rational proto(0);
    return MobiusMatrix::from_entries(
        eval_expr(stage.a, env, proto), eval_expr(stage.b, env, proto),
        eval_expr(stage.c, env, proto), eval_expr(stage.d, env, proto), step);
  }

  // One infinite coefficient value: the limit matrix is rate-independent
  // (every surviving entry carries the same power of the rate), so a formal
  // 1/e substitution read off at the common leading order is exact.
  std::map<std::string, LaurentSeries> env;
  env["n"] = LaurentSeries::from_rational(Rational(n), kLimitWindow);
  for (const auto& [name, s] : seqs)
    env[name] = LaurentSeries::from_rational(s.at(n), kLimitWindow);
  for (const auto& [name, v] : earlier)
    env[name] = v ? LaurentSeries::from_rational(*v, kLimitWindow)
                  : LaurentSeries::monomial(Rational(1), -1, kLimitWindow);
  const LaurentSeries proto = LaurentSeries::from_rational(Rational(0), kLimitWindow);
  LaurentSeries e[4] = {eval_expr(stage.a, env, proto), eval_expr(stage.b, env, proto),
                        eval_expr(stage.c, env, proto), eval_expr(stage.d, env, proto)};
  int m = kExactHorizon;
  for (const auto& s : e)
    if (!s.is_zero()) m = std::min(m, s.lead());
  if (m == kExactHorizon) throw DegenerateStage(step);
  auto at = [&](const LaurentSeries& s) { return s.is_zero() ? Rational(0) : s.coeff(m); };
  return MobiusMatrix::from_entries(at(e[0]), at(e[1]), at(e[2]), at(e[3]), step);
}

namespace {

struct CascadeSetup {
  std::map<std::string, CoeffSeq> seqs;
  std::vector<Rational> init;  // per stage, in order
};

CascadeSetup cascade_setup(const CascadeSpec& spec, const RunSection& run) {
  RandomRationalGen gen(run.seed);
  CascadeSetup s;
  s.seqs = instantiate_params(spec.params, gen).seqs;
  for (const auto& st : spec.stages) s.init.push_back(resolved_init(run, st.var, gen));
  return s;
}

}  // namespace

Orbit cascade_direct(const CascadeSpec& spec, const RunSection& run, long n0) {
  CascadeSetup setup = cascade_setup(spec, run);
  Orbit orbit;
  orbit.route = "direct";
  size_t m = spec.stages.size();
  orbit.values.assign(m, {});
  std::vector<std::optional<Rational>> state(m);
  for (size_t i = 0; i < m; ++i) {
    orbit.vars.push_back(spec.stages[i].var);
    state[i] = setup.init[i];
    orbit.values[i].push_back(state[i]);
  }
  for (long k = 1; k <= run.N; ++k) {
    long n = n0 + k - 1;
    std::vector<std::optional<Rational>> next(m);
    std::map<std::string, std::optional<Rational>> earlier;
    for (size_t i = 0; i < m; ++i) {
      MobiusMatrix mat = stage_matrix(spec.stages[i], earlier, n, setup.seqs, k);
      next[i] = mat.apply(state[i]);
      earlier[spec.stages[i].var] = state[i];  // pre-step value for later stages
    }
    state = std::move(next);
    for (size_t i = 0; i < m; ++i) orbit.values[i].push_back(state[i]);
  }
  return orbit;
}

Orbit cascade_linearised(const CascadeSpec& spec, const RunSection& run, long n0) {
  CascadeSetup setup = cascade_setup(spec, run);
  Orbit orbit;
  orbit.route = "linearised";
  size_t m = spec.stages.size();
  orbit.values.assign(m, {});
  for (size_t i = 0; i < m; ++i) {
    orbit.vars.push_back(spec.stages[i].var);
    orbit.values[i].push_back(setup.init[i]);

    MobiusMatrix acc;  // identity
    std::pair<Rational, Rational> p0{setup.init[i], Rational(1)};
    for (long k = 1; k <= run.N; ++k) {
      long n = n0 + k - 1;
      std::map<std::string, std::optional<Rational>> earlier;
      for (size_t j = 0; j < i; ++j)
        earlier[spec.stages[j].var] = orbit.values[j][static_cast<size_t>(k - 1)];
      acc = stage_matrix(spec.stages[i], earlier, n, setup.seqs, k) * acc;
      orbit.values[i].push_back(pair_value(acc.apply_pair(p0), k));
    }
  }
  return orbit;
}

namespace {

struct HomogenizedUpdate {
  SparsePoly num, den;

  // Exact P1 x P1 value at (x, xp) with n and the parameters substituted.
  std::optional<Rational> value(const std::optional<Rational>& x,
                                const std::optional<Rational>& xp, long step) const {
    int d1 = std::max(num.degree("x"), den.degree("x"));
    int d2 = std::max(num.degree("xp"), den.degree("xp"));
    // Monomial x^ex xp^exp lifts to X^ex W^(d1-ex) Xp^exp Wp^(d2-exp) with
    // finite points (v : 1) and infinity (1 : 0).
    auto eval_h = [&](const SparsePoly& p) {
      Rational sum(0);
      for (const auto& [mono, coeff] : p.terms()) {
        unsigned ex = 0, exp = 0;
        for (const auto& [var, e] : mono) {
          if (var == "x") ex = e;
          else if (var == "xp") exp = e;
          else throw DomainError("unresolved symbol '" + var + "' in update");
        }
        if (!x && ex != static_cast<unsigned>(d1)) continue;
        if (!xp && exp != static_cast<unsigned>(d2)) continue;
        Rational t = coeff;
        if (x) t *= x->pow(ex);
        if (xp) t *= xp->pow(exp);
        sum += t;
      }
      return sum;
    };
    Rational nh = eval_h(num);
    Rational dh = eval_h(den);
    if (dh.is_zero()) {
      if (nh.is_zero()) throw SingularOrbit(static_cast<int>(step));
      return std::nullopt;
    }
    return nh / dh;
  }
};

HomogenizedUpdate substituted_update(const PolyFrac& f,
                                     const std::map<std::string, CoeffSeq>& seqs, long n,
                                     long step) {
  SparsePoly num = f.num().subst("n", Rational(n));
  SparsePoly den = f.den().subst("n", Rational(n));
  for (const auto& [name, s] : seqs) {
    Rational v = s.at(n);
    num = num.subst(name, v);
    den = den.subst(name, v);
  }
  if (den.is_zero()) throw SingularOrbit(static_cast<int>(step));
  return {std::move(num), std::move(den)};
}

}  // namespace

Orbit threepoint_direct(const MapSpec& spec, const RunSection& run) {
  RandomRationalGen gen(run.seed);
  auto seqs = instantiate_params(spec.params, gen).seqs;
  Rational x0 = run.x0 ? *run.x0 : gen.next();
  Rational x1 = run.x1 ? *run.x1 : gen.next();
  PolyFrac f = update_polyfrac(spec.update);

  Orbit orbit;
  orbit.route = "direct";
  orbit.vars = {"x"};
  orbit.values.assign(1, {});
  auto& v = orbit.values[0];
  v.push_back(x0);
  if (run.N >= 1) v.push_back(x1);
  for (long k = 2; k <= run.N; ++k) {
    long n = kFirstThreePointUpdate + (k - 2);
    HomogenizedUpdate h = substituted_update(f, seqs, n, k);
    v.push_back(h.value(v[static_cast<size_t>(k - 1)], v[static_cast<size_t>(k - 2)], k));
  }
  return orbit;
}

std::optional<CompanionCoeffs> recognize_companion(const MapSpec& spec) {
  PolyFrac f = update_polyfrac(spec.update);
  // Denominator: one monomial, exactly x * xp, rational coefficient.
  if (f.den().terms().size() != 1) return std::nullopt;
  const auto& [dmono, dcoeff] = *f.den().terms().begin();
  SparsePoly::Monomial xxp{{"x", 1u}, {"xp", 1u}};
  if (dmono != xxp) return std::nullopt;

  SparsePoly ap, bp, cp;
  for (const auto& [mono, coeff] : f.num().terms()) {
    unsigned ex = 0, exp = 0;
    SparsePoly::Monomial rest;
    for (const auto& [var, e] : mono) {
      if (var == "x") ex = e;
      else if (var == "xp") exp = e;
      else rest[var] = e;
    }
    if (ex > 1 || exp > 1 || (ex == 1 && exp == 0)) return std::nullopt;
    SparsePoly term = SparsePoly::constant(coeff / dcoeff);
    for (const auto& [var, e] : rest) term = term * SparsePoly::variable(var).pow(e);
    if (ex == 1)
      ap = ap + term;
    else if (exp == 1)
      bp = bp + term;
    else
      cp = cp + term;
  }
  return CompanionCoeffs{sparse_to_expr(ap), sparse_to_expr(bp), sparse_to_expr(cp)};
}

Orbit threepoint_companion(const MapSpec& spec, const RunSection& run) {
  auto cc = recognize_companion(spec);
  if (!cc)
    throw LinearisationUnavailable(0, "update is not (a*x*xp + b*xp + c)/(x*xp)");
  RandomRationalGen gen(run.seed);
  auto seqs = instantiate_params(spec.params, gen).seqs;
  Rational x0 = run.x0 ? *run.x0 : gen.next();
  Rational x1 = run.x1 ? *run.x1 : gen.next();

  Orbit orbit;
  orbit.route = "companion";
  orbit.vars = {"x"};
  orbit.values.assign(1, {});
  auto& v = orbit.values[0];
  v.push_back(x0);
  if (run.N >= 1) v.push_back(x1);

  // Rolling (Z(k-2), Z(k-1), Z(k)); the whole window may be rescaled freely.
  Rational zm(1), z0 = x0, zp = x0 * x1;
  for (long k = 2; k <= run.N; ++k) {
    long n = kFirstThreePointUpdate + (k - 2);
    std::map<std::string, Rational> env;
    env["n"] = Rational(n);
    for (const auto& [name, s] : seqs) env[name] = s.at(n);
    const Rational proto(0);
    Rational znew = eval_expr(cc->a, env, proto) * zp + eval_expr(cc->b, env, proto) * z0 +
                    eval_expr(cc->c, env, proto) * zm;
    if (zp.is_zero() && znew.is_zero()) throw SingularOrbit(static_cast<int>(k));
    v.push_back(zp.is_zero() ? std::optional<Rational>()
                             : std::optional<Rational>(znew / zp));
    zm = z0;
    z0 = zp;
    zp = znew;
    normalize_projective({&zm, &z0, &zp});
  }
  return orbit;
}

}  // namespace lintegra
