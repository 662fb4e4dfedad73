#include "lintegra/degree_growth.hpp"

#include <cmath>
#include <sstream>

#include "lintegra/errors.hpp"
#include "lintegra/ratfun.hpp"

namespace lintegra {

namespace {

template <class R>
using Fun = RatFun<R>;

template <class R>
Fun<R> lift(const Rational& v, const R& proto) {
  return Fun<R>::constant(ring_from_rational(proto, v));
}

// One reduced-iteration run. Degrees are max(num, den) degrees of the
// dehomogenized reduced ratio, which equals the homogeneous pair degree.
template <class R>
std::vector<int> run_degrees(const SpecFile& spec, int n_max, RandomRationalGen& gen,
                             const R& proto,
                             std::map<std::string, Rational>& record) {
  auto deg_of = [](const Fun<R>& f) { return f.degree(); };
  std::vector<int> degrees;

  if (spec.kind == SpecKind::ThreePoint) {
    const MapSpec& map = *spec.map;
    ParamInstance inst = instantiate_params(map.params, gen);
    record = inst.random_values;
    Rational p = gen.next();
    record["p"] = p;

    Fun<R> prev = lift<R>(p, proto);
    Fun<R> cur = Fun<R>::variable();
    degrees.push_back(0);
    if (n_max >= 1) degrees.push_back(1);
    for (long n = 1; static_cast<int>(degrees.size()) <= n_max; ++n) {
      std::map<std::string, Fun<R>> env = {
          {"x", cur}, {"xp", prev}, {"n", lift<R>(Rational(n), proto)}};
      for (const auto& [name, seq] : inst.seqs) env[name] = lift<R>(seq.at(n), proto);
      Fun<R> next;
      try {
        next = eval_expr<Fun<R>>(map.update, env, Fun<R>());
      } catch (const DomainError&) {
        throw SingularOrbit(n + 1);
      }
      degrees.push_back(deg_of(next));
      prev = std::move(cur);
      cur = std::move(next);
    }
    return degrees;
  }

  if (spec.kind == SpecKind::Cascade) {
    const CascadeSpec& cas = *spec.cascade;
    ParamInstance inst = instantiate_params(cas.params, gen);
    record = inst.random_values;
    size_t last = cas.stages.size() - 1;

    // earlier stages carry the degree-1 datum s (shifted apart for
    // genericity); the last stage starts from the degree-0 datum p
    std::map<std::string, Fun<R>> state;
    for (size_t i = 0; i < cas.stages.size(); ++i) {
      const std::string& var = cas.stages[i].var;
      if (i == last && cas.stages.size() > 1) {
        Rational p = gen.next();
        record["p"] = p;
        state[var] = lift<R>(p, proto);
      } else {
        Rational shift = gen.next();
        record["shift." + var] = shift;
        state[var] = Fun<R>::variable() + lift<R>(shift, proto);
      }
    }
    degrees.push_back(deg_of(state[cas.stages[last].var]));
    for (long n = 0; static_cast<int>(degrees.size()) <= n_max; ++n) {
      std::map<std::string, Fun<R>> env = state;
      env["n"] = lift<R>(Rational(n), proto);
      for (const auto& [name, seq] : inst.seqs) env[name] = lift<R>(seq.at(n), proto);
      std::map<std::string, Fun<R>> next;
      try {
        for (const auto& stage : cas.stages)
          next[stage.var] = eval_expr<Fun<R>>(stage.update, env, Fun<R>());
      } catch (const DomainError&) {
        throw SingularOrbit(n + 1);
      }
      state = std::move(next);
      degrees.push_back(deg_of(state[cas.stages[last].var]));
    }
    return degrees;
  }

  if (spec.kind == SpecKind::Projective) {
    const ProjectiveSpec& proj = *spec.projective;
    ParamInstance inst = instantiate_params(proj.params, gen);
    record = inst.random_values;
    int dim = proj.dim;

    // ratios x_mu = X_mu / X_0, mu = 1..dim-1, all degree-1 data
    std::vector<Fun<R>> state(dim - 1);
    for (int mu = 0; mu + 1 < dim; ++mu) {
      Rational shift = gen.next();
      record["shift.x" + std::to_string(mu + 1)] = shift;
      state[mu] = Fun<R>::variable() + lift<R>(shift, proto);
    }
    degrees.push_back(deg_of(state.back()));
    for (long n = 0; static_cast<int>(degrees.size()) <= n_max; ++n) {
      std::map<std::string, Fun<R>> env = {{"n", lift<R>(Rational(n), proto)}};
      for (const auto& [name, seq] : inst.seqs) env[name] = lift<R>(seq.at(n), proto);
      auto entry = [&](int i, int j) {
        return eval_expr<Fun<R>>(proj.entries[i][j], env, Fun<R>());
      };
      auto row = [&](int i) {
        Fun<R> acc = entry(i, 0);
        for (int j = 1; j < dim; ++j) acc = acc + entry(i, j) * state[j - 1];
        return acc;
      };
      Fun<R> den = row(0);
      if (den.is_zero()) throw SingularOrbit(n + 1);
      std::vector<Fun<R>> next(dim - 1);
      for (int mu = 1; mu < dim; ++mu) next[mu - 1] = row(mu) / den;
      state = std::move(next);
      degrees.push_back(deg_of(state.back()));
    }
    return degrees;
  }

  throw DomainError("degree growth needs a three-point, cascade, or projective mapping");
}

}  // namespace

DegreeSequence degree_sequence(const SpecFile& spec, int n_max, DegreeMode mode,
                               std::uint64_t seed, std::uint64_t prime) {
  if (n_max < 2) throw DomainError("degree_sequence requires n_max >= 2");
  DegreeSequence out;
  out.mode = mode;
  out.seed = seed;
  RandomRationalGen gen(seed);
  if (mode == DegreeMode::Exact) {
    out.degrees = run_degrees<Rational>(spec, n_max, gen, Rational(0), out.specialization);
  } else {
    out.prime = prime;
    if (prime == kPrimeDefault) {
      out.degrees = run_degrees<FpDefault>(spec, n_max, gen, FpDefault(0), out.specialization);
    } else if (prime == kPrimeAlt1) {
      out.degrees = run_degrees<FpAlt1>(spec, n_max, gen, FpAlt1(0), out.specialization);
    } else if (prime == kPrimeAlt2) {
      out.degrees = run_degrees<FpAlt2>(spec, n_max, gen, FpAlt2(0), out.specialization);
    } else {
      throw DomainError("unsupported modular prime");
    }
  }
  return out;
}

GrowthClass classify_growth(const DegreeSequence& seq) {
  GrowthClass out;
  const auto& d = seq.degrees;
  if (d.size() < 6) {
    out.kind = GrowthKind::Undetermined;
    out.evidence = "need at least 6 degrees, have " + std::to_string(d.size());
    return out;
  }
  int n_max = static_cast<int>(d.size()) - 1;
  size_t transient = static_cast<size_t>((n_max + 2) / 3);  // ceil(n_max / 3)
  std::vector<long> window(d.begin() + transient, d.end());
  std::ostringstream ev;
  ev << "transient " << transient << ", window";
  for (long v : window) ev << ' ' << v;

  if (window.size() < 2) {
    out.kind = GrowthKind::Undetermined;
    out.evidence = ev.str() + "; window too short";
    return out;
  }

  auto all_zero = [](const std::vector<long>& v) {
    for (long x : v)
      if (x != 0) return false;
    return true;
  };
  std::vector<long> diff = window;
  for (int k = 1; k <= 4 && diff.size() >= 2; ++k) {
    std::vector<long> next(diff.size() - 1);
    for (size_t i = 0; i + 1 < diff.size(); ++i) next[i] = diff[i + 1] - diff[i];
    if (all_zero(next)) {
      if (k == 1) out.kind = GrowthKind::Constant;
      else if (k == 2) out.kind = GrowthKind::Linear;
      else {
        out.kind = GrowthKind::Polynomial;
        out.order = k - 1;
      }
      out.evidence = ev.str() + "; differences of order " + std::to_string(k) + " vanish";
      return out;
    }
    diff = std::move(next);
  }

  bool exponential = true;
  for (size_t i = 0; i + 1 < window.size(); ++i) {
    if (window[i] <= 0 ||
        static_cast<double>(window[i + 1]) < 1.15 * static_cast<double>(window[i])) {
      exponential = false;
      break;
    }
  }
  if (exponential) {
    out.kind = GrowthKind::Exponential;
    out.evidence = ev.str() + "; ratio >= 1.15 throughout";
    return out;
  }
  out.kind = GrowthKind::Undetermined;
  out.evidence = ev.str() + "; no vanishing differences up to order 4, ratio test failed";
  return out;
}

std::string growth_str(const GrowthClass& g) {
  switch (g.kind) {
    case GrowthKind::Constant: return "Constant";
    case GrowthKind::Linear: return "Linear";
    case GrowthKind::Polynomial: return "Polynomial(" + std::to_string(g.order) + ")";
    case GrowthKind::Exponential: return "Exponential";
    case GrowthKind::Undetermined: return "Undetermined";
  }
  return "?";
}

CrossCheck cross_check(const SpecFile& spec, int n_max, std::uint64_t seed) {
  CrossCheck out;
  out.runs.push_back(degree_sequence(spec, n_max, DegreeMode::Exact, seed));
  out.runs.push_back(degree_sequence(spec, n_max, DegreeMode::Exact, seed + 1));
  for (std::uint64_t prime : {kPrimeDefault, kPrimeAlt1})
    for (std::uint64_t s : {seed, seed + 1})
      out.runs.push_back(degree_sequence(spec, n_max, DegreeMode::Modular, s, prime));

  size_t len = out.runs.front().degrees.size();
  out.consensus.assign(len, 0);
  for (size_t i = 0; i < len; ++i) {
    int lo = out.runs.front().degrees[i], hi = lo;
    for (const auto& run : out.runs) {
      lo = std::min(lo, run.degrees[i]);
      hi = std::max(hi, run.degrees[i]);
    }
    out.consensus[i] = hi;
    if (lo != hi) out.flagged.push_back(static_cast<int>(i));
  }
  return out;
}

}  // namespace lintegra
