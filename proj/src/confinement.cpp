#include "lintegra/confinement.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "lintegra/expr.hpp"
#include "lintegra/laurent.hpp"
#include "lintegra/polyroots.hpp"
#include "lintegra/sparsepoly.hpp"

namespace lintegra {

namespace {

std::map<std::string, CoeffSeq> resolved_params(const std::map<std::string, ParamDef>& defs,
                                                RandomRationalGen& gen) {
  return instantiate_params(defs, gen).seqs;
}

// Rational roots in `var` after substituting `specvar` by r; empty when the
// specialized polynomial vanishes or has no root.
std::vector<Rational> roots_at(const SparsePoly& p, const std::string& var,
                               const std::string& specvar, const Rational& r) {
  SparsePoly q = p.subst(specvar, r);
  if (q.is_zero() || q.degree(var) < 1) return {};
  return rational_roots(q.as_unipoly(var));
}

// Roots that survive two independent specializations of the companion
// variable; roots that move with the specialization are not sites of the
// probed variable alone.
std::vector<Rational> stable_roots(const SparsePoly& p, const std::string& var,
                                   const std::string& specvar, const Rational& r1,
                                   const Rational& r2) {
  std::vector<Rational> a = roots_at(p, var, specvar, r1);
  std::vector<Rational> b = roots_at(p, var, specvar, r2);
  std::vector<Rational> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<SingularSite> override_sites(const SpecFile& spec, const std::string& default_var) {
  std::vector<SingularSite> sites;
  std::string var = spec.probe.variable.value_or(default_var);
  for (const auto& s : spec.probe.sites) {
    SingularSite site;
    site.variable = var;
    site.user_supplied = true;
    if (s != "inf") site.value = Rational::from_string(s);
    sites.push_back(std::move(site));
  }
  return sites;
}

LaurentSeries perturbed_start(const SingularSite& site, int T) {
  if (!site.value) return LaurentSeries::monomial(Rational(1), -1, T);
  return LaurentSeries::from_terms(0, {*site.value, Rational(1)}, kExactHorizon, T);
}

// lead() with exact zero read as "beyond any finite order".
int image_lead(const LaurentSeries& s) { return s.is_zero() ? kExactHorizon : s.lead(); }

Rational image_limit(const LaurentSeries& s) {
  return s.is_zero() ? Rational(0) : s.coeff(0);
}

}  // namespace

std::vector<SingularSite> find_singular_sites(const SpecFile& spec, long n0,
                                              std::uint64_t seed) {
  RandomRationalGen gen(seed);

  if (spec.kind == SpecKind::ThreePoint) {
    if (!spec.probe.sites.empty()) return override_sites(spec, "x");
    auto seqs = resolved_params(spec.map->params, gen);

    std::map<std::string, PolyFrac> env;
    env["x"] = PolyFrac::variable("x");
    env["xp"] = PolyFrac::variable("xp");
    env["n"] = PolyFrac::constant(Rational(n0));
    for (const auto& [name, s] : seqs) env[name] = PolyFrac::constant(s.at(n0));
    PolyFrac f = eval_expr(spec.map->update, env, PolyFrac());

    Rational r1 = gen.next();
    Rational r2 = gen.next_distinct_from(r1);

    // A site is a value of the current variable where the image either blows
    // up (denominator root) or forgets the down-shifted value (root of the
    // derivative-in-xp numerator), independently of that value.
    const SparsePoly& num = f.num();
    const SparsePoly& den = f.den();
    SparsePoly variation = num.derivative("xp") * den - num * den.derivative("xp");

    std::vector<Rational> values = stable_roots(den, "x", "xp", r1, r2);
    for (const Rational& v : stable_roots(variation, "x", "xp", r1, r2)) values.push_back(v);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());

    std::vector<SingularSite> sites;
    for (const Rational& v : values) sites.push_back({"x", v, false});
    sites.push_back({"x", std::nullopt, false});
    return sites;
  }

  if (spec.kind == SpecKind::Cascade) {
    const CascadeSpec& casc = *spec.cascade;
    if (!spec.probe.sites.empty()) return override_sites(spec, casc.stages.front().var);
    auto seqs = resolved_params(casc.params, gen);

    std::map<std::string, Rational> base;
    base["n"] = Rational(n0);
    for (const auto& [name, s] : seqs) base[name] = s.at(n0);

    std::map<std::string, Rational> draw1 = base, draw2 = base;
    for (const auto& st : casc.stages) {
      draw1[st.var] = gen.next();
      draw2[st.var] = gen.next_distinct_from(draw1[st.var]);
    }

    // Stage denominator c*v + d has the single root -d/c; keep it when it is
    // the same under both specializations of the earlier-stage values.
    std::vector<SingularSite> sites;
    for (const auto& st : casc.stages) {
      auto root_under = [&](const std::map<std::string, Rational>& env) -> std::optional<Rational> {
        try {
          Rational c = eval_expr(st.c, env, Rational(0));
          Rational d = eval_expr(st.d, env, Rational(0));
          if (c.is_zero()) return std::nullopt;
          return -d / c;
        } catch (const DomainError&) {
          return std::nullopt;
        }
      };
      auto u = root_under(draw1);
      auto v = root_under(draw2);
      if (u && v && *u == *v) sites.push_back({st.var, *u, false});
    }
    return sites;
  }

  throw DomainError("singular-site detection needs a three-point or cascade mapping");
}

ConfinementReport probe_confinement(const SpecFile& spec, const SingularSite& site,
                                    const ProbeConfig& cfg) {
  if (cfg.T < 2) throw DomainError("probe window T must be at least 2");
  if (cfg.n_max < 1) throw DomainError("probe length n_max must be at least 1");
  if (spec.kind != SpecKind::ThreePoint && spec.kind != SpecKind::Cascade)
    throw DomainError("confinement probing needs a three-point or cascade mapping");

  const int T = cfg.T;
  RandomRationalGen gen(cfg.seed);
  const auto& defs = spec.kind == SpecKind::ThreePoint ? spec.map->params : spec.cascade->params;
  auto seqs = resolved_params(defs, gen);

  std::pair<Rational, Rational> wit;
  if (cfg.witnesses) {
    wit = *cfg.witnesses;
  } else {
    wit.first = gen.next();
    wit.second = gen.next_distinct_from(wit.first);
  }
  if (wit.first == wit.second) throw DomainError("witness values must differ");

  ConfinementReport rep;
  rep.site = site;
  rep.witnesses_used = wit;

  const LaurentSeries proto = LaurentSeries::from_rational(Rational(0), T);

  // Per-step environments for the two witness runs.
  std::map<std::string, LaurentSeries> env[2];

  std::vector<const ExprPtr*> updates;   // evaluated jointly each step
  std::vector<std::string> update_vars;  // target variable of each update
  std::string probed = site.variable;

  if (spec.kind == SpecKind::ThreePoint) {
    if (site.variable != "x")
      throw DomainError("three-point probes perturb the current variable x");
    for (int r = 0; r < 2; ++r) {
      env[r]["xp"] = LaurentSeries::from_rational(r == 0 ? wit.first : wit.second, T);
      env[r]["x"] = perturbed_start(site, T);
    }
    updates.push_back(&spec.map->update);
    update_vars.push_back("x");
  } else {
    const auto& stages = spec.cascade->stages;
    rep.witness_waived = stages.size() == 1;
    bool found = false;
    int other = 0;
    for (const auto& st : stages) {
      if (st.var == probed) {
        for (int r = 0; r < 2; ++r) env[r][st.var] = perturbed_start(site, T);
        found = true;
      } else {
        Rational w0 = wit.first + Rational(other);
        Rational w1 = wit.second + Rational(other);
        env[0][st.var] = LaurentSeries::from_rational(w0, T);
        env[1][st.var] = LaurentSeries::from_rational(w1, T);
        ++other;
      }
      updates.push_back(&st.update);
      update_vars.push_back(st.var);
    }
    if (!found) throw DomainError("probe variable '" + probed + "' is not a cascade stage");
  }

  int step = 0;
  try {
    for (int k = 0; k <= cfg.n_max; ++k) {
      step = k;
      long n = cfg.n0 + k;
      LaurentSeries nval = LaurentSeries::from_rational(Rational(n), T);
      LaurentSeries img[2];
      for (int r = 0; r < 2; ++r) {
        env[r]["n"] = nval;
        for (const auto& [name, s] : seqs)
          env[r][name] = LaurentSeries::from_rational(s.at(n), T);
        // All stages read the pre-step values.
        std::vector<LaurentSeries> next(updates.size());
        for (size_t i = 0; i < updates.size(); ++i)
          next[i] = eval_expr(*updates[i], env[r], proto);
        if (spec.kind == SpecKind::ThreePoint) {
          env[r]["xp"] = env[r]["x"];
          env[r]["x"] = next[0];
          img[r] = next[0];
        } else {
          for (size_t i = 0; i < updates.size(); ++i) {
            if (update_vars[i] == probed) img[r] = next[i];
            env[r][update_vars[i]] = next[i];
          }
        }
      }
      rep.leads.push_back(image_lead(img[0]));
      if (k == 0) continue;
      // Recovery: both runs finite and the limit remembers the free data.
      if (image_lead(img[0]) < 0 || image_lead(img[1]) < 0) continue;
      Rational c0 = image_limit(img[0]);
      Rational c1 = image_limit(img[1]);
      if (rep.witness_waived || c0 != c1) {
        rep.status = ConfineStatus::Confined;
        rep.step = k;
        if (rep.witness_waived)
          rep.detail = "image " + std::to_string(k) +
                       " is finite; the map carries no free data to recover";
        else
          rep.detail = "image " + std::to_string(k) + " is finite with witness-dependent limit " +
                       c0.str() + " / " + c1.str();
        return rep;
      }
    }
  } catch (const PrecisionExhausted&) {
    rep.status = ConfineStatus::PrecisionLoss;
    rep.step = step;
    rep.detail = "series window exhausted at image " + std::to_string(step) +
                 "; rerun with a larger T";
    return rep;
  }

  rep.status = ConfineStatus::NotConfined;
  rep.step = cfg.n_max;
  rep.detail = "no finite witness-dependent image among steps 1.." + std::to_string(cfg.n_max);
  return rep;
}

}  // namespace lintegra
