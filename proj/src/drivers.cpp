#include "lintegra/drivers.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lintegra/cascade.hpp"
#include "lintegra/coeffseq.hpp"
#include "lintegra/confinement.hpp"
#include "lintegra/continuous.hpp"
#include "lintegra/degree_growth.hpp"
#include "lintegra/derivmatch.hpp"
#include "lintegra/errors.hpp"
#include "lintegra/expr.hpp"
#include "lintegra/ratfun.hpp"
#include "lintegra/rational.hpp"
#include "lintegra/rk.hpp"

namespace lintegra {

namespace {

// --- raw-section access ----------------------------------------------------

std::optional<std::string> first_value(const RawSection& sec, const std::string& key) {
  for (const auto& [k, v] : sec.entries)
    if (k == key) return v;
  return std::nullopt;
}

std::string require_value(const RawSection& sec, const std::string& key) {
  auto v = first_value(sec, key);
  if (!v) throw DomainError("[" + sec.name + "] section is missing key '" + key + "'");
  return *v;
}

// --- literal parsing ---------------------------------------------------------

Rational parse_rational(const std::string& text, const std::string& what) {
  try {
    return Rational::from_string(text);
  } catch (const DomainError&) {
    throw DomainError(what + ": expected a rational literal, got '" + text + "'");
  }
}

// Accepts exact "p/q" as well as decimal/scientific literals.
double parse_number(const std::string& text, const std::string& what) {
  if (text.find('/') != std::string::npos)
    return parse_rational(text, what).to_double();
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
    if (used != text.size())
      throw DomainError(what + ": trailing characters in number '" + text + "'");
    return v;
  } catch (const std::invalid_argument&) {
    throw DomainError(what + ": expected a number, got '" + text + "'");
  } catch (const std::out_of_range&) {
    throw DomainError(what + ": number out of range: '" + text + "'");
  }
}

long parse_long(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    long v = std::stol(text, &used);
    if (used != text.size())
      throw DomainError(what + ": trailing characters in integer '" + text + "'");
    return v;
  } catch (const std::invalid_argument&) {
    throw DomainError(what + ": expected an integer, got '" + text + "'");
  } catch (const std::out_of_range&) {
    throw DomainError(what + ": integer out of range: '" + text + "'");
  }
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  long v = parse_long(text, what);
  if (v < 0) throw DomainError(what + ": expected a nonnegative integer, got '" + text + "'");
  return static_cast<std::uint64_t>(v);
}

double number_or(const RawSection& sec, const std::string& key, double fallback) {
  auto v = first_value(sec, key);
  return v ? parse_number(*v, key) : fallback;
}

long long_or(const RawSection& sec, const std::string& key, long fallback) {
  auto v = first_value(sec, key);
  return v ? parse_long(*v, key) : fallback;
}

// --- analysis guard ----------------------------------------------------------

template <typename F>
bool guarded(Json& analysis, F&& body) {
  try {
    body();
    return true;
  } catch (const std::exception& e) {
    analysis["error"] = json_error(e);
    return false;
  }
}

RKConfig rk_config(const RawSection& sec, const DriveOptions& opt, double t0_default,
                   double t1_default) {
  RKConfig cfg;
  cfg.t0 = number_or(sec, "t0", t0_default);
  cfg.t1 = number_or(sec, "t1", t1_default);
  cfg.rtol = opt.rtol.value_or(number_or(sec, "rtol", cfg.rtol));
  cfg.atol = opt.atol.value_or(number_or(sec, "atol", cfg.atol));
  return cfg;
}

Json rk_config_echo(const RKConfig& cfg) {
  Json out;
  out["t0"] = cfg.t0;
  out["t1"] = cfg.t1;
  out["rtol"] = cfg.rtol;
  out["atol"] = cfg.atol;
  return out;
}

}  // namespace

// --- degree growth -----------------------------------------------------------

DriveResult drive_degree_growth(const SpecFile& spec, const DriveOptions& opt) {
  if (spec.kind == SpecKind::DerivMatch || spec.kind == SpecKind::Ode)
    throw DomainError("degree growth needs a [mapping] spec");
  DegreeMode mode = DegreeMode::Exact;
  if (opt.mode) {
    if (*opt.mode == "exact") mode = DegreeMode::Exact;
    else if (*opt.mode == "modular") mode = DegreeMode::Modular;
    else throw DomainError("unknown degree mode '" + *opt.mode + "' (exact | modular)");
  }
  if (opt.format != "json" && opt.format != "csv")
    throw DomainError("unknown output format '" + opt.format + "' (json | csv)");
  int n_max = opt.n_max.value_or(mode == DegreeMode::Exact ? kExactNmaxDefault
                                                           : kModularNmaxDefault);
  if (n_max < 1) throw DomainError("n_max must be at least 1");
  std::uint64_t seed = opt.seed.value_or(1);
  std::uint64_t prime = opt.prime.value_or(kPrimeDefault);

  Json config;
  config["spec"] = opt.spec_path;
  config["mode"] = mode == DegreeMode::Exact ? "exact" : "modular";
  config["n_max"] = n_max;
  config["seed"] = seed;
  if (mode == DegreeMode::Modular) config["prime"] = prime;
  config["cross_check"] = opt.cross_check;
  config["format"] = opt.format;

  Json analysis = Json::object();
  DegreeSequence seq;
  bool have_seq = false;
  bool ok = guarded(analysis, [&] {
    seq = degree_sequence(spec, n_max, mode, seed, prime);
    GrowthClass cls = classify_growth(seq);
    analysis = json_degree(seq, cls);
    have_seq = true;
    if (opt.cross_check) {
      CrossCheck cc = cross_check(spec, n_max, seed);
      Json sub;
      sub["runs"] = cc.runs.size();
      sub["consensus"] = cc.consensus;
      sub["flagged"] = cc.flagged;
      analysis["cross_check"] = std::move(sub);
    }
  });

  DriveResult res;
  res.report = report_envelope("degree-growth", std::move(config), std::move(analysis));
  res.analysis_ok = ok;
  res.rendered = (opt.format == "csv" && have_seq) ? degree_csv(seq) : render_json(res.report);
  return res;
}

// --- confinement -------------------------------------------------------------

DriveResult drive_confine(const SpecFile& spec, const DriveOptions& opt) {
  if (spec.kind != SpecKind::ThreePoint && spec.kind != SpecKind::Cascade)
    throw DomainError("confinement probing needs a three-point or cascade mapping");
  if (opt.format != "json") throw DomainError("confine reports are JSON only");
  ProbeConfig cfg = ProbeConfig::from_section(spec.probe);
  if (opt.T) cfg.T = *opt.T;
  if (opt.n_max) cfg.n_max = *opt.n_max;
  if (opt.seed) cfg.seed = *opt.seed;
  if (cfg.T < 2 || cfg.n_max < 1) throw DomainError("probe needs T >= 2 and n_max >= 1");

  std::vector<SingularSite> sites = find_singular_sites(spec, cfg.n0, cfg.seed);
  if (opt.site) {
    std::vector<SingularSite> picked;
    for (const auto& s : sites)
      if (s.str() == *opt.site || json_point(s.value) == *opt.site) picked.push_back(s);
    if (picked.empty())
      throw DomainError("no detected site matches '" + *opt.site + "'");
    sites = std::move(picked);
  }
  if (sites.empty())
    throw DomainError("no stable singular sites detected; list sites in the [probe] section");

  Json config;
  config["spec"] = opt.spec_path;
  config["T"] = cfg.T;
  config["n_max"] = cfg.n_max;
  config["n0"] = cfg.n0;
  config["seed"] = cfg.seed;
  if (opt.site) config["site"] = *opt.site;
  if (cfg.witnesses)
    config["witnesses"] = Json::array({json_rational(cfg.witnesses->first),
                                       json_rational(cfg.witnesses->second)});

  bool ok = true;
  Json entries = Json::array();
  for (const auto& site : sites) {
    Json entry = Json::object();
    bool good = guarded(entry, [&] { entry = json_confinement(probe_confinement(spec, site, cfg)); });
    if (!good) {
      entry["site"] = site.str();
      ok = false;
    }
    entries.push_back(std::move(entry));
  }
  Json analysis;
  analysis["sites"] = std::move(entries);

  DriveResult res;
  res.report = report_envelope("confine", std::move(config), std::move(analysis));
  res.analysis_ok = ok;
  res.rendered = render_json(res.report);
  return res;
}

// --- cascade route comparison --------------------------------------------------

namespace {

Orbit run_route(const SpecFile& spec, const RunSection& run, bool linearised) {
  if (spec.kind == SpecKind::Cascade)
    return linearised ? cascade_linearised(*spec.cascade, run) : cascade_direct(*spec.cascade, run);
  return linearised ? threepoint_companion(*spec.map, run) : threepoint_direct(*spec.map, run);
}

}  // namespace

DriveResult drive_cascade(const SpecFile& spec, const DriveOptions& opt) {
  if (spec.kind != SpecKind::ThreePoint && spec.kind != SpecKind::Cascade)
    throw DomainError("route comparison needs a three-point or cascade mapping");
  if (opt.format != "json") throw DomainError("cascade reports are JSON only");
  std::string route = opt.route.value_or("both");
  if (route != "direct" && route != "linearised" && route != "both")
    throw DomainError("unknown route '" + route + "' (direct | linearised | both)");

  RunSection run = spec.run;
  if (opt.N) run.N = *opt.N;
  if (opt.seed) run.seed = *opt.seed;
  if (run.N < 1) throw DomainError("orbit length must be at least 1");
  if (spec.kind == SpecKind::ThreePoint && (!run.x0 || !run.x1))
    throw DomainError("three-point runs need x0 and x1 in the [run] section");
  if (spec.kind == SpecKind::Cascade)
    for (const auto& st : spec.cascade->stages)
      if (!run.init.count(st.var))
        throw DomainError("missing initial value init." + st.var + " in the [run] section");

  Json config;
  config["spec"] = opt.spec_path;
  config["N"] = run.N;
  config["seed"] = run.seed;
  config["route"] = route;

  Json analysis = Json::object();
  bool match = true;
  bool ok = guarded(analysis, [&] {
    if (route != "linearised") analysis["direct"] = json_orbit(run_route(spec, run, false));
    if (route != "direct") analysis["linearised"] = json_orbit(run_route(spec, run, true));
    if (route == "both") {
      const Json& d = analysis["direct"]["values"];
      const Json& l = analysis["linearised"]["values"];
      match = (d == l);
      analysis["match"] = match;
      if (!match) {
        for (auto it = d.begin(); it != d.end() && analysis.count("first_mismatch") == 0; ++it) {
          const Json& dv = it.value();
          const Json& lv = l.at(it.key());
          for (std::size_t k = 0; k < std::min(dv.size(), lv.size()); ++k)
            if (dv[k] != lv[k]) {
              Json mm;
              mm["variable"] = it.key();
              mm["step"] = k;
              analysis["first_mismatch"] = std::move(mm);
              break;
            }
        }
      }
    }
  });

  DriveResult res;
  res.report = report_envelope("cascade", std::move(config), std::move(analysis));
  res.analysis_ok = ok && match;
  res.rendered = render_json(res.report);
  return res;
}

// --- discrete derivative matching ---------------------------------------------

DriveResult drive_derivmatch(const SpecFile& spec, const DriveOptions& opt) {
  if (!spec.derivmatch)
    throw DomainError("this spec has no [derivmatch] section");
  if (opt.format != "json") throw DomainError("derivmatch reports are JSON only");
  const RawSection& sec = *spec.derivmatch;

  CoeffSeq g = CoeffSeq::closed(parse_expr(require_value(sec, "g"), {"n"}));
  Rational a(0);
  if (auto v = first_value(sec, "a")) a = parse_rational(*v, "a");
  Rational M = parse_rational(require_value(sec, "M"), "M");
  Rational x0 = parse_rational(require_value(sec, "x0"), "x0");
  Rational x1 = parse_rational(require_value(sec, "x1"), "x1");
  long N = opt.N.value_or(long_or(sec, "N", 30));
  if (N < 3) throw DomainError("derivmatch orbits need N >= 3");
  long oracle_n = long_or(sec, "oracle_n", 0);
  long oracle_samples = long_or(sec, "oracle_samples", 20);
  std::uint64_t oracle_seed =
      opt.seed.value_or(first_value(sec, "oracle_seed")
                            ? parse_u64(*first_value(sec, "oracle_seed"), "oracle_seed")
                            : 11);

  Json config;
  config["spec"] = opt.spec_path;
  config["g"] = require_value(sec, "g");
  config["a"] = json_rational(a);
  config["M"] = json_rational(M);
  config["x0"] = json_rational(x0);
  config["x1"] = json_rational(x1);
  config["N"] = N;
  config["oracle_n"] = oracle_n;
  config["oracle_samples"] = oracle_samples;
  config["oracle_seed"] = oracle_seed;

  Json analysis = Json::object();
  bool ok = guarded(analysis, [&] {
    auto [f, lin] = build_g_example(g, a);
    f.M = M;
    OracleReport oracle =
        consistency_oracle(f, lin, oracle_n, static_cast<int>(oracle_samples), oracle_seed);

    Rational x2 = solve_next(f, M, x0, x1, 1);
    Rational K = compute_K(lin, x0, x1, x2, 1);
    Orbit orbit = propagate_linear(lin, K, x0, x1, N);
    ConservationReport cons = verify_conservation(f, orbit);

    const auto& xs = orbit.values[0];
    bool k_constant = true;
    Json k_break;
    for (std::size_t k = 1; k + 1 < xs.size() && k_constant; ++k) {
      if (!xs[k - 1] || !xs[k] || !xs[k + 1]) continue;
      Rational Kk = compute_K(lin, *xs[k - 1], *xs[k], *xs[k + 1], static_cast<long>(k));
      if (!(Kk == K)) {
        k_constant = false;
        k_break["step"] = k;
        k_break["value"] = json_rational(Kk);
      }
    }

    Json orbit_json = Json::array();
    for (const auto& v : xs) orbit_json.push_back(json_point(v));

    analysis["K"] = json_rational(K);
    analysis["K_constant"] = k_constant;
    if (!k_constant) analysis["K_break"] = std::move(k_break);
    analysis["conservation"] = json_conservation(cons);
    analysis["oracle"] = json_oracle(oracle);
    analysis["orbit"] = std::move(orbit_json);
    if (!oracle.pass || !cons.all_equal || !k_constant)
      throw DomainError("derivative-matching checks failed (see oracle / conservation / K_constant)");
  });

  DriveResult res;
  res.report = report_envelope("derivmatch", std::move(config), std::move(analysis));
  res.analysis_ok = ok;
  res.rendered = render_json(res.report);
  return res;
}

// --- continuous systems ----------------------------------------------------------

namespace {

DriveResult drive_ode_hamiltonian(const RawSection& sec, const DriveOptions& opt) {
  HamiltonianHH ic;
  std::optional<std::uint64_t> ic_seed;
  if (first_value(sec, "ic").value_or("") == "random") {
    std::uint64_t seed = opt.seed.value_or(
        first_value(sec, "seed") ? parse_u64(*first_value(sec, "seed"), "seed") : 1);
    ic_seed = seed;
    RandomRationalGen gen(seed);
    ic.x = gen.next_bounded_half().to_double();
    ic.y = gen.next_bounded_half().to_double();
    ic.px = gen.next_bounded_half().to_double();
    ic.py = gen.next_bounded_half().to_double();
  } else {
    ic.x = parse_number(require_value(sec, "x"), "x");
    ic.y = parse_number(require_value(sec, "y"), "y");
    ic.px = parse_number(require_value(sec, "px"), "px");
    ic.py = parse_number(require_value(sec, "py"), "py");
  }
  RKConfig cfg = rk_config(sec, opt, 0.0, 2.0);
  std::optional<double> drift_tol;
  if (auto v = first_value(sec, "drift_tol")) drift_tol = parse_number(*v, "drift_tol");

  Json config;
  config["spec"] = opt.spec_path;
  config["kind"] = "hamiltonian";
  config["rk"] = rk_config_echo(cfg);
  if (ic_seed) config["ic_seed"] = *ic_seed;
  config["ic"] = Json::array({ic.x, ic.y, ic.px, ic.py});
  if (drift_tol) config["drift_tol"] = *drift_tol;

  Json analysis = Json::object();
  bool within = true;
  bool ok = guarded(analysis, [&] {
    Trajectory traj = hamiltonian_flow(ic, cfg);
    DriftPair drift = invariant_drift(traj);
    analysis["kind"] = "hamiltonian";
    analysis["energy_initial"] = hh_energy(ic);
    analysis["second_invariant_initial"] = hh_second_invariant(ic);
    analysis["drift_energy"] = drift.dH;
    analysis["drift_second_invariant"] = drift.dC;
    analysis["trajectory"] = json_trajectory(traj);
    if (traj.blew_up) within = false;
    if (drift_tol && (drift.dH > *drift_tol || drift.dC > *drift_tol)) within = false;
    analysis["within_tol"] = within;
    if (!within) throw DomainError("invariant drift exceeded the configured tolerance");
  });

  DriveResult res;
  res.report = report_envelope("ode", std::move(config), std::move(analysis));
  res.analysis_ok = ok && within;
  res.rendered = render_json(res.report);
  return res;
}

DriveResult drive_ode_riccati(const RawSection& sec, const SpecFile& spec,
                              const DriveOptions& opt) {
  RiccatiChain chain;
  std::set<std::string> declared = {"t"};
  for (const auto& [k, v] : sec.entries)
    if (k == "var") declared.insert(v);
  for (const auto& [k, v] : sec.entries) {
    if (k == "var") {
      chain.stages.push_back(RiccatiStage{v, nullptr, nullptr, nullptr});
    } else if (k == "a" || k == "b" || k == "c") {
      if (chain.stages.empty())
        throw DomainError("coefficient '" + k + "' appears before any var");
      RiccatiStage& st = chain.stages.back();
      ExprPtr e = parse_expr(v, declared);
      (k == "a" ? st.a : k == "b" ? st.b : st.c) = std::move(e);
    }
  }
  for (auto& st : chain.stages) {
    if (!st.a) throw DomainError("stage " + st.var + " is missing its a coefficient");
    if (!st.b) st.b = expr_const(Rational(0));
    if (!st.c) st.c = expr_const(Rational(0));
  }
  validate_chain(chain);

  std::vector<double> ic;
  for (const auto& st : chain.stages) {
    if (auto v = first_value(sec, "init." + st.var)) {
      ic.push_back(parse_number(*v, "init." + st.var));
    } else if (auto it = spec.run.init.find(st.var); it != spec.run.init.end()) {
      ic.push_back(it->second.to_double());
    } else {
      throw DomainError("missing initial value init." + st.var);
    }
  }

  std::string method = opt.route.value_or(first_value(sec, "method").value_or("both"));
  if (method != "direct" && method != "linearised" && method != "both")
    throw DomainError("unknown method '" + method + "' (direct | linearised | both)");
  RKConfig cfg = rk_config(sec, opt, 0.0, 1.0);
  std::optional<double> gap_tol;
  if (auto v = first_value(sec, "gap_tol")) gap_tol = parse_number(*v, "gap_tol");

  Json config;
  config["spec"] = opt.spec_path;
  config["kind"] = "riccati";
  config["method"] = method;
  config["rk"] = rk_config_echo(cfg);
  config["ic"] = ic;
  if (gap_tol) config["gap_tol"] = *gap_tol;

  Json analysis = Json::object();
  bool within = true;
  bool ok = guarded(analysis, [&] {
    analysis["kind"] = "riccati";
    Json vars = Json::array();
    for (const auto& st : chain.stages) vars.push_back(st.var);
    analysis["vars"] = std::move(vars);
    std::optional<Trajectory> direct, lin;
    if (method != "linearised") {
      direct = riccati_chain_integrate(chain, ic, cfg, RiccatiMethod::Direct);
      analysis["direct"] = json_trajectory(*direct);
    }
    if (method != "direct") {
      lin = riccati_chain_integrate(chain, ic, cfg, RiccatiMethod::Linearised);
      analysis["linearised"] = json_trajectory(*lin);
    }
    if (direct && lin) {
      double gap = 0;
      std::size_t common = 0;
      std::size_t n = std::min(direct->times.size(), lin->times.size());
      for (std::size_t i = 0; i < n && direct->times[i] == lin->times[i]; ++i) {
        for (std::size_t d = 0; d < chain.stages.size(); ++d)
          gap = std::max(gap, std::abs(direct->states[i][d] - lin->states[i][d]));
        ++common;
      }
      analysis["max_gap"] = gap;
      analysis["common_samples"] = common;
      if (gap_tol && (common == 0 || gap > *gap_tol)) within = false;
      analysis["within_tol"] = within;
      if (!within) throw DomainError("route gap exceeded the configured tolerance");
    }
  });

  DriveResult res;
  res.report = report_envelope("ode", std::move(config), std::move(analysis));
  res.analysis_ok = ok && within;
  res.rendered = render_json(res.report);
  return res;
}

DriveResult drive_ode_projective(const RawSection& sec, const DriveOptions& opt) {
  std::array<std::array<double, 2>, 2> A{};
  A[0][0] = parse_number(require_value(sec, "a00"), "a00");
  A[0][1] = parse_number(require_value(sec, "a01"), "a01");
  A[1][0] = parse_number(require_value(sec, "a10"), "a10");
  A[1][1] = parse_number(require_value(sec, "a11"), "a11");
  std::array<double, 2> ic{};
  ic[0] = parse_number(require_value(sec, "ic0"), "ic0");
  ic[1] = parse_number(require_value(sec, "ic1"), "ic1");
  RKConfig cfg = rk_config(sec, opt, 0.0, 1.0);
  std::optional<double> tol;
  if (auto v = first_value(sec, "tol")) tol = parse_number(*v, "tol");

  Json config;
  config["spec"] = opt.spec_path;
  config["kind"] = "projective";
  config["matrix"] = Json::array({A[0][0], A[0][1], A[1][0], A[1][1]});
  config["ic"] = Json::array({ic[0], ic[1]});
  config["rk"] = rk_config_echo(cfg);
  if (tol) config["tol"] = *tol;

  Json analysis = Json::object();
  bool within = true;
  bool ok = guarded(analysis, [&] {
    ProjectiveReport rep = projective_consistency(A, ic, cfg);
    analysis["kind"] = "projective";
    analysis["residual"] = rep.residual;
    analysis["truncated"] = rep.truncated;
    analysis["t_last"] = rep.t_last;
    if (tol && rep.residual > *tol) within = false;
    analysis["within_tol"] = within;
    if (!within) throw DomainError("projective residual exceeded the configured tolerance");
  });

  DriveResult res;
  res.report = report_envelope("ode", std::move(config), std::move(analysis));
  res.analysis_ok = ok && within;
  res.rendered = render_json(res.report);
  return res;
}

DriveResult drive_ode_chazy(const RawSection& sec, const DriveOptions& opt) {
  std::string u_text = require_value(sec, "u");
  ExprPtr u_expr = parse_expr(u_text, {"t"});
  std::map<std::string, RatFun<Rational>> env{{"t", RatFun<Rational>::variable()}};
  RatFun<Rational> u_rf = eval_expr(u_expr, env, RatFun<Rational>::constant(Rational(0)));
  if (!u_rf.is_poly())
    throw DomainError("u must be a polynomial in t");
  UniPoly<Rational> u = u_rf.num();
  long residual_points = long_or(sec, "residual_points", 20);
  if (residual_points < 0) throw DomainError("residual_points must be nonnegative");

  std::optional<double> M;
  if (auto v = first_value(sec, "M")) M = parse_number(*v, "M");
  double x0 = 0, xp0 = 0, margin = 0.1;
  std::optional<double> drift_tol;
  RKConfig cfg = rk_config(sec, opt, 1.0, 2.0);
  if (M) {
    x0 = parse_number(require_value(sec, "x0"), "x0");
    xp0 = parse_number(require_value(sec, "xp0"), "xp0");
    margin = number_or(sec, "margin", 0.1);
    if (auto v = first_value(sec, "drift_tol")) drift_tol = parse_number(*v, "drift_tol");
  }

  Json config;
  config["spec"] = opt.spec_path;
  config["kind"] = "chazy";
  config["u"] = u_text;
  config["residual_points"] = residual_points;
  if (M) {
    config["M"] = *M;
    config["x0"] = x0;
    config["xp0"] = xp0;
    config["margin"] = margin;
    config["rk"] = rk_config_echo(cfg);
    if (drift_tol) config["drift_tol"] = *drift_tol;
  }

  Json analysis = Json::object();
  bool within = true;
  bool ok = guarded(analysis, [&] {
    ChazyInstance inst = chazy_instance(u);
    analysis["kind"] = "chazy";
    analysis["valid"] = true;
    analysis["a"] = inst.a.str("t");
    analysis["b"] = inst.b.str("t");
    bool all_zero = true;
    Rational worst(0);
    for (long k = 0; k < residual_points; ++k) {
      Rational t(2 * k + 11, 7);
      Rational r = chazy_residual(inst, t);
      if (!(r == Rational(0))) all_zero = false;
      if (r.abs() > worst.abs()) worst = r;
    }
    analysis["residual_zero"] = all_zero;
    analysis["residual_samples"] = residual_points;
    analysis["residual_worst"] = json_rational(worst);
    if (!all_zero) within = false;
    if (M) {
      ContDerivMatchPair pair{inst.a, inst.b, margin};
      DerivMatchResult res = deriv_match_solve(pair, *M, x0, xp0, cfg);
      Json dm;
      dm["K"] = res.K;
      dm["drift"] = res.drift;
      dm["trajectory"] = json_trajectory(res.traj);
      analysis["derivmatch"] = std::move(dm);
      if (drift_tol && res.drift > *drift_tol) within = false;
    }
    analysis["within_tol"] = within;
    if (!within) throw DomainError("chazy-layer checks failed (residual or drift)");
  });

  DriveResult res;
  res.report = report_envelope("ode", std::move(config), std::move(analysis));
  res.analysis_ok = ok && within;
  res.rendered = render_json(res.report);
  return res;
}

}  // namespace

DriveResult drive_ode(const SpecFile& spec, const DriveOptions& opt) {
  if (!spec.ode) throw DomainError("this spec has no [ode] section");
  if (opt.format != "json") throw DomainError("ode reports are JSON only");
  const RawSection& sec = *spec.ode;
  std::string kind = require_value(sec, "kind");
  if (kind == "hamiltonian") return drive_ode_hamiltonian(sec, opt);
  if (kind == "riccati") return drive_ode_riccati(sec, spec, opt);
  if (kind == "projective") return drive_ode_projective(sec, opt);
  if (kind == "chazy") return drive_ode_chazy(sec, opt);
  throw DomainError("unknown ode kind '" + kind +
                    "' (hamiltonian | riccati | projective | chazy)");
}

}  // namespace lintegra
