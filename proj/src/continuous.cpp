#include "lintegra/continuous.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>

#include "lintegra/polyroots.hpp"

namespace lintegra {

namespace {

void check_symbols(const std::vector<ExprPtr>& exprs, const std::set<std::string>& allowed,
                   const char* what) {
  for (const auto& e : exprs)
    for (const auto& s : free_symbols(e))
      if (!allowed.count(s))
        throw DomainError(std::string(what) + " references unknown symbol '" + s + "'");
}

double poly_eval_d(const UniPoly<Rational>& p, double t) {
  double acc = 0;
  for (int k = p.degree(); k >= 0; --k) acc = acc * t + p.coeff(k).to_double();
  return acc;
}

double ratfun_eval_d(const RatFun<Rational>& f, double t) {
  return poly_eval_d(f.num(), t) / poly_eval_d(f.den(), t);
}

}  // namespace

RhsFn compile_system(const ODESystem& sys) {
  if (sys.state.size() != sys.rhs.size())
    throw DomainError("state and right-hand side dimensions differ");
  if (sys.state.empty()) throw DomainError("empty system");
  std::set<std::string> allowed(sys.state.begin(), sys.state.end());
  allowed.insert("t");
  check_symbols(sys.rhs, allowed, "right-hand side");

  auto env = std::make_shared<std::map<std::string, double>>();
  auto names = sys.state;
  auto rhs = sys.rhs;
  return [env, names, rhs](double t, const double* y, double* dy) {
    (*env)["t"] = t;
    for (std::size_t i = 0; i < names.size(); ++i) (*env)[names[i]] = y[i];
    for (std::size_t i = 0; i < rhs.size(); ++i) dy[i] = eval_expr(rhs[i], *env, 0.0);
  };
}

Trajectory integrate_system(const ODESystem& sys, const std::vector<double>& ic,
                            const RKConfig& cfg) {
  return integrate_rhs(compile_system(sys), sys.state.size(), ic, cfg);
}

double hh_energy(const HamiltonianHH& s) {
  double x2 = s.x * s.x, x4 = x2 * x2;
  return 0.5 * (s.px * s.px + s.py * s.py) + std::pow(s.y, 5) + s.y * s.y * s.y * x2 +
         (3.0 / 16) * s.y * x4;
}

double hh_second_invariant(const HamiltonianHH& s) {
  double x2 = s.x * s.x, x4 = x2 * x2, x6 = x4 * x2;
  return -s.y * s.px * s.px + s.x * s.px * s.py + 0.5 * std::pow(s.y, 4) * x2 +
         (3.0 / 8) * s.y * s.y * x4 + x6 / 32;
}

Trajectory hamiltonian_flow(const HamiltonianHH& ic, const RKConfig& cfg) {
  auto rhs = [](double, const double* y, double* dy) {
    double x = y[0], yy = y[1], px = y[2], py = y[3];
    double x2 = x * x, x3 = x2 * x, x4 = x2 * x2;
    dy[0] = px;
    dy[1] = py;
    dy[2] = -(2 * yy * yy * yy * x + 0.75 * yy * x3);
    dy[3] = -(5 * std::pow(yy, 4) + 3 * yy * yy * x2 + (3.0 / 16) * x4);
  };
  return integrate_rhs(rhs, 4, {ic.x, ic.y, ic.px, ic.py}, cfg);
}

DriftPair invariant_drift(const Trajectory& traj) {
  if (traj.states.empty() || traj.dim() != 4)
    throw DomainError("drift needs a four-component trajectory");
  auto at = [&](std::size_t i) {
    return HamiltonianHH{traj.states[i][0], traj.states[i][1], traj.states[i][2],
                         traj.states[i][3]};
  };
  double h0 = hh_energy(at(0)), c0 = hh_second_invariant(at(0));
  DriftPair d;
  for (std::size_t i = 1; i < traj.states.size(); ++i) {
    d.dH = std::max(d.dH, std::abs(hh_energy(at(i)) - h0) / std::max(1.0, std::abs(h0)));
    d.dC = std::max(d.dC, std::abs(hh_second_invariant(at(i)) - c0) /
                              std::max(1.0, std::abs(c0)));
  }
  return d;
}

void validate_chain(const RiccatiChain& chain) {
  if (chain.stages.empty()) throw DomainError("empty chain");
  std::set<std::string> allowed{"t"};
  std::set<std::string> seen;
  for (const auto& st : chain.stages) {
    if (!seen.insert(st.var).second)
      throw DomainError("duplicate stage variable '" + st.var + "'");
    check_symbols({st.a, st.b, st.c}, allowed, "stage coefficient");
    allowed.insert(st.var);
  }
}

namespace {

ODESystem chain_system(const RiccatiChain& chain) {
  ODESystem sys;
  for (const auto& st : chain.stages) {
    ExprPtr v = expr_sym(st.var);
    sys.state.push_back(st.var);
    sys.rhs.push_back(
        expr_add(expr_add(expr_mul(st.a, expr_pow(v, 2)), expr_mul(st.b, v)), st.c));
  }
  return sys;
}

}  // namespace

Trajectory riccati_chain_integrate(const RiccatiChain& chain, const std::vector<double>& ic,
                                   const RKConfig& cfg, RiccatiMethod method) {
  validate_chain(chain);
  const std::size_t m = chain.stages.size();
  if (ic.size() != m) throw DomainError("initial condition dimension mismatch");

  if (method == RiccatiMethod::Direct)
    return integrate_system(chain_system(chain), ic, cfg);

  // Per stage: precompute the chain-rule pieces of a' (derivatives of a with
  // respect to t and every earlier variable).
  struct StageData {
    ExprPtr a, b, c;
    ExprPtr da_dt;
    std::vector<std::pair<std::size_t, ExprPtr>> da_dx;  // index of earlier stage
  };
  std::vector<StageData> data(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& st = chain.stages[i];
    data[i].a = st.a;
    data[i].b = st.b;
    data[i].c = st.c;
    data[i].da_dt = expr_diff(st.a, "t");
    for (std::size_t j = 0; j < i; ++j) {
      ExprPtr d = expr_diff(st.a, chain.stages[j].var);
      if (!(d->kind == ExprKind::Const && d->value.is_zero()))
        data[i].da_dx.emplace_back(j, d);
    }
  }

  auto env = std::make_shared<std::map<std::string, double>>();
  // Evaluates the ratios and coefficients at (t, w-state); used by the rhs,
  // the initial transform, and the sample recovery.
  auto recover = [this_env = env, &chain, &data, m](double t, const double* w,
                                                    std::vector<double>& x,
                                                    std::vector<double>& xp,
                                                    std::vector<double>& aval) {
    auto& e = *this_env;
    e["t"] = t;
    for (std::size_t i = 0; i < m; ++i) {
      double a = eval_expr(data[i].a, e, 0.0);
      double xi = -w[2 * i + 1] / (a * w[2 * i]);
      double b = eval_expr(data[i].b, e, 0.0);
      double c = eval_expr(data[i].c, e, 0.0);
      x[i] = xi;
      xp[i] = a * xi * xi + b * xi + c;
      aval[i] = a;
      e[chain.stages[i].var] = xi;
    }
  };

  // Initial transform: w = 1, w' = -a(t0) x(t0).
  std::vector<double> w0(2 * m), x(m), xp(m), aval(m);
  {
    auto& e = *env;
    e["t"] = cfg.t0;
    for (std::size_t i = 0; i < m; ++i) {
      double a = eval_expr(data[i].a, e, 0.0);
      if (a == 0.0 || !std::isfinite(a))
        throw LinearisationUnavailable(static_cast<int>(i),
                                       "leading coefficient vanishes at t0");
      w0[2 * i] = 1.0;
      w0[2 * i + 1] = -a * ic[i];
      e[chain.stages[i].var] = ic[i];
    }
  }

  auto rhs = [env, &data, &recover, m](double t, const double* w, double* dw) {
    std::vector<double> x(m), xp(m), aval(m);
    recover(t, w, x, xp, aval);
    auto& e = *env;
    for (std::size_t i = 0; i < m; ++i) {
      double ap = eval_expr(data[i].da_dt, e, 0.0);
      for (const auto& [j, dexpr] : data[i].da_dx) ap += eval_expr(dexpr, e, 0.0) * xp[j];
      double b = eval_expr(data[i].b, e, 0.0);
      double c = eval_expr(data[i].c, e, 0.0);
      dw[2 * i] = w[2 * i + 1];
      dw[2 * i + 1] = (b + ap / aval[i]) * w[2 * i + 1] - aval[i] * c * w[2 * i];
    }
  };

  Trajectory wtraj = integrate_rhs(rhs, 2 * m, w0, cfg);

  Trajectory traj;
  traj.blew_up = wtraj.blew_up;
  traj.blowup_t = wtraj.blowup_t;
  traj.steps_accepted = wtraj.steps_accepted;
  traj.steps_rejected = wtraj.steps_rejected;
  for (std::size_t s = 0; s < wtraj.times.size(); ++s) {
    // Every w starts at +1; a non-positive w means the stage variable passed
    // through its movable pole since the last sample.
    bool ok = true;
    for (std::size_t i = 0; i < m; ++i)
      if (!(wtraj.states[s][2 * i] > 0)) ok = false;
    if (ok) {
      try {
        recover(wtraj.times[s], wtraj.states[s].data(), x, xp, aval);
      } catch (const DomainError&) {
        ok = false;
      }
    }
    // A sample landing within rounding distance of the pole recovers a
    // finite but astronomical ratio; the blow-up norm catches it.
    auto usable = [](double v) { return std::isfinite(v) && std::abs(v) <= kBlowupNorm; };
    ok = ok && std::all_of(x.begin(), x.end(), usable) &&
         std::all_of(xp.begin(), xp.end(), usable);
    if (!ok) {
      traj.blew_up = true;
      traj.blowup_t = wtraj.times[s];
      break;
    }
    traj.times.push_back(wtraj.times[s]);
    traj.states.push_back(x);
    traj.derivs.push_back(xp);
  }
  return traj;
}

ProjectiveReport projective_consistency(const std::array<std::array<double, 2>, 2>& A,
                                        const std::array<double, 2>& ic,
                                        const RKConfig& cfg) {
  auto rhs = [&A](double, const double* y, double* dy) {
    dy[0] = A[0][0] * y[0] + A[0][1] * y[1];
    dy[1] = A[1][0] * y[0] + A[1][1] * y[1];
  };
  Trajectory tr = integrate_rhs(rhs, 2, {ic[0], ic[1]}, cfg);

  ProjectiveReport rep;
  if (tr.times.empty()) {
    rep.truncated = true;
    rep.t_last = cfg.t0;
    return rep;
  }
  double sign0 = tr.states[0][0] > 0 ? 1.0 : -1.0;
  if (tr.states[0][0] == 0.0) throw DomainError("X0 vanishes at the initial point");
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    double X0 = tr.states[i][0], X1 = tr.states[i][1];
    if (X0 == 0.0 || (X0 > 0 ? 1.0 : -1.0) != sign0) {
      rep.truncated = true;
      break;
    }
    double x1 = X1 / X0;
    double d0 = tr.derivs[i][0], d1 = tr.derivs[i][1];
    double x1p = (d1 * X0 - X1 * d0) / (X0 * X0);
    double riccati = A[1][0] + (A[1][1] - A[0][0]) * x1 - A[0][1] * x1 * x1;
    rep.residual = std::max(rep.residual, std::abs(x1p - riccati));
    rep.t_last = tr.times[i];
  }
  rep.truncated = rep.truncated || tr.blew_up;
  return rep;
}

ChazyInstance chazy_instance(const UniPoly<Rational>& u) {
  if (u.is_zero()) throw DomainError("u must be nonzero");
  if (u.degree() > 4) throw DomainError("u must have degree at most four");
  UniPoly<Rational> u1 = u.derivative();
  UniPoly<Rational> u2 = u1.derivative();
  UniPoly<Rational> u3 = u2.derivative();
  UniPoly<Rational> u4 = u3.derivative();
  UniPoly<Rational> residual =
      u4 * u - u3 * u1 + u2 * u2 * UniPoly<Rational>::constant(Rational(1, 2));
  if (!residual.is_zero()) throw ConstraintViolated(residual.str("t"));

  ChazyInstance inst;
  inst.u = u;
  inst.a = RatFun<Rational>(-u1, u * UniPoly<Rational>::constant(Rational(2)));
  inst.b = inst.a * inst.a -
           inst.a.derivative() * RatFun<Rational>::constant(Rational(1, 2));
  return inst;
}

Rational chazy_residual(const ChazyInstance& inst, const Rational& t) {
  const RatFun<Rational>& a = inst.a;
  RatFun<Rational> a1 = a.derivative();
  RatFun<Rational> a2 = a1.derivative();
  RatFun<Rational> a3 = a2.derivative();
  auto cst = [](long v) { return RatFun<Rational>::constant(Rational(v)); };
  RatFun<Rational> rhs = cst(6) * a2 * a + cst(7) * a1 * a1 -
                         cst(16) * a1 * a * a + cst(4) * a.pow(4);
  return (a3 - rhs).eval(t);
}

DerivMatchResult deriv_match_solve(const ContDerivMatchPair& pair, double M, double x0,
                                   double xp0, const RKConfig& cfg) {
  if (xp0 == 0.0)
    throw DomainError("x'(t0) = 0 makes the nonlinear form singular");

  RatFun<Rational> bp = pair.b.derivative();
  RatFun<Rational> tab = RatFun<Rational>::constant(Rational(2)) * pair.a * pair.b - bp;

  const double t0 = cfg.t0;
  double a0 = ratfun_eval_d(pair.a, t0);
  double b0 = ratfun_eval_d(pair.b, t0);
  double tab0 = ratfun_eval_d(tab, t0);
  if (!std::isfinite(a0) || !std::isfinite(b0) || !std::isfinite(tab0))
    throw DomainError("t0 sits on a pole of the coefficient pair");

  double xpp0 = (M - 2 * a0 * xp0 * xp0 - 3 * b0 * xp0 * x0 - tab0 * x0 * x0) / xp0;
  double kden = xpp0 + a0 * xp0 + b0 * x0;
  if (kden == 0.0 || !std::isfinite(kden))
    throw DomainError("linear form denominator vanishes at the initial point");
  double K = (t0 * xpp0 + (a0 * t0 - 0.5) * xp0 + b0 * t0 * x0) / kden;

  // The interval must keep its distance from t = K (regular singular point
  // of the linear equation) and from every rational pole of a, b.
  double lo = std::min(cfg.t0, cfg.t1), hi = std::max(cfg.t0, cfg.t1);
  auto excluded = [&](double p) { return p > lo - pair.margin && p < hi + pair.margin; };
  if (excluded(K))
    throw DomainError("integration interval comes within the margin of t = K");
  for (const auto& den : {pair.a.den(), pair.b.den()})
    for (const auto& r : rational_roots(den))
      if (excluded(r.to_double()))
        throw DomainError("integration interval comes within the margin of a pole");

  auto rhs = [&pair, K](double t, const double* y, double* dy) {
    double a = ratfun_eval_d(pair.a, t);
    double b = ratfun_eval_d(pair.b, t);
    dy[0] = y[1];
    dy[1] = -(((a * t - 0.5) - K * a) * y[1] + b * (t - K) * y[0]) / (t - K);
  };

  DerivMatchResult res;
  res.K = K;
  res.traj = integrate_rhs(rhs, 2, {x0, xp0}, cfg);
  for (std::size_t i = 0; i < res.traj.times.size(); ++i) {
    double t = res.traj.times[i];
    double x = res.traj.states[i][0], xp = res.traj.states[i][1];
    double xpp = res.traj.derivs[i][1];
    double n = xpp * xp + 2 * ratfun_eval_d(pair.a, t) * xp * xp +
               3 * ratfun_eval_d(pair.b, t) * xp * x + ratfun_eval_d(tab, t) * x * x;
    res.drift = std::max(res.drift, std::abs(n - M));
  }
  return res;
}

}  // namespace lintegra
