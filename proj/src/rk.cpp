#include "lintegra/rk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lintegra/errors.hpp"

namespace lintegra {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA2[] = {1.0 / 5};
constexpr double kA3[] = {3.0 / 40, 9.0 / 40};
constexpr double kA4[] = {44.0 / 45, -56.0 / 15, 32.0 / 9};
constexpr double kA5[] = {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729};
constexpr double kA6[] = {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
                          -5103.0 / 18656};
constexpr double kB[] = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784,
                         11.0 / 84};
// b - bhat: weights of the embedded error estimate (k7 = f at the new point).
constexpr double kE[7] = {71.0 / 57600,  0.0,          -71.0 / 16695, 71.0 / 1920,
                          -17253.0 / 339200, 22.0 / 525, -1.0 / 40};
// Fifth-order dense-output weights.
constexpr double kD[7] = {-12715105075.0 / 11282082432.0,
                          0.0,
                          87487479700.0 / 32700410799.0,
                          -10690763975.0 / 1880347072.0,
                          701980252875.0 / 199316789632.0,
                          -1453857185.0 / 822651844.0,
                          69997945.0 / 29380423.0};

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

struct DenseStep {
  // y(t + theta h) = r1 + theta (r2 + (1 - theta)(r3 + theta (r4 + (1 - theta) r5)))
  std::vector<double> r1, r2, r3, r4, r5;
  double t = 0.0, h = 0.0;

  void eval(double theta, std::vector<double>& y, std::vector<double>& dy) const {
    double th1 = 1.0 - theta;
    for (std::size_t i = 0; i < r1.size(); ++i) {
      y[i] = r1[i] +
             theta * (r2[i] + th1 * (r3[i] + theta * (r4[i] + th1 * r5[i])));
      // d/dtheta of the expanded quartic, divided by h for d/dt.
      double d = r2[i] + (1.0 - 2.0 * theta) * r3[i] +
                 theta * (2.0 - 3.0 * theta) * r4[i] +
                 theta * (2.0 - 6.0 * theta + 4.0 * theta * theta) * r5[i];
      dy[i] = d / h;
    }
  }
};

}  // namespace

Trajectory integrate_rhs(const RhsFn& rhs, std::size_t dim, const std::vector<double>& ic,
                         const RKConfig& cfg) {
  if (ic.size() != dim) throw DomainError("initial condition dimension mismatch");
  if (!(cfg.rtol > 0) || !(cfg.atol > 0)) throw DomainError("tolerances must be positive");
  if (cfg.t1 == cfg.t0) throw DomainError("empty integration interval");
  if (cfg.dense_samples < 2) throw DomainError("need at least two output samples");
  if (!all_finite(ic)) throw DomainError("initial condition must be finite");

  const double dir = cfg.t1 > cfg.t0 ? 1.0 : -1.0;
  const double span = std::abs(cfg.t1 - cfg.t0);
  const double hmax = cfg.h_max > 0 ? std::min(cfg.h_max, span) : span;
  const double hmin = 1e-14 * span;

  auto call = [&](double t, const std::vector<double>& y, std::vector<double>& dy) {
    try {
      rhs(t, y.data(), dy.data());
    } catch (const DomainError&) {
      std::fill(dy.begin(), dy.end(), std::numeric_limits<double>::quiet_NaN());
    }
    return all_finite(dy);
  };

  Trajectory traj;
  std::vector<double> y = ic, ynew(dim), ytmp(dim), err(dim);
  std::vector<std::vector<double>> k(7, std::vector<double>(dim));
  double t = cfg.t0;

  if (!call(t, y, k[0])) {
    traj.blew_up = true;
    traj.blowup_t = t;
    return traj;
  }

  // Output bookkeeping: equally spaced targets, emitted from the dense form
  // of whichever accepted step covers them.
  const int ns = cfg.dense_samples;
  int next_sample = 0;
  auto sample_time = [&](int i) {
    return i + 1 == ns ? cfg.t1 : cfg.t0 + (cfg.t1 - cfg.t0) * (double(i) / (ns - 1));
  };
  traj.times.push_back(t);
  traj.states.push_back(y);
  traj.derivs.push_back(k[0]);
  ++next_sample;

  // Starting step: crude norm-based guess in the spirit of the usual
  // starters; the controller corrects it within a few steps.
  double h;
  if (cfg.h_init > 0) {
    h = std::min(cfg.h_init, hmax);
  } else {
    double d0 = 0, d1 = 0;
    for (std::size_t i = 0; i < dim; ++i) {
      double sc = cfg.atol + cfg.rtol * std::abs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1 += (k[0][i] / sc) * (k[0][i] / sc);
    }
    d0 = std::sqrt(d0 / dim);
    d1 = std::sqrt(d1 / dim);
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * span : 0.01 * d0 / d1;
    h = std::min(h, hmax);
  }

  DenseStep dense;
  dense.r1.resize(dim);
  dense.r2.resize(dim);
  dense.r3.resize(dim);
  dense.r4.resize(dim);
  dense.r5.resize(dim);
  std::vector<double> ys(dim), dys(dim);

  const double* a[5] = {kA2, kA3, kA4, kA5, kA6};
  bool last = false;
  while (!last) {
    if (std::abs(h) < hmin || !std::isfinite(h)) {
      traj.blew_up = true;
      traj.blowup_t = t;
      return traj;
    }
    double remaining = (cfg.t1 - t) * dir;
    if (h >= remaining) {
      h = remaining;
      last = true;
    }
    double hs = h * dir;

    bool ok = true;
    for (int s = 1; s <= 5 && ok; ++s) {
      for (std::size_t i = 0; i < dim; ++i) {
        double acc = 0;
        for (int j = 0; j < s; ++j) acc += a[s - 1][j] * k[j][i];
        ytmp[i] = y[i] + hs * acc;
      }
      ok = call(t + kC[s] * hs, ytmp, k[s]);
    }
    if (ok) {
      for (std::size_t i = 0; i < dim; ++i) {
        double acc = 0;
        for (int j = 0; j < 6; ++j) acc += kB[j] * k[j][i];
        ynew[i] = y[i] + hs * acc;
      }
      ok = all_finite(ynew) && call(t + hs, ynew, k[6]);
    }

    double errnorm = 2.0;  // forced rejection when a stage went non-finite
    if (ok) {
      errnorm = 0;
      for (std::size_t i = 0; i < dim; ++i) {
        double e = 0;
        for (int j = 0; j < 7; ++j) e += kE[j] * k[j][i];
        e *= hs;
        double sc = cfg.atol + cfg.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        errnorm += (e / sc) * (e / sc);
      }
      errnorm = std::sqrt(errnorm / dim);
    }

    if (errnorm <= 1.0) {
      // Accept: build the continuous extension, emit covered samples.
      for (std::size_t i = 0; i < dim; ++i) {
        double dy = ynew[i] - y[i];
        dense.r1[i] = y[i];
        dense.r2[i] = dy;
        dense.r3[i] = hs * k[0][i] - dy;
        dense.r4[i] = dy - hs * k[6][i] - dense.r3[i];
        double acc = 0;
        for (int j = 0; j < 7; ++j) acc += kD[j] * k[j][i];
        dense.r5[i] = hs * acc;
      }
      dense.t = t;
      dense.h = hs;

      double tnew = last ? cfg.t1 : t + hs;
      while (next_sample < ns) {
        double ts = sample_time(next_sample);
        if ((ts - tnew) * dir > 0) break;
        dense.eval((ts - t) / hs, ys, dys);
        traj.times.push_back(ts);
        traj.states.push_back(ys);
        traj.derivs.push_back(dys);
        ++next_sample;
      }

      t = tnew;
      y = ynew;
      k[0] = k[6];  // FSAL
      ++traj.steps_accepted;

      double ymax = 0;
      for (double v : y) ymax = std::max(ymax, std::abs(v));
      if (ymax > kBlowupNorm) {
        traj.blew_up = true;
        traj.blowup_t = t;
        return traj;
      }
    } else {
      ++traj.steps_rejected;
      last = false;
    }

    double fac = ok ? 0.9 * std::pow(errnorm, -0.2) : 0.2;
    h = std::abs(h) * std::clamp(fac, 0.2, 5.0);
    h = std::min(h, hmax);
  }
  return traj;
}

}  // namespace lintegra
