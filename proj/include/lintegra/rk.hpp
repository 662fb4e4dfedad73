#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace lintegra {

struct RKConfig {
  double rtol = 1e-10;
  double atol = 1e-12;
  double t0 = 0.0;
  double t1 = 1.0;
  double h_init = 0.0;     // 0 = choose automatically
  double h_max = 0.0;      // 0 = full interval length
  int dense_samples = 201;  // equally spaced output points, >= 2
};

// Dense trajectory. times are strictly monotone; when the integration blows
// up, the samples stop at the last accepted step and blew_up/blowup_t are
// set. derivs holds the time derivative of the continuous extension at each
// sample (not finite differences).
struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<std::vector<double>> derivs;
  bool blew_up = false;
  double blowup_t = 0.0;
  long steps_accepted = 0;
  long steps_rejected = 0;

  std::size_t dim() const { return states.empty() ? 0 : states.front().size(); }
};

// Any state component beyond this magnitude counts as blown up, both inside
// the stepper and for consumers that recover derived quantities from samples.
inline constexpr double kBlowupNorm = 1e12;

// Right-hand side y' = f(t, y); writes dim doubles into dy. Signalling a
// pole by producing NaN/inf is fine: the stepper treats it as blow-up.
using RhsFn = std::function<void(double t, const double* y, double* dy)>;

// Adaptive Dormand-Prince 5(4) with fifth-order continuous extension.
// Local error per step is bounded by atol + rtol * |y| componentwise (RMS
// acceptance). Step-size underflow or a non-finite state flags blow-up and
// returns the partial trajectory.
Trajectory integrate_rhs(const RhsFn& rhs, std::size_t dim, const std::vector<double>& ic,
                         const RKConfig& cfg);

}  // namespace lintegra
