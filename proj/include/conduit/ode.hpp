#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <vector>

#include "conduit/errors.hpp"

namespace conduit {

struct OdeOptions {
  double rtol = 1e-12;
  double atol = 1e-14;
  double initial_step = 0;  ///< 0: pick from the span
  double min_step = 1e-14;
  long max_steps = 10'000'000;
};

/// Dormand-Prince 5(4) pair with first-same-as-last stages.
/// State is any Eigen vector type.
template <typename State>
class DormandPrince45 {
public:
  struct Trial {
    State y;
    State f_end;
    double err;  ///< scaled max-norm of the embedded error
  };

  template <typename Rhs>
  static Trial attempt(Rhs& f, double t, const State& y, const State& k1, double h, double atol,
                       double rtol) {
    const State k2 = f(t + h / 5, State(y + h * (k1 / 5)));
    const State k3 = f(t + 3 * h / 10, State(y + h * (3.0 / 40 * k1 + 9.0 / 40 * k2)));
    const State k4 =
        f(t + 4 * h / 5, State(y + h * (44.0 / 45 * k1 - 56.0 / 15 * k2 + 32.0 / 9 * k3)));
    const State k5 =
        f(t + 8 * h / 9, State(y + h * (19372.0 / 6561 * k1 - 25360.0 / 2187 * k2 +
                                        64448.0 / 6561 * k3 - 212.0 / 729 * k4)));
    const State k6 = f(t + h, State(y + h * (9017.0 / 3168 * k1 - 355.0 / 33 * k2 +
                                             46732.0 / 5247 * k3 + 49.0 / 176 * k4 -
                                             5103.0 / 18656 * k5)));
    State y1 = y + h * (35.0 / 384 * k1 + 500.0 / 1113 * k3 + 125.0 / 192 * k4 -
                        2187.0 / 6784 * k5 + 11.0 / 84 * k6);
    State k7 = f(t + h, y1);
    const State e = h * (71.0 / 57600 * k1 - 71.0 / 16695 * k3 + 71.0 / 1920 * k4 -
                         17253.0 / 339200 * k5 + 22.0 / 525 * k6 - 1.0 / 40 * k7);
    double err = 0;
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      const double scale = atol + rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
      err = std::max(err, std::abs(e[i]) / scale);
    }
    return {std::move(y1), std::move(k7), err};
  }

  static double next_step(double h, double err) {
    const double factor = err == 0 ? 5.0 : 0.9 * std::pow(err, -0.2);
    return h * std::clamp(factor, 0.2, 5.0);
  }
};

/// Integrate y' = f(t, y) from t0 through the increasing output times, landing on each
/// exactly; `observe(index, t, y)` is called at every output time.
template <typename State, typename Rhs, typename Observer>
void integrate_dp45(Rhs&& f, State y, double t0, const std::vector<double>& times,
                    Observer&& observe, const OdeOptions& opt = {}) {
  using DP = DormandPrince45<State>;
  double t = t0;
  State k1 = f(t, y);
  const double span = times.empty() ? 0 : times.back() - t0;
  double h = opt.initial_step > 0 ? opt.initial_step : span / 100;
  long steps = 0;
  for (std::size_t idx = 0; idx < times.size(); ++idx) {
    const double target = times[idx];
    while (t < target) {
      if (++steps > opt.max_steps) throw OdeNotConverged("step budget exhausted");
      const bool last = t + h >= target;
      const double hs = last ? target - t : h;
      auto trial = DP::attempt(f, t, y, k1, hs, opt.atol, opt.rtol);
      if (!std::isfinite(trial.err)) {
        h /= 4;
      } else if (trial.err <= 1) {
        t = last ? target : t + hs;
        y = std::move(trial.y);
        k1 = std::move(trial.f_end);
        if (!last) h = DP::next_step(hs, trial.err);
        else h = std::max(h, DP::next_step(hs, trial.err));
        continue;
      } else {
        h = DP::next_step(hs, trial.err);
      }
      if (h < opt.min_step * std::max(1.0, std::abs(t)))
        throw OdeNotConverged("step size underflow");
    }
    observe(idx, t, y);
  }
}

}  // namespace conduit
