#include "exo/calibration/annealing.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "exo/error.hpp"
#include "exo/rng.hpp"

namespace exo::calibration {

void AnnealingSchedule::validate() const {
  if (!(t0 > 0.0)) throw ConfigError("annealing t0 must be positive");
  if (!(rt > 0.0 && rt < 1.0)) throw ConfigError("annealing rt must lie in (0, 1)");
  if (ns < 1 || nt < 1 || neps < 1) throw ConfigError("annealing loop counts must be positive");
  if (!(eps >= 0.0)) throw ConfigError("annealing eps must be non-negative");
  if (max_evals < 1) throw ConfigError("annealing max_evals must be positive");
}

AnnealingResult simulated_annealing(const Objective& f, std::span<const double> x0,
                                    std::span<const double> lower, std::span<const double> upper,
                                    const AnnealingSchedule& schedule) {
  schedule.validate();
  const std::size_t n = x0.size();
  if (lower.size() != n || upper.size() != n) throw ConfigError("bounds do not match start point");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(lower[i] < upper[i])) throw ConfigError("lower bound must be below upper bound");
    if (!(x0[i] >= lower[i] && x0[i] <= upper[i])) throw ConfigError("start point outside bounds");
  }

  Rng rng(schedule.seed);
  AnnealingResult res;
  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> vm(n), xp(n);
  for (std::size_t i = 0; i < n; ++i) vm[i] = 0.25 * (upper[i] - lower[i]);
  std::vector<int> accepted(n, 0);

  double fx = f(x);
  res.evaluations = 1;
  res.initial_objective = fx;
  res.x = x;
  res.objective = fx;
  double temp = schedule.t0;
  res.trace.push_back({res.evaluations, temp, fx});

  std::deque<double> history(static_cast<std::size_t>(schedule.neps),
                             std::numeric_limits<double>::infinity());
  constexpr double c = 2.0;

  for (;;) {
    for (int m = 0; m < schedule.nt; ++m) {
      for (int j = 0; j < schedule.ns; ++j) {
        for (std::size_t h = 0; h < n; ++h) {
          xp = x;
          xp[h] = x[h] + (2.0 * rng.uniform() - 1.0) * vm[h];
          if (xp[h] < lower[h] || xp[h] > upper[h]) {
            xp[h] = lower[h] + (upper[h] - lower[h]) * rng.uniform();
          }
          const double fp = f(xp);
          ++res.evaluations;

          bool accept = fp <= fx;
          if (!accept && std::isfinite(fp)) {
            accept = rng.uniform() < std::exp((fx - fp) / temp);
          }
          if (accept) {
            x[h] = xp[h];
            fx = fp;
            ++accepted[h];
            if (fp < res.objective) {
              res.x = xp;
              res.objective = fp;
            }
          }
          if (res.evaluations >= schedule.max_evals) {
            res.trace.push_back({res.evaluations, temp, res.objective});
            return res;
          }
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        const double ratio = static_cast<double>(accepted[i]) / schedule.ns;
        if (ratio > 0.6) {
          vm[i] *= 1.0 + c * (ratio - 0.6) / 0.4;
        } else if (ratio < 0.4) {
          vm[i] /= 1.0 + c * (0.4 - ratio) / 0.4;
        }
        vm[i] = std::min(vm[i], upper[i] - lower[i]);
        accepted[i] = 0;
      }
    }

    res.trace.push_back({res.evaluations, temp, res.objective});
    bool quit = std::abs(fx - res.objective) <= schedule.eps;
    for (double past : history) quit = quit && std::abs(fx - past) <= schedule.eps;
    if (quit) {
      res.converged = true;
      return res;
    }
    history.pop_back();
    history.push_front(fx);
    temp *= schedule.rt;
    x = res.x;
    fx = res.objective;
  }
}

}  // namespace exo::calibration
