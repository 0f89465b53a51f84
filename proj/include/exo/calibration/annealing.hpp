#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace exo::calibration {

struct AnnealingSchedule {
  double t0 = 5.0;
  double rt = 0.85;
  int ns = 20;  ///< trials per step-size adjustment
  int nt = 5;   ///< step-size adjustments per temperature
  double eps = 1e-6;
  long max_evals = 200000;
  std::uint64_t seed = 1;
  int neps = 4;  ///< temperatures the objective must be stable over

  void validate() const;
};

struct TracePoint {
  long eval_index = 0;
  double temperature = 0.0;
  double objective_best = 0.0;
};

struct AnnealingResult {
  std::vector<double> x;
  double objective = 0.0;
  double initial_objective = 0.0;
  long evaluations = 0;
  bool converged = false;
  std::vector<TracePoint> trace;
};

using Objective = std::function<double(std::span<const double>)>;

/// Bounded simulated annealing with per-coordinate step adaptation (Corana
/// et al., as modified by Goffe, Ferrier and Rogers). Minimizes `f` starting
/// from `x0`; returns the best point ever seen. Out-of-bound proposals are
/// redrawn uniformly inside the bounds. Deterministic for a given seed.
AnnealingResult simulated_annealing(const Objective& f, std::span<const double> x0,
                                    std::span<const double> lower, std::span<const double> upper,
                                    const AnnealingSchedule& schedule);

}  // namespace exo::calibration
