#pragma once

#include <span>
#include <vector>

#include "exo/plant/closed_loop.hpp"

namespace exo::analysis {

struct WorkLoop {
  std::vector<double> inclination_deg;
  std::vector<double> force_per_kg;
  double area = 0.0;  ///< |shoelace area|, N/kg * deg
};

/// Shoelace area of the closed polygon (the last point connects to the first).
double loop_area(std::span<const double> x, std::span<const double> y);

/// Loop of one cycle (0-based) of a record, measured force over body mass.
/// Throws DataError when the cycle is not fully contained in the record or
/// does not return to its starting inclination.
WorkLoop work_loop(const plant::TrialRecord& record, int cycle = 0);

/// Force (N/kg) where the inclination crosses `angle_deg` while lifting the
/// box (phase 2) and while lowering it to place (phase 3), in one cycle.
struct BranchForces {
  double lifting = 0.0;
  double lowering = 0.0;
};
BranchForces branch_forces(const plant::TrialRecord& record, double angle_deg, int cycle = 0);

/// sqrt(mean((d - m)^2)) / body_mass. Throws DataError on empty or misaligned streams.
double tracking_rmse(std::span<const double> desired, std::span<const double> measured,
                     double body_mass);

struct Window {
  double lo = 0.0;
  double hi = 1.0;

  static Window full() { return {0.0, 1.0}; }
  static Window erect() { return {0.4, 0.6}; }
  void validate() const;
};

/// Mean over samples whose cycle fraction lies in the window, across all
/// complete cycles. The closing sample of the last cycle is not counted.
double window_mean(const plant::TrialRecord& record, std::span<const double> stream, Window w);

struct Reduction {
  double baseline = 0.0;
  double assisted = 0.0;
  double absolute = 0.0;  ///< baseline - assisted
  double percent = 0.0;   ///< 100 * absolute / baseline
};

Reduction reduction(double baseline, double assisted);

/// Window mean of a stream in both records and the reduction between them.
/// Throws DataError if the records have different lengths or cycle layout.
Reduction window_reduction(const plant::TrialRecord& noexo, std::span<const double> noexo_stream,
                           const plant::TrialRecord& assisted,
                           std::span<const double> assisted_stream, Window w = Window::full());

/// Net EMG reduction: cycle mean of the summed normalized envelopes.
Reduction emg_reduction(const plant::TrialRecord& noexo, const plant::TrialRecord& assisted);

/// Trapezoidal integral of a uniformly sampled compression stream (N) over
/// the first `n_cycles` cycles, in kN s. Throws DataError if the stream is
/// too short.
double cumulative_compression(std::span<const double> compression, double dt, int n_cycles,
                              double cycle_duration);

/// Cumulative compression over the first `n_cycles` of a record.
double cumulative_compression(const plant::TrialRecord& record, int n_cycles);

enum class Tail { greater, less };

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  int dof = 0;
  bool degenerate = false;
};

/// One-tailed paired t-test on d = a - b. `greater` tests mean(d) > 0.
/// Zero variance of the differences sets `degenerate` (t and p are then
/// +/-inf and 0 or 1, or 0 and 0.5 when all differences are zero).
TTestResult paired_ttest_onetailed(std::span<const double> a, std::span<const double> b,
                                   Tail tail = Tail::greater);

/// Regularized incomplete beta I_x(a, b) by continued fraction.
double incomplete_beta(double a, double b, double x);

/// Student t cumulative distribution with `dof` degrees of freedom.
double student_t_cdf(double t, double dof);

}  // namespace exo::analysis
