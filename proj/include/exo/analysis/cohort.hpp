#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "exo/analysis/metrics.hpp"

namespace exo::analysis {

/// Angles at which lifting and lowering branch forces are compared.
inline constexpr std::array<double, 4> kBranchAngles = {20.0, 30.0, 40.0, 50.0};

/// Per-run summary; forces in N/kg, averaged over the recorded cycles.
struct RunMetrics {
  std::string subject;
  plant::ControllerKind controller = plant::ControllerKind::noexo;
  double box_mass = 0.0;
  double body_mass = 0.0;
  int cycles = 0;
  double peak_force = 0.0;
  double peak_desired = 0.0;
  double force_mid = 0.0;  ///< at 50% of the cycle
  double rmse = 0.0;
  double cumulative = 0.0;  ///< kN s over all cycles
  double emg_mean = 0.0;
  double compression_mean = 0.0;  ///< N
  double compression_erect = 0.0; ///< N, 40-60% window
  double loop_area = 0.0;
  std::array<double, kBranchAngles.size()> lifting{};
  std::array<double, kBranchAngles.size()> lowering{};
};

RunMetrics run_metrics(const plant::TrialRecord& record);

/// Mean over cycles of `stream` at `points` evenly spaced cycle fractions
/// from 0 to 1 inclusive.
std::vector<double> cycle_profile(const plant::TrialRecord& record, std::span<const double> stream,
                                  int points = 101);

struct Criterion {
  std::string id;
  std::string description;
  bool evaluated = false;  ///< false when a needed condition is missing
  bool pass = false;
  std::string detail;
};

/// Cohort checks that follow from run records alone. `weights` are the
/// light and heavy box masses.
std::vector<Criterion> cohort_criteria(const std::vector<RunMetrics>& runs, double light = 5.0,
                                       double heavy = 15.0);

/// Cohort mean of one metric for a condition; nullopt when no run matches.
std::optional<double> condition_mean(const std::vector<RunMetrics>& runs,
                                     plant::ControllerKind controller, double box_mass,
                                     double RunMetrics::*field);

}  // namespace exo::analysis
