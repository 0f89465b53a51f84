#pragma once

#include <vector>

namespace exo::plant {

/// Metronome-paced stoop lift: bend to grab, lift to upright, bend to place,
/// return upright; one phase per beat pair.
struct LiftingCycleSpec {
  double phase_duration = 2.0;     ///< s
  double peak_inclination = 70.0;  ///< deg
  double box_mass = 0.0;           ///< kg
  double sample_rate = 40.0;       ///< Hz
  double l5s1_ratio = 0.5;         ///< L5/S1 flexion per unit trunk inclination
  double box_rest_y = 0.0;         ///< m, table height
  double box_clearance = 0.02;     ///< m the box rises at lift-off
  double lift_height = 0.30;       ///< m additional rise when upright

  void validate() const;
  double cycle_duration() const { return 4.0 * phase_duration; }
};

struct TrialKinematics {
  std::vector<double> t;            ///< s
  std::vector<double> inclination;  ///< rad
  std::vector<double> l5s1_angle;   ///< rad
  std::vector<double> box_y;        ///< m
  std::vector<bool> box_held;       ///< ground-truth contact
  double sample_rate = 40.0;
  double cycle_duration = 8.0;
  double box_mass = 0.0;
  double box_rest_y = 0.0;
};

/// Minimum-jerk position 10s^3 - 15s^4 + 6s^5 on s in [0, 1].
double minimum_jerk(double s);

/// Inclination at time t of a repeating cycle, in rad.
double cycle_inclination(const LiftingCycleSpec& spec, double t);
/// True while the box is in the hands: from the start of phase 2 to the end of phase 3.
bool cycle_box_held(const LiftingCycleSpec& spec, double t);

/// Sampled kinematics for `n_cycles` repetitions; the final sample lies on
/// the last cycle boundary.
TrialKinematics generate_cycle(const LiftingCycleSpec& spec, int n_cycles = 1);

}  // namespace exo::plant
