#include "exo/plant/kinematics.hpp"

#include <cmath>
#include <numbers>

#include "exo/error.hpp"

namespace exo::plant {

void LiftingCycleSpec::validate() const {
  if (!(phase_duration > 0.0)) throw ConfigError("phase duration must be positive");
  if (!(peak_inclination >= 0.0 && peak_inclination < 120.0)) {
    throw ConfigError("peak inclination must lie in [0, 120) deg");
  }
  if (!(box_mass >= 0.0)) throw ConfigError("box mass must be non-negative");
  if (!(sample_rate > 0.0)) throw ConfigError("kinematic sample rate must be positive");
  if (!(l5s1_ratio >= 0.0 && l5s1_ratio <= 1.0)) throw ConfigError("L5/S1 ratio must lie in [0, 1]");
  if (!(box_clearance > 0.0) || lift_height < 0.0) throw ConfigError("box heights must be positive");
}

double minimum_jerk(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double cycle_inclination(const LiftingCycleSpec& spec, double t) {
  const double cycle = spec.cycle_duration();
  double tc = std::fmod(t, cycle);
  if (tc < 0.0) tc += cycle;
  const int phase = std::min(3, static_cast<int>(tc / spec.phase_duration));
  const double s = minimum_jerk((tc - phase * spec.phase_duration) / spec.phase_duration);
  const double peak = spec.peak_inclination * std::numbers::pi / 180.0;
  return (phase % 2 == 0) ? peak * s : peak * (1.0 - s);
}

bool cycle_box_held(const LiftingCycleSpec& spec, double t) {
  const double cycle = spec.cycle_duration();
  double tc = std::fmod(t, cycle);
  if (tc < 0.0) tc += cycle;
  // The end of phase 3 of the previous cycle coincides with the start of phase 4.
  return tc >= spec.phase_duration && tc <= 3.0 * spec.phase_duration;
}

TrialKinematics generate_cycle(const LiftingCycleSpec& spec, int n_cycles) {
  spec.validate();
  if (n_cycles < 1) throw ConfigError("at least one cycle is required");
  TrialKinematics k;
  k.sample_rate = spec.sample_rate;
  k.cycle_duration = spec.cycle_duration();
  k.box_mass = spec.box_mass;
  k.box_rest_y = spec.box_rest_y;
  const auto n = static_cast<std::size_t>(std::llround(n_cycles * k.cycle_duration * spec.sample_rate));
  const double peak = spec.peak_inclination * std::numbers::pi / 180.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / spec.sample_rate;
    const double incl = cycle_inclination(spec, t);
    const bool held = cycle_box_held(spec, t);
    k.t.push_back(t);
    k.inclination.push_back(incl);
    k.l5s1_angle.push_back(spec.l5s1_ratio * incl);
    k.box_held.push_back(held);
    double y = spec.box_rest_y;
    if (held) y += spec.box_clearance + (peak > 0.0 ? spec.lift_height * (1.0 - incl / peak) : 0.0);
    k.box_y.push_back(y);
  }
  return k;
}

}  // namespace exo::plant
