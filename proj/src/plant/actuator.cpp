#include "exo/plant/actuator.hpp"

#include <algorithm>
#include <cmath>

#include "exo/error.hpp"

namespace exo::plant {

void ActuatorModel::validate() const {
  if (!(tau > 0.0)) throw ConfigError("actuator time constant must be positive");
  if (!(noise_sd >= 0.0)) throw ConfigError("actuator noise must be non-negative");
  if (!(f_max_hw > 0.0)) throw ConfigError("hardware force limit must be positive");
}

Actuator::Actuator(const ActuatorModel& model, double tick_rate) : model_(model) {
  model_.validate();
  alpha_ = -std::expm1(-1.0 / (tick_rate * model_.tau));
}

double Actuator::step(const control::CableCommand& cmd, Rng& rng) {
  if (model_.ideal) {
    state_ = std::clamp(cmd.f_total, 0.0, model_.f_max_hw);
    return state_;
  }
  state_ += alpha_ * (cmd.f_total - state_);
  const double noise = model_.noise_sd > 0.0 ? model_.noise_sd * rng.normal() : 0.0;
  return std::clamp(state_ + noise, 0.0, model_.f_max_hw);
}

}  // namespace exo::plant
