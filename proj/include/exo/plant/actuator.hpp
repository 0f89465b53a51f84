#pragma once

#include "exo/control/controllers.hpp"
#include "exo/rng.hpp"

namespace exo::plant {

struct ActuatorModel {
  double tau = 0.05;      ///< s
  double noise_sd = 2.0;  ///< N on the measured force
  double f_max_hw = control::kMaxCableForce;
  bool ideal = false;     ///< measured force equals the command

  void validate() const;
};

/// First-order force tracking of the summed cable command.
class Actuator {
 public:
  Actuator(const ActuatorModel& model, double tick_rate = 1000.0);

  double step(const control::CableCommand& cmd, Rng& rng);
  double force() const { return state_; }
  void reset() { state_ = 0.0; }

 private:
  ActuatorModel model_;
  double alpha_;
  double state_ = 0.0;
};

}  // namespace exo::plant
