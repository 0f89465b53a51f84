#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "exo/calibration/inverse_dynamics.hpp"
#include "exo/signal/emg.hpp"

namespace exo::plant {

using signal::ChannelArray;

/// A simulated participant. The muscle model that generates the EMG is the
/// nominal trunk model for `anthro.body_mass` with `activation_shape`.
struct SyntheticSubject {
  std::string id;
  calibration::Anthropometry anthro;
  double emg_noise_sd = 0.02;         ///< per unit MVC
  double cocontraction_level = 0.08;  ///< envelope floor, [0, 0.2]
  double activation_shape = -1.5;
  ChannelArray mvc{};                 ///< raw EMG amplitude at MVC, per channel
  ChannelArray carrier_phase{};       ///< rad
  ChannelArray recruitment_exponent{};  ///< channel envelope = floor + (1 - floor) u^p

  void validate() const;
};

struct CohortSpec {
  int count = 10;
  double mass_lo = 58.0;
  double mass_hi = 85.0;
  std::uint64_t seed = 2024;
};

/// Subjects with jittered mass, MVC amplitudes, recruitment and co-contraction.
std::vector<SyntheticSubject> make_cohort(const CohortSpec& spec);

}  // namespace exo::plant
