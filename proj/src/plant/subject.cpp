#include "exo/plant/subject.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "exo/error.hpp"
#include "exo/rng.hpp"

namespace exo::plant {

void SyntheticSubject::validate() const {
  anthro.validate();
  if (!(emg_noise_sd >= 0.0)) throw ConfigError("EMG noise must be non-negative");
  if (!(cocontraction_level >= 0.0 && cocontraction_level <= 0.2)) {
    throw ConfigError("co-contraction level must lie in [0, 0.2]");
  }
  if (!(activation_shape >= -3.0 && activation_shape <= 0.0)) {
    throw ConfigError("activation shape must lie in [-3, 0]");
  }
  for (std::size_t c = 0; c < signal::kNumChannels; ++c) {
    if (!(mvc[c] > 0.0)) throw ConfigError("MVC amplitudes must be positive");
    if (!(recruitment_exponent[c] > 0.0)) throw ConfigError("recruitment exponents must be positive");
  }
}

std::vector<SyntheticSubject> make_cohort(const CohortSpec& spec) {
  if (spec.count < 1) throw ConfigError("cohort needs at least one subject");
  if (!(spec.mass_lo > 0.0 && spec.mass_lo <= spec.mass_hi)) {
    throw ConfigError("cohort mass range is invalid");
  }
  Rng rng(spec.seed);
  std::vector<SyntheticSubject> out;
  for (int i = 0; i < spec.count; ++i) {
    SyntheticSubject s;
    char id[16];
    std::snprintf(id, sizeof id, "S%02d", i + 1);
    s.id = id;
    s.anthro.body_mass = spec.count == 1
                             ? 0.5 * (spec.mass_lo + spec.mass_hi)
                             : spec.mass_lo + (spec.mass_hi - spec.mass_lo) * i / (spec.count - 1);
    s.anthro.body_mass = std::round(s.anthro.body_mass * rng.uniform(0.98, 1.02) * 10.0) / 10.0;
    s.anthro.body_mass = std::clamp(s.anthro.body_mass, spec.mass_lo, spec.mass_hi);
    s.anthro.trunk_com_distance *= rng.uniform(0.95, 1.05);
    s.emg_noise_sd = rng.uniform(0.01, 0.03);
    s.cocontraction_level = rng.uniform(0.04, 0.12);
    s.activation_shape = rng.uniform(-2.0, -1.0);
    for (std::size_t m = 0; m < 4; ++m) {
      const double exponent = rng.uniform(0.85, 1.2);
      for (std::size_t side = 0; side < 2; ++side) {
        const std::size_t c = 2 * m + side;
        s.mvc[c] = rng.uniform(0.3, 1.2);
        s.carrier_phase[c] = rng.uniform(0.0, 2.0 * std::numbers::pi);
        s.recruitment_exponent[c] = exponent;
      }
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace exo::plant
