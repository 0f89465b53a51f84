#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "exo/calibration/inverse_dynamics.hpp"
#include "exo/signal/emg.hpp"

namespace exo::calibration {

using signal::ChannelArray;

struct CalibrationSample {
  double t = 0.0;
  double angle = 0.0;             ///< L5/S1 flexion, rad
  double angular_velocity = 0.0;  ///< rad/s
  ChannelArray envelopes{};
  double ref_moment = 0.0;  ///< extension-positive, N m
};

struct CalibrationTrial {
  std::string name;
  double box_mass = 0.0;
  std::vector<CalibrationSample> samples;
};

/// Recorded streams of one lifting repetition at the kinematic rate.
struct TrialStreams {
  std::vector<double> t;
  std::vector<double> inclination;  ///< rad
  std::vector<double> l5s1_angle;   ///< rad
  std::vector<double> box_y;        ///< m
  std::vector<ChannelArray> envelopes;
  std::optional<std::vector<double>> ref_moment;  ///< overrides inverse dynamics when present
  double box_mass = 0.0;
  double box_rest_y = 0.0;
};

struct ContactDetection {
  double threshold = 0.01;  ///< m above rest
  double merge_gap = 0.1;   ///< s
};

/// Central differences inside, one-sided at the ends.
std::vector<double> differentiate(std::span<const double> t, std::span<const double> x);

/// Build the reference moments (box contact, hand forces, inverse dynamics)
/// and the velocity stream. Throws DataError on misaligned or short streams.
CalibrationTrial make_calibration_trial(std::string name, const TrialStreams& streams,
                                        const Anthropometry& anthro,
                                        const ContactDetection& detection = {});

}  // namespace exo::calibration
