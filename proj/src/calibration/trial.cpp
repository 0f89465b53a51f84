#include "exo/calibration/trial.hpp"

#include "exo/error.hpp"

namespace exo::calibration {

std::vector<double> differentiate(std::span<const double> t, std::span<const double> x) {
  if (t.size() != x.size()) throw DataError("time and value streams differ in length");
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  d[0] = (x[1] - x[0]) / (t[1] - t[0]);
  d[n - 1] = (x[n - 1] - x[n - 2]) / (t[n - 1] - t[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (x[i + 1] - x[i - 1]) / (t[i + 1] - t[i - 1]);
  return d;
}

CalibrationTrial make_calibration_trial(std::string name, const TrialStreams& s,
                                        const Anthropometry& anthro,
                                        const ContactDetection& detection) {
  const std::size_t n = s.t.size();
  if (n < 2) throw DataError("trial '" + name + "' has fewer than two samples");
  if (s.inclination.size() != n || s.l5s1_angle.size() != n || s.box_y.size() != n ||
      s.envelopes.size() != n || (s.ref_moment && s.ref_moment->size() != n)) {
    throw DataError("trial '" + name + "' has misaligned streams");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(s.t[i] > s.t[i - 1])) throw DataError("trial '" + name + "' time is not increasing");
  }

  std::vector<double> ref;
  if (s.ref_moment) {
    ref = *s.ref_moment;
  } else {
    const auto contact = detect_box_contact(s.t, s.box_y, s.box_rest_y, detection.threshold,
                                            s.box_mass, detection.merge_gap);
    ref = inverse_dynamics_moment(s.inclination, hand_forces(contact, s.t), anthro);
  }
  const auto vel = differentiate(s.t, s.l5s1_angle);

  CalibrationTrial trial;
  trial.name = std::move(name);
  trial.box_mass = s.box_mass;
  trial.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    trial.samples[i] = {s.t[i], s.l5s1_angle[i], vel[i], s.envelopes[i], ref[i]};
  }
  return trial;
}

}  // namespace exo::calibration
