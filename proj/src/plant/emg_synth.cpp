#include "exo/plant/emg_synth.hpp"

#include <cmath>
#include <numbers>

#include "exo/error.hpp"

namespace exo::plant {

namespace {

constexpr std::size_t kRa[] = {0, 1};

double net_active(const ChannelArray& env, const model::PoseTerms& terms, double shape) {
  double m = 0.0;
  for (std::size_t c = 0; c < env.size(); ++c) {
    m += signal::excitation_to_activation(env[c], shape) * terms.active_moment_unit[c];
  }
  return m;
}

}  // namespace

EmgSynthesizer::EmgSynthesizer(const SyntheticSubject& subject, double carrier_hz, double tick_rate)
    : subject_(subject), carrier_hz_(carrier_hz), tick_rate_(tick_rate) {
  subject_.validate();
  const signal::EnvelopeConfig env;
  const auto bp = signal::design_filter(
      signal::FilterSpec::bandpass(env.bandpass_low_hz, env.bandpass_high_hz, tick_rate));
  carrier_gain_ = 0.5 * std::numbers::pi / std::abs(bp.response(carrier_hz));
}

ChannelArray EmgSynthesizer::envelopes_for(double drive) const {
  const double floor = subject_.cocontraction_level;
  ChannelArray e{};
  for (std::size_t c = 0; c < e.size(); ++c) {
    e[c] = floor + (1.0 - floor) * std::pow(drive, subject_.recruitment_exponent[c]);
  }
  for (std::size_t c : kRa) e[c] = floor;
  return e;
}

SynthesisResult EmgSynthesizer::solve(double residual, const model::PoseTerms& terms,
                                      const model::MskModel& truth) const {
  const double shape = truth.activation_shape();
  SynthesisResult r;
  const double at_floor = net_active(envelopes_for(0.0), terms, shape);
  const double at_max = net_active(envelopes_for(1.0), terms, shape);
  if (residual <= at_floor) {
    r.drive = 0.0;
  } else if (residual >= at_max) {
    r.drive = 1.0;
    r.saturated = residual > at_max;
  } else {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 50; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (net_active(envelopes_for(mid), terms, shape) < residual) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    r.drive = 0.5 * (lo + hi);
  }
  r.envelopes = envelopes_for(r.drive);
  r.model_moment = net_active(r.envelopes, terms, shape);
  return r;
}

ChannelArray EmgSynthesizer::raw_sample(const ChannelArray& envelopes, long tick, Rng& rng) const {
  const double t = static_cast<double>(tick) / tick_rate_;
  ChannelArray raw{};
  for (std::size_t c = 0; c < raw.size(); ++c) {
    const double carrier =
        std::sin(2.0 * std::numbers::pi * carrier_hz_ * t + subject_.carrier_phase[c]);
    raw[c] = subject_.mvc[c] *
             (envelopes[c] * carrier_gain_ * carrier + subject_.emg_noise_sd * rng.normal());
  }
  return raw;
}

}  // namespace exo::plant
