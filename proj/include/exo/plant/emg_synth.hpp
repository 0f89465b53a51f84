#pragma once

#include "exo/model/msk_model.hpp"
#include "exo/plant/subject.hpp"
#include "exo/rng.hpp"

namespace exo::plant {

struct SynthesisResult {
  ChannelArray envelopes{};  ///< per unit MVC
  double drive = 0.0;        ///< common extensor drive u in [0, 1]
  double model_moment = 0.0; ///< net active moment reproduced by the envelopes
  bool saturated = false;    ///< residual exceeds what u = 1 produces
};

/// Quasi-static EMG planning: choose the common extensor drive so the
/// subject's own muscle model produces `residual` as net active moment.
/// Abdominal channels stay at the co-contraction floor.
class EmgSynthesizer {
 public:
  EmgSynthesizer(const SyntheticSubject& subject, double carrier_hz = 100.0,
                 double tick_rate = 1000.0);

  ChannelArray envelopes_for(double drive) const;
  SynthesisResult solve(double residual, const model::PoseTerms& terms,
                        const model::MskModel& truth) const;

  /// Raw EMG sample for tick `k`: a carrier whose rectified mean equals the
  /// envelope after the processing bandpass, plus Gaussian noise.
  ChannelArray raw_sample(const ChannelArray& envelopes, long tick, Rng& rng) const;

 private:
  SyntheticSubject subject_;
  double carrier_hz_;
  double tick_rate_;
  double carrier_gain_;
};

}  // namespace exo::plant
